#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qreplica::verify {

struct CriterionResult {
    int id;
    std::string name;
    bool passed;
    /// Measured worst-case values, formatted deterministically.
    std::string detail;
};

/// Acceptance criteria 1-8, each seeded from `seed`.
CriterionResult perfect_cloning();
CriterionResult no_cloning_boundary(std::uint64_t seed);
CriterionResult conditional_dynamics_agreement(std::uint64_t seed);
CriterionResult tape_theorem(std::uint64_t seed);
CriterionResult tape_orthogonality();
CriterionResult approximation_improvement(std::uint64_t seed);
CriterionResult replication_heredity(std::uint64_t seed);
CriterionResult closed_loop(std::uint64_t seed);

std::vector<CriterionResult> run_all(std::uint64_t seed);

/// One row per criterion plus a summary line. Contains no timings, so equal
/// seeds give identical text.
std::string format_table(const std::vector<CriterionResult>& results, std::uint64_t seed);

}  // namespace qreplica::verify
