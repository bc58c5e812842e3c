#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qreplica/approx.hpp"
#include "qreplica/automaton.hpp"
#include "qreplica/basis_ops.hpp"
#include "qreplica/io.hpp"
#include "qreplica/tape.hpp"

// Report builders behind the qreplica command-line tool. Each returns the
// JSON document the tool prints, so reports can be tested without a process.
namespace qreplica::cli {

struct RunConfig {
    std::uint64_t seed = 0;
    bool deterministic = true;
    bool parallel = false;
    /// Fidelity slack for the clone-demo "cloned" verdict.
    double verdict_tol = 1e-9;
    double net_radius = 1e-3;
};

/// Every tolerance in force for a run; embedded in each report.
io::Json tolerances(const RunConfig& config);

io::Json clone_demo(std::size_t n, const StateVector& input, const RunConfig& config);
io::Json clone_demo(std::size_t n, std::size_t basis_index, const RunConfig& config);

io::Json cond_dyn(const ControlledOperator& op, const StateVector& joint, const RunConfig& config);

io::Json tape_run(const Tape& tape, const GateSet& gates, const StateVector& payload, const RunConfig& config);

io::Json approx(const Operator& target, const GateSet& gates, double epsilon, std::size_t max_len,
                const RunConfig& config);

/// One JSON line per generation.
std::vector<io::Json> replicate_report(const Automaton& origin, std::size_t generations, const RunConfig& config);

std::string verify_report(const RunConfig& config, bool* all_passed = nullptr);

}  // namespace qreplica::cli
