#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qreplica/linalg.hpp"
#include "qreplica/tape.hpp"

namespace qreplica {

/// Finite family of unitaries of a common dimension, one per tape symbol.
class GateSet {
public:
    /// Missing labels default to "g0", "g1", ...
    explicit GateSet(std::vector<Operator> gates, std::vector<std::string> labels = {});

    std::size_t size() const { return gates_.size(); }
    std::size_t dim() const { return gates_.front().dim(); }
    std::span<const Operator> gates() const { return gates_; }
    const Operator& gate(std::size_t l) const { return gates_.at(l); }
    std::span<const std::string> labels() const { return labels_; }

private:
    std::vector<Operator> gates_;
    std::vector<std::string> labels_;
};

Operator rotation_x(double angle);
Operator rotation_y(double angle);
Operator rotation_z(double angle);

/// {R_z(2 pi phi), R_x(2 pi phi)} with phi the golden ratio.
GateSet golden_rotation_gate_set();

/// U_{k_s} ... U_{k_1} for the tape's cells.
Operator sequence_unitary(const Tape& sequence, const GateSet& gates);

struct SearchOptions {
    /// Partial products within this phase-invariant distance of an already
    /// kept product are merged into it (the earlier, shorter one survives).
    double net_radius = 1e-3;
    /// Spread product evaluation over worker threads. Merging stays
    /// sequential, so results do not depend on this flag.
    bool parallel = false;
};

struct ApproxResult {
    Tape sequence;
    double achieved_distance;
    Operator target;
    /// Search nodes generated.
    std::size_t expansions;
};

/// Breadth-first product enumeration up to `max_len` with epsilon-net
/// pruning. Returns the best sequence of the shortest length whose distance
/// to `target` is at most `epsilon`, or nullopt if the net holds none.
std::optional<ApproxResult> approximate(const Operator& target, const GateSet& gates, double epsilon,
                                        std::size_t max_len, const SearchOptions& options = {});

/// Same search without early exit: the best sequence of length 1..max_len.
/// Ties prefer shorter, then lexicographically smaller, sequences.
ApproxResult best_approximation(const Operator& target, const GateSet& gates, std::size_t max_len,
                                const SearchOptions& options = {});

}  // namespace qreplica
