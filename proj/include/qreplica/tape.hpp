#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qreplica/basis_ops.hpp"
#include "qreplica/linalg.hpp"

namespace qreplica {

using Symbol = std::uint32_t;

/// Finite cyclic tape over the alphabet {0, ..., n-1}.
///
/// cells[0] is cell 1: the first cell read and the least significant digit of
/// the tape's basis index. The head marks the cell the next conditional
/// dynamics step reads.
class Tape {
public:
    Tape(std::size_t alphabet_size, std::vector<Symbol> cells, std::size_t head = 0);

    std::size_t alphabet_size() const { return alphabet_size_; }
    std::size_t length() const { return cells_.size(); }
    std::size_t head() const { return head_; }
    std::span<const Symbol> cells() const { return cells_; }
    Symbol at_head() const { return cells_[head_]; }

    friend bool operator==(const Tape&, const Tape&) = default;

private:
    std::size_t alphabet_size_;
    std::vector<Symbol> cells_;
    std::size_t head_;
};

/// sum_i cells[i] * n^i; throws CapacityError when n^s exceeds max_dim().
std::size_t tape_index(const Tape& tape);
/// Dimension n^s of the tape register.
std::size_t tape_space_dim(std::size_t alphabet_size, std::size_t length);

/// Computational basis state |k_s ... k_1> of dimension n^s.
StateVector tape_to_state(const Tape& tape);

/// Advances the head one cell, wrapping after the last cell.
Tape shift_tape(const Tape& tape);

/// U_{k_s} ... U_{k_1} payload: cell 1's gate acts first. `gates` holds one
/// operator per alphabet symbol; the head must be at cell 1.
StateVector run_tape(const Tape& tape, std::span<const Operator> gates, const StateVector& payload);

inline constexpr std::size_t kJointCheckLimit = std::size_t{1} << 10;

struct JointRun {
    std::size_t joint_dim;
    /// Weight of the final joint state on |T> (x) H_payload.
    double tape_fidelity;
    /// Payload slice at |T>, renormalized.
    StateVector payload;
};

/// Evolves |T> (x) payload on the full n^s * m space: s rounds of conditional
/// dynamics on the cell under the read position followed by a cyclic rotation
/// of the tape contents. Throws CapacityError above `limit` amplitudes.
JointRun run_tape_joint(const Tape& tape, std::span<const Operator> gates, const StateVector& payload,
                        std::size_t limit = kJointCheckLimit);

struct TapeReplication {
    Tape parent;
    Tape child;
    /// fidelity(C|k_i>|0>, |k_i>|k_i>) per cell, in cell order.
    std::vector<double> cell_fidelity;
};

inline constexpr double kReplicationTol = 1e-9;

/// Cell-by-cell copy through `cloner_op`: each cell is cloned onto a blank |0>
/// cell, the output is checked against |k>|k>, and the child symbol is read
/// back from the output state. Throws ReplicationIntegrityError on failure.
TapeReplication replicate_tape_certified(const Tape& tape, const ControlledOperator& cloner_op);
std::pair<Tape, Tape> replicate_tape(const Tape& tape);

}  // namespace qreplica
