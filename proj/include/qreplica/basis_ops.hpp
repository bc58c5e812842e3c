#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qreplica/linalg.hpp"

namespace qreplica {

/// Permutation |k> -> |k+1 mod n>.
Operator cyclic_shift(std::size_t n);
/// Permutation |k> -> |k+l mod n>. Negative powers wrap around.
Operator shift_power(std::size_t n, std::int64_t l);

/// Block-diagonal operator sum_l |l><l| (x) U_l on H_control (x) H_target,
/// stored as its n target blocks. The block count is the control dimension,
/// so an operator with more programs than control states cannot be built.
class ControlledOperator {
public:
    std::size_t control_dim() const { return blocks_.size(); }
    std::size_t target_dim() const { return blocks_.front().dim(); }
    std::size_t joint_dim() const { return control_dim() * target_dim(); }
    std::span<const Operator> blocks() const { return blocks_; }
    const Operator& block(std::size_t l) const { return blocks_.at(l); }

    friend ControlledOperator conditional_dynamics(std::vector<Operator> blocks);

private:
    explicit ControlledOperator(std::vector<Operator> blocks) : blocks_(std::move(blocks)) {}

    std::vector<Operator> blocks_;
};

/// Validates the blocks (at least one, equal dims, each unitary).
ControlledOperator conditional_dynamics(std::vector<Operator> blocks);

/// Basis cloner: blocks[l] = shift_power(n, l), so |k>|0> -> |k>|k>.
ControlledOperator cloner(std::size_t n);

/// Multiplies each target slice of `joint` by its control block.
StateVector apply_controlled(const ControlledOperator& op, const StateVector& joint);

/// Dense sum_l |l><l| (x) U_l.
Operator densify(const ControlledOperator& op);

}  // namespace qreplica
