#include "qreplica/basis_ops.hpp"

#include <string>

#include "qreplica/errors.hpp"

namespace qreplica {

Operator cyclic_shift(std::size_t n) { return shift_power(n, 1); }

Operator shift_power(std::size_t n, std::int64_t l) {
    if (n == 0) {
        throw ContractError("shift dimension must be at least 1");
    }
    const auto sn = static_cast<std::int64_t>(n);
    const auto power = static_cast<std::size_t>(((l % sn) + sn) % sn);
    std::vector<Complex> entries(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        // column k carries |k> to row (k + l) mod n
        entries[((k + power) % n) * n + k] = 1.0;
    }
    return Operator(n, std::move(entries));
}

ControlledOperator conditional_dynamics(std::vector<Operator> blocks) {
    if (blocks.empty()) {
        throw ContractError("conditional dynamics needs at least one block");
    }
    const std::size_t m = blocks.front().dim();
    for (std::size_t l = 0; l < blocks.size(); ++l) {
        if (blocks[l].dim() != m) {
            throw ContractError("block " + std::to_string(l) + " has dim " + std::to_string(blocks[l].dim()) +
                                ", expected " + std::to_string(m));
        }
        const std::string name = "block " + std::to_string(l);
        require_unitary(blocks[l], name.c_str());
    }
    checked_dim_product(blocks.size(), m);
    return ControlledOperator(std::move(blocks));
}

ControlledOperator cloner(std::size_t n) {
    if (n == 0) {
        throw ContractError("cloner dimension must be at least 1");
    }
    std::vector<Operator> blocks;
    blocks.reserve(n);
    for (std::size_t l = 0; l < n; ++l) {
        blocks.push_back(shift_power(n, static_cast<std::int64_t>(l)));
    }
    return conditional_dynamics(std::move(blocks));
}

StateVector apply_controlled(const ControlledOperator& op, const StateVector& joint) {
    if (joint.dim() != op.joint_dim()) {
        throw ContractError("controlled operator acts on dim " + std::to_string(op.joint_dim()) + ", state has dim " +
                            std::to_string(joint.dim()));
    }
    const std::size_t m = op.target_dim();
    std::vector<Complex> out(joint.dim());
    for (std::size_t l = 0; l < op.control_dim(); ++l) {
        const auto block = op.block(l).entries();
        const std::size_t base = l * m;
        for (std::size_t i = 0; i < m; ++i) {
            Complex sum = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                sum += block[i * m + j] * joint[base + j];
            }
            out[base + i] = sum;
        }
    }
    return StateVector(std::move(out));
}

Operator densify(const ControlledOperator& op) {
    const std::size_t m = op.target_dim();
    const std::size_t dim = op.joint_dim();
    std::vector<Complex> entries;
    if (dim > kMaxOperatorEntries / dim) {
        throw CapacityError("densify: " + std::to_string(dim) + "-dimensional operator is too large");
    }
    entries.resize(dim * dim);
    for (std::size_t l = 0; l < op.control_dim(); ++l) {
        const Operator& block = op.block(l);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                entries[(l * m + i) * dim + (l * m + j)] = block(i, j);
            }
        }
    }
    return Operator(dim, std::move(entries));
}

}  // namespace qreplica
