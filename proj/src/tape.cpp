#include "qreplica/tape.hpp"

#include <cmath>

#include "qreplica/errors.hpp"

namespace qreplica {

Tape::Tape(std::size_t alphabet_size, std::vector<Symbol> cells, std::size_t head)
    : alphabet_size_(alphabet_size), cells_(std::move(cells)), head_(head) {
    if (alphabet_size_ == 0) {
        throw ContractError("tape alphabet must be non-empty");
    }
    if (cells_.empty()) {
        throw ContractError("tape must have at least one cell");
    }
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        if (cells_[i] >= alphabet_size_) {
            throw ContractError("cell " + std::to_string(i + 1) + " holds symbol " + std::to_string(cells_[i]) +
                                " outside alphabet of size " + std::to_string(alphabet_size_));
        }
    }
    if (head_ >= cells_.size()) {
        throw ContractError("tape head " + std::to_string(head_) + " beyond length " + std::to_string(cells_.size()));
    }
}

std::size_t tape_space_dim(std::size_t alphabet_size, std::size_t length) {
    std::size_t dim = 1;
    for (std::size_t i = 0; i < length; ++i) {
        dim = checked_dim_product(dim, alphabet_size);
    }
    return dim;
}

std::size_t tape_index(const Tape& tape) {
    tape_space_dim(tape.alphabet_size(), tape.length());
    std::size_t index = 0;
    std::size_t place = 1;
    for (const Symbol k : tape.cells()) {
        index += k * place;
        place *= tape.alphabet_size();
    }
    return index;
}

StateVector tape_to_state(const Tape& tape) {
    return StateVector::basis(tape_space_dim(tape.alphabet_size(), tape.length()), tape_index(tape));
}

Tape shift_tape(const Tape& tape) {
    const std::vector<Symbol> cells(tape.cells().begin(), tape.cells().end());
    return Tape(tape.alphabet_size(), cells, (tape.head() + 1) % tape.length());
}

namespace {

void check_gates(const Tape& tape, std::span<const Operator> gates, const StateVector& payload) {
    if (gates.size() != tape.alphabet_size()) {
        throw ContractError("need one gate per tape symbol: alphabet " + std::to_string(tape.alphabet_size()) +
                            ", gates " + std::to_string(gates.size()));
    }
    for (std::size_t l = 0; l < gates.size(); ++l) {
        if (gates[l].dim() != payload.dim()) {
            throw ContractError("gate " + std::to_string(l) + " has dim " + std::to_string(gates[l].dim()) +
                                ", payload has dim " + std::to_string(payload.dim()));
        }
        const std::string name = "gate " + std::to_string(l);
        require_unitary(gates[l], name.c_str());
    }
    if (tape.head() != 0) {
        throw ContractError("tape run must start with the head at cell 1");
    }
}

}  // namespace

StateVector run_tape(const Tape& tape, std::span<const Operator> gates, const StateVector& payload) {
    check_gates(tape, gates, payload);
    StateVector state = payload;
    Tape cursor = tape;
    for (std::size_t step = 0; step < tape.length(); ++step) {
        state = apply(gates[cursor.at_head()], state);
        cursor = shift_tape(cursor);
    }
    return state;
}

JointRun run_tape_joint(const Tape& tape, std::span<const Operator> gates, const StateVector& payload,
                        std::size_t limit) {
    check_gates(tape, gates, payload);
    const std::size_t n = tape.alphabet_size();
    const std::size_t s = tape.length();
    const std::size_t tape_dim = tape_space_dim(n, s);
    const std::size_t m = payload.dim();
    const std::size_t joint_dim = checked_dim_product(tape_dim, m);
    if (joint_dim > limit) {
        throw CapacityError("joint tape space " + std::to_string(joint_dim) + " exceeds limit " + std::to_string(limit));
    }

    // Conditional dynamics keyed on the whole tape register: the block for
    // basis tape c is the gate selected by c's read cell (lowest digit).
    std::vector<Operator> blocks;
    blocks.reserve(tape_dim);
    for (std::size_t c = 0; c < tape_dim; ++c) {
        blocks.push_back(gates[c % n]);
    }
    const ControlledOperator step_op = conditional_dynamics(std::move(blocks));

    const std::size_t top_place = tape_dim / n;
    StateVector joint = tensor_state(tape_to_state(tape), payload);
    for (std::size_t step = 0; step < s; ++step) {
        joint = apply_controlled(step_op, joint);
        // Rotate contents so cell i+1 moves under the read position.
        std::vector<Complex> rotated(joint_dim);
        for (std::size_t c = 0; c < tape_dim; ++c) {
            const std::size_t moved = c / n + (c % n) * top_place;
            for (std::size_t j = 0; j < m; ++j) {
                rotated[moved * m + j] = joint[c * m + j];
            }
        }
        joint = StateVector(std::move(rotated));
    }

    const std::size_t home = tape_index(tape);
    std::vector<Complex> slice(joint.amps().begin() + static_cast<std::ptrdiff_t>(home * m),
                               joint.amps().begin() + static_cast<std::ptrdiff_t>((home + 1) * m));
    double weight = 0.0;
    for (const auto& z : slice) {
        weight += std::norm(z);
    }
    return JointRun{joint_dim, weight, StateVector::normalized(std::move(slice))};
}

TapeReplication replicate_tape_certified(const Tape& tape, const ControlledOperator& cloner_op) {
    const std::size_t n = tape.alphabet_size();
    if (cloner_op.control_dim() != n || cloner_op.target_dim() != n) {
        throw ContractError("cloner dimensions do not match the tape alphabet");
    }
    const StateVector blank = StateVector::basis(n, 0);
    std::vector<Symbol> child(tape.length());
    std::vector<double> certificates(tape.length());

    // Walk the tape segment by segment, starting from the current head.
    Tape cursor = tape;
    for (std::size_t step = 0; step < tape.length(); ++step) {
        const std::size_t cell = cursor.head();
        const Symbol k = cursor.at_head();
        const StateVector out = apply_controlled(cloner_op, tensor_state(StateVector::basis(n, k), blank));
        const double f = fidelity(out, tensor_state(StateVector::basis(n, k), StateVector::basis(n, k)));
        if (f < 1.0 - kReplicationTol) {
            throw ReplicationIntegrityError("cell " + std::to_string(cell + 1) + " (symbol " + std::to_string(k) +
                                            ") cloned with fidelity " + std::to_string(f));
        }
        // Read the copy off the target register of the output.
        std::size_t best = 0;
        for (std::size_t i = 1; i < out.dim(); ++i) {
            if (std::norm(out[i]) > std::norm(out[best])) {
                best = i;
            }
        }
        child[cell] = static_cast<Symbol>(best % n);
        certificates[cell] = f;
        cursor = shift_tape(cursor);
    }
    return TapeReplication{cursor, Tape(n, std::move(child), tape.head()), std::move(certificates)};
}

std::pair<Tape, Tape> replicate_tape(const Tape& tape) {
    auto result = replicate_tape_certified(tape, cloner(tape.alphabet_size()));
    return {std::move(result.parent), std::move(result.child)};
}

}  // namespace qreplica
