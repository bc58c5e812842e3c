#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qreplica/approx.hpp"
#include "qreplica/basis_ops.hpp"
#include "qreplica/linalg.hpp"
#include "qreplica/tape.hpp"

namespace qreplica {

/// Symbol 0 opens every segment on an automaton tape. Its gate must be the
/// identity so separators do nothing during translation.
inline constexpr Symbol kSeparator = 0;

using Segment = std::vector<Symbol>;

struct Program {
    std::string name;
    Segment segment;

    friend bool operator==(const Program&, const Program&) = default;
};

/// Gate set plus named tape segments. Segment symbols are drawn from
/// 1..n-1; order of the programs is the order they are laid out on a tape.
class ProgramRegistry {
public:
    ProgramRegistry(GateSet gate_set, std::vector<Program> programs);

    const GateSet& gate_set() const { return gate_set_; }
    std::size_t alphabet_size() const { return gate_set_.size(); }
    std::span<const Program> programs() const { return programs_; }
    /// Throws ContractError for unknown names.
    const Program& program(std::string_view name) const;
    bool has_program(std::string_view name) const;
    bool is_registered(std::span<const Symbol> segment) const;

    /// Same names with the same segments, in the same order.
    bool same_programs(const ProgramRegistry& other) const { return programs_ == other.programs_; }

private:
    GateSet gate_set_;
    std::vector<Program> programs_;
};

/// Tape laying out every program as [0, segment...] in registry order.
Tape genome(const ProgramRegistry& registry);

/// Splits a tape at separators. The tape must begin with one.
std::vector<Segment> split_segments(const Tape& tape);

/// Reads a registry back off a tape: the k-th segment takes the k-th name of
/// `reference`. Throws CorruptedHeredityError if the segment count differs.
ProgramRegistry decode_registry(const Tape& tape, const ProgramRegistry& reference);

/// U_{k_s} ... U_{k_1} for a bare segment; the empty segment is the identity.
Operator segment_unitary(std::span<const Symbol> segment, const GateSet& gates);

/// |Psi_G> for a named program: the basis state of its segment in the
/// n^s-dimensional segment space (dimension 1 for the empty segment).
StateVector program_state(const ProgramRegistry& registry, std::string_view name);

/// Inverse of program_state / tape_to_state. The length is inferred from the
/// dimension. Throws UndecodableProgramError unless the state lies within
/// 1e-9 fidelity of a single basis tape.
Segment decode_basis_state(const StateVector& state, std::size_t alphabet_size);

/// Replicates a tape given as a state vector. Superposed tape states are
/// rejected with UndecodableProgramError before any cloning happens.
std::pair<Tape, Tape> replicate_tape_state(const StateVector& tape_state, std::size_t alphabet_size);

/// The scattering rule: |Psi_G> (x) |psi> -> |Psi_G> (x) G|psi>, defined on
/// basis program states only. Returns G|psi>.
StateVector scattering_apply(const StateVector& program, const StateVector& psi, const ProgramRegistry& registry);

/// Runs the whole tape (separators included) on the blank payload |0>.
/// Every segment on the tape must be registered.
StateVector translate(const Tape& tape, const ProgramRegistry& registry);

enum class Phase { replicating, translated };

struct Automaton {
    Tape tape;
    StateVector payload;
    ProgramRegistry registry;
    std::size_t generation = 0;
    Phase phase = Phase::translated;
};

/// Builds a translated automaton; the payload is translate(tape, registry).
Automaton make_automaton(Tape tape, ProgramRegistry registry, std::size_t generation = 0);
/// Automaton whose tape is the registry's genome.
Automaton make_automaton(ProgramRegistry registry);

/// Throws IntegrityError if a translated automaton's payload differs from
/// translate(tape) by more than 1e-9 in any amplitude.
void check_automaton(const Automaton& automaton);

/// Registry whose programs are the segments of `tape`, named s1, s2, ...
ProgramRegistry registry_for_tape(const Tape& tape, GateSet gates);

/// One replication cycle. Returns (parent, child).
std::pair<Automaton, Automaton> replicate(const Automaton& parent);
std::pair<Automaton, Automaton> replicate(const Automaton& parent, const ControlledOperator& cloner_op);

/// <T_a|T_b> <Phi_a|Phi_b>
Complex automaton_overlap(const Automaton& a, const Automaton& b);

/// Joint-space registry over control dim n and target dim m, with gates
///   0        identity (separator)
///   P_1..P_{n-1}  sum_l |l><l| (x) U^[l >= j]   (only when n == m)
///   Q_0..Q_{n-1}  |l><l| (x) U_l + (1 - |l><l|) (x) 1
///   F        discrete Fourier transform on the control, identity on target
/// and programs "C" = P_1..P_{n-1} (the basis cloner), "D" = Q_0..Q_{n-1}
/// (conditional dynamics with `blocks`), "prep" = F.
ProgramRegistry controlled_program_registry(std::size_t control_dim, std::vector<Operator> blocks);

/// controlled_program_registry(n, Haar blocks of dim n) for a fixed seed.
ProgramRegistry demo_registry(std::size_t n, std::uint64_t seed);

}  // namespace qreplica
