#include "qreplica/automaton.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "qreplica/errors.hpp"

namespace qreplica {

namespace {

constexpr double kDecodeTol = 1e-9;

std::string segment_text(std::span<const Symbol> segment) {
    std::string out = "(";
    for (std::size_t i = 0; i < segment.size(); ++i) {
        out += (i ? "," : "") + std::to_string(segment[i]);
    }
    return out + ")";
}

}  // namespace

ProgramRegistry::ProgramRegistry(GateSet gate_set, std::vector<Program> programs)
    : gate_set_(std::move(gate_set)), programs_(std::move(programs)) {
    const std::size_t n = gate_set_.size();
    if (n < 2) {
        throw ContractError("registry gate set needs the separator and at least one more gate");
    }
    const Operator& sep = gate_set_.gate(kSeparator);
    const Operator id = Operator::identity(sep.dim());
    for (std::size_t i = 0; i < id.entries().size(); ++i) {
        if (std::abs(sep.entries()[i] - id.entries()[i]) > kUnitaryTol) {
            throw ContractError("gate 0 is the segment separator and must be the identity");
        }
    }
    std::set<std::string> names;
    for (const auto& p : programs_) {
        if (!names.insert(p.name).second) {
            throw ContractError("duplicate program name '" + p.name + "'");
        }
        for (const Symbol k : p.segment) {
            if (k == kSeparator || k >= n) {
                throw ContractError("program '" + p.name + "' uses symbol " + std::to_string(k) +
                                    "; segments draw from 1.." + std::to_string(n - 1));
            }
        }
    }
}

const Program& ProgramRegistry::program(std::string_view name) const {
    const auto it = std::find_if(programs_.begin(), programs_.end(), [&](const Program& p) { return p.name == name; });
    if (it == programs_.end()) {
        throw ContractError("no program named '" + std::string(name) + "'");
    }
    return *it;
}

bool ProgramRegistry::has_program(std::string_view name) const {
    return std::any_of(programs_.begin(), programs_.end(), [&](const Program& p) { return p.name == name; });
}

bool ProgramRegistry::is_registered(std::span<const Symbol> segment) const {
    return std::any_of(programs_.begin(), programs_.end(),
                       [&](const Program& p) { return std::ranges::equal(p.segment, segment); });
}

Tape genome(const ProgramRegistry& registry) {
    std::vector<Symbol> cells;
    for (const auto& p : registry.programs()) {
        cells.push_back(kSeparator);
        cells.insert(cells.end(), p.segment.begin(), p.segment.end());
    }
    if (cells.empty()) {
        throw ContractError("registry has no programs to lay out");
    }
    return Tape(registry.alphabet_size(), std::move(cells));
}

std::vector<Segment> split_segments(const Tape& tape) {
    const auto cells = tape.cells();
    if (cells.front() != kSeparator) {
        throw UndecodableProgramError("tape does not open with a segment separator");
    }
    std::vector<Segment> segments;
    for (const Symbol k : cells) {
        if (k == kSeparator) {
            segments.emplace_back();
        } else {
            segments.back().push_back(k);
        }
    }
    return segments;
}

ProgramRegistry decode_registry(const Tape& tape, const ProgramRegistry& reference) {
    if (tape.alphabet_size() != reference.alphabet_size()) {
        throw CorruptedHeredityError("tape alphabet does not match the reference gate set");
    }
    std::vector<Segment> segments = split_segments(tape);
    const auto names = reference.programs();
    if (segments.size() != names.size()) {
        throw CorruptedHeredityError("tape carries " + std::to_string(segments.size()) + " segments, registry names " +
                                     std::to_string(names.size()) + " programs");
    }
    std::vector<Program> programs;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        programs.push_back(Program{names[i].name, std::move(segments[i])});
    }
    return ProgramRegistry(reference.gate_set(), std::move(programs));
}

Operator segment_unitary(std::span<const Symbol> segment, const GateSet& gates) {
    Operator product = Operator::identity(gates.dim());
    for (const Symbol k : segment) {
        if (k >= gates.size()) {
            throw ContractError("segment symbol " + std::to_string(k) + " outside gate set");
        }
        product = gates.gate(k) * product;
    }
    return product;
}

StateVector program_state(const ProgramRegistry& registry, std::string_view name) {
    const Segment& segment = registry.program(name).segment;
    if (segment.empty()) {
        return StateVector::basis(1, 0);
    }
    return tape_to_state(Tape(registry.alphabet_size(), segment));
}

Segment decode_basis_state(const StateVector& state, std::size_t alphabet_size) {
    if (alphabet_size < 2) {
        throw ContractError("decoding needs an alphabet of at least two symbols");
    }
    std::size_t length = 0;
    std::size_t dim = 1;
    while (dim < state.dim()) {
        dim *= alphabet_size;
        ++length;
    }
    if (dim != state.dim()) {
        throw UndecodableProgramError("state dimension " + std::to_string(state.dim()) + " is not a power of " +
                                      std::to_string(alphabet_size));
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < state.dim(); ++i) {
        if (std::norm(state[i]) > std::norm(state[best])) {
            best = i;
        }
    }
    const double weight = std::norm(state[best]);
    if (weight < 1.0 - kDecodeTol) {
        throw UndecodableProgramError("state is not a basis tape (largest weight " + std::to_string(weight) + ")");
    }
    Segment cells(length);
    for (std::size_t i = 0; i < length; ++i) {
        cells[i] = static_cast<Symbol>(best % alphabet_size);
        best /= alphabet_size;
    }
    return cells;
}

std::pair<Tape, Tape> replicate_tape_state(const StateVector& tape_state, std::size_t alphabet_size) {
    Segment cells = decode_basis_state(tape_state, alphabet_size);
    if (cells.empty()) {
        throw UndecodableProgramError("a one-dimensional state encodes no tape cells");
    }
    return replicate_tape(Tape(alphabet_size, std::move(cells)));
}

StateVector scattering_apply(const StateVector& program, const StateVector& psi, const ProgramRegistry& registry) {
    const Segment segment = decode_basis_state(program, registry.alphabet_size());
    if (std::ranges::find(segment, kSeparator) != segment.end()) {
        throw UndecodableProgramError("program state " + segment_text(segment) + " contains a separator");
    }
    if (psi.dim() != registry.gate_set().dim()) {
        throw ContractError("scattering: data state dim " + std::to_string(psi.dim()) + " != gate dim " +
                            std::to_string(registry.gate_set().dim()));
    }
    return apply(segment_unitary(segment, registry.gate_set()), psi);
}

StateVector translate(const Tape& tape, const ProgramRegistry& registry) {
    if (tape.alphabet_size() != registry.alphabet_size()) {
        throw ContractError("tape alphabet does not match the registry gate set");
    }
    for (const auto& segment : split_segments(tape)) {
        if (!registry.is_registered(segment)) {
            throw UndecodableProgramError("segment " + segment_text(segment) + " is not a registered program");
        }
    }
    const Tape from_start(tape.alphabet_size(), {tape.cells().begin(), tape.cells().end()});
    return run_tape(from_start, registry.gate_set().gates(), StateVector::basis(registry.gate_set().dim(), 0));
}

Automaton make_automaton(Tape tape, ProgramRegistry registry, std::size_t generation) {
    StateVector payload = translate(tape, registry);
    return Automaton{std::move(tape), std::move(payload), std::move(registry), generation, Phase::translated};
}

Automaton make_automaton(ProgramRegistry registry) {
    Tape tape = genome(registry);
    return make_automaton(std::move(tape), std::move(registry));
}

void check_automaton(const Automaton& automaton) {
    if (automaton.phase != Phase::translated) {
        return;
    }
    const StateVector expected = translate(automaton.tape, automaton.registry);
    if (expected.dim() != automaton.payload.dim()) {
        throw IntegrityError("payload dimension does not match the registry");
    }
    for (std::size_t i = 0; i < expected.dim(); ++i) {
        if (std::abs(expected[i] - automaton.payload[i]) > kDecodeTol) {
            throw IntegrityError("payload is not the translation of the tape");
        }
    }
}

ProgramRegistry registry_for_tape(const Tape& tape, GateSet gates) {
    std::vector<Program> programs;
    for (auto& segment : split_segments(tape)) {
        programs.push_back(Program{"s" + std::to_string(programs.size() + 1), std::move(segment)});
    }
    return ProgramRegistry(std::move(gates), std::move(programs));
}

std::pair<Automaton, Automaton> replicate(const Automaton& parent) {
    return replicate(parent, cloner(parent.tape.alphabet_size()));
}

std::pair<Automaton, Automaton> replicate(const Automaton& parent, const ControlledOperator& cloner_op) {
    if (parent.phase != Phase::translated) {
        throw ContractError("only a translated automaton can replicate");
    }
    Automaton working = parent;
    working.phase = Phase::replicating;

    // Step 1: copy the tape cell by cell through the cloner.
    TapeReplication copy = replicate_tape_certified(working.tape, cloner_op);

    // Step 2: translate the child's tape with the parent's gates, then read
    // the child's own programs off its tape.
    StateVector child_payload = translate(copy.child, working.registry);
    ProgramRegistry child_registry = decode_registry(copy.child, working.registry);
    if (!child_registry.same_programs(working.registry)) {
        throw CorruptedHeredityError("programs decoded from the child tape differ from the parent's");
    }

    working.tape = std::move(copy.parent);
    working.phase = Phase::translated;
    Automaton child{std::move(copy.child), std::move(child_payload), std::move(child_registry),
                    parent.generation + 1, Phase::translated};
    return {std::move(working), std::move(child)};
}

Complex automaton_overlap(const Automaton& a, const Automaton& b) {
    if (a.tape.alphabet_size() != b.tape.alphabet_size() || a.tape.length() != b.tape.length()) {
        throw ContractError("automata tapes live in different spaces");
    }
    if (a.payload.dim() != b.payload.dim()) {
        throw ContractError("automata payloads live in different spaces");
    }
    // Basis tapes: <T_a|T_b> is 1 for equal cells and 0 otherwise.
    if (!std::ranges::equal(a.tape.cells(), b.tape.cells())) {
        return Complex{};
    }
    return inner_product(a.payload, b.payload);
}

namespace {

Operator fourier(std::size_t n) {
    std::vector<Complex> entries(n * n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double angle = 2 * std::numbers::pi * static_cast<double>((r * c) % n) / static_cast<double>(n);
            entries[r * n + c] = std::polar(scale, angle);
        }
    }
    return Operator(n, std::move(entries));
}

}  // namespace

ProgramRegistry controlled_program_registry(std::size_t control_dim, std::vector<Operator> blocks) {
    const std::size_t n = control_dim;
    if (n < 1 || blocks.size() != n) {
        throw ContractError("need one conditional-dynamics block per control state");
    }
    const std::size_t m = blocks.front().dim();
    const Operator id_target = Operator::identity(m);

    std::vector<Operator> gates{Operator::identity(checked_dim_product(n, m))};
    std::vector<std::string> labels{"sep"};
    Segment clone_segment;
    if (n == m) {
        for (std::size_t j = 1; j < n; ++j) {
            std::vector<Operator> stage;
            for (std::size_t l = 0; l < n; ++l) {
                stage.push_back(l >= j ? cyclic_shift(n) : id_target);
            }
            clone_segment.push_back(static_cast<Symbol>(gates.size()));
            gates.push_back(densify(conditional_dynamics(std::move(stage))));
            labels.push_back("P" + std::to_string(j));
        }
    }
    Segment dynamics_segment;
    for (std::size_t l = 0; l < n; ++l) {
        std::vector<Operator> stage(n, id_target);
        stage[l] = blocks[l];
        dynamics_segment.push_back(static_cast<Symbol>(gates.size()));
        gates.push_back(densify(conditional_dynamics(std::move(stage))));
        labels.push_back("Q" + std::to_string(l));
    }
    const Segment prep_segment{static_cast<Symbol>(gates.size())};
    gates.push_back(tensor_op(fourier(n), id_target));
    labels.push_back("F");

    std::vector<Program> programs;
    if (n == m) {
        programs.push_back(Program{"C", std::move(clone_segment)});
    }
    programs.push_back(Program{"D", std::move(dynamics_segment)});
    programs.push_back(Program{"prep", prep_segment});
    return ProgramRegistry(GateSet(std::move(gates), std::move(labels)), std::move(programs));
}

ProgramRegistry demo_registry(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Operator> blocks;
    for (std::size_t l = 0; l < n; ++l) {
        blocks.push_back(haar_unitary(n, rng));
    }
    return controlled_program_registry(n, std::move(blocks));
}

}  // namespace qreplica
