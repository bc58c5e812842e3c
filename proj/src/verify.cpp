#include "qreplica/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>

#include "qreplica/approx.hpp"
#include "qreplica/automaton.hpp"
#include "qreplica/basis_ops.hpp"
#include "qreplica/linalg.hpp"
#include "qreplica/tape.hpp"

namespace qreplica::verify {

namespace {

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

double max_abs_diff(const StateVector& a, const StateVector& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

// Independent product oracle: right-to-left association, U_{k_s} first.
Operator fold_product(const std::vector<Symbol>& cells, std::span<const Operator> gates) {
    Operator product = gates[cells.back()];
    for (std::size_t i = cells.size() - 1; i-- > 0;) {
        product = product * gates[cells[i]];
    }
    return product;
}

// Exhaustive optimum over all sequences of length 1..max_len.
double brute_force_best(const Operator& target, const GateSet& gates, std::size_t max_len) {
    double best = 2.0;
    const std::size_t n = gates.size();
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<Symbol> cells(len, 0);
        while (true) {
            const Operator u = fold_product(cells, gates.gates());
            best = std::min(best, phase_invariant_distance(target, u));
            std::size_t i = 0;
            while (i < len && ++cells[i] == n) {
                cells[i++] = 0;
            }
            if (i == len) {
                break;
            }
        }
    }
    return best;
}

StateVector product_state(std::size_t n, std::size_t a, std::size_t m, std::size_t b) {
    return tensor_state(StateVector::basis(n, a), StateVector::basis(m, b));
}

}  // namespace

CriterionResult perfect_cloning() {
    double worst = 1.0;
    for (std::size_t n = 2; n <= 8; ++n) {
        const ControlledOperator c = cloner(n);
        for (std::size_t k = 0; k < n; ++k) {
            const StateVector out = apply_controlled(c, product_state(n, k, n, 0));
            worst = std::min(worst, fidelity(out, product_state(n, k, n, k)));
        }
    }
    return {1, "perfect orthogonal cloning", worst >= 1.0 - 1e-12, "min fidelity " + sci(worst)};
}

CriterionResult no_cloning_boundary(std::uint64_t seed) {
    Rng rng(seed ^ 0x2);
    double worst_fidelity = 0.0;
    double worst_form = 0.0;
    for (std::size_t n = 2; n <= 5; ++n) {
        const ControlledOperator c = cloner(n);
        for (int trial = 0; trial < 200;) {
            const StateVector psi = haar_state(n, rng);
            double peak = 0.0;
            for (const auto& z : psi.amps()) {
                peak = std::max(peak, std::norm(z));
            }
            if (peak > 0.999) {
                continue;
            }
            ++trial;
            const StateVector out = apply_controlled(c, tensor_state(psi, StateVector::basis(n, 0)));
            worst_fidelity = std::max(worst_fidelity, fidelity(out, tensor_state(psi, psi)));
            std::vector<Complex> analytic(n * n);
            for (std::size_t k = 0; k < n; ++k) {
                analytic[k * n + k] = psi[k];
            }
            worst_form = std::max(worst_form, max_abs_diff(out, StateVector(std::move(analytic))));
        }
    }
    return {2, "no-cloning boundary", worst_fidelity <= 1.0 - 1e-6 && worst_form <= 1e-10,
            "max fidelity to psi(x)psi " + sci(worst_fidelity) + ", max deviation from analytic " + sci(worst_form)};
}

CriterionResult conditional_dynamics_agreement(std::uint64_t seed) {
    Rng rng(seed ^ 0x3);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    double worst = 0.0;
    double worst_dense = 0.0;
    int unequal = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = dim(rng);
        const std::size_t m = dim(rng);
        unequal += n != m;
        std::vector<Operator> blocks;
        for (std::size_t l = 0; l < n; ++l) {
            blocks.push_back(haar_unitary(m, rng));
        }
        const ControlledOperator d = conditional_dynamics(blocks);
        const StateVector joint = haar_state(n * m, rng);
        const Operator dense = densify(d);
        worst = std::max(worst, max_abs_diff(apply_controlled(d, joint), apply(dense, joint)));

        // densify against sum_l |l><l| (x) U_l built from projectors.
        std::vector<Complex> sum(n * m * n * m);
        for (std::size_t l = 0; l < n; ++l) {
            std::vector<Complex> proj(n * n);
            proj[l * n + l] = 1.0;
            const Operator term = tensor_op(Operator(n, std::move(proj)), blocks[l]);
            for (std::size_t i = 0; i < sum.size(); ++i) {
                sum[i] += term.entries()[i];
            }
        }
        for (std::size_t i = 0; i < sum.size(); ++i) {
            worst_dense = std::max(worst_dense, std::abs(sum[i] - dense.entries()[i]));
        }
    }
    return {3, "conditional dynamics structured == dense",
            worst <= 1e-12 && worst_dense <= 1e-12 && unequal > 0,
            "max deviation " + sci(worst) + ", densify vs projector sum " + sci(worst_dense) + ", n!=m cases " +
                std::to_string(unequal)};
}

CriterionResult tape_theorem(std::uint64_t seed) {
    Rng rng(seed ^ 0x4);
    std::uniform_int_distribution<std::size_t> pick_n(2, 3);
    std::uniform_int_distribution<std::size_t> pick_m(1, 4);
    std::uniform_int_distribution<std::size_t> pick_s(1, 5);
    double worst_tape = 0.0;
    double worst_payload = 0.0;
    double worst_product = 0.0;
    for (int trial = 0; trial < 50;) {
        const std::size_t n = pick_n(rng);
        const std::size_t m = pick_m(rng);
        const std::size_t s = pick_s(rng);
        if (tape_space_dim(n, s) * m > kJointCheckLimit) {
            continue;
        }
        ++trial;
        std::vector<Operator> gates;
        for (std::size_t l = 0; l < n; ++l) {
            gates.push_back(haar_unitary(m, rng));
        }
        std::uniform_int_distribution<Symbol> sym(0, static_cast<Symbol>(n - 1));
        std::vector<Symbol> cells(s);
        for (auto& c : cells) {
            c = sym(rng);
        }
        const Tape tape(n, cells);
        const StateVector blank = StateVector::basis(m, 0);
        const StateVector expected = apply(fold_product(cells, gates), blank);

        const JointRun joint = run_tape_joint(tape, gates, blank);
        worst_tape = std::max(worst_tape, std::abs(1.0 - joint.tape_fidelity));
        worst_payload = std::max(worst_payload, max_abs_diff(joint.payload, expected));
        worst_product = std::max(worst_product, max_abs_diff(run_tape(tape, gates, blank), expected));
    }
    return {4, "tape theorem (joint evolution)", worst_tape <= 1e-12 && worst_payload <= 1e-10 && worst_product <= 1e-10,
            "tape factor loss " + sci(worst_tape) + ", joint payload deviation " + sci(worst_payload) +
                ", run_tape deviation " + sci(worst_product)};
}

CriterionResult tape_orthogonality() {
    double worst_cross = 0.0;
    double worst_self = 0.0;
    std::size_t pairs = 0;
    for (std::size_t n = 2; n <= 256; ++n) {
        for (std::size_t s = 1, dim = n; dim <= 256; ++s, dim *= n) {
            std::vector<StateVector> states;
            states.reserve(dim);
            for (std::size_t index = 0; index < dim; ++index) {
                std::vector<Symbol> cells(s);
                std::size_t rest = index;
                for (auto& c : cells) {
                    c = static_cast<Symbol>(rest % n);
                    rest /= n;
                }
                states.push_back(tape_to_state(Tape(n, std::move(cells))));
            }
            for (std::size_t a = 0; a < dim; ++a) {
                worst_self = std::max(worst_self, std::abs(1.0 - fidelity(states[a], states[a])));
                for (std::size_t b = a + 1; b < dim; ++b) {
                    worst_cross = std::max(worst_cross, fidelity(states[a], states[b]));
                    ++pairs;
                }
            }
        }
    }
    return {5, "tape orthogonality (n^s <= 256)", worst_cross <= 1e-12 && worst_self <= 1e-12,
            std::to_string(pairs) + " distinct pairs, max cross fidelity " + sci(worst_cross)};
}

CriterionResult approximation_improvement(std::uint64_t seed) {
    Rng rng(seed ^ 0x6);
    const GateSet golden = golden_rotation_gate_set();
    int improved = 0;
    double smallest_gain = 1.0;
    double worst_oracle = 0.0;
    for (int t = 0; t < 20; ++t) {
        const Operator target = haar_unitary(2, rng);
        const double short_best = best_approximation(target, golden, 4).achieved_distance;
        const double long_best = best_approximation(target, golden, 12).achieved_distance;
        improved += long_best < short_best;
        smallest_gain = std::min(smallest_gain, short_best - long_best);
        for (std::size_t len = 1; len <= 6; ++len) {
            const double pruned = best_approximation(target, golden, len).achieved_distance;
            worst_oracle = std::max(worst_oracle, std::abs(pruned - brute_force_best(target, golden, len)));
        }
    }
    // A three-gate set for the oracle comparison as well.
    const GateSet triple({rotation_z(2 * std::numbers::pi * std::numbers::phi),
                          rotation_x(2 * std::numbers::pi * std::numbers::phi), rotation_y(2 * std::sqrt(2.0))});
    for (int t = 0; t < 5; ++t) {
        const Operator target = haar_unitary(2, rng);
        const double pruned = best_approximation(target, triple, 6).achieved_distance;
        worst_oracle = std::max(worst_oracle, std::abs(pruned - brute_force_best(target, triple, 6)));
    }
    return {6, "approximation improves with length", improved == 20 && worst_oracle <= 1e-9,
            std::to_string(improved) + "/20 improved (min gain " + sci(smallest_gain) +
                "), max deviation from exhaustive optimum " + sci(worst_oracle)};
}

CriterionResult replication_heredity(std::uint64_t seed) {
    // Five generations of the demo automaton.
    const Automaton origin = make_automaton(demo_registry(2, seed ^ 0x7));
    Automaton current = origin;
    bool tapes_equal = true;
    double worst_payload = 1.0;
    for (int g = 0; g < 5; ++g) {
        auto [parent, child] = replicate(current);
        tapes_equal = tapes_equal && child.tape == origin.tape && parent.tape == current.tape &&
                      child.generation == current.generation + 1;
        worst_payload = std::min(worst_payload, fidelity(child.payload, current.payload));
        check_automaton(child);
        current = std::move(child);
    }

    // Every automaton over {sep, G} with tape length <= 4.
    Rng rng(seed ^ 0x77);
    const GateSet pair({Operator::identity(2), haar_unitary(2, rng)});
    double worst_overlap = 0.0;
    double worst_dense = 0.0;
    std::size_t pairs = 0;
    for (std::size_t s = 1; s <= 4; ++s) {
        std::vector<Automaton> population;
        for (std::size_t index = 0; index < (std::size_t{1} << s); ++index) {
            std::vector<Symbol> cells(s);
            for (std::size_t i = 0; i < s; ++i) {
                cells[i] = static_cast<Symbol>((index >> i) & 1u);
            }
            if (cells.front() != kSeparator) {
                continue;
            }
            Tape tape(2, cells);
            population.push_back(make_automaton(tape, registry_for_tape(tape, pair)));
        }
        for (const auto& a : population) {
            for (const auto& b : population) {
                if (a.tape == b.tape) {
                    continue;
                }
                ++pairs;
                worst_overlap = std::max(worst_overlap, std::abs(automaton_overlap(a, b)));
                const Complex dense = inner_product(tensor_state(tape_to_state(a.tape), a.payload),
                                                    tensor_state(tape_to_state(b.tape), b.payload));
                worst_dense = std::max(worst_dense, std::abs(dense));
            }
        }
    }
    return {7, "replication heredity and orthogonality",
            tapes_equal && worst_payload >= 1.0 - 1e-8 && worst_overlap <= 1e-12 && worst_dense <= 1e-12,
            std::string("tapes identical: ") + (tapes_equal ? "yes" : "no") + ", min payload fidelity " +
                sci(worst_payload) + ", " + std::to_string(pairs) + " differing pairs, max overlap " +
                sci(worst_overlap)};
}

CriterionResult closed_loop(std::uint64_t seed) {
    Rng rng(seed ^ 0x8);
    double worst = 0.0;
    for (std::size_t n = 2; n <= 3; ++n) {
        for (std::size_t m = 1; m <= 3; ++m) {
            std::vector<Operator> blocks;
            for (std::size_t l = 0; l < n; ++l) {
                blocks.push_back(haar_unitary(m, rng));
            }
            const ProgramRegistry registry = controlled_program_registry(n, blocks);
            const ControlledOperator d = conditional_dynamics(blocks);
            const StateVector psi_d = program_state(registry, "D");
            std::optional<StateVector> psi_c;
            if (registry.has_program("C")) {
                psi_c = program_state(registry, "C");
            }
            const ControlledOperator c = cloner(n);
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < m; ++b) {
                    const StateVector input = product_state(n, a, m, b);
                    worst = std::max(worst, max_abs_diff(scattering_apply(psi_d, input, registry),
                                                         apply_controlled(d, input)));
                    if (psi_c) {
                        worst = std::max(worst, max_abs_diff(scattering_apply(*psi_c, input, registry),
                                                             apply_controlled(c, input)));
                    }
                }
            }
        }
    }
    return {8, "closed loop: tape-encoded C and D", worst <= 1e-9, "max deviation " + sci(worst)};
}

std::vector<CriterionResult> run_all(std::uint64_t seed) {
    return {perfect_cloning(),
            no_cloning_boundary(seed),
            conditional_dynamics_agreement(seed),
            tape_theorem(seed),
            tape_orthogonality(),
            approximation_improvement(seed),
            replication_heredity(seed),
            closed_loop(seed)};
}

std::string format_table(const std::vector<CriterionResult>& results, std::uint64_t seed) {
    std::ostringstream out;
    out << "qreplica verify  seed=" << seed << "  NORM_TOL=" << sci(kNormTol) << "  UNITARY_TOL=" << sci(kUnitaryTol)
        << "\n";
    int failed = 0;
    for (const auto& r : results) {
        char head[64];
        std::snprintf(head, sizeof head, "%2d  %-4s  ", r.id, r.passed ? "PASS" : "FAIL");
        out << head << r.name << ": " << r.detail << "\n";
        failed += !r.passed;
    }
    out << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
    return out.str();
}

}  // namespace qreplica::verify
