#include "qreplica/commands.hpp"

#include <algorithm>
#include <cmath>

#include "qreplica/errors.hpp"
#include "qreplica/verify.hpp"

namespace qreplica::cli {

using io::Json;

Json tolerances(const RunConfig& config) {
    return Json{{"norm_tol", kNormTol},
                {"unitary_tol", kUnitaryTol},
                {"replication_tol", kReplicationTol},
                {"verdict_tol", config.verdict_tol},
                {"net_radius", config.net_radius},
                {"max_dim", max_dim()},
                {"joint_check_limit", kJointCheckLimit}};
}

Json clone_demo(std::size_t n, const StateVector& input, const RunConfig& config) {
    if (n < 2) {
        throw ContractError("clone-demo needs n >= 2");
    }
    if (input.dim() != n) {
        throw ContractError("input state has dim " + std::to_string(input.dim()) + ", expected " + std::to_string(n));
    }
    const StateVector output = apply_controlled(cloner(n), tensor_state(input, StateVector::basis(n, 0)));
    const double f = fidelity(output, tensor_state(input, input));
    return Json{{"command", "clone-demo"},
                {"n", n},
                {"input", io::to_json(input)},
                {"output", io::to_json(output)},
                {"ideal_clone_fidelity", f},
                {"verdict", f >= 1.0 - config.verdict_tol ? "cloned" : "entangled"},
                {"tolerances", tolerances(config)}};
}

Json clone_demo(std::size_t n, std::size_t basis_index, const RunConfig& config) {
    if (basis_index >= n) {
        throw ContractError("basis index " + std::to_string(basis_index) + " out of range for n = " + std::to_string(n));
    }
    return clone_demo(n, StateVector::basis(n, basis_index), config);
}

Json cond_dyn(const ControlledOperator& op, const StateVector& joint, const RunConfig& config) {
    const StateVector output = apply_controlled(op, joint);
    Json report{{"command", "cond-dyn"},
                {"control_dim", op.control_dim()},
                {"target_dim", op.target_dim()},
                {"input", io::to_json(joint)},
                {"output", io::to_json(output)}};
    if (op.joint_dim() <= kJointCheckLimit) {
        const StateVector dense = apply(densify(op), joint);
        double worst = 0.0;
        for (std::size_t i = 0; i < dense.dim(); ++i) {
            worst = std::max(worst, std::abs(dense[i] - output[i]));
        }
        report["dense_check"] = Json{{"max_deviation", worst}};
    } else {
        report["dense_check"] = nullptr;
    }
    report["tolerances"] = tolerances(config);
    return report;
}

Json tape_run(const Tape& tape, const GateSet& gates, const StateVector& payload, const RunConfig& config) {
    const StateVector result = run_tape(tape, gates.gates(), payload);
    Json report{{"command", "tape-run"},
                {"tape", io::tape_to_text(tape)},
                {"payload", io::to_json(payload)},
                {"final_payload", io::to_json(result)}};
    try {
        const JointRun joint = run_tape_joint(tape, gates.gates(), payload);
        double worst = 0.0;
        for (std::size_t i = 0; i < result.dim(); ++i) {
            worst = std::max(worst, std::abs(joint.payload[i] - result[i]));
        }
        report["verification"] = "joint-space";
        report["joint_check"] = Json{{"joint_dim", joint.joint_dim},
                                     {"tape_fidelity", joint.tape_fidelity},
                                     {"max_payload_deviation", worst}};
    } catch (const CapacityError&) {
        report["verification"] = "product-form-only";
        report["joint_check"] = nullptr;
    }
    report["tolerances"] = tolerances(config);
    return report;
}

Json approx(const Operator& target, const GateSet& gates, double epsilon, std::size_t max_len,
            const RunConfig& config) {
    SearchOptions options;
    options.net_radius = config.net_radius;
    options.parallel = config.parallel;
    const auto result = approximate(target, gates, epsilon, max_len, options);
    Json report{{"command", "approx"}, {"epsilon", epsilon}, {"max_len", max_len}};
    if (result) {
        report.update(io::to_json(*result, gates));
    } else {
        report["found"] = false;
        report["target"] = io::to_json(target);
    }
    report["tolerances"] = tolerances(config);
    return report;
}

std::vector<Json> replicate_report(const Automaton& origin, std::size_t generations, const RunConfig& config) {
    std::vector<Json> lines;
    std::vector<Automaton> lineage{origin};
    for (std::size_t g = 0; g < generations; ++g) {
        const Automaton& parent = lineage.back();
        const TapeReplication certificate =
            replicate_tape_certified(parent.tape, cloner(parent.tape.alphabet_size()));
        auto [parent_after, child] = replicate(parent);
        check_automaton(child);

        double distinct_overlap = 0.0;
        for (const auto& ancestor : lineage) {
            if (!(ancestor.tape == child.tape)) {
                distinct_overlap = std::max(distinct_overlap, std::abs(automaton_overlap(ancestor, child)));
            }
        }
        lines.push_back(Json{
            {"generation", child.generation},
            {"tape", io::tape_to_text(child.tape)},
            {"tape_identical_to_origin", child.tape == origin.tape},
            {"min_cell_fidelity", *std::min_element(certificate.cell_fidelity.begin(), certificate.cell_fidelity.end())},
            {"payload_fidelity_to_parent", fidelity(child.payload, parent.payload)},
            {"overlap_with_parent", io::to_json(automaton_overlap(parent_after, child))},
            {"max_overlap_distinct_tapes", distinct_overlap},
            {"tolerances", tolerances(config)}});
        lineage.push_back(std::move(child));
    }
    return lines;
}

std::string verify_report(const RunConfig& config, bool* all_passed) {
    const auto results = verify::run_all(config.seed);
    if (all_passed != nullptr) {
        *all_passed = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
    }
    return verify::format_table(results, config.seed);
}

}  // namespace qreplica::cli
