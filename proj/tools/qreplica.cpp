#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qreplica/commands.hpp"
#include "qreplica/errors.hpp"
#include "qreplica/io.hpp"

namespace {

using qreplica::io::Json;

constexpr int kExitFailed = 1;
constexpr int kExitContract = 2;
constexpr int kExitIntegrity = 3;

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) {
                throw qreplica::InputError("cannot write " + path);
            }
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void parse_tolerance(const std::string& spec, qreplica::cli::RunConfig& config) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
        throw qreplica::InputError("--tol expects name=value, got '" + spec + "'");
    }
    const std::string name = spec.substr(0, eq);
    double value = 0.0;
    try {
        value = std::stod(spec.substr(eq + 1));
    } catch (const std::exception&) {
        throw qreplica::InputError("--tol value for '" + name + "' is not a number");
    }
    if (!(value >= 0.0)) {
        throw qreplica::InputError("--tol value for '" + name + "' must be non-negative");
    }
    if (name == "verdict") {
        config.verdict_tol = value;
    } else if (name == "net_radius") {
        config.net_radius = value;
    } else {
        throw qreplica::InputError("unknown tolerance '" + name + "' (known: verdict, net_radius)");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qreplica: orthogonal cloning, conditional dynamics, program tapes and self-replicating automata"};
    app.require_subcommand(1);
    // Global options may follow the subcommand, e.g. "verify --seed 3".
    app.fallthrough();

    qreplica::cli::RunConfig config;
    std::string output_path;
    std::vector<std::string> tolerance_specs;
    bool nondeterministic = false;
    std::size_t max_dim = 0;
    app.add_option("--seed", config.seed, "RNG seed")->capture_default_str();
    app.add_option("-o,--output", output_path, "Write the report here instead of stdout");
    app.add_option("--tol", tolerance_specs, "Tolerance override name=value (verdict, net_radius)");
    app.add_flag("--deterministic", "Deterministic mode (default)");
    app.add_flag("--nondeterministic", nondeterministic, "Allow nondeterministic execution");
    app.add_flag("--parallel", config.parallel, "Parallel product evaluation in approx");
    app.add_option("--max-dim", max_dim, "Override MAX_DIM (also QREPLICA_MAX_DIM)");

    auto* clone = app.add_subcommand("clone-demo", "Apply the basis cloner to |psi>|0>");
    std::size_t clone_n = 2;
    std::optional<std::size_t> clone_index;
    std::string clone_state;
    clone->add_option("--n", clone_n, "Dimension")->required();
    auto* index_opt = clone->add_option("--index", clone_index, "Basis index k of the input |k>");
    clone->add_option("--state", clone_state, "Input state JSON file")->excludes(index_opt);

    auto* cond = app.add_subcommand("cond-dyn", "Apply a controlled operator to a joint state");
    std::string cond_op;
    std::string cond_state;
    std::optional<std::size_t> cond_control;
    cond->add_option("--operator", cond_op, "Controlled operator JSON file")->required();
    auto* state_opt = cond->add_option("--state", cond_state, "Joint state JSON file");
    cond->add_option("--control", cond_control, "Use |control>|0> as the input")->excludes(state_opt);

    auto* tape_cmd = app.add_subcommand("tape-run", "Run a program tape on a payload");
    std::string tape_text;
    std::string tape_json;
    std::string tape_gates;
    std::string tape_payload;
    auto* text_opt = tape_cmd->add_option("--tape", tape_text, "Tape text n=..;cells=..;head=..");
    tape_cmd->add_option("--tape-json", tape_json, "Tape JSON file")->excludes(text_opt);
    tape_cmd->add_option("--gates", tape_gates, "Gate set JSON file")->required();
    tape_cmd->add_option("--payload", tape_payload, "Payload state JSON file (default |0>)");

    auto* approx_cmd = app.add_subcommand("approx", "Search a gate sequence approximating a target unitary");
    std::string approx_target;
    std::string approx_gates;
    double epsilon = 0.0;
    std::size_t max_len = 0;
    approx_cmd->add_option("--target", approx_target, "Target operator JSON file")->required();
    approx_cmd->add_option("--gates", approx_gates, "Gate set JSON file (default: golden-angle rotations)");
    approx_cmd->add_option("--epsilon", epsilon, "Distance threshold")->required();
    approx_cmd->add_option("--max-len", max_len, "Longest sequence searched")->required();
    approx_cmd->add_flag("--deterministic", "Deterministic mode (default)");
    approx_cmd->add_flag("--parallel", config.parallel, "Parallel product evaluation");

    auto* rep = app.add_subcommand("replicate", "Iterate the replication cycle and report per generation");
    std::string rep_automaton;
    std::optional<std::size_t> rep_demo;
    std::size_t generations = 1;
    std::string rep_report;
    auto* auto_opt = rep->add_option("--automaton", rep_automaton, "Automaton JSON file");
    rep->add_option("--demo", rep_demo, "Use the built-in demo automaton with control dimension n")
        ->excludes(auto_opt);
    rep->add_option("--generations", generations, "Generations to run")->capture_default_str();
    rep->add_option("--report", rep_report, "JSON-lines report file (default stdout)");

    auto* verify = app.add_subcommand("verify", "Run the invariant suite and print a pass/fail table");

    CLI11_PARSE(app, argc, argv);

    try {
        config.deterministic = !nondeterministic;
        if (max_dim > 0) {
            qreplica::set_max_dim(max_dim);
        }
        for (const auto& spec : tolerance_specs) {
            parse_tolerance(spec, config);
        }

        if (clone->parsed()) {
            Output out(output_path);
            if (!clone_state.empty()) {
                const auto input = qreplica::io::state_from_json(qreplica::io::read_json_file(clone_state));
                out.stream() << qreplica::cli::clone_demo(clone_n, input, config).dump(2) << "\n";
            } else {
                out.stream() << qreplica::cli::clone_demo(clone_n, clone_index.value_or(0), config).dump(2) << "\n";
            }
        } else if (cond->parsed()) {
            Output out(output_path);
            const auto op = qreplica::io::controlled_from_json(qreplica::io::read_json_file(cond_op));
            const auto joint =
                cond_state.empty()
                    ? qreplica::tensor_state(qreplica::StateVector::basis(op.control_dim(), cond_control.value_or(0)),
                                             qreplica::StateVector::basis(op.target_dim(), 0))
                    : qreplica::io::state_from_json(qreplica::io::read_json_file(cond_state));
            out.stream() << qreplica::cli::cond_dyn(op, joint, config).dump(2) << "\n";
        } else if (tape_cmd->parsed()) {
            Output out(output_path);
            if (tape_text.empty() && tape_json.empty()) {
                throw qreplica::InputError("tape-run needs --tape or --tape-json");
            }
            const auto tape = tape_text.empty() ? qreplica::io::tape_from_json(qreplica::io::read_json_file(tape_json))
                                                : qreplica::io::tape_from_text(tape_text);
            const auto gates = qreplica::io::gate_set_from_json(qreplica::io::read_json_file(tape_gates));
            const auto payload = tape_payload.empty()
                                     ? qreplica::StateVector::basis(gates.dim(), 0)
                                     : qreplica::io::state_from_json(qreplica::io::read_json_file(tape_payload));
            out.stream() << qreplica::cli::tape_run(tape, gates, payload, config).dump(2) << "\n";
        } else if (approx_cmd->parsed()) {
            Output out(output_path);
            const auto target = qreplica::io::operator_from_json(qreplica::io::read_json_file(approx_target));
            const auto gates = approx_gates.empty()
                                   ? qreplica::golden_rotation_gate_set()
                                   : qreplica::io::gate_set_from_json(qreplica::io::read_json_file(approx_gates));
            out.stream() << qreplica::cli::approx(target, gates, epsilon, max_len, config).dump(2) << "\n";
        } else if (rep->parsed()) {
            Output out(rep_report.empty() ? output_path : rep_report);
            if (!rep_demo && rep_automaton.empty()) {
                throw qreplica::InputError("replicate needs --automaton or --demo");
            }
            const auto origin = rep_demo ? qreplica::make_automaton(qreplica::demo_registry(*rep_demo, config.seed))
                                         : qreplica::io::automaton_from_json(qreplica::io::read_json_file(rep_automaton));
            for (const auto& line : qreplica::cli::replicate_report(origin, generations, config)) {
                out.stream() << line.dump() << "\n";
            }
        } else if (verify->parsed()) {
            Output out(output_path);
            bool passed = false;
            out.stream() << qreplica::cli::verify_report(config, &passed);
            return passed ? 0 : kExitFailed;
        }
    } catch (const qreplica::IntegrityError& e) {
        std::cerr << "integrity error: " << e.what() << "\n";
        return kExitIntegrity;
    } catch (const qreplica::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitContract;
    } catch (const qreplica::UndecodableProgramError& e) {
        std::cerr << "undecodable program: " << e.what() << "\n";
        return kExitContract;
    } catch (const qreplica::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kExitContract;
    } catch (const qreplica::ContractError& e) {
        std::cerr << "contract error: " << e.what() << "\n";
        return kExitContract;
    }
    return 0;
}
