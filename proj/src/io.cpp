#include "qreplica/io.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <fstream>
#include <sstream>

#include "qreplica/errors.hpp"

namespace qreplica::io {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) {
        throw InputError(std::string("expected an object with key '") + key + "'");
    }
    const auto it = j.find(key);
    if (it == j.end()) {
        throw InputError(std::string("missing key '") + key + "'");
    }
    return *it;
}

std::size_t size_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw InputError(std::string("'") + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

std::vector<Symbol> symbols_from_json(const Json& j, const char* what) {
    if (!j.is_array()) {
        throw InputError(std::string(what) + " must be an array of integers");
    }
    std::vector<Symbol> out;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw InputError(std::string(what) + " must hold non-negative integers");
        }
        out.push_back(v.get<Symbol>());
    }
    return out;
}

std::size_t parse_size(std::string_view text, std::string_view what) {
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw InputError("tape text: bad " + std::string(what) + " '" + std::string(text) + "'");
    }
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

Json parse_json(std::string_view text, std::string_view source) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        // Translate the byte offset into line/column.
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < limit; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw InputError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(column) +
                         ": malformed JSON (" + e.what() + ")");
    }
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_json(buffer.str(), path.string());
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InputError("complex number must be a [re, im] pair of numbers");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(const StateVector& state) {
    Json amps = Json::array();
    for (const auto& z : state.amps()) {
        amps.push_back(to_json(z));
    }
    return Json{{"dim", state.dim()}, {"amps", std::move(amps)}};
}

StateVector state_from_json(const Json& j) {
    const std::size_t dim = size_field(j, "dim");
    const Json& amps = field(j, "amps");
    if (!amps.is_array() || amps.size() != dim) {
        throw InputError("'amps' must be an array of length dim = " + std::to_string(dim));
    }
    std::vector<Complex> values;
    values.reserve(dim);
    for (const auto& a : amps) {
        values.push_back(complex_from_json(a));
    }
    return StateVector(std::move(values));
}

Json to_json(const Operator& op) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < op.dim(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < op.dim(); ++c) {
            row.push_back(to_json(op(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return Json{{"dim", op.dim()}, {"rows", std::move(rows)}};
}

Operator operator_from_json(const Json& j) {
    const std::size_t dim = size_field(j, "dim");
    const Json& rows = field(j, "rows");
    if (!rows.is_array() || rows.size() != dim) {
        throw InputError("'rows' must hold dim = " + std::to_string(dim) + " rows");
    }
    std::vector<Complex> entries;
    entries.reserve(dim * dim);
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != dim) {
            throw InputError("every operator row must hold dim = " + std::to_string(dim) + " entries");
        }
        for (const auto& z : row) {
            entries.push_back(complex_from_json(z));
        }
    }
    return Operator(dim, std::move(entries));
}

Json to_json(const ControlledOperator& op) {
    Json blocks = Json::array();
    for (const auto& b : op.blocks()) {
        blocks.push_back(to_json(b));
    }
    return Json{{"control_dim", op.control_dim()}, {"target_dim", op.target_dim()}, {"blocks", std::move(blocks)}};
}

ControlledOperator controlled_from_json(const Json& j) {
    const std::size_t n = size_field(j, "control_dim");
    const std::size_t m = size_field(j, "target_dim");
    const Json& blocks = field(j, "blocks");
    if (!blocks.is_array() || blocks.size() != n) {
        throw InputError("'blocks' must hold control_dim = " + std::to_string(n) + " operators");
    }
    std::vector<Operator> ops;
    for (const auto& b : blocks) {
        ops.push_back(operator_from_json(b));
        if (ops.back().dim() != m) {
            throw InputError("block dimension does not match target_dim = " + std::to_string(m));
        }
    }
    return conditional_dynamics(std::move(ops));
}

Json to_json(const GateSet& gates) {
    Json ops = Json::array();
    for (const auto& g : gates.gates()) {
        ops.push_back(to_json(g));
    }
    Json labels = Json::array();
    for (const auto& l : gates.labels()) {
        labels.push_back(l);
    }
    return Json{{"gates", std::move(ops)}, {"labels", std::move(labels)}};
}

GateSet gate_set_from_json(const Json& j) {
    const Json& gates = field(j, "gates");
    if (!gates.is_array()) {
        throw InputError("'gates' must be an array of operators");
    }
    std::vector<Operator> ops;
    for (const auto& g : gates) {
        ops.push_back(operator_from_json(g));
    }
    std::vector<std::string> labels;
    if (const auto it = j.find("labels"); it != j.end()) {
        if (!it->is_array()) {
            throw InputError("'labels' must be an array of strings");
        }
        for (const auto& l : *it) {
            if (!l.is_string()) {
                throw InputError("'labels' must be an array of strings");
            }
            labels.push_back(l.get<std::string>());
        }
    }
    return GateSet(std::move(ops), std::move(labels));
}

std::string tape_to_text(const Tape& tape) {
    std::string out = "n=" + std::to_string(tape.alphabet_size()) + ";cells=";
    for (std::size_t i = 0; i < tape.length(); ++i) {
        out += (i ? "," : "") + std::to_string(tape.cells()[i]);
    }
    return out + ";head=" + std::to_string(tape.head());
}

Tape tape_from_text(std::string_view text) {
    std::optional<std::size_t> n;
    std::optional<std::size_t> head;
    std::optional<std::vector<Symbol>> cells;
    std::string_view rest = trim(text);
    while (!rest.empty()) {
        const std::size_t semi = rest.find(';');
        const std::string_view part = trim(rest.substr(0, semi));
        rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
        const std::size_t eq = part.find('=');
        if (eq == std::string_view::npos) {
            throw InputError("tape text: expected key=value, got '" + std::string(part) + "'");
        }
        const std::string_view key = trim(part.substr(0, eq));
        const std::string_view value = trim(part.substr(eq + 1));
        if (key == "n" && !n) {
            n = parse_size(value, "n");
        } else if (key == "head" && !head) {
            head = parse_size(value, "head");
        } else if (key == "cells" && !cells) {
            cells.emplace();
            std::string_view list = value;
            while (true) {
                const std::size_t comma = list.find(',');
                cells->push_back(static_cast<Symbol>(parse_size(trim(list.substr(0, comma)), "cell")));
                if (comma == std::string_view::npos) {
                    break;
                }
                list = list.substr(comma + 1);
            }
        } else {
            throw InputError("tape text: unexpected or repeated key '" + std::string(key) + "'");
        }
    }
    if (!n || !cells || !head) {
        throw InputError("tape text needs n=, cells= and head=");
    }
    try {
        return Tape(*n, std::move(*cells), *head);
    } catch (const ContractError& e) {
        throw InputError(std::string("tape text: ") + e.what());
    }
}

Json to_json(const Tape& tape) {
    Json cells = Json::array();
    for (const Symbol k : tape.cells()) {
        cells.push_back(k);
    }
    return Json{{"n", tape.alphabet_size()}, {"cells", std::move(cells)}, {"head", tape.head()}};
}

Tape tape_from_json(const Json& j) {
    if (j.is_string()) {
        return tape_from_text(j.get<std::string>());
    }
    const std::size_t n = size_field(j, "n");
    std::vector<Symbol> cells = symbols_from_json(field(j, "cells"), "'cells'");
    const std::size_t head = j.contains("head") ? size_field(j, "head") : 0;
    try {
        return Tape(n, std::move(cells), head);
    } catch (const ContractError& e) {
        throw InputError(std::string("tape: ") + e.what());
    }
}

Json to_json(const ProgramRegistry& registry) {
    Json segments = Json::object();
    for (const auto& p : registry.programs()) {
        segments[p.name] = p.segment;
    }
    return Json{{"gate_set", to_json(registry.gate_set())}, {"segments", std::move(segments)}};
}

ProgramRegistry registry_from_json(const Json& j) {
    GateSet gates = gate_set_from_json(field(j, "gate_set"));
    const Json& segments = field(j, "segments");
    if (!segments.is_object()) {
        throw InputError("'segments' must map program names to symbol arrays");
    }
    std::vector<Program> programs;
    for (const auto& [name, seg] : segments.items()) {
        programs.push_back(Program{name, symbols_from_json(seg, "segment")});
    }
    return ProgramRegistry(std::move(gates), std::move(programs));
}

Json to_json(const Automaton& automaton) {
    return Json{{"tape", tape_to_text(automaton.tape)},
                {"registry", to_json(automaton.registry)},
                {"generation", automaton.generation}};
}

Automaton automaton_from_json(const Json& j) {
    Tape tape = tape_from_json(field(j, "tape"));
    ProgramRegistry registry = registry_from_json(field(j, "registry"));
    const std::size_t generation = j.contains("generation") ? size_field(j, "generation") : 0;
    return make_automaton(std::move(tape), std::move(registry), generation);
}

Json to_json(const ApproxResult& result, const GateSet& gates) {
    Json labels = Json::array();
    for (const Symbol k : result.sequence.cells()) {
        labels.push_back(gates.labels()[k]);
    }
    return Json{{"found", true},
                {"sequence", tape_to_text(result.sequence)},
                {"cells", to_json(result.sequence)["cells"]},
                {"labels", std::move(labels)},
                {"length", result.sequence.length()},
                {"achieved_distance", result.achieved_distance},
                {"expansions", result.expansions},
                {"target", to_json(result.target)}};
}

}  // namespace qreplica::io
