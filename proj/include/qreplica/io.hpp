#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qreplica/approx.hpp"
#include "qreplica/automaton.hpp"
#include "qreplica/basis_ops.hpp"
#include "qreplica/linalg.hpp"
#include "qreplica/tape.hpp"

namespace qreplica::io {

using Json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors become InputError with line and column.
Json parse_json(std::string_view text, std::string_view source = "<input>");
Json read_json_file(const std::filesystem::path& path);

// Complex numbers are [re, im] pairs.
Json to_json(Complex z);
Complex complex_from_json(const Json& j);

// {"dim": n, "amps": [[re, im], ...]}
Json to_json(const StateVector& state);
StateVector state_from_json(const Json& j);

// {"dim": n, "rows": [[[re, im], ...], ...]}
Json to_json(const Operator& op);
Operator operator_from_json(const Json& j);

// {"control_dim": n, "target_dim": m, "blocks": [operator, ...]}
Json to_json(const ControlledOperator& op);
ControlledOperator controlled_from_json(const Json& j);

// {"gates": [operator, ...], "labels": [string, ...]}
Json to_json(const GateSet& gates);
GateSet gate_set_from_json(const Json& j);

// "n=<int>;cells=<ints, cell 1 first>;head=<int>"
std::string tape_to_text(const Tape& tape);
Tape tape_from_text(std::string_view text);
// {"n": n, "cells": [...], "head": h}
Json to_json(const Tape& tape);
/// Accepts either the object form or a tape-text string.
Tape tape_from_json(const Json& j);

// {"gate_set": gateset, "segments": {"C": [...], ...}}
Json to_json(const ProgramRegistry& registry);
ProgramRegistry registry_from_json(const Json& j);

// {"tape": tape-text, "registry": registry, "generation": g}
Json to_json(const Automaton& automaton);
Automaton automaton_from_json(const Json& j);

Json to_json(const ApproxResult& result, const GateSet& gates);

}  // namespace qreplica::io
