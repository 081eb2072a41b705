#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "l1bench/instance.hpp"
#include "l1bench/linops.hpp"
#include "l1bench/solvers.hpp"

namespace l1bench {

/// Structured-text form of a factored operator. Realized uniform spectra are
/// recorded so a reloaded spec replays bit-exactly.
nlohmann::json spec_to_json(const OperatorSpec& spec);
OperatorSpec spec_from_json(const nlohmann::json& j);

/// Instance container: a JSON header (dimensions, tau, noise norm, operator
/// spec, conditioning report) followed by little-endian doubles for b, the
/// sparse planted solution as index/value pairs, and the dense extension
/// columns for wide instances.
void save_instance(const ProblemInstance& inst, const std::string& path);
ProblemInstance load_instance(const std::string& path);

void write_trace_csv(const SolverTrace& trace, const std::string& path);

}  // namespace l1bench
