#pragma once

#include "mgdesign/scenario.hpp"
#include "mgdesign/simulator.hpp"

#include <filesystem>
#include <ostream>
#include <string>

namespace mgdesign {

/// Shortest round-trip decimal form of a double.
std::string format_number(double value);

/// Column names of the trace table, in order.
std::string trace_header(const ScenarioConfig& config);

/// Comma-separated table, one row per step. Columns: k, lambda, then per
/// microgrid n: p_g_n, p_d_n, v_n and (storage microgrids only) s_n holding
/// s_n(k+1); then U_d, U_g, S_total, U_c, archive_size, fallback.
void write_trace_csv(const SimulationTrace& trace, const ScenarioConfig& config, std::ostream& out);

/// One JSON object per archive entry:
/// {"antibody":[...],"entry":i,"k":k,"knee":bool,"objectives":[...]}.
/// A fallback step writes a single record for the fallback antibody with
/// "fallback":true.
void write_front_jsonl(const StepOutcome& outcome, std::ostream& out);

/// {"config_hash":"<16 hex>","horizon":H,"scenario":name,"seed":S}
void write_run_metadata(const SimulationTrace& trace, const ScenarioConfig& config, std::ostream& out);

std::string front_file_name(std::size_t k);

}  // namespace mgdesign
