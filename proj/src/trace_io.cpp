#include "mgdesign/trace_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>

namespace mgdesign {

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string trace_header(const ScenarioConfig& config) {
  std::string h = "k,lambda";
  for (const auto& m : config.microgrids) {
    const auto n = std::to_string(m.id);
    h += ",p_g_" + n + ",p_d_" + n + ",v_" + n;
    if (m.has_storage) h += ",s_" + n;
  }
  h += ",U_d,U_g,S_total,U_c,archive_size,fallback";
  return h;
}

void write_trace_csv(const SimulationTrace& trace, const ScenarioConfig& config, std::ostream& out) {
  out << trace_header(config) << '\n';
  for (const auto& r : trace.records) {
    out << r.k << ',' << format_number(r.price);
    for (std::size_t j = 0; j < config.microgrids.size(); ++j) {
      const auto n = static_cast<Eigen::Index>(j);
      out << ',' << format_number(r.dispatch[n]) << ',' << format_number(r.demand[n]) << ','
          << format_number(r.res_output[n]);
      if (config.microgrids[j].has_storage) out << ',' << format_number(r.stored_next[n]);
    }
    out << ',' << format_number(r.utility_microgrids) << ',' << format_number(r.utility_grid) << ','
        << format_number(r.stored_total) << ',' << format_number(r.penalty) << ',' << r.archive_size << ','
        << (r.fallback ? 1 : 0) << '\n';
  }
}

namespace {

nlohmann::json to_json_array(const Eigen::VectorXd& v) {
  auto a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

void write_front_jsonl(const StepOutcome& outcome, std::ostream& out) {
  const auto& rec = outcome.record;
  if (rec.fallback) {
    Eigen::VectorXd antibody(1 + rec.stored.size());
    antibody[0] = rec.price;
    antibody.tail(rec.stored.size()) = rec.dispatch.head(rec.stored.size());
    Eigen::VectorXd f(4);
    f << -rec.utility_microgrids, -rec.utility_grid, -rec.stored_total, rec.penalty;
    nlohmann::json line{{"k", rec.k},           {"entry", 0},          {"knee", true},
                        {"fallback", true},     {"antibody", to_json_array(antibody)},
                        {"objectives", to_json_array(f)}};
    out << line.dump() << '\n';
    return;
  }
  const auto& entries = outcome.solve.archive.entries;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    nlohmann::json line{{"k", rec.k},
                        {"entry", i},
                        {"knee", i == outcome.knee},
                        {"antibody", to_json_array(entries[i].x)},
                        {"objectives", to_json_array(entries[i].f)}};
    out << line.dump() << '\n';
  }
}

void write_run_metadata(const SimulationTrace& trace, const ScenarioConfig& config, std::ostream& out) {
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(trace.config_hash));
  nlohmann::json meta{{"scenario", config.name},
                      {"config_hash", hash},
                      {"seed", trace.seed},
                      {"horizon", trace.records.size()}};
  out << meta.dump(2) << '\n';
}

std::string front_file_name(std::size_t k) {
  char name[32];
  std::snprintf(name, sizeof(name), "front_k%03zu.jsonl", k);
  return name;
}

}  // namespace mgdesign
