#include "mgdesign/commands.hpp"
#include "mgdesign/scenario.hpp"
#include "mgdesign/simulator.hpp"
#include "mgdesign/trace_io.hpp"
#include "mgdesign/verify.hpp"

#include <cstdio>
#include <fstream>

namespace mgdesign {

namespace {

ScenarioConfig load_for(const RunManifest& manifest) {
  ScenarioConfig config = load_scenario(manifest.scenario);
  if (manifest.horizon) {
    if (*manifest.horizon < 1) throw ScenarioError("horizon override must be >= 1");
    config.horizon = static_cast<std::size_t>(*manifest.horizon);
    config.validate();
  }
  return config;
}

MoiaParams params_for(const ScenarioConfig& config, const RunManifest& manifest) {
  MoiaParams params = config.solver.value_or(MoiaParams{});
  params.seed = manifest.seed;
  return params;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw std::runtime_error("output directory " + dir.string() + " is not usable");
}

void print_report(const VerifyReport& report, const VerifyOptions& options, std::ostream& out) {
  out << "front-equivalence: " << to_string(report.equivalence);
  if (report.equivalence == CheckStatus::Skip)
    out << " (" << report.message << ")\n";
  else
    out << " (penalty-form " << report.penalty_front_size << " points, constrained-form "
        << report.constrained_front_size << " points)\n";

  out << "moia-coverage: " << to_string(report.coverage);
  if (report.coverage == CheckStatus::Skip) {
    out << " (" << report.message << ")\n";
    return;
  }
  char line[256];
  std::snprintf(line, sizeof(line),
                " (consistent %.4f, reference covered %.4f, archive %zu, reference %zu points on a %zu-per-axis grid, "
                "eps %.2f%% of range, threshold %.2f)",
                report.measured.candidate_consistent, report.measured.reference_covered, report.archive_size,
                report.coverage_front_size, report.coverage_grid_count, options.epsilon * 100,
                options.coverage_threshold);
  out << line;
  if (!report.message.empty()) out << " " << report.message;
  out << '\n';
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ScenarioError& e) {
    err << "error: invalid scenario: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return 2;
}

}  // namespace

int cmd_simulate(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig config = load_for(manifest);
    const MoiaParams params = params_for(config, manifest);
    prepare_output_dir(manifest.output_dir);

    auto observer = [&](const StepOutcome& step) {
      if (!manifest.dump_front) return;
      auto f = open_output(manifest.output_dir / front_file_name(step.record.k));
      write_front_jsonl(step, f);
    };
    const SimulationTrace trace = simulate(config, params, observer);
    {
      auto f = open_output(manifest.output_dir / "trace.csv");
      write_trace_csv(trace, config, f);
    }
    {
      auto f = open_output(manifest.output_dir / "run.json");
      write_run_metadata(trace, config, f);
    }
    std::size_t fallbacks = 0;
    for (const auto& r : trace.records) fallbacks += r.fallback ? 1 : 0;
    out << "simulated " << trace.records.size() << " steps (" << fallbacks << " fallback) -> "
        << (manifest.output_dir / "trace.csv").string() << '\n';

    int status = 0;
    if (manifest.verify) {
      const VerifyOptions options;
      const auto report = verify_first_step(config, params, options);
      print_report(report, options, out);
      if (!report.ok()) status = 1;
    }
    return status;
  });
}

int cmd_verify(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig config = load_for(manifest);
    const MoiaParams params = params_for(config, manifest);
    const VerifyOptions options;
    const auto report = verify_first_step(config, params, options);
    print_report(report, options, out);
    return report.ok() ? 0 : 1;
  });
}

int cmd_solve(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig config = load_for(manifest);
    if (manifest.step >= config.horizon) throw ScenarioError("step lies beyond the horizon");
    const MoiaParams params = params_for(config, manifest);
    prepare_output_dir(manifest.output_dir);
    const NetworkState state = config.state_at(manifest.step, config.initial_stored());
    const StepOutcome step = simulate_step(state, config, params, manifest.step);
    auto f = open_output(manifest.output_dir / front_file_name(manifest.step));
    write_front_jsonl(step, f);
    out << "step " << manifest.step << ": archive " << step.record.archive_size << ", price "
        << format_number(step.record.price) << (step.record.fallback ? " (fallback)" : "") << '\n';
    return 0;
  });
}

}  // namespace mgdesign
