#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

namespace mgdesign {

inline constexpr std::uint64_t kDefaultSeed = 1;

struct RunManifest {
  std::filesystem::path scenario;
  std::uint64_t seed = kDefaultSeed;
  std::optional<long long> horizon;  // overrides the scenario horizon
  std::filesystem::path output_dir = "out";
  bool dump_front = false;
  bool verify = false;
  std::size_t step = 0;  // solve only
};

/// Writes trace.csv and run.json (plus front_kNNN.jsonl per step with
/// dump_front) into output_dir. Returns 0 on success.
int cmd_simulate(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Prints one PASS/FAIL/SKIP line per oracle check. Returns 0 unless a
/// check fails or the scenario is invalid.
int cmd_verify(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Solves a single step from the initial storage levels and writes its
/// front file.
int cmd_solve(const RunManifest& manifest, std::ostream& out, std::ostream& err);

}  // namespace mgdesign
