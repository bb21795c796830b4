#pragma once

#include "mgdesign/moia.hpp"
#include "mgdesign/oracle.hpp"
#include "mgdesign/scenario.hpp"

#include <string>

namespace mgdesign {

enum class CheckStatus { Pass, Fail, Skip };

const char* to_string(CheckStatus status);

struct VerifyOptions {
  std::size_t grid_count = 41;           // equivalence check, per dimension
  std::size_t coverage_grid_count = 0;   // coverage reference; 0 = densest grid within budget
  double epsilon = 0.01;           // fraction of the reference range per objective
  double coverage_threshold = 0.90;
  std::size_t budget = 1'000'000;  // grid points
};

struct VerifyReport {
  CheckStatus equivalence = CheckStatus::Skip;
  std::size_t penalty_front_size = 0;
  std::size_t constrained_front_size = 0;

  CheckStatus coverage = CheckStatus::Skip;
  std::size_t archive_size = 0;
  std::size_t coverage_grid_count = 0;
  std::size_t coverage_front_size = 0;
  Coverage measured;

  std::string message;  // skip reason, if any

  bool ok() const { return equivalence != CheckStatus::Fail && coverage != CheckStatus::Fail; }
};

/// Oracle checks on the first market interval of a scenario: penalty-form
/// and constrained-form grid fronts must be the same grid points, and the
/// immune-algorithm archive must be epsilon-consistent with the constrained
/// front on the three utility objectives.
/// Largest per-dimension count c with c^dims <= budget.
std::size_t densest_grid_count(std::size_t budget, std::size_t dims);

VerifyReport verify_first_step(const ScenarioConfig& config, const MoiaParams& params,
                               const VerifyOptions& options = {});

}  // namespace mgdesign
