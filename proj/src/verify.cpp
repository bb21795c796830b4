#include "mgdesign/verify.hpp"
#include "mgdesign/model.hpp"

#include <cmath>

namespace mgdesign {

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass:
      return "PASS";
    case CheckStatus::Fail:
      return "FAIL";
    case CheckStatus::Skip:
      return "SKIP";
  }
  return "?";
}

std::size_t densest_grid_count(std::size_t budget, std::size_t dims) {
  if (dims == 0) return 0;
  auto fits = [&](std::size_t c) {
    std::size_t total = 1;
    for (std::size_t d = 0; d < dims; ++d) {
      if (total > budget / c) return false;
      total *= c;
    }
    return true;
  };
  auto c = static_cast<std::size_t>(std::pow(static_cast<double>(budget), 1.0 / static_cast<double>(dims)));
  while (c > 1 && !fits(c)) --c;
  while (fits(c + 1)) ++c;
  return c;
}

VerifyReport verify_first_step(const ScenarioConfig& config, const MoiaParams& params,
                               const VerifyOptions& options) {
  VerifyReport report;
  const NetworkState state = config.initial_state();
  const StepProblem problem(state, config, 0);
  const GridSpec grid = GridSpec::uniform(problem.lower(), problem.upper(), options.grid_count, options.budget);
  if (grid.total() > grid.budget) {
    report.message = "grid of " + std::to_string(options.grid_count) + "^" +
                     std::to_string(problem.lower().size()) + " points exceeds the oracle budget of " +
                     std::to_string(options.budget);
    return report;
  }

  const auto penalty_form = brute_force_front(problem, grid, FrontMode::PenaltyForm);
  const auto constrained = brute_force_front(problem, grid, FrontMode::ConstrainedForm);
  report.penalty_front_size = penalty_form.grid_index.size();
  report.constrained_front_size = constrained.grid_index.size();
  report.equivalence = penalty_form.grid_index == constrained.grid_index ? CheckStatus::Pass : CheckStatus::Fail;

  // The coverage reference has to resolve the front to well under epsilon,
  // otherwise archive points between grid nodes beat it.
  const auto dims = static_cast<std::size_t>(problem.lower().size());
  report.coverage_grid_count =
      options.coverage_grid_count ? options.coverage_grid_count : densest_grid_count(options.budget, dims);
  const GridSpec fine =
      GridSpec::uniform(problem.lower(), problem.upper(), report.coverage_grid_count, options.budget);
  const auto dense = report.coverage_grid_count == options.grid_count
                         ? constrained
                         : brute_force_front(problem, fine, FrontMode::ConstrainedForm);
  report.coverage_front_size = dense.grid_index.size();

  const auto result = run_moia(problem, params);
  report.archive_size = result.archive.size();
  if (dense.objectives.empty() || result.archive.empty()) {
    report.coverage = CheckStatus::Fail;
    report.message = dense.objectives.empty() ? "reference front is empty" : "immune-algorithm archive is empty";
    return report;
  }

  std::vector<Eigen::VectorXd> reference;
  for (const auto& f : dense.objectives) reference.push_back(f.head(3));
  std::vector<Eigen::VectorXd> candidate;
  for (const auto& e : result.archive.entries) candidate.push_back(e.f.head(3));
  report.measured = front_coverage(candidate, reference, relative_tolerance(reference, options.epsilon));
  report.coverage =
      report.measured.candidate_consistent >= options.coverage_threshold ? CheckStatus::Pass : CheckStatus::Fail;
  return report;
}

}  // namespace mgdesign
