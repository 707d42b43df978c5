#pragma once

#include <string>
#include <vector>

#include "coldchain/def_builder.hpp"
#include "coldchain/lp/simplex.hpp"

namespace coldchain {

/// min / q1 / median / q3 / max box statistics (type-7 linear-interpolation
/// quantiles) plus the mean.
struct BoxStats {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0;
};

BoxStats box_stats(std::vector<double> values);

/// Value table per (group, scenario): SR rows are vaccines, FIC rows are
/// clinics or regions.
struct MetricTable {
  std::vector<std::string> groups;
  int scenarios = 0;
  std::vector<double> value;  // (group, scenario)

  double at(int g, int s) const { return value[static_cast<std::size_t>(g) * scenarios + s]; }
  double& at(int g, int s) { return value[static_cast<std::size_t>(g) * scenarios + s]; }
  BoxStats group_stats(int g) const;
  double scenario_mean(int s) const;  // mean over groups
  double overall_mean() const;
};

enum class FicGrouping { ByClinic, ByRegion };

/// SR per (vaccine, scenario): served doses over scenario demand, summed over
/// clinics and periods; zero demand counts as fully served (SR = 1).
MetricTable compute_sr(const DefProblem& def, const std::vector<double>& x,
                       const ScenarioSet& scenarios);

/// FIC per (clinic|region, scenario): 100 * n_j / sum_i sum_t demand. Regions
/// aggregate clinics by scenario-demand weighting. Zero demand gives 0.
/// use_child_cohort_denominator replaces the all-vaccine dose denominator
/// with the implied child cohort (demand / regimen doses, averaged over
/// vaccines) — a non-default alternative reading, off unless requested.
MetricTable compute_fic(const DefProblem& def, const std::vector<double>& x,
                        const ScenarioSet& scenarios, FicGrouping grouping,
                        bool use_child_cohort_denominator = false);

struct PairedTestResult {
  int pairs = 0;
  double mean_difference = 0.0;  // b - a
  double t_statistic = 0.0;
  double p_value = 1.0;          // two-sided unless one_sided
  bool significant = false;
  bool zero_variance = false;    // degenerate: identical within-pair spread
  bool one_sided = false;
};

/// Paired comparison of two metric tables sharing scenario seeds: pairs the
/// per-scenario means by scenario index. one_sided tests b > a. Throws if the
/// arms are unpaired (different scenario counts).
PairedTestResult paired_compare(const MetricTable& arm_a, const MetricTable& arm_b,
                                double level = 0.05, bool one_sided = false);

/// Student's t distribution CDF (incomplete-beta evaluation).
double student_t_cdf(double t, double dof);

} // namespace coldchain
