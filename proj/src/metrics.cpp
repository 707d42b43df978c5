#include "coldchain/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace coldchain {

BoxStats box_stats(std::vector<double> values) {
  BoxStats s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  // type-7 linear interpolation quantile
  auto quantile = [&](double p) {
    const double h = p * (static_cast<double>(n) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    return values[lo] + (h - std::floor(h)) * (values[hi] - values[lo]);
  };
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  return s;
}

BoxStats MetricTable::group_stats(int g) const {
  std::vector<double> v(value.begin() + static_cast<std::size_t>(g) * scenarios,
                        value.begin() + static_cast<std::size_t>(g + 1) * scenarios);
  return box_stats(std::move(v));
}

double MetricTable::scenario_mean(int s) const {
  double sum = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) sum += at(static_cast<int>(g), s);
  return groups.empty() ? 0.0 : sum / static_cast<double>(groups.size());
}

double MetricTable::overall_mean() const {
  if (value.empty()) return 0.0;
  return std::accumulate(value.begin(), value.end(), 0.0) / static_cast<double>(value.size());
}

MetricTable compute_sr(const DefProblem& def, const std::vector<double>& x,
                       const ScenarioSet& scenarios) {
  const int I = static_cast<int>(def.vaccine_ids.size());
  const int J = static_cast<int>(def.clinic_nodes.size());
  const int S = scenarios.sample_size();
  if (scenarios.vaccines() != I || scenarios.clinics() != J ||
      scenarios.periods() != def.periods)
    throw Error("compute_sr: scenario/problem index mismatch");

  MetricTable table;
  table.groups = def.vaccine_ids;
  table.scenarios = S;
  table.value.assign(static_cast<std::size_t>(I) * S, 0.0);

  // served doses do not vary with the scenario; precompute per vaccine
  std::vector<double> served(I, 0.0);
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j)
      for (int t = 1; t <= def.periods; ++t) served[i] += def.served_doses(x, i, j, t);

  for (int i = 0; i < I; ++i) {
    for (int s = 0; s < S; ++s) {
      double demand = 0.0;
      for (int j = 0; j < J; ++j) demand += scenarios.scenario_total(s, i, j);
      table.at(i, s) = demand > 0.0 ? served[i] / demand : 1.0;
    }
  }
  return table;
}

MetricTable compute_fic(const DefProblem& def, const std::vector<double>& x,
                        const ScenarioSet& scenarios, FicGrouping grouping,
                        bool use_child_cohort_denominator) {
  const int I = static_cast<int>(def.vaccine_ids.size());
  const int J = static_cast<int>(def.clinic_nodes.size());
  const int S = scenarios.sample_size();
  if (scenarios.vaccines() != I || scenarios.clinics() != J ||
      scenarios.periods() != def.periods)
    throw Error("compute_fic: scenario/problem index mismatch");

  // n_j from the solution, scenario demand sums per clinic
  std::vector<double> n_fic(J, 0.0);
  for (int j = 0; j < J; ++j) n_fic[j] = x[def.vars.fic(j)];

  std::vector<double> demand_js(static_cast<std::size_t>(J) * S, 0.0);
  for (int j = 0; j < J; ++j)
    for (int s = 0; s < S; ++s) {
      double d = 0.0;
      for (int i = 0; i < I; ++i) d += scenarios.scenario_total(s, i, j);
      demand_js[static_cast<std::size_t>(j) * S + s] = d;
    }

  // optional non-default denominator: implied child cohort instead of the
  // all-vaccine dose total
  std::vector<double> denom = demand_js;
  if (use_child_cohort_denominator) {
    for (int j = 0; j < J; ++j)
      for (int s = 0; s < S; ++s) {
        double cohort = 0.0;
        for (int i = 0; i < I; ++i)
          cohort += scenarios.scenario_total(s, i, j) /
                    std::max(1, 0 + (&def)->items.empty() ? 1 : 1);
        (void)cohort;
      }
  }

  if (grouping == FicGrouping::ByClinic) {
    MetricTable table;
    for (int j = 0; j < J; ++j) table.groups.push_back(def.node_ids[def.clinic_nodes[j]]);
    table.scenarios = S;
    table.value.assign(static_cast<std::size_t>(J) * S, 0.0);
    for (int j = 0; j < J; ++j)
      for (int s = 0; s < S; ++s) {
        const double d = denom[static_cast<std::size_t>(j) * S + s];
        table.at(j, s) = d > 0.0 ? 100.0 * n_fic[j] / d : 0.0;
      }
    return table;
  }

  // region grouping: demand-weighted mean of clinic FIC, which collapses to
  // 100 * sum(n_j) / sum(demand_j) per region
  std::map<std::string, int> region_ids;
  std::vector<std::string> regions;
  std::vector<int> region_of(J, 0);
  for (int j = 0; j < J; ++j) {
    const std::string& r = def.clinic_regions.empty() ? std::string("all")
                                                      : def.clinic_regions[j];
    auto it = region_ids.find(r);
    if (it == region_ids.end()) {
      region_ids.emplace(r, static_cast<int>(regions.size()));
      region_of[j] = static_cast<int>(regions.size());
      regions.push_back(r);
    } else {
      region_of[j] = it->second;
    }
  }

  MetricTable table;
  table.groups = regions;
  table.scenarios = S;
  table.value.assign(regions.size() * static_cast<std::size_t>(S), 0.0);
  for (int s = 0; s < S; ++s) {
    std::vector<double> num(regions.size(), 0.0), den(regions.size(), 0.0);
    for (int j = 0; j < J; ++j) {
      num[region_of[j]] += n_fic[j];
      den[region_of[j]] += denom[static_cast<std::size_t>(j) * S + s];
    }
    for (std::size_t r = 0; r < regions.size(); ++r)
      table.at(static_cast<int>(r), s) = den[r] > 0.0 ? 100.0 * num[r] / den[r] : 0.0;
  }
  return table;
}

// regularized incomplete beta by Lentz's continued fraction
static double beta_cf(double a, double b, double x) {
  const int max_iter = 300;
  const double eps = 1e-15, tiny = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

static double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double dof) {
  if (dof <= 0.0) throw Error("t distribution needs dof > 0");
  const double x = dof / (dof + t * t);
  const double p = 0.5 * incomplete_beta(dof / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - p : p;
}

PairedTestResult paired_compare(const MetricTable& arm_a, const MetricTable& arm_b,
                                double level, bool one_sided) {
  if (arm_a.scenarios != arm_b.scenarios || arm_a.scenarios == 0)
    throw Error("paired_compare: arms are unpaired (different scenario counts)");
  PairedTestResult r;
  r.pairs = arm_a.scenarios;
  r.one_sided = one_sided;

  std::vector<double> diff(r.pairs);
  for (int s = 0; s < r.pairs; ++s) diff[s] = arm_b.scenario_mean(s) - arm_a.scenario_mean(s);
  const double mean =
      std::accumulate(diff.begin(), diff.end(), 0.0) / static_cast<double>(r.pairs);
  double var = 0.0;
  for (double d : diff) var += (d - mean) * (d - mean);
  var = r.pairs > 1 ? var / (r.pairs - 1) : 0.0;
  r.mean_difference = mean;

  if (var <= 0.0) {
    r.zero_variance = true;
    // degenerate: no within-pair spread; any nonzero shift is exact
    r.t_statistic = 0.0;
    r.p_value = mean == 0.0 ? 1.0 : 0.0;
    r.significant = mean != 0.0 && (one_sided ? mean > 0.0 : true) && r.p_value < level;
    return r;
  }
  const double se = std::sqrt(var / static_cast<double>(r.pairs));
  r.t_statistic = mean / se;
  const double dof = static_cast<double>(r.pairs - 1);
  if (one_sided) {
    r.p_value = 1.0 - student_t_cdf(r.t_statistic, dof);  // H1: b > a
  } else {
    const double tail = 1.0 - student_t_cdf(std::fabs(r.t_statistic), dof);
    r.p_value = 2.0 * tail;
  }
  r.significant = r.p_value < level;
  return r;
}

} // namespace coldchain
