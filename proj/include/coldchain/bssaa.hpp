#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coldchain/def_builder.hpp"
#include "coldchain/instance.hpp"
#include "coldchain/lp/simplex.hpp"
#include "coldchain/metrics.hpp"

namespace coldchain {

/// Sample-size / replication protocol parameters. service_level is the
/// required per-(i,j,t) empirical satisfaction fraction.
struct SaaConfig {
  int sample_size = 50;           // S
  int posterior_sample_size = 300;// S'
  int replications = 10;          // M
  double service_level = 0.7;     // p_target
  std::uint64_t master_seed = 1;

  // BS-SAA controls
  double pi_lower = 0.0;
  double pi_upper = -1.0;         // <0: 2 * (eps_weight * S + 1)
  double theta = -1.0;            // bound-gap stop; <0: 0.01 * (piU0 - piL0)
  int eps_count = -1;             // violation-count slack; <0: ceil(0.01 * S)
  int max_outer = 40;
  bool per_coordinate = true;     // converge coordinates independently
  double shortage_tol = 1e-6;     // v above this counts as a violation
  double eps_weight = -1.0;       // forwarded to DefConfig
  bool extended = false;
  int threads = 0;                // 0: hardware concurrency

  double confidence() const;      // 1 - (1/2)^M
};

/// Per-(i, j in clinics, t) penalty bisection state.
struct PenaltyState {
  PenaltyVector pi, pi_lower, pi_upper;
  std::vector<int> violation_count;  // M_ijt at the terminal solve
  double theta = 0.0;
  int eps_count = 0;
  int outer_iterations = 0;
  bool converged = false;

  int violations_at(int i, int j, int t) const;
  int coordinate_count() const { return static_cast<int>(violation_count.size()); }
};

struct PosteriorCheck {
  int sample_size = 0;            // S'
  std::vector<std::uint8_t> pass; // per (i, j, t)
  std::vector<double> satisfaction; // empirical fraction per (i, j, t)
  double pass_fraction = 0.0;
  MetricTable sr;                 // recomputed on the posterior sample
  MetricTable fic_by_region;
};

struct ReplicationResult {
  int replication = 0;
  std::uint64_t scenario_seed = 0;
  lp::LpSolution solution;        // terminal (certification) solve
  PenaltyState penalties;
  MetricTable sr;                 // training-sample metrics
  MetricTable fic_by_region;
  MetricTable fic_by_clinic;
  PosteriorCheck posterior;
  double avg_sr = 0.0;            // mean over (vaccine, scenario)
  double avg_fic = 0.0;           // mean over (region, scenario)
  int lp_solves = 0;
  double seconds = 0.0;
  bool failed = false;
  std::string failure;
  std::vector<std::vector<double>> pi_trajectory_summary; // per outer iter: {min, mean, max, accepted}
};

struct Aggregate {
  double min = 0, max = 0, avg = 0;
};

struct RunResult {
  SaaConfig config;
  std::vector<ReplicationResult> replications;
  Aggregate sr;                   // over per-replication avg_sr
  Aggregate fic;
  double confidence = 0.0;        // 1 - (1/2)^M
  double seconds = 0.0;
  bool all_feasible = true;       // every replication converged & solved

  std::string report() const;     // printable summary incl. confidence line
};

/// Inputs shared by every replication of one run.
struct BssaaInputs {
  NetworkTopology topology;
  std::vector<VaccineType> catalog;
  WastageProfile wastage;
  DemandModel demand;
};

BssaaInputs make_inputs(const Instance& instance);

/// The penalty binary-search SAA driver: per replication, samples S
/// scenarios, bisects the per-(i,j,t) penalties until every coordinate's
/// shortage count passes the acceptance test
///   M_ijt <= ceil((1 - p_target) * S) + eps_count,
/// then re-solves at the upper penalty bounds to certify the terminal
/// solution. Replications run in parallel on independent seeds.
RunResult run_bssaa(const BssaaInputs& inputs, const SaaConfig& config);

/// Fixed-decision posterior check on a fresh S' sample: per (i,j,t) the
/// empirical fraction of scenarios with served >= demand, pass iff it
/// reaches p_target; SR/FIC recomputed on the new sample.
PosteriorCheck posterior_check(const DefProblem& def, const std::vector<double>& x,
                               const DemandModel& model, int S_prime,
                               std::uint64_t seed, double p_target);

/// Gap report between a relaxed-level (upper bound) run and a strict-level
/// (lower bound) run, as percentages of the upper bound.
struct GapTable {
  double ub_sr = 0.0, ub_fic = 0.0;  // max over UB replications
  Aggregate sr_gap, fic_gap;         // over LB replications
  std::string report() const;
};

/// Runs the pipeline at a relaxed chance level: beta_hat_relaxed is the
/// paper-style risk numeral, i.e. the run requires satisfaction 1 -
/// beta_hat_relaxed, which must enlarge the feasible region relative to the
/// strict run. Reports max SR / max FIC across replications as upper-bound
/// references and the percentage gaps against the strict run.
struct UpperBoundResult {
  RunResult run;
  GapTable gaps;
};
UpperBoundResult upper_bound_run(const BssaaInputs& inputs, const SaaConfig& strict_config,
                                 double beta_hat_relaxed, const RunResult& strict_result);

} // namespace coldchain
