#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coldchain/model.hpp"

namespace coldchain {

/// Mean/std demand specification per (vaccine, clinic, period), plus the
/// daily means used by the diluent capacity adjustment and OVW estimation.
/// Dense layout over catalog vaccines x topology clinics x horizon periods.
class DemandModel {
 public:
  DemandModel() = default;
  DemandModel(int vaccines, int clinics, int periods);

  int vaccines() const { return vaccines_; }
  int clinics() const { return clinics_; }
  int periods() const { return periods_; }

  double mu(int i, int j, int t) const { return mu_[flat(i, j, t)]; }        // t is 1-based
  double sigma(int i, int j, int t) const { return sigma_[flat(i, j, t)]; }
  double mu_daily(int i, int j) const { return mu_daily_[i * clinics_ + j]; }

  void set(int i, int j, int t, double mu, double sigma);
  void set_mu_daily(int i, int j, double v) { mu_daily_[i * clinics_ + j] = v; }

  bool poisson_mode() const { return poisson_; }
  void set_poisson_mode(bool v) { poisson_ = v; }

  double total_mean() const; // sum of mu over all (i, j, t)

 private:
  int flat(int i, int j, int t) const { return (i * clinics_ + j) * periods_ + (t - 1); }

  int vaccines_ = 0, clinics_ = 0, periods_ = 0;
  std::vector<double> mu_, sigma_;  // (i, j, t)
  std::vector<double> mu_daily_;    // (i, j)
  bool poisson_ = false;
};

/// S iid demand realizations with seed provenance; immutable once built.
/// values are clamped at zero: delta = max(0, N(mu, sigma)).
class ScenarioSet {
 public:
  ScenarioSet() = default;

  int sample_size() const { return S_; }
  std::uint64_t seed() const { return seed_; }
  int stream() const { return stream_; }
  int vaccines() const { return I_; }
  int clinics() const { return J_; }
  int periods() const { return T_; }
  double probability() const { return 1.0 / S_; }

  double value(int s, int i, int j, int t) const {  // t is 1-based
    return values_[((static_cast<std::size_t>(s) * I_ + i) * J_ + j) * T_ + (t - 1)];
  }

  /// Demand for one scenario summed over periods, per (i, j).
  double scenario_total(int s, int i, int j) const;

  /// FNV-style content digest; equal digests <=> identical draws.
  std::uint64_t digest() const;

  friend ScenarioSet sample_scenarios(const DemandModel&, int, std::uint64_t, int);

 private:
  int S_ = 0, I_ = 0, J_ = 0, T_ = 0;
  std::uint64_t seed_ = 0;
  int stream_ = 0;
  std::vector<double> values_;  // (s, i, j, t)
};

/// Draws S iid scenarios. Streams are keyed on (seed, stream, i, j, t, s), so
/// regenerating with a larger S extends the set without changing the prefix.
ScenarioSet sample_scenarios(const DemandModel& model, int S, std::uint64_t seed,
                             int stream = 0);

/// Posterior-check sample: same model, same seed domain-separated from the
/// training stream.
ScenarioSet posterior_sample(const DemandModel& model, int S_prime, std::uint64_t seed);

/// Mean of max(0, N(mu, sigma)): mu*Phi(mu/sigma) + sigma*phi(mu/sigma).
double clamped_normal_mean(double mu, double sigma);

} // namespace coldchain
