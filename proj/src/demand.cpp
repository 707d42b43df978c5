#include "coldchain/demand.hpp"

#include <cmath>
#include <cstring>

#include "coldchain/rng.hpp"

namespace coldchain {

namespace {
constexpr std::uint64_t kPosteriorStream = 1;

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
} // namespace

DemandModel::DemandModel(int vaccines, int clinics, int periods)
    : vaccines_(vaccines), clinics_(clinics), periods_(periods),
      mu_(static_cast<std::size_t>(vaccines) * clinics * periods, 0.0),
      sigma_(mu_.size(), 0.0),
      mu_daily_(static_cast<std::size_t>(vaccines) * clinics, 0.0) {}

void DemandModel::set(int i, int j, int t, double mu, double sigma) {
  if (mu < 0 || sigma < 0 || !std::isfinite(mu) || !std::isfinite(sigma))
    throw Error("demand mean/std must be finite and non-negative");
  if (mu == 0.0) sigma = 0.0;  // mu = 0 forces sigma = 0
  mu_[flat(i, j, t)] = mu;
  sigma_[flat(i, j, t)] = sigma;
}

double DemandModel::total_mean() const {
  double s = 0.0;
  for (double v : mu_) s += v;
  return s;
}

double ScenarioSet::scenario_total(int s, int i, int j) const {
  double sum = 0.0;
  for (int t = 1; t <= T_; ++t) sum += value(s, i, j, t);
  return sum;
}

std::uint64_t ScenarioSet::digest() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (double v : values_) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    h = (h ^ bits) * 1099511628211ULL;
  }
  return h;
}

ScenarioSet sample_scenarios(const DemandModel& model, int S, std::uint64_t seed,
                             int stream) {
  if (S < 1) throw Error("sample size must be at least 1");
  ScenarioSet set;
  set.S_ = S;
  set.I_ = model.vaccines();
  set.J_ = model.clinics();
  set.T_ = model.periods();
  set.seed_ = seed;
  set.stream_ = stream;
  set.values_.resize(static_cast<std::size_t>(S) * set.I_ * set.J_ * set.T_);

  std::size_t pos = 0;
  for (int s = 0; s < S; ++s) {
    for (int i = 0; i < set.I_; ++i) {
      for (int j = 0; j < set.J_; ++j) {
        for (int t = 1; t <= set.T_; ++t) {
          const std::uint64_t key =
              rng::mix_key(seed, static_cast<std::uint64_t>(stream),
                           static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j),
                           static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(s));
          double draw;
          if (model.poisson_mode()) {
            draw = static_cast<double>(rng::poisson(key, model.mu(i, j, t)));
          } else {
            draw = rng::normal(key, model.mu(i, j, t), model.sigma(i, j, t));
          }
          set.values_[pos++] = std::max(0.0, draw);
        }
      }
    }
  }
  return set;
}

ScenarioSet posterior_sample(const DemandModel& model, int S_prime, std::uint64_t seed) {
  return sample_scenarios(model, S_prime, seed, static_cast<int>(kPosteriorStream));
}

double clamped_normal_mean(double mu, double sigma) {
  if (sigma <= 0.0) return std::max(0.0, mu);
  const double r = mu / sigma;
  return mu * normal_cdf(r) + sigma * normal_pdf(r);
}

} // namespace coldchain
