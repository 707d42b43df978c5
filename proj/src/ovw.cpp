#include "coldchain/ovw.hpp"

#include <cmath>

#include "coldchain/model.hpp"

namespace coldchain {

double estimate_ovw_session(double session_mean, int vial_size) {
  if (vial_size < 1) throw Error("vial size must be at least 1");
  if (session_mean <= 0.0 || vial_size == 1) return 0.0;

  // E[ceil(D/b)] for D ~ Poisson(m), truncated once cumulative mass reaches
  // 1 - 1e-12. Work in log space until the pmf is representable.
  const double m = session_mean;
  const int b = vial_size;
  double expected_vials = 0.0;
  double cumulative = 0.0;
  double pmf = std::exp(-m);  // P(D = 0)
  bool underflow = pmf == 0.0;
  double log_pmf = -m;

  cumulative += pmf;  // d = 0 contributes no opened vial
  long long d = 0;
  const long long hard_cap = static_cast<long long>(m + 20.0 * std::sqrt(m) + 200.0);
  while (cumulative < 1.0 - 1e-12 && d < hard_cap) {
    ++d;
    if (underflow) {
      log_pmf += std::log(m) - std::log(static_cast<double>(d));
      pmf = std::exp(log_pmf);
      if (pmf > 0.0) underflow = false;
    } else {
      pmf *= m / static_cast<double>(d);
    }
    cumulative += pmf;
    expected_vials += pmf * static_cast<double>((d + b - 1) / b);
  }
  // Tail beyond the cap: attribute the remaining mass at d/b vials.
  const double tail = std::max(0.0, 1.0 - cumulative);
  if (tail > 0.0) expected_vials += tail * (static_cast<double>(d) / b);

  const double opened_doses = static_cast<double>(b) * expected_vials;
  if (opened_doses <= 0.0) return 0.0;
  const double fraction = 1.0 - m / opened_doses;
  return std::min(std::max(fraction, 0.0), 1.0 - 1.0 / b);
}

double estimate_ovw(const OvwQuery& query) {
  if (query.vial_size < 1) throw Error("vial size must be at least 1");
  if (query.sessions_per_period < 1) throw Error("sessions per period must be positive");
  if (query.daily_mean < 0.0) throw Error("daily mean must be non-negative");
  const double session_mean =
      query.daily_mean * query.period_length_days / query.sessions_per_period;
  return estimate_ovw_session(session_mean, query.vial_size);
}

} // namespace coldchain
