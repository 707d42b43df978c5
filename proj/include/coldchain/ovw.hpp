#pragma once

namespace coldchain {

/// Session-demand description for the open-vial wastage estimate.
struct OvwQuery {
  double daily_mean = 0.0;      // mu', doses/day at the clinic
  int vial_size = 1;            // b, doses per vial
  int sessions_per_period = 30; // vaccination sessions per planning period
  int period_length_days = 30;
};

/// Expected open-vial-wastage fraction: with session demand D ~ Poisson(m),
/// m = daily_mean * period_length_days / sessions_per_period, every arriving
/// child is served from vials opened that session and leftovers are
/// discarded, so the wasted fraction of opened doses is
///   E[b*ceil(D/b) - D] / E[b*ceil(D/b)].
/// Computed by exact summation over the Poisson pmf truncated once the
/// cumulative mass reaches 1 - 1e-12. Returns 0 when daily_mean = 0 or b = 1.
/// The result lies in [0, 1 - 1/b], decreases in the session mean and
/// increases in the vial size.
double estimate_ovw(const OvwQuery& query);

/// Core form taking the per-session mean directly.
double estimate_ovw_session(double session_mean, int vial_size);

} // namespace coldchain
