#ifndef DPZO_DP_MECHANISM_HPP
#define DPZO_DP_MECHANISM_HPP

#include <cstdint>
#include <utility>

#include "dpzo/rng.hpp"

namespace dpzo {

// Privacy target plus the accountant constants c1/c2. The accountant lemmas
// hold "for some constants c1, c2"; both default to 1 and every calibration
// carries a flag telling whether the stated validity regime eps < c1 q^2 T
// was met. sensitivity_multiplier scales the injected noise: 1 treats the
// per-direction clipped sum as C-sensitive, 2 gives the stricter
// replace-one reading.
struct PrivacySpec {
  double epsilon = 0.0;  // may be +infinity (non-private baseline)
  double delta = 0.0;
  double clip_C = 0.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double sensitivity_multiplier = 1.0;
};

// Online accounting state owned by the optimizer loop.
struct BudgetLedger {
  uint64_t steps_taken = 0;
  double sigma = 0.0;
  double q = 0.0;  // sampling rate m/n
  uint32_t P = 1;
  double spent_epsilon_estimate = 0.0;
};

struct CalibrationResult {
  double sigma = 0.0;
  // False when the requested epsilon exceeds the stated regime of the
  // accountant (eps >= c1 q^2 T). The formula value is still returned.
  bool within_stated_regime = true;
};

// g / max(1, |g|/C). Magnitude capped at C, sign preserved, identity below
// the threshold.
double clip_scalar(double g, double C);

// sum + sigma * C * z with z keyed by (seed, stage, iteration, direction).
// sigma == 0 returns sum bit-exactly without consuming a draw.
double add_noise(double sum, double sigma, double C, uint64_t seed,
                 uint32_t stage, uint32_t iteration, uint32_t direction);

// Privacy amplification by subsampling at rate q:
// (ln(1 + q(e^eps - 1)), q*delta).
std::pair<double, double> amplify_by_subsampling(double eps, double delta,
                                                 double q);

// Strong composition over T adaptive (eps, delta)-DP mechanisms:
// (sqrt(2T ln(1/delta'))*eps + T*eps*(e^eps - 1), T*delta + delta').
std::pair<double, double> strong_compose(double eps, double delta, uint64_t T,
                                         double delta_prime);

// Moments-accountant calibration, sigma = c2 * q * sqrt(T ln(1/delta)) / eps.
// Validity regime: eps < c1 q^2 T.
CalibrationResult calibrate_sigma_ma(double eps, double delta, uint64_t T,
                                     double q, double c1, double c2);

// Per-direction-noise calibration,
// sigma = c2 * P * m * sqrt(T ln(P/delta)) / (eps * n).
// Validity regime: eps < c1 m^2 T / n^2.
CalibrationResult calibrate_sigma_theorem1(double eps, double delta,
                                           uint64_t T, uint32_t P, uint32_t m,
                                           uint64_t n, double c1, double c2);

// Inverse of the calibration above at the current step count; an estimate,
// not a certified bound. Returns +infinity when sigma == 0.
double epsilon_spent_estimate(const BudgetLedger& ledger, double delta,
                              double c2);

}  // namespace dpzo

#endif  // DPZO_DP_MECHANISM_HPP
