#include "dpzo/dp_mechanism.hpp"

#include <cmath>
#include <limits>

#include "dpzo/errors.hpp"

namespace dpzo {

double clip_scalar(double g, double C) {
  if (!(C > 0.0)) throw ConfigError("clip_scalar: C must be positive");
  return g / std::max(1.0, std::fabs(g) / C);
}

double add_noise(double sum, double sigma, double C, uint64_t seed,
                 uint32_t stage, uint32_t iteration, uint32_t direction) {
  if (sigma == 0.0) return sum;
  const double z =
      normal_draw(seed, Stream::kNoise, stage, iteration, direction, 0);
  return sum + sigma * C * z;
}

std::pair<double, double> amplify_by_subsampling(double eps, double delta,
                                                 double q) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw ConfigError("amplify_by_subsampling: q must lie in (0, 1]");
  }
  return {std::log1p(q * std::expm1(eps)), q * delta};
}

std::pair<double, double> strong_compose(double eps, double delta, uint64_t T,
                                         double delta_prime) {
  if (!(delta_prime > 0.0)) {
    throw ConfigError("strong_compose: delta_prime must be positive");
  }
  const double t = static_cast<double>(T);
  const double eps_hat =
      std::sqrt(2.0 * t * std::log(1.0 / delta_prime)) * eps +
      t * eps * std::expm1(eps);
  return {eps_hat, t * delta + delta_prime};
}

CalibrationResult calibrate_sigma_ma(double eps, double delta, uint64_t T,
                                     double q, double c1, double c2) {
  if (!(eps > 0.0)) throw ConfigError("calibrate_sigma_ma: eps must be positive");
  if (!(q > 0.0 && q <= 1.0)) {
    throw ConfigError("calibrate_sigma_ma: q must lie in (0, 1]");
  }
  CalibrationResult result;
  if (std::isinf(eps)) {
    result.sigma = 0.0;
    return result;
  }
  result.within_stated_regime = eps < c1 * q * q * static_cast<double>(T);
  result.sigma =
      c2 * q * std::sqrt(static_cast<double>(T) * std::log(1.0 / delta)) / eps;
  return result;
}

CalibrationResult calibrate_sigma_theorem1(double eps, double delta,
                                           uint64_t T, uint32_t P, uint32_t m,
                                           uint64_t n, double c1, double c2) {
  if (!(eps > 0.0)) {
    throw ConfigError("calibrate_sigma_theorem1: eps must be positive");
  }
  if (m > n) throw ConfigError("calibrate_sigma_theorem1: m must be <= n");
  if (P == 0 || m == 0 || n == 0 || T == 0) {
    throw ConfigError("calibrate_sigma_theorem1: T, P, m, n must be positive");
  }
  CalibrationResult result;
  if (std::isinf(eps)) {
    result.sigma = 0.0;
    return result;
  }
  const double dm = static_cast<double>(m);
  const double dn = static_cast<double>(n);
  const double dT = static_cast<double>(T);
  result.within_stated_regime = eps < c1 * dm * dm * dT / (dn * dn);
  result.sigma = c2 * static_cast<double>(P) * dm *
                 std::sqrt(dT * std::log(static_cast<double>(P) / delta)) /
                 (eps * dn);
  return result;
}

double epsilon_spent_estimate(const BudgetLedger& ledger, double delta,
                              double c2) {
  if (ledger.sigma == 0.0) return std::numeric_limits<double>::infinity();
  if (ledger.steps_taken == 0) return 0.0;
  const double t = static_cast<double>(ledger.steps_taken);
  return c2 * static_cast<double>(ledger.P) * ledger.q *
         std::sqrt(t * std::log(static_cast<double>(ledger.P) / delta)) /
         ledger.sigma;
}

}  // namespace dpzo
