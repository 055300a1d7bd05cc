#include "dpzo/param_vector.hpp"

#include <cmath>
#include <string>

#include "dpzo/errors.hpp"

namespace dpzo {

void require_finite(const ParameterVector& v, const char* context) {
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (!std::isfinite(v.values[i])) {
      throw NumericError(std::string(context) + ": non-finite entry at index " +
                         std::to_string(i));
    }
  }
}

double dot(const ParameterVector& a, const ParameterVector& b) {
  if (a.dim() != b.dim()) {
    throw ConfigError("dot: dimension mismatch (" + std::to_string(a.dim()) +
                      " vs " + std::to_string(b.dim()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    sum += a.values[i] * b.values[i];
  }
  return sum;
}

double l2_norm(const ParameterVector& a) { return std::sqrt(dot(a, a)); }

ParameterVector axpy(double alpha, const ParameterVector& x,
                     const ParameterVector& y) {
  if (x.dim() != y.dim()) {
    throw ConfigError("axpy: dimension mismatch (" + std::to_string(x.dim()) +
                      " vs " + std::to_string(y.dim()) + ")");
  }
  ParameterVector out(y.dim());
  for (std::size_t i = 0; i < y.dim(); ++i) {
    out.values[i] = y.values[i] + alpha * x.values[i];
  }
  require_finite(out, "axpy");
  return out;
}

}  // namespace dpzo
