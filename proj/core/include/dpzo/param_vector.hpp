#ifndef DPZO_PARAM_VECTOR_HPP
#define DPZO_PARAM_VECTOR_HPP

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace dpzo {

// Flat 64-bit parameter storage. The single source of truth for model state;
// every objective addresses its weights through flat indices into one of
// these.
struct ParameterVector {
  std::vector<double> values;

  ParameterVector() = default;
  explicit ParameterVector(std::size_t dim) : values(dim, 0.0) {}
  explicit ParameterVector(std::vector<double> v) : values(std::move(v)) {}
  ParameterVector(std::initializer_list<double> v) : values(v) {}

  std::size_t dim() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

// Throws NumericError if any entry is NaN/Inf. `context` names the operation
// for the diagnostic.
void require_finite(const ParameterVector& v, const char* context);

// Sum a_i * b_i in ascending index order. No pairwise or tree reduction:
// the serial order is the bit-reproducibility contract.
double dot(const ParameterVector& a, const ParameterVector& b);

double l2_norm(const ParameterVector& a);

// y + alpha * x, elementwise.
ParameterVector axpy(double alpha, const ParameterVector& x,
                     const ParameterVector& y);

}  // namespace dpzo

#endif  // DPZO_PARAM_VECTOR_HPP
