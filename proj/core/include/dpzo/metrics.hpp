#ifndef DPZO_METRICS_HPP
#define DPZO_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace dpzo {

struct MetricsRow {
  uint32_t stage = 0;
  uint32_t iteration = 0;
  double loss = 0.0;
  double beta = 0.0;
  double eta = 0.0;
  double sigma = 0.0;
  double clip_fraction = 0.0;
  double grad_norm_estimate = 0.0;
  double epsilon_spent_estimate = 0.0;
};

// One row per optimizer step. The CSV header is fixed; values are written
// with shortest round-trip formatting so reruns are byte-identical.
struct MetricsLog {
  std::vector<MetricsRow> rows;

  static const char* csv_header();
  std::string to_csv() const;
  void write_csv(const std::string& path) const;
};

// Shortest representation that parses back to the same double ("inf" /
// "-inf" / "nan" for non-finite values).
std::string format_double(double value);

}  // namespace dpzo

#endif  // DPZO_METRICS_HPP
