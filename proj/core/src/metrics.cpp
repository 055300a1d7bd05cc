#include "dpzo/metrics.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "dpzo/errors.hpp"

namespace dpzo {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

const char* MetricsLog::csv_header() {
  return "stage,iteration,loss,beta,eta,sigma,clip_fraction,"
         "grad_norm_estimate,epsilon_spent_estimate";
}

std::string MetricsLog::to_csv() const {
  std::string out = csv_header();
  out += '\n';
  for (const MetricsRow& r : rows) {
    out += std::to_string(r.stage);
    out += ',';
    out += std::to_string(r.iteration);
    out += ',';
    out += format_double(r.loss);
    out += ',';
    out += format_double(r.beta);
    out += ',';
    out += format_double(r.eta);
    out += ',';
    out += format_double(r.sigma);
    out += ',';
    out += format_double(r.clip_fraction);
    out += ',';
    out += format_double(r.grad_norm_estimate);
    out += ',';
    out += format_double(r.epsilon_spent_estimate);
    out += '\n';
  }
  return out;
}

void MetricsLog::write_csv(const std::string& path) const {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw ConfigError("metrics: cannot open " + path);
  stream << to_csv();
}

}  // namespace dpzo
