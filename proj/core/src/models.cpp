#include "dpzo/models.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "dpzo/errors.hpp"
#include "dpzo/metrics.hpp"
#include "dpzo/rng.hpp"

namespace dpzo {

namespace {

// Generator ids for the kData stream; each built-in objective owns one so
// datasets and initializations never share draws.
constexpr uint64_t kGenQuadratic = 1;
constexpr uint64_t kGenLipschitz = 2;
constexpr uint64_t kGenLogistic = 3;
constexpr uint64_t kGenMlp = 4;

// Margin of the synthetic logistic data along the true separator. Large
// enough that the optimum sits at small ||theta|| where the nonconvex
// regularizer stays flat.
constexpr double kLogisticMargin = 10.0;

double data_normal(uint64_t seed, uint64_t gen, uint64_t item, uint64_t coord,
                   uint64_t salt) {
  return normal_draw(seed, Stream::kData, gen, item, coord, salt);
}

Dataset dummy_dataset(uint64_t seed, const std::string& generator) {
  Dataset data;
  data.seed = seed;
  data.generator = generator;
  data.samples.push_back(DataSample{{0.0}, 0.0});
  return data;
}

LayeredShape single_row_shape(std::size_t d) {
  LayeredShape shape;
  shape.layers.push_back(LayerBlock{1, d, 0, 0, 1});
  return shape;
}

}  // namespace

double BenchObjective::mean_loss(const ParameterVector& theta) const {
  double sum = 0.0;
  for (const DataSample& sample : data.samples) {
    sum += loss.evaluate(theta, sample);
  }
  return sum / static_cast<double>(data.samples.size());
}

std::vector<double> quadratic_eigenvalues(std::size_t d,
                                          double condition_number) {
  std::vector<double> eig(d, 1.0);
  if (d == 1) return eig;
  for (std::size_t i = 0; i < d; ++i) {
    eig[i] = std::pow(condition_number,
                      static_cast<double>(i) / static_cast<double>(d - 1));
  }
  return eig;
}

BenchObjective make_quadratic(std::size_t d, double condition_number,
                              uint64_t seed) {
  if (d == 0) throw ConfigError("make_quadratic: d must be >= 1");
  if (!(condition_number >= 1.0)) {
    throw ConfigError("make_quadratic: condition_number must be >= 1");
  }
  auto eig = quadratic_eigenvalues(d, condition_number);
  ParameterVector optimum(d);
  ParameterVector initial(d);
  for (std::size_t i = 0; i < d; ++i) {
    optimum.values[i] = data_normal(seed, kGenQuadratic, 0, i, 0);
    initial.values[i] = optimum.values[i] + data_normal(seed, kGenQuadratic, 1, i, 0);
  }

  BenchObjective obj;
  obj.name = "quadratic";
  obj.loss.evaluate = [eig, optimum](const ParameterVector& theta,
                                     const DataSample&) {
    double sum = 0.0;
    for (std::size_t i = 0; i < theta.dim(); ++i) {
      const double r = theta.values[i] - optimum.values[i];
      sum += eig[i] * r * r;
    }
    return 0.5 * sum;
  };
  obj.analytic_gradient = [eig, optimum](const ParameterVector& theta) {
    ParameterVector g(theta.dim());
    for (std::size_t i = 0; i < theta.dim(); ++i) {
      g.values[i] = eig[i] * (theta.values[i] - optimum.values[i]);
    }
    return g;
  };
  obj.initial_theta = initial;
  obj.shape = single_row_shape(d);
  obj.data = dummy_dataset(seed, "quadratic");
  return obj;
}

BenchObjective make_lipschitz_norm(std::size_t d, double L, uint64_t seed) {
  if (d == 0) throw ConfigError("make_lipschitz_norm: d must be >= 1");
  if (!(L > 0.0)) throw ConfigError("make_lipschitz_norm: L must be positive");
  ParameterVector optimum(d);
  ParameterVector initial(d);
  for (std::size_t i = 0; i < d; ++i) {
    optimum.values[i] = data_normal(seed, kGenLipschitz, 0, i, 0);
    initial.values[i] =
        optimum.values[i] + data_normal(seed, kGenLipschitz, 1, i, 0);
  }

  BenchObjective obj;
  obj.name = "lipschitz_norm";
  obj.loss.evaluate = [L, optimum](const ParameterVector& theta,
                                   const DataSample&) {
    double sum = 0.0;
    for (std::size_t i = 0; i < theta.dim(); ++i) {
      const double r = theta.values[i] - optimum.values[i];
      sum += r * r;
    }
    return L * std::sqrt(sum);
  };
  obj.loss.lipschitz_hint = L;
  obj.lipschitz_L = L;
  obj.analytic_gradient = [L, optimum](const ParameterVector& theta) {
    ParameterVector g(theta.dim());
    double norm = 0.0;
    for (std::size_t i = 0; i < theta.dim(); ++i) {
      const double r = theta.values[i] - optimum.values[i];
      norm += r * r;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) return g;
    for (std::size_t i = 0; i < theta.dim(); ++i) {
      g.values[i] = L * (theta.values[i] - optimum.values[i]) / norm;
    }
    return g;
  };
  obj.initial_theta = initial;
  obj.shape = single_row_shape(d);
  obj.data = dummy_dataset(seed, "lipschitz_norm");
  return obj;
}

BenchObjective make_weakly_convex_logistic(std::size_t d, std::size_t n,
                                           double rho, uint64_t seed) {
  if (d == 0) throw ConfigError("make_weakly_convex_logistic: d must be >= 1");
  if (n < 2) throw ConfigError("make_weakly_convex_logistic: n must be >= 2");
  if (rho < 0.0) {
    throw ConfigError("make_weakly_convex_logistic: rho must be >= 0");
  }

  // Unit separator direction.
  std::vector<double> w(d);
  double wn = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    w[i] = data_normal(seed, kGenLogistic, 0, i, 1);
    wn += w[i] * w[i];
  }
  wn = std::sqrt(wn);
  for (std::size_t i = 0; i < d; ++i) w[i] /= wn;

  Dataset data;
  data.seed = seed;
  data.generator = "weakly_convex_logistic";
  data.samples.resize(n);
  for (std::size_t item = 0; item < n; ++item) {
    const double label = (item % 2 == 0) ? 1.0 : -1.0;
    DataSample& sample = data.samples[item];
    sample.label = label;
    sample.features.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      sample.features[i] = data_normal(seed, kGenLogistic, item, i, 0) +
                           label * kLogisticMargin * w[i];
    }
  }

  BenchObjective obj;
  obj.name = "weakly_convex_logistic";
  obj.loss.evaluate = [rho](const ParameterVector& theta,
                            const DataSample& sample) {
    double margin = 0.0;
    for (std::size_t i = 0; i < theta.dim(); ++i) {
      margin += theta.values[i] * sample.features[i];
    }
    margin *= sample.label;
    // log(1 + exp(-margin)), overflow-safe.
    const double logistic =
        margin > 0.0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
    double reg = 0.0;
    for (std::size_t i = 0; i < theta.dim(); ++i) {
      const double t2 = theta.values[i] * theta.values[i];
      reg += t2 / (1.0 + t2);
    }
    return logistic + rho * reg;
  };
  obj.weakly_convex_rho = 2.0 * rho;
  Dataset data_copy = data;
  obj.analytic_gradient = [rho, data_copy](const ParameterVector& theta) {
    ParameterVector g(theta.dim());
    for (const DataSample& sample : data_copy.samples) {
      double margin = 0.0;
      for (std::size_t i = 0; i < theta.dim(); ++i) {
        margin += theta.values[i] * sample.features[i];
      }
      margin *= sample.label;
      const double s = 1.0 / (1.0 + std::exp(margin));  // sigmoid(-margin)
      for (std::size_t i = 0; i < theta.dim(); ++i) {
        g.values[i] += -sample.label * sample.features[i] * s;
      }
    }
    const double inv_n = 1.0 / static_cast<double>(data_copy.samples.size());
    for (std::size_t i = 0; i < theta.dim(); ++i) {
      g.values[i] *= inv_n;
      const double t = theta.values[i];
      const double denom = 1.0 + t * t;
      g.values[i] += rho * 2.0 * t / (denom * denom);
    }
    return g;
  };
  obj.initial_theta = ParameterVector(d);
  obj.shape = single_row_shape(d);
  obj.data = std::move(data);
  return obj;
}

BenchObjective make_tiny_mlp(const std::vector<std::size_t>& layer_dims,
                             Activation activation, uint64_t seed,
                             std::size_t n_samples) {
  if (layer_dims.size() < 3) {
    throw ConfigError("make_tiny_mlp: need at least two weight matrices");
  }
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    if (layer_dims[l] == 0) throw ConfigError("make_tiny_mlp: zero layer dim");
    total += layer_dims[l] * layer_dims[l + 1];
  }
  if (layer_dims.back() < 2) {
    throw ConfigError("make_tiny_mlp: need at least two classes");
  }
  if (total > 100000) {
    throw ConfigError("make_tiny_mlp: parameter count exceeds 1e5");
  }
  if (n_samples == 0) throw ConfigError("make_tiny_mlp: need samples");

  const std::size_t num_classes = layer_dims.back();
  const std::size_t in_dim = layer_dims.front();

  // Weight matrix l is (layer_dims[l+1] x layer_dims[l]), row-major.
  std::vector<std::size_t> offsets(layer_dims.size() - 1);
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    offsets[l] = offset;
    offset += layer_dims[l] * layer_dims[l + 1];
  }

  ParameterVector initial(total);
  for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(layer_dims[l]));
    const std::size_t count = layer_dims[l] * layer_dims[l + 1];
    for (std::size_t k = 0; k < count; ++k) {
      initial.values[offsets[l] + k] =
          scale * data_normal(seed, kGenMlp, l, k, 1);
    }
  }

  Dataset data;
  data.seed = seed;
  data.generator = "tiny_mlp";
  data.samples.resize(n_samples);
  for (std::size_t item = 0; item < n_samples; ++item) {
    DataSample& sample = data.samples[item];
    sample.label = static_cast<double>(item % num_classes);
    sample.features.resize(in_dim);
    for (std::size_t i = 0; i < in_dim; ++i) {
      sample.features[i] = data_normal(seed, kGenMlp, item, i, 0);
    }
  }

  std::vector<std::size_t> dims = layer_dims;
  std::vector<std::size_t> offs = offsets;
  BenchObjective obj;
  obj.name = "tiny_mlp";
  obj.loss.evaluate = [dims, offs, activation](const ParameterVector& theta,
                                               const DataSample& sample) {
    std::vector<double> h = sample.features;
    std::vector<double> next;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      const std::size_t in = dims[l];
      const std::size_t out = dims[l + 1];
      next.assign(out, 0.0);
      for (std::size_t o = 0; o < out; ++o) {
        double acc = 0.0;
        const std::size_t row = offs[l] + o * in;
        for (std::size_t i = 0; i < in; ++i) {
          acc += theta.values[row + i] * h[i];
        }
        next[o] = acc;
      }
      const bool last = (l + 2 == dims.size());
      if (!last) {
        for (double& v : next) {
          v = activation == Activation::kTanh ? std::tanh(v)
                                              : (v > 0.0 ? v : 0.0);
        }
      }
      h.swap(next);
    }
    // Mean cross-entropy: stable log-softmax.
    double max_logit = h[0];
    for (double v : h) max_logit = std::max(max_logit, v);
    double lse = 0.0;
    for (double v : h) lse += std::exp(v - max_logit);
    lse = max_logit + std::log(lse);
    const auto label = static_cast<std::size_t>(sample.label);
    return lse - h[label];
  };
  obj.initial_theta = std::move(initial);

  // Saliency chain uses transposed views so dimensions are compatible in
  // storage order (the all-ones bilinear form is transpose-invariant).
  LayeredShape shape;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    shape.layers.push_back(
        LayerBlock{dims[l], dims[l + 1], offs[l], 1, dims[l]});
  }
  obj.shape = std::move(shape);
  obj.data = std::move(data);
  return obj;
}

std::string dataset_to_csv(const Dataset& data) {
  if (data.samples.empty()) throw ConfigError("dataset_to_csv: empty dataset");
  const std::size_t d = data.samples.front().features.size();
  std::string out;
  for (std::size_t i = 0; i < d; ++i) {
    out += 'f';
    out += std::to_string(i);
    out += ',';
  }
  out += "label\n";
  for (const DataSample& sample : data.samples) {
    if (sample.features.size() != d) {
      throw ConfigError("dataset_to_csv: ragged feature rows");
    }
    for (double v : sample.features) {
      out += format_double(v);
      out += ',';
    }
    out += format_double(sample.label);
    out += '\n';
  }
  return out;
}

namespace {

double parse_double_strict(const std::string& field, const char* what) {
  if (field == "inf") return HUGE_VAL;
  if (field == "-inf") return -HUGE_VAL;
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError(std::string(what) + ": bad number '" + field + "'");
  }
  return value;
}

}  // namespace

Dataset dataset_from_csv(const std::string& csv, uint64_t seed,
                         const std::string& generator) {
  std::istringstream stream(csv);
  std::string line;
  if (!std::getline(stream, line)) throw ConfigError("dataset csv: empty");
  std::vector<std::string> header;
  {
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) header.push_back(field);
  }
  if (header.size() < 2 || header.back() != "label") {
    throw ConfigError("dataset csv: header must end with 'label'");
  }
  const std::size_t d = header.size() - 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (header[i] != "f" + std::to_string(i)) {
      throw ConfigError("dataset csv: expected column f" + std::to_string(i) +
                        ", got '" + header[i] + "'");
    }
  }
  Dataset data;
  data.seed = seed;
  data.generator = generator;
  while (std::getline(stream, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<double> row;
    while (std::getline(ls, field, ',')) {
      row.push_back(parse_double_strict(field, "dataset csv"));
    }
    if (row.size() != d + 1) throw ConfigError("dataset csv: ragged row");
    DataSample sample;
    sample.features.assign(row.begin(), row.end() - 1);
    sample.label = row.back();
    data.samples.push_back(std::move(sample));
  }
  if (data.samples.empty()) throw ConfigError("dataset csv: no rows");
  return data;
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("dataset csv: cannot open " + path);
  out << dataset_to_csv(data);
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("dataset csv: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return dataset_from_csv(buffer.str(), 0, "csv:" + path);
}

}  // namespace dpzo
