#include "dpzo/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "dpzo/errors.hpp"

namespace dpzo {

namespace {

constexpr char kMagic[8] = {'D', 'P', 'Z', 'O', 'C', 'K', 'P', 'T'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

void write_u64(std::ofstream& out, uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_f64(std::ofstream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

uint64_t read_u64(std::ifstream& in) {
  uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

double read_f64(std::ifstream& in) {
  double v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

}  // namespace

void write_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  const std::size_t d = ckpt.theta.dim();
  if (ckpt.mask.size() != d || ckpt.importance_diag.size() != d) {
    throw ConfigError("checkpoint: theta/mask/diag sizes differ");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("checkpoint: cannot open " + path);
  out.write(kMagic, sizeof(kMagic));
  write_u64(out, d);
  for (std::size_t i = 0; i < d; ++i) write_f64(out, ckpt.theta.values[i]);
  for (std::size_t i = 0; i < d; ++i) {
    const char byte = ckpt.mask[i] ? 1 : 0;
    out.write(&byte, 1);
  }
  for (std::size_t i = 0; i < d; ++i) write_f64(out, ckpt.importance_diag[i]);
  if (!out) throw ConfigError("checkpoint: write failed for " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("checkpoint: cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ConfigError("checkpoint: bad magic in " + path);
  }
  const uint64_t d = read_u64(in);
  Checkpoint ckpt;
  ckpt.theta = ParameterVector(d);
  ckpt.mask.resize(d);
  ckpt.importance_diag.resize(d);
  for (uint64_t i = 0; i < d; ++i) ckpt.theta.values[i] = read_f64(in);
  for (uint64_t i = 0; i < d; ++i) {
    char byte = 0;
    in.read(&byte, 1);
    if (byte != 0 && byte != 1) {
      throw ConfigError("checkpoint: bad mask byte in " + path);
    }
    ckpt.mask[i] = byte == 1;
  }
  for (uint64_t i = 0; i < d; ++i) ckpt.importance_diag[i] = read_f64(in);
  if (!in) throw ConfigError("checkpoint: truncated file " + path);
  return ckpt;
}

}  // namespace dpzo
