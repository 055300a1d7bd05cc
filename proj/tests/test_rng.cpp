#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "dpzo/rng.hpp"

using namespace dpzo;

namespace {

struct PhiloxVector {
  std::array<uint64_t, 4> counter;
  PhiloxKey key;
  std::array<uint64_t, 4> expected;
};

// Reference outputs generated with numpy.random.Philox (philox4x64-10).
// numpy advances the counter before emitting a block, so its raw output for
// counter c equals the bijection applied to c+1; these vectors are stored
// post-increment.
const PhiloxVector kVectors[] = {
    {{1, 0, 0, 0},
     {0, 0},
     {0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL,
      0x907d7a052fd5b4dcULL}},
    {{0x2a, 0x03, 0x11, 0x05},
     {0xdeadbeefcafebabeULL, 0x0123456789abcdefULL},
     {0xd5671ce72619469eULL, 0x99aabd783ec9c069ULL, 0x6891b487493fde47ULL,
      0xae0c90b91ecf4138ULL}},
    {{0, 1, 0, 0},
     {0x9e3779b97f4a7c15ULL, 0},
     {0xad8aa47dc661e759ULL, 0x0204ec9665c8b614ULL, 0xccaa7fb4c3e8a571ULL,
      0xc34d7296777c5e3eULL}},
    {{0x075bcd16, 0x3ade68b1, 0xabcdef, 0xfedcba},
     {0x2a, 0x06},
     {0x60d6001cad87d37aULL, 0x3317309bce61818cULL, 0x1457e0eb131e5fbcULL,
      0xc1a8fb0845c6825cULL}},
};

// scipy.stats.norm.ppf reference points.
const struct {
  double p;
  double z;
} kPpfVectors[] = {
    {1e-12, -7.034483825301131},   {1e-6, -4.753424308822899},
    {1e-4, -3.7190164854556804},   {0.025, -1.9599639845400545},
    {0.1, -1.2815515655446004},    {0.3, -0.5244005127080409},
    {0.5, 0.0},                    {0.7, 0.5244005127080407},
    {0.975, 1.959963984540054},    {0.9999, 3.719016485455709},
    {1.0 - 1e-9, 5.997807019601637},
};

}  // namespace

TEST_CASE("philox4x64 matches numpy reference vectors") {
  for (const PhiloxVector& v : kVectors) {
    const auto out = philox4x64(v.counter, v.key);
    for (int i = 0; i < 4; ++i) {
      CHECK(out[i] == v.expected[i]);
    }
  }
}

TEST_CASE("inverse_normal_cdf matches scipy across the domain") {
  for (const auto& v : kPpfVectors) {
    if (v.z == 0.0) {
      CHECK(inverse_normal_cdf(v.p) == 0.0);
    } else {
      CHECK(inverse_normal_cdf(v.p) ==
            doctest::Approx(v.z).epsilon(1e-13));
    }
  }
}

TEST_CASE("inverse_normal_cdf is antisymmetric and monotone") {
  for (double p : {0.01, 0.1, 0.25, 0.4, 0.49}) {
    CHECK(inverse_normal_cdf(p) ==
          doctest::Approx(-inverse_normal_cdf(1.0 - p)).epsilon(1e-12));
  }
  double prev = -1e300;
  for (double p = 0.001; p < 1.0; p += 0.001) {
    const double z = inverse_normal_cdf(p);
    CHECK(z > prev);
    prev = z;
  }
}

TEST_CASE("uniform_open01 stays strictly inside (0, 1)") {
  CHECK(uniform_open01(0) > 0.0);
  CHECK(uniform_open01(~uint64_t{0}) < 1.0);
}

TEST_CASE("raw_u64 is a pure function of its key") {
  const uint64_t a = raw_u64(7, Stream::kDirection, 1, 2, 3, 4);
  const uint64_t b = raw_u64(7, Stream::kDirection, 1, 2, 3, 4);
  CHECK(a == b);
  CHECK(a != raw_u64(8, Stream::kDirection, 1, 2, 3, 4));
  CHECK(a != raw_u64(7, Stream::kNoise, 1, 2, 3, 4));
  CHECK(a != raw_u64(7, Stream::kDirection, 1, 2, 3, 5));
}

TEST_CASE("normal_draw moments over pooled draws") {
  const uint64_t N = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (uint64_t i = 0; i < N; ++i) {
    const double z = normal_draw(123, Stream::kData, 0, i, 0, 0);
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / static_cast<double>(N);
  const double var = sum_sq / static_cast<double>(N) - mean * mean;
  CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(N)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}
