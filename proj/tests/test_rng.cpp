#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "idlewave/perturbation.hpp"
#include "idlewave/rng.hpp"

using namespace idlewave;

namespace {

// Kolmogorov-Smirnov statistic against Exp(lambda = 1/mean).
double ks_statistic_exponential(std::vector<double> samples, double mean) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = 1.0 - std::exp(-samples[i] / mean);
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
  }
  return d;
}

}  // namespace

TEST_CASE("generator streams are reproducible") {
  Xoshiro256StarStar a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const auto va = a.next();
    all_equal = all_equal && (va == b.next());
    any_diff = any_diff || (va != c.next());
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("uniform draws stay inside (0, 1]") {
  Xoshiro256StarStar g(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = g.next_uniform_open_closed();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
  }
}

TEST_CASE("per-rank substreams are distinct and reproducible") {
  NoiseStreams s1(99, 4), s2(99, 4);
  NoiseSpec spec{0.1, true};
  std::vector<double> first_draws;
  for (int r = 0; r < 4; ++r) {
    const double v = s1.sample(r, spec, 1000.0);
    CHECK(v == s2.sample(r, spec, 1000.0));
    first_draws.push_back(v);
  }
  std::sort(first_draws.begin(), first_draws.end());
  CHECK(std::adjacent_find(first_draws.begin(), first_draws.end()) == first_draws.end());
}

TEST_CASE("disabled noise samples exactly zero but still consumes draws") {
  // Same seed, different E: the underlying uniforms line up, so samples are
  // proportional across E values.
  NoiseStreams off(5, 1), low(5, 1), high(5, 1);
  NoiseSpec spec_off{0.0, false};
  NoiseSpec spec_low{0.1, true};
  NoiseSpec spec_high{0.2, true};
  for (int i = 0; i < 100; ++i) {
    CHECK(off.sample(0, spec_off, 3000.0) == 0.0);
    const double lo = low.sample(0, spec_low, 3000.0);
    const double hi = high.sample(0, spec_high, 3000.0);
    CHECK(hi == doctest::Approx(2.0 * lo).epsilon(1e-12));
  }
}

TEST_CASE("sample mean matches E * t_exec") {
  // E=0.25 on a 3 ms phase: mean over 1e6 draws must be 750 +- 3 us.
  NoiseStreams streams(1, 1);
  NoiseSpec spec{0.25, true};
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += streams.sample(0, spec, 3000.0);
  CHECK(sum / n == doctest::Approx(750.0).epsilon(3.0 / 750.0));
}

TEST_CASE("empirical CDF matches the exponential law (KS < 0.01)") {
  NoiseStreams streams(2024, 1);
  NoiseSpec spec{0.2, true};
  std::vector<double> samples;
  samples.reserve(100000);
  for (int i = 0; i < 100000; ++i) samples.push_back(streams.sample(0, spec, 3000.0));
  CHECK(ks_statistic_exponential(std::move(samples), 0.2 * 3000.0) < 0.01);
}
