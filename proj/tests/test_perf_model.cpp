#include "idlewave/perf_model.hpp"

#include <stdexcept>

#include "doctest.h"

using namespace idlewave;

// Reference coordinates of the scaling model with default parameters and the
// write-allocate correction: execution-only 2.5 / 5.0 GF/s on one / two
// sockets, total 2.4194 / 4.6875 GF/s.
TEST_CASE("model points with write-allocate corrected traffic") {
  const TriadModelParams p;  // defaults carry factor 4/3
  CHECK(triad_exec_performance(1, p) == doctest::Approx(2.5e9).epsilon(1e-6));
  CHECK(triad_exec_performance(2, p) == doctest::Approx(5.0e9).epsilon(1e-6));
  CHECK(triad_performance(1, p) == doctest::Approx(2.419354839e9).epsilon(1e-6));
  CHECK(triad_performance(2, p) == doctest::Approx(4.6875e9).epsilon(1e-6));
}

TEST_CASE("factor 1 recovers the plain two-term model") {
  TriadModelParams p;
  p.write_allocate_factor = 1.0;
  // Hand-computed: T(1) = 1.2e9/40e9 + 2*2e6/3e9 = 0.03 + 0.0013333.. s
  CHECK(triad_runtime(1, p) == doctest::Approx(0.0313333333).epsilon(1e-9));
  CHECK(triad_performance(1, p) == doctest::Approx(1e8 / 0.0313333333).epsilon(1e-8));
  // T(2) = 0.015 + 0.0013333.. s
  CHECK(triad_runtime(2, p) == doctest::Approx(0.0163333333).epsilon(1e-9));
}

TEST_CASE("no network volume means linear scaling") {
  TriadModelParams p;
  p.v_net_bytes = 0.0;
  const double p1 = triad_performance(1, p);
  for (int n = 2; n <= 16; ++n)
    CHECK(triad_performance(n, p) == doctest::Approx(n * p1).epsilon(1e-12));
}

TEST_CASE("performance grows, is concave, and respects the network bound") {
  const TriadModelParams p;
  const double bound = triad_performance_asymptote(p);
  double prev = 0.0, prev_gain = 1e300;
  for (int n = 1; n <= 64; ++n) {
    const double perf = triad_performance(n, p);
    CHECK(perf > prev);
    CHECK(perf < bound);
    if (n > 1) {
      const double gain = perf - prev;
      CHECK(gain <= prev_gain);
      prev_gain = gain;
    }
    prev = perf;
  }
}

TEST_CASE("parameter validation") {
  TriadModelParams p;
  SUBCASE("factor below one") {
    p.write_allocate_factor = 0.9;
    CHECK_THROWS_AS(triad_runtime(1, p), std::invalid_argument);
  }
  SUBCASE("socket count") { CHECK_THROWS_AS(triad_runtime(0, p), std::invalid_argument); }
  SUBCASE("nonpositive bandwidth") {
    p.b_mem_bytes_per_s = 0.0;
    CHECK_THROWS_AS(triad_runtime(1, p), std::invalid_argument);
  }
}
