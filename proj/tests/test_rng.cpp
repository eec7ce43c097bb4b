#include <doctest.h>

#include <cmath>

#include "sigsoft/rng.hpp"

using sigsoft::Prng;

// Golden vectors frozen from the reference implementation of the documented
// algorithm (splitmix64 seeding, xoshiro256++, 53-bit uniforms, Box-Muller).
// The integer stream is bit-exact everywhere; the gaussian stream goes
// through libm and gets a 1e-13 allowance.

TEST_CASE("u64 stream for seed 42 matches the frozen golden vector") {
  Prng rng(42);
  CHECK(rng.next_u64() == 0xd0764d4f4476689full);
  CHECK(rng.next_u64() == 0x519e4174576f3791ull);
  CHECK(rng.next_u64() == 0xfbe07cfb0c24ed8cull);
  CHECK(rng.next_u64() == 0xb37d9f600cd835b8ull);
}

TEST_CASE("uniform stream for seed 42 matches the frozen golden vector") {
  Prng rng(42);
  CHECK(rng.uniform() == 0.8143051451229099);
  CHECK(rng.uniform() == 0.3188210400616611);
  CHECK(rng.uniform() == 0.9838941681774888);
  CHECK(rng.uniform() == 0.7011355981347556);
}

TEST_CASE("first 8 gaussian draws for seed 42 match the frozen golden vector") {
  const double expected[8] = {
      -0.7689930538210061,  1.6661184587142,     -0.8684461074702454,
      -2.7391511556643047,  -1.5109749830006707, -0.9337600430935515,
      -0.4087085854552936,  -0.31753081986790815};
  Prng rng(42);
  for (double want : expected) CHECK(rng.gaussian() == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("identical seeds give identical streams") {
  Prng a(12345), b(12345);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform(lo, hi) stays inside its interval") {
  Prng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-2.0, 5.0);
    CHECK(x >= -2.0);
    CHECK(x < 5.0);
  }
}

TEST_CASE("10000 gaussians have roughly standard moments") {
  Prng rng(1);
  double sum = 0.0, sumsq = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.gaussian();
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double stddev = std::sqrt((sumsq - sum * sum / n) / (n - 1));
  CHECK(std::abs(mean) <= 0.05);
  CHECK(std::abs(stddev - 1.0) <= 0.05);
}

TEST_CASE("gaussian_matrix at scale 2 is exactly twice the scale-1 matrix") {
  Prng a(9), b(9);
  const Eigen::MatrixXd m1 = sigsoft::gaussian_matrix(a, 4, 3, 1.0);
  const Eigen::MatrixXd m2 = sigsoft::gaussian_matrix(b, 4, 3, 2.0);
  CHECK((m2 - 2.0 * m1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gaussian_matrix repeats exactly for a repeated seed") {
  Prng a(11), b(11);
  const Eigen::MatrixXd m1 = sigsoft::gaussian_matrix(a, 5, 5, 1.0);
  const Eigen::MatrixXd m2 = sigsoft::gaussian_matrix(b, 5, 5, 1.0);
  CHECK((m1 - m2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix helpers reject empty shapes") {
  Prng rng(1);
  CHECK_THROWS_AS(sigsoft::gaussian_matrix(rng, 0, 3, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(sigsoft::uniform_matrix(rng, 3, 0, 0.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("child seeds match the frozen golden vector and differ") {
  CHECK(Prng::child_seed(42, 0) == 0x28efe333b266f103ull);
  CHECK(Prng::child_seed(42, 1) == 0x47526757130f9f52ull);
  CHECK(Prng::child_seed(42, 2) == 0x581ce1ff0e4ae394ull);
  CHECK(Prng::child_seed(42, 0) != Prng::child_seed(43, 0));
}
