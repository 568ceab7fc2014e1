#include <cmath>

#include "doctest.h"
#include "wiretap/numeric.hpp"

using namespace wiretap;

TEST_CASE("gauss-hermite integrates polynomials against exp(-t^2)") {
  const auto& rule = gaussHermite(32);
  double m0 = 0.0, m2 = 0.0, m4 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = rule.nodes[i];
    m0 += rule.weights[i];
    m2 += rule.weights[i] * t * t;
    m4 += rule.weights[i] * t * t * t * t;
  }
  const double sqrtPi = std::sqrt(M_PI);
  CHECK(m0 == doctest::Approx(sqrtPi).epsilon(1e-12));
  CHECK(m2 == doctest::Approx(0.5 * sqrtPi).epsilon(1e-12));
  CHECK(m4 == doctest::Approx(0.75 * sqrtPi).epsilon(1e-12));
}

TEST_CASE("E1 against reference values") {
  // Abramowitz & Stegun tabulated points
  CHECK(expIntegralE1(1.0) == doctest::Approx(0.21938393439552).epsilon(1e-10));
  CHECK(expIntegralE1(0.5) == doctest::Approx(0.55977359477616).epsilon(1e-10));
  CHECK(expIntegralE1(2.0) == doctest::Approx(0.04890051070806).epsilon(1e-10));
  CHECK(expIntegralE1(10.0) == doctest::Approx(4.15696892968532e-6).epsilon(1e-8));
}

TEST_CASE("E1 satisfies the capacity integral identity") {
  // integral_0^inf log2(1+g) (1/gb) e^(-g/gb) dg = e^(1/gb) E1(1/gb) / ln 2
  const double gb = 5.0;
  const int n = 400000;
  const double h = gb * 50.0 / n;
  double riemann = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double g = i * h;
    riemann += std::log2(1.0 + g) * std::exp(-g / gb) / gb * h;
  }
  const double closed = std::exp(1.0 / gb) * expIntegralE1(1.0 / gb) / std::log(2.0);
  CHECK(closed == doctest::Approx(riemann).epsilon(1e-4));
}

TEST_CASE("binary entropy") {
  CHECK(binaryEntropyBits(0.5) == doctest::Approx(1.0));
  CHECK(binaryEntropyBits(0.0) == 0.0);
  CHECK(binaryEntropyBits(1.0) == 0.0);
  CHECK(binaryEntropyBits(0.11) == doctest::Approx(0.4999).epsilon(1e-3));
}
