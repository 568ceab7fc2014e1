#pragma once

#include <cstddef>
#include <vector>

namespace wiretap {

// Gauss-Hermite nodes/weights for integrals of the form
//   integral f(t) exp(-t^2) dt  ~=  sum_i w_i f(t_i).
// Rules are computed once per order and cached.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussHermiteRule& gaussHermite(int order);

// Exponential integral E1(x) for x > 0.
double expIntegralE1(double x);

// Binary entropy of p in bits; returns 0 at p in {0, 1}.
double binaryEntropyBits(double p);

// log2 of sum of exponentials, stable.
double log2SumExp2(const std::vector<double>& log2Terms);

}  // namespace wiretap
