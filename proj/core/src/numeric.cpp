#include "wiretap/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace wiretap {

namespace {

// Newton iteration on the Hermite recurrence. Nodes of H_n are bracketed by a
// cosine initial guess refined to machine precision; weights follow from the
// derivative value.
GaussHermiteRule computeGaussHermite(int n) {
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    double pp = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  // store ascending
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  return rule;
}

}  // namespace

const GaussHermiteRule& gaussHermite(int order) {
  if (order < 1) throw std::invalid_argument("gaussHermite: order must be >= 1");
  static std::mutex mu;
  static std::map<int, GaussHermiteRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, computeGaussHermite(order)).first;
  return it->second;
}

double expIntegralE1(double x) {
  if (x <= 0.0) throw std::invalid_argument("expIntegralE1: x must be > 0");
  constexpr double kEulerGamma = 0.5772156649015329;
  if (x <= 1.0) {
    // power series
    double sum = -kEulerGamma - std::log(x);
    double term = 1.0;
    for (int k = 1; k < 60; ++k) {
      term *= -x / k;
      sum -= term / k;
      if (std::abs(term / k) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  // Lentz continued fraction: E1(x) = exp(-x) / (x + 1/(1 + 1/(x + 2/(1 + ...))))
  double b = x + 1.0;
  double c = 1e308;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 200; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

double binaryEntropyBits(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double log2SumExp2(const std::vector<double>& log2Terms) {
  if (log2Terms.empty()) return -1e308;
  double mx = log2Terms[0];
  for (double v : log2Terms) mx = std::max(mx, v);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double v : log2Terms) s += std::exp2(v - mx);
  return mx + std::log2(s);
}

}  // namespace wiretap
