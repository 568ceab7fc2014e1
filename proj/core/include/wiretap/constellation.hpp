#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wiretap {

// Maxwell-Boltzmann-shaped ASK constellation with natural binary labels.
// Points are expansion * {+-1, +-3, ...} in ascending order; pmf(x) is
// proportional to exp(-shaping * x^2) and symmetric; label(point j) is
// j + (2^m - Nc)/2 with bit 0 the least significant.
struct Constellation {
  std::vector<double> points;
  std::vector<double> pmf;
  int labelBits = 0;
  std::vector<std::uint32_t> labels;
  double expansion = 0.0;
  double shaping = 0.0;

  int size() const { return static_cast<int>(points.size()); }
  std::uint32_t labelOffset() const;
  // index of the point carrying this label, or -1 if the label is unused
  int indexOfLabel(std::uint32_t label) const;
  double power() const;          // E[X^2]
  double entropyBits() const;    // H(X)
  bool labelBit(int pointIndex, int level) const {
    return (labels[pointIndex] >> level) & 1u;
  }
};

Constellation buildShapedAsk(int numPoints, double expansion, double shaping);

struct InfoProfile {
  double mutualInfo = 0.0;                  // I(X;Y)
  double entropy = 0.0;                     // H(X)
  double condEntropy = 0.0;                 // H(X|Y)
  std::vector<double> perLevelCondEntropy;  // H(l_k | l_0..l_{k-1}, Y)
  std::vector<double> optimalRates;         // 1 - perLevelCondEntropy[k]
};

// All quantities by Gauss-Hermite quadrature on the Gaussian mixture, refined
// until successive orders agree to tolBits.
InfoProfile infoProfile(const Constellation& c, double noiseVar,
                        double tolBits = 1e-5);

// H(g(X) | Y) for an arbitrary grouping of the points (exposed for the EXIT
// oracle and the per-level machinery).
double groupedCondEntropy(const Constellation& c, double noiseVar,
                          const std::vector<std::uint32_t>& groupKeys,
                          double tolBits = 1e-5);

// Searches the (expansion, shaping) family for the smallest even size whose
// best I(X;Y) sits within targetGap of the channel capacity, needs at most two
// component codes, and whose entropy reaches the H(X) ~ C_M + 1 sizing anchor.
// Throws std::runtime_error with a diagnostic when no member qualifies.
Constellation optimizeConstellation(double noiseVar, double targetGap = 0.005);

// Best shaped constellation of a fixed size (power-constrained I maximization).
Constellation optimizeConstellationOfSize(int numPoints, double noiseVar);

// Product construction for the complex channel: the same ASK constellation on
// each real dimension, scaled so total complex power is at most 1.
struct QamProduct {
  Constellation perDimension;  // points scaled by 1/sqrt(2)
  double totalEntropyBits() const { return 2.0 * perDimension.entropyBits(); }
  double totalPower() const { return 2.0 * perDimension.power(); }
};
QamProduct qamFromAsk(const Constellation& c);

// Text serialization: header plus one "point probability label" row per point,
// reals at 17 significant digits.
std::string toText(const Constellation& c);
Constellation constellationFromText(const std::string& text);

}  // namespace wiretap
