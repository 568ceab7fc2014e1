#include <cmath>
#include <vector>

#include "doctest.h"
#include "wiretap/channel.hpp"
#include "wiretap/constellation.hpp"

using namespace wiretap;

namespace {
const double kNv13 = std::pow(10.0, -1.3);
const double kNv2 = std::pow(10.0, -0.2);
}  // namespace

TEST_CASE("zero shaping degenerates to the uniform pmf") {
  const auto c = buildShapedAsk(8, 0.3, 0.0);
  for (double p : c.pmf) CHECK(p == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(c.entropyBits() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("buildShapedAsk validates arguments") {
  CHECK_THROWS(buildShapedAsk(7, 0.3, 0.1));
  CHECK_THROWS(buildShapedAsk(0, 0.3, 0.1));
  CHECK_THROWS(buildShapedAsk(8, 0.0, 0.1));
  CHECK_THROWS(buildShapedAsk(8, 0.3, -0.1));
}

TEST_CASE("points and pmf are symmetric, pmf normalized") {
  const auto c = buildShapedAsk(12, 0.26, 0.5);
  double sum = 0.0;
  for (int i = 0; i < c.size(); ++i) {
    CHECK(c.points[i] == doctest::Approx(-c.points[c.size() - 1 - i]).epsilon(1e-14));
    CHECK(c.pmf[i] == doctest::Approx(c.pmf[c.size() - 1 - i]).epsilon(1e-12));
    sum += c.pmf[i];
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("natural labels: 4 points use the full 2-bit map in order") {
  const auto c = buildShapedAsk(4, 0.5, 0.1);
  CHECK(c.labelBits == 2);
  CHECK(c.labelOffset() == 0);
  // enumerate the labeling formula by hand for m=2: j + (4-4)/2 = j
  for (int j = 0; j < 4; ++j) CHECK(c.labels[j] == static_cast<std::uint32_t>(j));
  // bit 0 is the least significant: alternates 0,1,0,1
  CHECK(c.labelBit(0, 0) == false);
  CHECK(c.labelBit(1, 0) == true);
  CHECK(c.labelBit(2, 0) == false);
  CHECK(c.labelBit(3, 0) == true);
  // bit 1: 0,0,1,1
  CHECK(c.labelBit(0, 1) == false);
  CHECK(c.labelBit(1, 1) == false);
  CHECK(c.labelBit(2, 1) == true);
  CHECK(c.labelBit(3, 1) == true);
}

TEST_CASE("natural labels reproduce the published 12-point table rows") {
  const auto c = buildShapedAsk(12, 0.2578, 0.0325 / (0.2578 * 0.2578));
  CHECK(c.labelBits == 4);
  CHECK(c.labelOffset() == 2);
  const int l0[] = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
  const int l1[] = {1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0};
  const int l2[] = {0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 1, 1};
  const int l3[] = {0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1};
  for (int j = 0; j < 12; ++j) {
    CHECK(static_cast<int>(c.labelBit(j, 0)) == l0[j]);
    CHECK(static_cast<int>(c.labelBit(j, 1)) == l1[j]);
    CHECK(static_cast<int>(c.labelBit(j, 2)) == l2[j]);
    CHECK(static_cast<int>(c.labelBit(j, 3)) == l3[j]);
  }
  // mirrored points carry complementary labels
  for (int j = 0; j < 12; ++j) {
    CHECK((c.labels[j] ^ c.labels[11 - j]) == 0xFu);
  }
}

TEST_CASE("natural-mapping symmetry of the joint bit density") {
  // p(y, l_k = b) = p(-y, l_k = b^1) for a grid of y
  const auto c = buildShapedAsk(12, 0.2578, 0.489);
  const double nv = kNv13;
  for (int level = 0; level < c.labelBits; ++level) {
    for (double y = -3.0; y <= 3.0; y += 0.37) {
      double pb0 = 0.0, pb1 = 0.0, qb0 = 0.0, qb1 = 0.0;
      for (int j = 0; j < c.size(); ++j) {
        const double d1 = y - c.points[j];
        const double d2 = -y - c.points[j];
        const double g1 = std::exp(-d1 * d1 / (2 * nv)) * c.pmf[j];
        const double g2 = std::exp(-d2 * d2 / (2 * nv)) * c.pmf[j];
        if (c.labelBit(j, level)) {
          pb1 += g1;
          qb1 += g2;
        } else {
          pb0 += g1;
          qb0 += g2;
        }
      }
      CHECK(pb0 == doctest::Approx(qb1).epsilon(1e-12));
      CHECK(pb1 == doctest::Approx(qb0).epsilon(1e-12));
    }
  }
}

TEST_CASE("info profile at the published 13 dB constellation") {
  // the table's own pmf, rebuilt from (alpha, theta) fitted to it
  const double alpha = 0.2578;
  const auto c = buildShapedAsk(12, alpha, 0.032527 / (alpha * alpha));
  const auto p = infoProfile(c, kNv13);
  CHECK(p.mutualInfo == doctest::Approx(2.192).epsilon(0.005 / 2.192));
  CHECK(p.entropy == doctest::Approx(3.000).epsilon(0.005 / 3.0));
  REQUIRE(p.optimalRates.size() == 4);
  CHECK(p.optimalRates[0] == doctest::Approx(0.264).epsilon(0.005 / 0.264));
  CHECK(p.optimalRates[1] == doctest::Approx(0.928).epsilon(0.005 / 0.928));
  CHECK(p.optimalRates[2] == doctest::Approx(1.0).epsilon(0.005));
  CHECK(p.optimalRates[3] == doctest::Approx(1.0).epsilon(0.005));
}

TEST_CASE("entropy splits into mutual information plus conditional entropy") {
  const auto c = buildShapedAsk(8, 0.35, 0.2);
  const auto p = infoProfile(c, 0.1);
  CHECK(p.entropy == doctest::Approx(p.mutualInfo + p.condEntropy).epsilon(2e-4));
}

TEST_CASE("chain rule: per-level conditional entropies sum to H(X|Y)") {
  for (double nv : {0.05, 0.2, 0.6}) {
    const auto c = buildShapedAsk(12, 0.26, 0.4);
    const auto p = infoProfile(c, nv);
    double sum = 0.0;
    for (double h : p.perLevelCondEntropy) sum += h;
    CHECK(sum == doctest::Approx(p.condEntropy).epsilon(2e-4 / p.condEntropy));
  }
}

TEST_CASE("noiseless limit: the channel reveals the symbol") {
  const auto c = buildShapedAsk(4, 0.5, 0.3);
  const auto p = infoProfile(c, 1e-6);
  CHECK(p.condEntropy <= 1e-3);
  CHECK(p.mutualInfo == doctest::Approx(p.entropy).epsilon(1e-3));
}

TEST_CASE("mutual information is nonincreasing in the noise variance") {
  const auto c = buildShapedAsk(8, 0.35, 0.2);
  double prev = 1e9;
  for (double nv : {0.02, 0.05, 0.1, 0.3, 0.8, 2.0}) {
    const double i = infoProfile(c, nv).mutualInfo;
    CHECK(i <= prev + 1e-9);
    prev = i;
  }
}

TEST_CASE("I(X;Y) bounded by H(X) and the capacity at the actual power") {
  for (double nv : {0.05, 0.3, 1.0}) {
    const auto c = buildShapedAsk(6, 0.45, 0.15);
    const auto p = infoProfile(c, nv);
    CHECK(p.mutualInfo <= p.entropy + 1e-9);
    CHECK(p.mutualInfo <= gaussianCapacity(nv / c.power()) + 1e-4);
  }
  // at unit power the plain capacity bound applies
  const auto c = optimizeConstellationOfSize(8, 0.1);
  CHECK(c.power() <= 1.0 + 1e-9);
  CHECK(infoProfile(c, 0.1).mutualInfo <= gaussianCapacity(0.1) + 1e-4);
}

TEST_CASE("optimizer finds the published 13 dB operating point") {
  const auto c = optimizeConstellation(kNv13);
  REQUIRE(c.size() == 12);
  CHECK(c.power() <= 1.0 + 1e-9);
  const auto p = infoProfile(c, kNv13);
  CHECK(std::abs(p.mutualInfo - gaussianCapacity(kNv13)) <= 0.005);
  CHECK(p.mutualInfo == doctest::Approx(2.192).epsilon(0.005 / 2.192));
  // published table I positions/probabilities (positive half)
  const double pts[] = {0.258, 0.773, 1.289, 1.804, 2.320, 2.836};
  const double pr[] = {0.1974, 0.1522, 0.0904, 0.0414, 0.0146, 0.0040};
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(c.points[6 + i] - pts[i]) <= 0.02);
    CHECK(std::abs(c.pmf[6 + i] - pr[i]) <= 0.005);
  }
}

TEST_CASE("optimizer at 2 dB matches the published 4-point row") {
  const auto c = optimizeConstellation(kNv2);
  REQUIRE(c.size() == 4);
  CHECK(c.power() <= 1.0 + 1e-9);
  const auto p = infoProfile(c, kNv2);
  CHECK(p.mutualInfo == doctest::Approx(0.684).epsilon(0.005 / 0.684));
  CHECK(p.entropy == doctest::Approx(1.603).epsilon(0.005 / 1.603));
  REQUIRE(p.optimalRates.size() == 2);
  CHECK(p.optimalRates[0] == doctest::Approx(0.189).epsilon(0.005 / 0.189));
  CHECK(p.optimalRates[1] == doctest::Approx(0.891).epsilon(0.005 / 0.891));
}

TEST_CASE("uniform pmf entropy is exactly log2 of the size") {
  const auto c = buildShapedAsk(16, 0.2, 0.0);
  CHECK(c.entropyBits() == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("qam product: independent dimensions double the quantities") {
  const auto c = optimizeConstellationOfSize(8, 0.1);
  const auto q = qamFromAsk(c);
  CHECK(q.totalEntropyBits() == doctest::Approx(2.0 * c.entropyBits()).epsilon(1e-12));
  CHECK(q.totalPower() <= 1.0 + 1e-9);
  // per-dimension mutual information doubles at the matching per-dimension SNR
  const double gamma = 8.0;  // complex-channel SNR
  const auto pd = infoProfile(q.perDimension, q.perDimension.power() / gamma);
  const auto pa = infoProfile(c, c.power() / gamma);
  CHECK(2.0 * pd.mutualInfo == doctest::Approx(2.0 * pa.mutualInfo).epsilon(1e-6));
}

TEST_CASE("text round trip is exact") {
  const auto c = optimizeConstellationOfSize(6, 0.2);
  const auto back = constellationFromText(toText(c));
  CHECK(back.points == c.points);
  CHECK(back.pmf == c.pmf);
  CHECK(back.labels == c.labels);
  CHECK(back.labelBits == c.labelBits);
  CHECK(back.expansion == c.expansion);
  CHECK(back.shaping == c.shaping);
}
