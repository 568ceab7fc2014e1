#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wiretap/numeric.hpp"
#include "wiretap/reconciliation.hpp"
#include "wiretap/rng.hpp"

namespace wiretap {

double jFunction(double sigma) {
  if (sigma <= 1e-9) return 0.0;
  if (sigma >= 80.0) return 1.0;
  const GaussHermiteRule& rule = gaussHermite(96);
  constexpr double kInvSqrtPi = 0.5641895835477563;
  const double mu = sigma * sigma / 2.0;
  double loss = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double l = mu + sigma * std::sqrt(2.0) * rule.nodes[q];
    loss += rule.weights[q] * std::log2(1.0 + std::exp(-l));
  }
  loss *= kInvSqrtPi;
  return std::clamp(1.0 - loss, 0.0, 1.0);
}

double jFunctionInverse(double info) {
  info = std::clamp(info, 0.0, 1.0);
  if (info <= 0.0) return 0.0;
  if (info >= 1.0) return 80.0;
  double lo = 1e-6, hi = 80.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (jFunction(mid) < info) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-10) break;
  }
  return 0.5 * (lo + hi);
}

double ExitCurve::at(double x) const {
  if (ia.empty()) return 0.0;
  if (x <= ia.front()) return ie.front();
  if (x >= ia.back()) return ie.back();
  const auto it = std::upper_bound(ia.begin(), ia.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - ia.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - ia[lo]) / (ia[hi] - ia[lo]);
  return ie[lo] + t * (ie[hi] - ie[lo]);
}

namespace {

// sample-mean estimator of 1 - H(b | L); L in log P0/P1 convention
double extrinsicInfo(const std::vector<double>& llr, const Bits& bits) {
  double loss = 0.0;
  for (std::size_t i = 0; i < llr.size(); ++i) {
    const double signed_l = bits[i] ? -llr[i] : llr[i];
    // log2(1 + e^-x), stable both directions
    const double x = signed_l;
    const double v = x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
    loss += v / std::log(2.0);
  }
  return std::clamp(1.0 - loss / llr.size(), 0.0, 1.0);
}

double gaussianApriori(StreamRng& rng, double sigmaA, bool bitOne) {
  const double mean = (bitOne ? -1.0 : 1.0) * sigmaA * sigmaA / 2.0;
  return mean + sigmaA * rng.gaussian();
}

}  // namespace

std::pair<ExitCurve, ExitCurve> exitCurves(const Constellation& c, double noiseVar,
                                           int level, const LdpcCode* code,
                                           int mcFrames, std::uint64_t rngSeed) {
  if (level < 0 || level >= c.labelBits) {
    throw std::invalid_argument("exitCurves: bad level");
  }
  if (mcFrames < 1) throw std::invalid_argument("exitCurves: mcFrames must be >= 1");

  ExitCurve demapper, decoder;
  const int m = c.labelBits;
  const std::size_t nSamples = static_cast<std::size_t>(mcFrames) * 2048;

  for (int step = 0; step <= 10; ++step) {
    const double iA = 0.1 * step;
    const double sigmaA = jFunctionInverse(iA);

    // demapper: a-priori on every other level, intrinsic measured at `level`
    StreamRng rng(rngSeed, static_cast<std::uint64_t>(step), Branch::ExitApriori);
    std::vector<double> llr(nSamples);
    Bits truth(nSamples);
    std::vector<double> cdf(c.size());
    double acc = 0.0;
    for (int j = 0; j < c.size(); ++j) {
      acc += c.pmf[j];
      cdf[j] = acc;
    }
    std::vector<double> score(c.size());
    for (std::size_t i = 0; i < nSamples; ++i) {
      const double u = rng.uniform01();
      int x = 0;
      while (x + 1 < c.size() && cdf[x] < u) ++x;
      const double y = c.points[x] + std::sqrt(noiseVar) * rng.gaussian();
      truth[i] = static_cast<std::uint8_t>(c.labelBit(x, level));
      double apriori[32];
      for (int p = 0; p < m; ++p) {
        if (p == level) continue;
        apriori[p] = iA > 0.0 ? gaussianApriori(rng, sigmaA, c.labelBit(x, p)) : 0.0;
      }
      double mx0 = -1e308, mx1 = -1e308;
      for (int j = 0; j < c.size(); ++j) {
        const double d = y - c.points[j];
        double s = std::log(c.pmf[j]) - d * d / (2.0 * noiseVar);
        for (int p = 0; p < m; ++p) {
          if (p == level) continue;
          if (c.labelBit(j, p)) s -= apriori[p];
        }
        score[j] = s;
        if (c.labelBit(j, level)) {
          mx1 = std::max(mx1, s);
        } else {
          mx0 = std::max(mx0, s);
        }
      }
      double s0 = 0.0, s1 = 0.0;
      for (int j = 0; j < c.size(); ++j) {
        if (c.labelBit(j, level)) {
          s1 += std::exp(score[j] - mx1);
        } else {
          s0 += std::exp(score[j] - mx0);
        }
      }
      llr[i] = (mx0 + std::log(s0)) - (mx1 + std::log(s1));
    }
    demapper.ia.push_back(iA);
    demapper.ie.push_back(extrinsicInfo(llr, truth));

    // decoder: Gaussian a-priori into 100 BP iterations on a random coset
    if (code) {
      StreamRng crng(rngSeed ^ 0x5bd1e995, static_cast<std::uint64_t>(step),
                     Branch::ExitApriori);
      const int n = code->numVariables;
      Bits src(n);
      for (int v = 0; v < n; ++v) src[v] = static_cast<std::uint8_t>(crng.nextU64() & 1);
      const Syndrome syn = computeSyndrome(*code, src);
      std::vector<double> prior(n);
      for (int v = 0; v < n; ++v) {
        prior[v] = iA > 0.0 ? gaussianApriori(crng, sigmaA, src[v]) : 0.0;
      }
      DecodeResult dr = syndromeDecode(*code, prior, syn, 100);
      std::vector<double> ext(n);
      for (int v = 0; v < n; ++v) ext[v] = dr.posteriorLlr[v] - prior[v];
      decoder.ia.push_back(iA);
      decoder.ie.push_back(extrinsicInfo(ext, src));
    } else {
      decoder.ia.push_back(iA);
      decoder.ie.push_back(iA);  // rate-one level passes a-priori through
    }
  }
  return {demapper, decoder};
}

bool exitTunnelOpen(const ExitCurve& demapper, const ExitCurve& decoder,
                    double delta) {
  for (double t = 0.0; t <= 1.0 - delta + 1e-12; t += 0.01) {
    const double through = decoder.at(demapper.at(t));
    if (through <= t) return false;
  }
  return true;
}

}  // namespace wiretap
