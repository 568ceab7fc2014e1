#include "wiretap/protocol.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "wiretap/numeric.hpp"

namespace wiretap {

void ProtocolConfig::validate() const {
  if (!(meanSnrMain > 0.0) || !(meanSnrWiretap > 0.0)) {
    throw std::invalid_argument("ProtocolConfig: mean SNRs must be > 0");
  }
  if (!(keyRatio > 0.0) || keyRatio > 1.0) {
    throw std::invalid_argument("ProtocolConfig: keyRatio must be in (0,1]");
  }
  if (safetyMargin < 0.0 || secrecyThreshold < 0.0 || mainThreshold < 0.0) {
    throw std::invalid_argument("ProtocolConfig: thresholds must be >= 0");
  }
  if (safetyMargin > 0.0 && secrecyThreshold < safetyMargin) {
    throw std::invalid_argument(
        "ProtocolConfig: secrecyThreshold must be >= safetyMargin when margin > 0");
  }
  if (betaModel <= 0.0 || betaModel > 1.0) {
    throw std::invalid_argument("ProtocolConfig: betaModel must be in (0,1]");
  }
}

TransmitDecision decideTransmit(const FadingDraw& draw, const ProtocolConfig& cfg) {
  TransmitDecision d;
  d.cMain = std::log2(1.0 + draw.snrMain);
  d.cWiretapEstimate = std::log2(1.0 + draw.snrWiretapEstimate);
  d.cSecrecyEstimate =
      draw.snrMain > draw.snrWiretapEstimate ? d.cMain - d.cWiretapEstimate : 0.0;
  const double cWiretapTrue = std::log2(1.0 + draw.snrWiretap);
  d.cSecrecyTrue = draw.snrMain > draw.snrWiretap ? d.cMain - cWiretapTrue : 0.0;
  // the zero-secrecy region never transmits, even at threshold zero
  d.transmit = d.cSecrecyEstimate > 0.0 &&
               d.cSecrecyEstimate >= cfg.secrecyThreshold &&
               d.cMain > cfg.mainThreshold;
  return d;
}

namespace {

// expectation over w ~ Exp(mean) via the inverse-CDF substitution
// w = -mean ln(u); adaptive Simpson on u in (0,1), stable for any mean
double exponentialMean(const std::function<double(double)>& g, double mean,
                       double tolRel) {
  auto simpson = [&](int n) {
    const double h = 1.0 / n;
    auto f = [&](double u) { return g(-mean * std::log(u)); };
    double s = f(h * 1e-6) + f(1.0 - h * 1e-6);
    for (int i = 1; i < n; ++i) s += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
  };
  double prev = simpson(256);
  for (int n = 512; n <= 65536; n *= 2) {
    const double cur = simpson(n);
    if (std::abs(cur - prev) <= tolRel * (std::abs(cur) + 1e-12)) return cur;
    prev = cur;
  }
  return prev;
}

// integral_a^inf log2(1+g) Exp(gBar) dg
double tailCapacityMean(double a, double gBar) {
  const double ea = std::exp(-a / gBar);
  const double e1 = expIntegralE1((1.0 + a) / gBar);
  return std::log2(1.0 + a) * ea + std::exp(1.0 / gBar) * e1 / std::log(2.0);
}

}  // namespace

ThroughputReport analyticThroughputs(const ProtocolConfig& cfg) {
  cfg.validate();
  if (cfg.csi.varianceEst != 0.0) {
    throw std::invalid_argument("analyticThroughputs: perfect-CSI mode only");
  }
  const double gm = cfg.meanSnrMain;
  const double gw = cfg.meanSnrWiretap;
  const double beta = cfg.betaModel;
  const double eta = cfg.keyRatio;
  const double csFactor = std::exp2(cfg.secrecyThreshold);
  const double gammaMainFloor = std::exp2(cfg.mainThreshold) - 1.0;

  // lower boundary of the transmit set in gamma_M for a given gamma_W
  auto lowerBound = [&](double w) {
    return std::max(csFactor * (1.0 + w) - 1.0, std::max(w, gammaMainFloor));
  };
  const double tol = 1e-9;

  const double probD = exponentialMean(
      [&](double w) { return std::exp(-lowerBound(w) / gm); }, gw, tol);
  const double cMainOnD = exponentialMean(
      [&](double w) { return tailCapacityMean(lowerBound(w), gm); }, gw, tol);
  const double cWiretapOnD = exponentialMean(
      [&](double w) { return std::log2(1.0 + w) * std::exp(-lowerBound(w) / gm); },
      gw, tol);
  const double cMainAll = tailCapacityMean(0.0, gm);

  ThroughputReport rep;
  rep.secureThroughput = (beta * cMainOnD - cWiretapOnD) / eta;
  rep.trueSecureThroughput = rep.secureThroughput;  // perfect CSI
  rep.leakedThroughput = 0.0;
  // T_c = <C_M>_Dbar - <H - beta C_M>_D - <H>_D - T_s with H = C_M + 2
  rep.commThroughput = (cMainAll - cMainOnD) -
                       ((1.0 - beta) * cMainOnD + 2.0 * probD) -
                       (cMainOnD + 2.0 * probD) - rep.secureThroughput;
  rep.commNegative = rep.commThroughput < 0.0;
  rep.transmitFraction = probD;
  rep.normalization = std::log2(1.0 + gm);
  return rep;
}

std::pair<ThroughputReport, SessionTrace> monteCarloRun(const ProtocolConfig& cfg,
                                                        long long frames,
                                                        int symbolsPerFrame,
                                                        std::uint64_t rngSeed,
                                                        bool fullStack) {
  cfg.validate();
  if (frames < 1) throw std::invalid_argument("monteCarloRun: frames must be >= 1");

  const double eta = cfg.keyRatio;
  const double alpha = cfg.safetyMargin;
  const double beta = cfg.betaModel;

  double tsSum = 0.0, tsSumSq = 0.0;
  double rsSum = 0.0, rlSum = 0.0;
  double cMainOffSum = 0.0, cMainOnSum = 0.0, probDCount = 0.0;
  SessionTrace trace;

  for (long long frame = 0; frame < frames; ++frame) {
    StreamRng rng(rngSeed, static_cast<std::uint64_t>(frame), Branch::Fading);
    const FadingDraw draw = drawFading(cfg.meanSnrMain, cfg.meanSnrWiretap, cfg.csi, rng);
    const TransmitDecision d = decideTransmit(draw, cfg);
    double x = 0.0;
    if (d.transmit) {
      probDCount += 1.0;
      cMainOnSum += d.cMain;
      x = (d.cSecrecyEstimate - alpha) / eta;
      tsSum += x;
      if (d.cSecrecyEstimate - d.cSecrecyTrue <= alpha) {
        rsSum += x;
      } else {
        rlSum += x;
      }
      if (fullStack) {
        SessionEvent ev;
        ev.kind = SessionEventKind::OpportunisticFrame;
        ev.frameIndex = frame;
        ev.draw = draw;
        ev.symbols = 2LL * symbolsPerFrame;
        ev.snrMainDb = 10.0 * std::log10(draw.snrMain);
        trace.events.push_back(ev);
      }
    } else {
      cMainOffSum += d.cMain;
    }
    tsSumSq += x * x;
  }

  const double n = static_cast<double>(frames);
  ThroughputReport rep;
  rep.frames = frames;
  rep.secureThroughput = tsSum / n;
  rep.trueSecureThroughput = rsSum / n;
  rep.leakedThroughput = rlSum / n;
  rep.transmitFraction = probDCount / n;
  rep.normalization = std::log2(1.0 + cfg.meanSnrMain);
  const double meanSq = tsSumSq / n;
  const double var = std::max(0.0, meanSq - rep.secureThroughput * rep.secureThroughput);
  rep.secureStdErr = std::sqrt(var / n);
  rep.commThroughput = cMainOffSum / n -
                       ((1.0 - beta) * cMainOnSum / n + 2.0 * rep.transmitFraction) -
                       (cMainOnSum / n + 2.0 * rep.transmitFraction) -
                       rep.secureThroughput;
  rep.commNegative = rep.commThroughput < 0.0;
  return {rep, std::move(trace)};
}

}  // namespace wiretap
