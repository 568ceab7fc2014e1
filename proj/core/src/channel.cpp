#include "wiretap/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace wiretap {

GaussianWiretapParams::GaussianWiretapParams(double nm, double nw,
                                             bool allowDegradedMain)
    : noiseVarMain(nm), noiseVarWiretap(nw) {
  if (!(nm > 0.0) || !(nw > 0.0)) {
    throw std::invalid_argument("GaussianWiretapParams: noise variances must be > 0");
  }
  if (!allowDegradedMain && !(nw > nm)) {
    throw std::invalid_argument(
        "GaussianWiretapParams: requires noiseVarWiretap > noiseVarMain "
        "(pass allowDegradedMain to lift)");
  }
}

std::vector<double> transmitAwgn(std::span<const double> symbols,
                                 double noiseVar, StreamRng& rng) {
  if (symbols.empty()) throw std::invalid_argument("transmitAwgn: empty input");
  if (noiseVar < 0.0) throw std::invalid_argument("transmitAwgn: negative variance");
  std::vector<double> out(symbols.begin(), symbols.end());
  if (noiseVar == 0.0) return out;
  const double sigma = std::sqrt(noiseVar);
  for (double& v : out) v += sigma * rng.gaussian();
  return out;
}

std::vector<double> transmitAwgn(std::span<const double> symbols,
                                 double noiseVar, std::uint64_t rngSeed) {
  StreamRng rng(rngSeed, 0, Branch::MainNoise);
  return transmitAwgn(symbols, noiseVar, rng);
}

std::vector<std::complex<double>> transmitAwgn(
    std::span<const std::complex<double>> symbols, double noiseVar,
    StreamRng& rng) {
  if (symbols.empty()) throw std::invalid_argument("transmitAwgn: empty input");
  if (noiseVar < 0.0) throw std::invalid_argument("transmitAwgn: negative variance");
  std::vector<std::complex<double>> out(symbols.begin(), symbols.end());
  if (noiseVar == 0.0) return out;
  const double sigma = std::sqrt(noiseVar);
  for (auto& v : out) {
    v += std::complex<double>(sigma * rng.gaussian(), sigma * rng.gaussian());
  }
  return out;
}

FadingDraw drawFading(double meanSnrMain, double meanSnrWiretap,
                      const CsiNoiseModel& csi, StreamRng& rng) {
  if (!(meanSnrMain > 0.0) || !(meanSnrWiretap > 0.0)) {
    throw std::invalid_argument("drawFading: mean SNRs must be > 0");
  }
  if (csi.varianceEst < 0.0) {
    throw std::invalid_argument("drawFading: estimation variance must be >= 0");
  }
  constexpr double kHalfSqrt = 0.7071067811865476;  // per-dimension std of CN(0,1)
  FadingDraw d;
  d.hMain = {kHalfSqrt * rng.gaussian(), kHalfSqrt * rng.gaussian()};
  d.hWiretap = {kHalfSqrt * rng.gaussian(), kHalfSqrt * rng.gaussian()};
  if (csi.varianceEst > 0.0) {
    const double s = std::sqrt(csi.varianceEst);
    d.hWiretapEstimate =
        d.hWiretap + std::complex<double>(s * rng.gaussian(), s * rng.gaussian());
  } else {
    d.hWiretapEstimate = d.hWiretap;
  }
  d.snrMain = std::norm(d.hMain) * meanSnrMain;
  d.snrWiretap = std::norm(d.hWiretap) * meanSnrWiretap;
  d.snrWiretapEstimate = std::norm(d.hWiretapEstimate) * meanSnrWiretap;
  return d;
}

FadingDraw drawFading(double meanSnrMain, double meanSnrWiretap,
                      const CsiNoiseModel& csi, std::uint64_t rngSeed) {
  StreamRng rng(rngSeed, 0, Branch::Fading);
  return drawFading(meanSnrMain, meanSnrWiretap, csi, rng);
}

InstantCapacities instantaneousCapacities(const FadingDraw& draw) {
  InstantCapacities c;
  c.cMain = std::log2(1.0 + draw.snrMain);
  c.cWiretap = std::log2(1.0 + draw.snrWiretap);
  c.cSecrecy = draw.snrMain > draw.snrWiretap ? c.cMain - c.cWiretap : 0.0;
  return c;
}

double gaussianCapacity(double noiseVar) {
  if (!(noiseVar > 0.0)) {
    throw std::invalid_argument("gaussianCapacity: noiseVar must be > 0");
  }
  return 0.5 * std::log2(1.0 + 1.0 / noiseVar);
}

}  // namespace wiretap
