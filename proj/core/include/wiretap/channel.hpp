#pragma once

#include <complex>
#include <span>
#include <vector>

#include "wiretap/rng.hpp"

namespace wiretap {

// Fixed-noise Gaussian wiretap pair. The default constructor path enforces the
// degraded-eavesdropper assumption noiseVarWiretap > noiseVarMain; pass
// allowDegradedMain = true to lift it for zero-secrecy protocol experiments.
struct GaussianWiretapParams {
  double noiseVarMain;
  double noiseVarWiretap;
  double powerConstraint = 1.0;

  GaussianWiretapParams(double nm, double nw, bool allowDegradedMain = false);
};

// Variance of the complex Gaussian error on Alice's estimate of Eve's fading
// coefficient, per real dimension. Zero reproduces perfect CSI exactly.
struct CsiNoiseModel {
  double varianceEst = 0.0;
};

// One quasi-static realization. Fading coefficients have unit average power;
// the instantaneous SNRs fold in the channel noise variances.
struct FadingDraw {
  std::complex<double> hMain;
  std::complex<double> hWiretap;
  std::complex<double> hWiretapEstimate;
  double snrMain;             // gamma_M
  double snrWiretap;          // gamma_W
  double snrWiretapEstimate;  // gamma_W as Alice believes it
};

struct InstantCapacities {
  double cMain;
  double cWiretap;
  double cSecrecy;
};

// y[i] = x[i] + n[i], n iid zero-mean Gaussian with the given variance per
// real dimension. Deterministic given the generator state.
std::vector<double> transmitAwgn(std::span<const double> symbols,
                                 double noiseVar, StreamRng& rng);
std::vector<double> transmitAwgn(std::span<const double> symbols,
                                 double noiseVar, std::uint64_t rngSeed);
std::vector<std::complex<double>> transmitAwgn(
    std::span<const std::complex<double>> symbols, double noiseVar,
    StreamRng& rng);

// Rayleigh draw: h ~ CN(0,1) so the instantaneous SNRs are exponential with
// the requested means. The wiretap estimate adds CN noise with csi.varianceEst
// per dimension.
FadingDraw drawFading(double meanSnrMain, double meanSnrWiretap,
                      const CsiNoiseModel& csi, StreamRng& rng);
FadingDraw drawFading(double meanSnrMain, double meanSnrWiretap,
                      const CsiNoiseModel& csi, std::uint64_t rngSeed);

// C_M = log2(1+g_M), C_W = log2(1+g_W), C_s = (C_M - C_W) when g_M > g_W else 0.
InstantCapacities instantaneousCapacities(const FadingDraw& draw);

// Real AWGN channel with unit input power: 0.5 log2(1 + 1/noiseVar).
double gaussianCapacity(double noiseVar);

}  // namespace wiretap
