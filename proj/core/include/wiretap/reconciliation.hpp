#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wiretap/codebook.hpp"
#include "wiretap/constellation.hpp"
#include "wiretap/ldpc.hpp"

namespace wiretap {

// Per-level code assignment. Levels whose optimal rate is 1 (within 1e-3)
// carry the rate-one marker: no syndrome is sent and the demapper resolves the
// bits on its own.
struct LevelPlan {
  struct Level {
    double optimalRate = 1.0;
    double practicalRate = 1.0;
    bool rateOne = true;
    std::string codeName;  // codebook entry, empty for rate-one levels
  };
  int numLevels = 0;
  std::vector<Level> perLevel;
  bool verificationHash = false;  // optional 32-bit check, counted when on

  // planned syndrome bits per source symbol
  double disclosurePerSymbol() const;
  int activeLevels() const;
};

inline constexpr double kRateOneTolerance = 1e-3;

// Margin subtracted from the high-rate level's optimal rate when no EXIT
// survey is available.
inline constexpr double kHighRateMargin = 0.05;

// Outcome of an EXIT tunnel survey over candidate high-rate codes.
struct ExitTunnelSurvey {
  std::map<std::string, bool> openByCode;
};

// Assign practical rates: the lowest active level takes the largest shipped
// rate at most its optimal rate; the high-rate level follows the EXIT survey
// when given, else the margin rule with a fallback to the smallest shipped
// high-rate code. Throws when the SNR is too low for the shipped set or more
// than two levels are active.
LevelPlan planRates(const InfoProfile& profile, const Codebook& codebook,
                    const ExitTunnelSurvey* survey = nullptr);

std::vector<Syndrome> encodeSyndromes(const Constellation& c, const LevelPlan& plan,
                                      std::span<const int> symbols,
                                      const std::vector<const LdpcCode*>& codes);

struct ReconciliationResult {
  std::vector<int> recoveredSymbols;
  bool success = false;
  long long disclosedBits = 0;
  double measuredEfficiency = 0.0;
  int levelSweeps = 0;
  // per level, per symbol log P[b=0]/P[b=1] after the final decode
  std::vector<std::vector<double>> levelPosteriorLlr;
};

// Multistage decoding with inter-level SISO updates: levels are decoded in
// order inside a sweep, each level's intrinsic recomputed from the code
// extrinsics of every level already decoded, until every syndrome checks or
// the sweep budget runs out. Deterministic.
// bpRunToFixedPoint disables the per-level early stop so posteriors reach the
// message-passing fixed point (exactness oracles on tree-structured toys).
ReconciliationResult multistageDecode(
    const Constellation& c, const InfoProfile& profile, double noiseVar,
    const LevelPlan& plan, std::span<const double> observations,
    const std::vector<Syndrome>& syndromes,
    const std::vector<const LdpcCode*>& codes, int sweeps,
    std::span<const int> referenceSymbols = {}, int bpItersPerSweep = 100,
    bool bpRunToFixedPoint = false);

// ---- syndrome wire format -------------------------------------------------

struct FrameHeader {
  std::uint64_t n = 0;
  std::uint8_t numLevels = 0;
  std::vector<double> planRates;
  std::uint64_t constellationId = 0;
  std::uint64_t seed = 0;
};

// Frame header plus one length-prefixed bit vector per coded level. The
// payload bit count is exactly what the leakage ledger books as disclosed.
std::vector<std::uint8_t> serializeSyndromes(const FrameHeader& header,
                                             const LevelPlan& plan,
                                             const std::vector<Syndrome>& syndromes);
struct ParsedSyndromes {
  FrameHeader header;
  std::vector<Syndrome> syndromes;
  long long payloadBits = 0;
};
ParsedSyndromes parseSyndromes(std::span<const std::uint8_t> bytes);

// ---- EXIT machinery --------------------------------------------------------

struct ExitCurve {
  std::vector<double> ia;
  std::vector<double> ie;
  double at(double x) const;  // linear interpolation
};

// Demapper transfer (Gaussian-modeled a-priori on all other levels) and
// 100-iteration decoder transfer for one level. A null code means a rate-one
// level; its decoder curve is the identity.
std::pair<ExitCurve, ExitCurve> exitCurves(const Constellation& c, double noiseVar,
                                           int level, const LdpcCode* code,
                                           int mcFrames, std::uint64_t rngSeed);

// Tunnel open <=> the composed trajectory T_c(T_d(t)) stays above t on
// [0, 1-delta].
bool exitTunnelOpen(const ExitCurve& demapper, const ExitCurve& decoder,
                    double delta = 0.02);

// Mutual information content of the symmetric Gaussian LLR family and its
// inverse (the J function), by quadrature.
double jFunction(double sigma);
double jFunctionInverse(double info);

}  // namespace wiretap
