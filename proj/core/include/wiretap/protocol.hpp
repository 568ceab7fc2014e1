#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wiretap/channel.hpp"
#include "wiretap/secrecy.hpp"

namespace wiretap {

// Opportunistic protocol configuration. Averages are over all fading
// realizations with the transmit-set indicator applied (restricted means).
struct ProtocolConfig {
  double secrecyThreshold = 0.0;  // C_s^t
  double mainThreshold = 0.0;     // C_M^t
  double keyRatio = 1.0;          // eta in (0,1]
  double safetyMargin = 0.0;      // alpha = r0/n
  double meanSnrMain = 1.0;       // gammaBar_M
  double meanSnrWiretap = 1.0;    // gammaBar_W
  CsiNoiseModel csi;
  double betaModel = 1.0;         // reconciliation efficiency in the abstract tier

  void validate() const;
};

struct ThroughputReport {
  double secureThroughput = 0.0;      // T_s(eta)
  double commThroughput = 0.0;        // T_c(eta)
  double trueSecureThroughput = 0.0;  // R_s
  double leakedThroughput = 0.0;      // R_l
  double transmitFraction = 0.0;      // P(D)
  double normalization = 0.0;         // log2(1 + gammaBar_M)
  bool commNegative = false;          // threshold-adjustment diagnostic
  double secureStdErr = 0.0;          // Monte-Carlo standard error of T_s
  long long frames = 0;
};

struct TransmitDecision {
  bool transmit = false;
  double cMain = 0.0;
  double cWiretapEstimate = 0.0;
  double cSecrecyEstimate = 0.0;  // from Alice's CSI
  double cSecrecyTrue = 0.0;
};

// Transmit when the estimated secrecy capacity is positive, clears C_s^t, and
// the main capacity strictly clears C_M^t.
TransmitDecision decideTransmit(const FadingDraw& draw, const ProtocolConfig& cfg);

// Perfect-CSI averages of the secure/communication throughput by quadrature
// over the exponential SNR densities, with H(X) modeled as C_M + 2.
ThroughputReport analyticThroughputs(const ProtocolConfig& cfg);

// ---- session machinery ------------------------------------------------------

enum class SessionEventKind {
  OpportunisticFrame,
  Reconciliation,
  PrivacyAmplification,
  KeyUse,
};

struct SessionEvent {
  SessionEventKind kind;
  long long frameIndex = 0;
  FadingDraw draw;
  long long symbols = 0;          // real-dimension source symbols
  bool reconciliationSuccess = false;
  long long disclosedBits = 0;    // ledger delta for this event
  long long wirePayloadBits = 0;  // syndrome payload carried on the wire
  long long wireBytes = 0;        // full serialized exchange
  long long keyBits = 0;          // produced (amplification) or consumed (use)
  double snrMainDb = 0.0;
};

struct SessionTrace {
  std::vector<SessionEvent> events;
  long long totalKeyBits = 0;
  long long totalDisclosedBits = 0;
  long long totalWirePayloadBits = 0;
  Bits decrypted;          // Bob's view of the message after KeyUse
  bool delivered = false;  // decrypted == message
};

// Abstract-tier Monte-Carlo evaluation; fullStack additionally runs the real
// constellation/reconciliation/privacy-amplification pipeline per transmitted
// frame and reports measured quantities in the trace.
std::pair<ThroughputReport, SessionTrace> monteCarloRun(const ProtocolConfig& cfg,
                                                        long long frames,
                                                        int symbolsPerFrame,
                                                        std::uint64_t rngSeed,
                                                        bool fullStack = false);

struct SessionConfig {
  ProtocolConfig protocol;
  int symbolsPerFrame = 1200;  // complex channel uses per frame
  long long maxFrames = 200;
  int safetyExponent = 30;  // s
  int slackBits = 30;       // r_0
  double gridBackoffDb = 1.0;
};

// Runs the full pipeline until enough key bits exist to pad the message, then
// encrypts and checks Bob's decryption. Throws std::runtime_error on key
// starvation.
SessionTrace runSession(const SessionConfig& cfg, const Bits& message,
                        std::uint64_t rngSeed);

}  // namespace wiretap
