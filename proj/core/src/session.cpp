#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "wiretap/constellation.hpp"
#include "wiretap/protocol.hpp"
#include "wiretap/reconciliation.hpp"

namespace wiretap {

namespace {

// Design points the full-stack tier can transmit at. A frame picks the largest
// point at or below its instantaneous SNR minus the backoff; frames below the
// lowest point are skipped, which is the SNR floor the reconciliation method
// imposes.
constexpr double kGridDb[] = {2.0, 7.0, 10.0, 13.0, 20.0};

struct GridPoint {
  double snrDb = 0.0;
  double noiseVar = 0.0;
  Constellation constellation;
  InfoProfile designProfile;
  LevelPlan plan;
};

class DesignCache {
 public:
  static DesignCache& instance() {
    static DesignCache cache;
    return cache;
  }

  const GridPoint* pointAtOrBelow(double snrDb) {
    int best = -1;
    for (int i = 0; i < static_cast<int>(std::size(kGridDb)); ++i) {
      if (kGridDb[i] <= snrDb) best = i;
    }
    if (best < 0) return nullptr;
    return &point(best);
  }

  const GridPoint& point(int idx) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = points_.find(idx);
    if (it == points_.end()) {
      GridPoint gp;
      gp.snrDb = kGridDb[idx];
      gp.noiseVar = std::pow(10.0, -kGridDb[idx] / 10.0);
      gp.constellation = optimizeConstellation(gp.noiseVar);
      gp.designProfile = infoProfile(gp.constellation, gp.noiseVar);
      gp.plan = planRates(gp.designProfile, Codebook::shipped());
      it = points_.emplace(idx, std::move(gp)).first;
    }
    return it->second;
  }

  // codes are public protocol infrastructure: their construction seed is a
  // fixed constant, not the session seed
  const std::vector<const LdpcCode*>& codes(const GridPoint& gp, int n) {
    std::lock_guard<std::mutex> lock(mu_);
    const std::uint64_t key =
        (static_cast<std::uint64_t>(gp.snrDb * 16.0) << 32) | static_cast<std::uint32_t>(n);
    auto it = codeSets_.find(key);
    if (it == codeSets_.end()) {
      auto owned = std::make_unique<CodeSet>();
      owned->views.resize(gp.plan.numLevels, nullptr);
      owned->codes.reserve(gp.plan.numLevels);  // views point into this vector
      for (int k = 0; k < gp.plan.numLevels; ++k) {
        if (gp.plan.perLevel[k].rateOne) continue;
        const auto* entry = Codebook::shipped().byName(gp.plan.perLevel[k].codeName);
        owned->codes.push_back(
            buildCode(entry->dist, n, 0x57695265u + 131 * k + static_cast<unsigned>(n)));
        owned->views[k] = &owned->codes.back();
      }
      it = codeSets_.emplace(key, std::move(owned)).first;
    }
    return it->second->views;
  }

 private:
  struct CodeSet {
    std::vector<LdpcCode> codes;
    std::vector<const LdpcCode*> views;
  };
  std::mutex mu_;
  std::map<int, GridPoint> points_;
  std::map<std::uint64_t, std::unique_ptr<CodeSet>> codeSets_;
};

Bits levelMajorBits(const Constellation& c, const std::vector<int>& symbols) {
  const int m = c.labelBits;
  Bits s;
  s.reserve(symbols.size() * m);
  for (int k = 0; k < m; ++k) {
    for (int sym : symbols) {
      s.push_back(static_cast<std::uint8_t>(c.labelBit(sym, k)));
    }
  }
  return s;
}

std::vector<int> drawSymbols(const Constellation& c, int n, StreamRng& rng) {
  std::vector<double> cdf(c.size());
  double acc = 0.0;
  for (int j = 0; j < c.size(); ++j) {
    acc += c.pmf[j];
    cdf[j] = acc;
  }
  std::vector<int> sym(n);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    int x = 0;
    while (x + 1 < c.size() && cdf[x] < u) ++x;
    sym[i] = x;
  }
  return sym;
}

struct PendingFrame {
  long long frameIndex;
  FadingDraw draw;
  const GridPoint* grid;
  std::vector<int> symbols;       // Alice's 2L real-dimension symbols
  std::vector<double> observed;   // Bob's matched-filter outputs
};

struct KeyPair {
  SecretKey alice;
  SecretKey bob;
  bool secretUnderTrueCsi = true;
};

}  // namespace

SessionTrace runSession(const SessionConfig& cfg, const Bits& message,
                        std::uint64_t rngSeed) {
  cfg.protocol.validate();
  if (cfg.protocol.keyRatio != 1.0) {
    throw std::invalid_argument(
        "runSession: only one-time-pad sessions (keyRatio = 1) are supported");
  }
  if (message.empty()) throw std::invalid_argument("runSession: empty message");

  DesignCache& cache = DesignCache::instance();
  SessionTrace trace;
  std::vector<PendingFrame> pending;
  std::vector<KeyPair> keys;

  const int n = 2 * cfg.symbolsPerFrame;  // two real sub-frames per complex frame
  const double alpha = cfg.protocol.safetyMargin;

  auto reconcilePending = [&]() {
    for (PendingFrame& pf : pending) {
      const GridPoint& gp = *pf.grid;
      const auto& codes = cache.codes(gp, n);
      const std::vector<Syndrome> syndromes =
          encodeSyndromes(gp.constellation, gp.plan, pf.symbols, codes);
      FrameHeader header;
      header.n = static_cast<std::uint64_t>(n);
      header.numLevels = static_cast<std::uint8_t>(gp.plan.numLevels);
      for (const auto& lv : gp.plan.perLevel) header.planRates.push_back(lv.practicalRate);
      header.constellationId = static_cast<std::uint64_t>(gp.snrDb * 1000.0);
      header.seed = rngSeed;
      const std::vector<std::uint8_t> wire = serializeSyndromes(header, gp.plan, syndromes);
      const ParsedSyndromes parsed = parseSyndromes(wire);

      const double noiseVarMain = 1.0 / pf.draw.snrMain;
      const InfoProfile actualProfile = infoProfile(gp.constellation, noiseVarMain);
      ReconciliationResult rec =
          multistageDecode(gp.constellation, actualProfile, noiseVarMain, gp.plan,
                           pf.observed, parsed.syndromes, codes, 10, pf.symbols);

      SessionEvent ev;
      ev.kind = SessionEventKind::Reconciliation;
      ev.frameIndex = pf.frameIndex;
      ev.draw = pf.draw;
      ev.symbols = n;
      ev.reconciliationSuccess = rec.success;
      ev.disclosedBits = rec.disclosedBits;
      ev.wirePayloadBits = parsed.payloadBits;
      ev.wireBytes = static_cast<long long>(wire.size());
      trace.events.push_back(ev);
      trace.totalDisclosedBits += rec.disclosedBits;
      trace.totalWirePayloadBits += parsed.payloadBits;
      if (!rec.success) continue;

      // Alice budgets the leak with her own CSI of Eve's channel.
      const double noiseVarEveEst = 1.0 / std::max(pf.draw.snrWiretapEstimate, 1e-9);
      const InfoProfile eveProfile = infoProfile(gp.constellation, noiseVarEveEst);
      LeakageLedger ledger;
      ledger.nSymbols = n;
      ledger.sourceEntropyBits = n * gp.constellation.entropyBits();
      ledger.eavesdropperMutualInfoBits = n * eveProfile.mutualInfo;
      ledger.reconciliationBits = rec.disclosedBits;
      ledger.safetyExponent = cfg.safetyExponent;
      ledger.slackBits = std::max<long long>(
          cfg.slackBits, static_cast<long long>(std::llround(alpha * n)));
      ledger.infoMainPerSymbol = actualProfile.mutualInfo;
      ledger.condEntropyMainPerSymbol = actualProfile.condEntropy;
      if (ledger.keyLengthBits() < 1) continue;

      const Bits aliceS = levelMajorBits(gp.constellation, pf.symbols);
      const Bits bobS = levelMajorBits(gp.constellation, rec.recoveredSymbols);
      auto [aliceKey, hashSeed] = privacyAmplify(
          aliceS, ledger, rngSeed ^ (0x9e3779b97f4a7c15ULL * (pf.frameIndex + 1)));
      SecretKey bobKey;
      bobKey.bits = gfMultiplyHash(hashSeed, bobS);
      bobKey.provenance = ledger;
      bobKey.uncertaintyLowerBound = aliceKey.uncertaintyLowerBound;
      bobKey.boundConfidence = aliceKey.boundConfidence;

      const double cWiretapTrue = std::log2(1.0 + pf.draw.snrWiretap);
      const double cWiretapEst = std::log2(1.0 + pf.draw.snrWiretapEstimate);
      KeyPair kp{std::move(aliceKey), std::move(bobKey),
                 imperfectCsiSecret(cWiretapTrue, cWiretapEst, alpha)};

      SessionEvent amp;
      amp.kind = SessionEventKind::PrivacyAmplification;
      amp.frameIndex = pf.frameIndex;
      amp.draw = pf.draw;
      amp.symbols = n;
      amp.keyBits = static_cast<long long>(kp.alice.bits.size());
      amp.wireBytes = static_cast<long long>(hashSeed.serialize().size());
      trace.events.push_back(amp);
      trace.totalKeyBits += amp.keyBits;
      keys.push_back(std::move(kp));
    }
    pending.clear();
  };

  auto tryDeliver = [&]() {
    for (KeyPair& kp : keys) {
      if (kp.alice.consumed > 0 || kp.alice.bits.size() < message.size()) continue;
      const Bits ciphertext = oneTimePad(kp.alice, message);
      const Bits decrypted = oneTimePad(kp.bob, ciphertext);
      SessionEvent use;
      use.kind = SessionEventKind::KeyUse;
      use.keyBits = static_cast<long long>(message.size());
      trace.events.push_back(use);
      trace.decrypted = decrypted;
      trace.delivered = decrypted == message;
      return true;
    }
    return false;
  };

  bool delivered = false;
  for (long long frame = 0; frame < cfg.maxFrames && !delivered; ++frame) {
    StreamRng fadingRng(rngSeed, static_cast<std::uint64_t>(frame), Branch::Fading);
    const FadingDraw draw = drawFading(cfg.protocol.meanSnrMain,
                                       cfg.protocol.meanSnrWiretap,
                                       cfg.protocol.csi, fadingRng);
    const TransmitDecision dec = decideTransmit(draw, cfg.protocol);
    const GridPoint* gp =
        dec.transmit
            ? cache.pointAtOrBelow(10.0 * std::log10(draw.snrMain) - cfg.gridBackoffDb)
            : nullptr;
    if (dec.transmit && gp) {
      StreamRng sourceRng(rngSeed, static_cast<std::uint64_t>(frame), Branch::Source);
      StreamRng noiseRng(rngSeed, static_cast<std::uint64_t>(frame), Branch::MainNoise);
      PendingFrame pf;
      pf.frameIndex = frame;
      pf.draw = draw;
      pf.grid = gp;
      pf.symbols = drawSymbols(gp->constellation, n, sourceRng);
      std::vector<double> tx(n);
      for (int i = 0; i < n; ++i) tx[i] = gp->constellation.points[pf.symbols[i]];
      pf.observed = transmitAwgn(tx, 1.0 / draw.snrMain, noiseRng);

      SessionEvent ev;
      ev.kind = SessionEventKind::OpportunisticFrame;
      ev.frameIndex = frame;
      ev.draw = draw;
      ev.symbols = n;
      ev.snrMainDb = 10.0 * std::log10(draw.snrMain);
      trace.events.push_back(ev);
      pending.push_back(std::move(pf));
    } else {
      // channel dropped below threshold: reconcile and distill what we hold
      if (!pending.empty()) {
        reconcilePending();
        delivered = tryDeliver();
      }
    }
  }
  if (!delivered) {
    reconcilePending();
    delivered = tryDeliver();
  }
  if (!delivered) {
    throw std::runtime_error(
        "runSession: key starvation (frame budget exhausted before the key "
        "reservoir could pad the message)");
  }
  return trace;
}

}  // namespace wiretap
