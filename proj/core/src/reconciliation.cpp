#include "wiretap/reconciliation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace wiretap {

double LevelPlan::disclosurePerSymbol() const {
  double d = 0.0;
  for (const auto& lv : perLevel) {
    if (!lv.rateOne) d += 1.0 - lv.practicalRate;
  }
  return d;
}

int LevelPlan::activeLevels() const {
  int a = 0;
  for (const auto& lv : perLevel) {
    if (!lv.rateOne) ++a;
  }
  return a;
}

LevelPlan planRates(const InfoProfile& profile, const Codebook& codebook,
                    const ExitTunnelSurvey* survey) {
  const int m = static_cast<int>(profile.optimalRates.size());
  LevelPlan plan;
  plan.numLevels = m;
  plan.perLevel.resize(m);

  std::vector<int> active;
  for (int k = 0; k < m; ++k) {
    plan.perLevel[k].optimalRate = profile.optimalRates[k];
    if (profile.optimalRates[k] < 1.0 - kRateOneTolerance) {
      plan.perLevel[k].rateOne = false;
      active.push_back(k);
    }
  }
  if (active.size() > 2) {
    throw std::runtime_error(
        "planRates: more than two active levels; outside the supported regime");
  }
  if (active.empty()) return plan;

  // lowest active level: largest shipped rate not exceeding the optimum
  {
    const int k = active.front();
    const Codebook::Entry* e = codebook.bestAtMost(plan.perLevel[k].optimalRate);
    if (!e) {
      throw std::runtime_error(
          "planRates: no shipped code with rate <= " +
          std::to_string(plan.perLevel[k].optimalRate) + " (SNR too low)");
    }
    plan.perLevel[k].practicalRate = e->rate;
    plan.perLevel[k].codeName = e->name;
  }

  // high-rate level
  if (active.size() == 2) {
    const int k = active.back();
    const double ropt = plan.perLevel[k].optimalRate;
    const Codebook::Entry* pick = nullptr;
    if (survey) {
      for (const auto& e : codebook.entries()) {
        if (e.rate < 0.5 || e.rate > ropt + 1e-12) continue;
        auto it = survey->openByCode.find(e.name);
        if (it == survey->openByCode.end() || !it->second) continue;
        if (!pick || e.rate > pick->rate) pick = &e;
      }
    }
    if (!pick) pick = codebook.highRateAtMost(ropt - kHighRateMargin);
    if (!pick || pick->rate > ropt + 1e-12) {
      // fallback must still respect the per-level optimum; as a last resort
      // take the largest shipped rate below it
      pick = codebook.bestAtMost(ropt);
    }
    if (!pick) throw std::runtime_error("planRates: no usable high-rate code");
    plan.perLevel[k].practicalRate = pick->rate;
    plan.perLevel[k].codeName = pick->name;
  }

  // total disclosure has to cover the total conditional entropy
  double planned = 0.0, optimal = 0.0;
  for (const auto& lv : plan.perLevel) {
    planned += 1.0 - lv.practicalRate;
    optimal += 1.0 - lv.optimalRate;
  }
  if (planned + 1e-9 < optimal) {
    throw std::runtime_error(
        "planRates: planned disclosure below the Slepian-Wolf requirement");
  }
  return plan;
}

namespace {

Bits bitPlane(const Constellation& c, std::span<const int> symbols, int level) {
  Bits b(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    b[i] = static_cast<std::uint8_t>(c.labelBit(symbols[i], level));
  }
  return b;
}

}  // namespace

std::vector<Syndrome> encodeSyndromes(const Constellation& c, const LevelPlan& plan,
                                      std::span<const int> symbols,
                                      const std::vector<const LdpcCode*>& codes) {
  if (static_cast<int>(codes.size()) != plan.numLevels) {
    throw std::invalid_argument("encodeSyndromes: one code slot per level required");
  }
  for (int s : symbols) {
    if (s < 0 || s >= c.size()) {
      throw std::invalid_argument("encodeSyndromes: symbol index out of range");
    }
  }
  std::vector<Syndrome> out(plan.numLevels);
  for (int k = 0; k < plan.numLevels; ++k) {
    if (plan.perLevel[k].rateOne) continue;
    if (!codes[k]) throw std::invalid_argument("encodeSyndromes: missing code");
    if (codes[k]->numVariables != static_cast<int>(symbols.size())) {
      throw std::invalid_argument("encodeSyndromes: code length mismatch");
    }
    out[k] = computeSyndrome(*codes[k], bitPlane(c, symbols, k));
  }
  return out;
}

namespace {

// Per-symbol unnormalized log joint scores log p(y_i, x) for every point.
void jointScores(const Constellation& c, double noiseVar,
                 std::span<const double> y, std::vector<double>& base) {
  const int nc = c.size();
  base.resize(y.size() * nc);
  std::vector<double> logPmf(nc);
  for (int j = 0; j < nc; ++j) logPmf[j] = std::log(c.pmf[j]);
  const double inv2nv = 1.0 / (2.0 * noiseVar);
  for (std::size_t i = 0; i < y.size(); ++i) {
    double* row = &base[i * nc];
    for (int j = 0; j < nc; ++j) {
      const double d = y[i] - c.points[j];
      row[j] = logPmf[j] - d * d * inv2nv;
    }
  }
}

// Demapper step: intrinsic LLR (log P0/P1) of `level` for every symbol, using
// the code extrinsics of the levels marked present. Excluding the target
// level's own extrinsic makes this the SISO update with joint probabilities.
void computeIntrinsics(const Constellation& c, const std::vector<double>& base,
                       std::size_t n, int level,
                       const std::vector<std::vector<double>>& extrinsic,
                       const std::vector<char>& present,
                       std::vector<double>& out) {
  const int nc = c.size();
  const int m = c.labelBits;
  out.resize(n);
  std::vector<int> sideOf(nc);
  for (int j = 0; j < nc; ++j) sideOf[j] = c.labelBit(j, level) ? 1 : 0;

  for (std::size_t i = 0; i < n; ++i) {
    const double* row = &base[i * nc];
    double mx0 = -std::numeric_limits<double>::infinity();
    double mx1 = mx0;
    double score[64];
    for (int j = 0; j < nc; ++j) {
      double s = row[j];
      for (int p = 0; p < m; ++p) {
        if (p == level || !present[p]) continue;
        if (c.labelBit(j, p)) s -= extrinsic[p][i];
      }
      score[j] = s;
      if (sideOf[j]) {
        mx1 = std::max(mx1, s);
      } else {
        mx0 = std::max(mx0, s);
      }
    }
    double s0 = 0.0, s1 = 0.0;
    for (int j = 0; j < nc; ++j) {
      if (sideOf[j]) {
        s1 += std::exp(score[j] - mx1);
      } else {
        s0 += std::exp(score[j] - mx0);
      }
    }
    out[i] = (mx0 + std::log(s0)) - (mx1 + std::log(s1));
  }
}

}  // namespace

ReconciliationResult multistageDecode(
    const Constellation& c, const InfoProfile& profile, double noiseVar,
    const LevelPlan& plan, std::span<const double> observations,
    const std::vector<Syndrome>& syndromes,
    const std::vector<const LdpcCode*>& codes, int sweeps,
    std::span<const int> referenceSymbols, int bpItersPerSweep,
    bool bpRunToFixedPoint) {
  const std::size_t n = observations.size();
  const int m = c.labelBits;
  if (c.size() > 64) throw std::invalid_argument("multistageDecode: constellation too large");
  if (plan.numLevels != m) throw std::invalid_argument("multistageDecode: plan/constellation mismatch");
  if (static_cast<int>(codes.size()) != m || static_cast<int>(syndromes.size()) != m) {
    throw std::invalid_argument("multistageDecode: per-level slots mismatch");
  }
  for (int k = 0; k < m; ++k) {
    if (plan.perLevel[k].rateOne) continue;
    if (!codes[k] || codes[k]->numVariables != static_cast<int>(n)) {
      throw std::invalid_argument("multistageDecode: code length mismatch");
    }
    if (static_cast<int>(syndromes[k].bits.size()) != codes[k]->numChecks) {
      throw std::invalid_argument("multistageDecode: syndrome length mismatch");
    }
  }

  ReconciliationResult res;
  res.levelPosteriorLlr.assign(m, std::vector<double>(n, 0.0));

  std::vector<double> base;
  jointScores(c, noiseVar, observations, base);

  std::vector<std::vector<double>> extrinsic(m, std::vector<double>(n, 0.0));
  std::vector<char> present(m, 0);
  std::vector<Bits> decisions(m, Bits(n, 0));
  std::vector<char> levelOk(m, 0);
  std::vector<double> intrinsic;
  BpWorkspace ws;
  DecodeResult dec;

  auto assemble = [&](std::vector<int>& symbols) {
    symbols.assign(n, -1);
    bool valid = true;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t label = 0;
      for (int k = 0; k < m; ++k) label |= static_cast<std::uint32_t>(decisions[k][i]) << k;
      const int idx = c.indexOfLabel(label);
      symbols[i] = idx;
      if (idx < 0) valid = false;
    }
    return valid;
  };

  bool done = false;
  int sweep = 0;
  for (; sweep < sweeps && !done; ++sweep) {
    for (int k = 0; k < m; ++k) {
      if (plan.perLevel[k].rateOne) continue;
      computeIntrinsics(c, base, n, k, extrinsic, present, intrinsic);
      // at least two message updates so a level whose syndrome already checks
      // still hands a real code extrinsic to the other levels
      ws.run(*codes[k], intrinsic, syndromes[k], bpItersPerSweep, dec,
             !bpRunToFixedPoint, 2);
      for (std::size_t i = 0; i < n; ++i) {
        extrinsic[k][i] = dec.posteriorLlr[i] - intrinsic[i];
      }
      res.levelPosteriorLlr[k] = dec.posteriorLlr;
      decisions[k] = dec.bits;
      levelOk[k] = dec.converged ? 1 : 0;
      present[k] = 1;
    }
    // rate-one levels: demapper decision, code extrinsic stays zero
    for (int k = 0; k < m; ++k) {
      if (!plan.perLevel[k].rateOne) continue;
      computeIntrinsics(c, base, n, k, extrinsic, present, intrinsic);
      for (std::size_t i = 0; i < n; ++i) {
        decisions[k][i] = intrinsic[i] < 0.0 ? 1 : 0;
      }
      res.levelPosteriorLlr[k] = intrinsic;
      levelOk[k] = 1;
      present[k] = 1;
    }
    if (!bpRunToFixedPoint) {  // fixed-point mode runs the full sweep budget
      done = true;
      for (int k = 0; k < m; ++k) {
        if (!levelOk[k]) done = false;
      }
      if (done) {
        std::vector<int> symbols;
        done = assemble(symbols);
      }
    }
  }
  res.levelSweeps = sweep;

  const bool valid = assemble(res.recoveredSymbols);
  bool syndromesOk = valid;
  for (int k = 0; k < m && syndromesOk; ++k) {
    if (plan.perLevel[k].rateOne) continue;
    if (!levelOk[k]) syndromesOk = false;
  }
  if (!referenceSymbols.empty()) {
    res.success = std::equal(referenceSymbols.begin(), referenceSymbols.end(),
                             res.recoveredSymbols.begin(),
                             res.recoveredSymbols.end());
  } else {
    res.success = syndromesOk;
  }

  for (int k = 0; k < m; ++k) {
    if (!plan.perLevel[k].rateOne) res.disclosedBits += codes[k]->numChecks;
  }
  if (plan.verificationHash) res.disclosedBits += 32;

  const double perSymbolDisclosed = static_cast<double>(res.disclosedBits) / n;
  res.measuredEfficiency =
      1.0 - (perSymbolDisclosed - profile.condEntropy) / profile.mutualInfo;
  return res;
}

// ---- wire format ------------------------------------------------------------

namespace {

void putU64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t getU64(std::span<const std::uint8_t> in, std::size_t& pos) {
  if (pos + 8 > in.size()) throw std::invalid_argument("parseSyndromes: truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[pos + i]) << (8 * i);
  pos += 8;
  return v;
}

}  // namespace

std::vector<std::uint8_t> serializeSyndromes(const FrameHeader& header,
                                             const LevelPlan& plan,
                                             const std::vector<Syndrome>& syndromes) {
  std::vector<std::uint8_t> out;
  out.push_back('R');
  out.push_back('S');
  out.push_back('Y');
  out.push_back('N');
  putU64(out, 1);  // version
  putU64(out, header.n);
  out.push_back(header.numLevels);
  for (double r : header.planRates) {
    std::uint64_t bits;
    std::memcpy(&bits, &r, 8);
    putU64(out, bits);
  }
  putU64(out, header.constellationId);
  putU64(out, header.seed);
  for (int k = 0; k < plan.numLevels; ++k) {
    if (plan.perLevel[k].rateOne) continue;
    const Bits& b = syndromes[k].bits;
    putU64(out, b.size());
    std::uint8_t acc = 0;
    int nb = 0;
    for (std::uint8_t bit : b) {
      acc |= static_cast<std::uint8_t>((bit & 1) << nb);
      if (++nb == 8) {
        out.push_back(acc);
        acc = 0;
        nb = 0;
      }
    }
    if (nb) out.push_back(acc);
  }
  return out;
}

ParsedSyndromes parseSyndromes(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  if (bytes.size() < 4 || bytes[0] != 'R' || bytes[1] != 'S' || bytes[2] != 'Y' ||
      bytes[3] != 'N') {
    throw std::invalid_argument("parseSyndromes: bad magic");
  }
  pos = 4;
  const std::uint64_t version = getU64(bytes, pos);
  if (version != 1) throw std::invalid_argument("parseSyndromes: bad version");
  ParsedSyndromes out;
  out.header.n = getU64(bytes, pos);
  if (pos >= bytes.size()) throw std::invalid_argument("parseSyndromes: truncated");
  out.header.numLevels = bytes[pos++];
  out.header.planRates.resize(out.header.numLevels);
  for (int k = 0; k < out.header.numLevels; ++k) {
    const std::uint64_t raw = getU64(bytes, pos);
    std::memcpy(&out.header.planRates[k], &raw, 8);
  }
  out.header.constellationId = getU64(bytes, pos);
  out.header.seed = getU64(bytes, pos);
  out.syndromes.resize(out.header.numLevels);
  for (int k = 0; k < out.header.numLevels; ++k) {
    if (out.header.planRates[k] >= 1.0 - kRateOneTolerance) continue;
    const std::uint64_t len = getU64(bytes, pos);
    const std::size_t nbytes = (len + 7) / 8;
    if (pos + nbytes > bytes.size()) throw std::invalid_argument("parseSyndromes: truncated");
    Bits b(len);
    for (std::uint64_t i = 0; i < len; ++i) {
      b[i] = (bytes[pos + i / 8] >> (i % 8)) & 1;
    }
    out.syndromes[k].bits = std::move(b);
    out.payloadBits += static_cast<long long>(len);
    pos += nbytes;
  }
  return out;
}

}  // namespace wiretap
