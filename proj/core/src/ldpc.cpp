#include "wiretap/ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "wiretap/rng.hpp"

namespace wiretap {

void DegreeDistribution::validate() const {
  auto checkSide = [](const std::vector<std::pair<int, double>>& side,
                      const char* name) {
    if (side.empty()) throw std::invalid_argument(std::string(name) + ": empty");
    double sum = 0.0;
    for (const auto& [d, f] : side) {
      if (d < 1 || f < 0.0) throw std::invalid_argument(std::string(name) + ": bad entry");
      sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument(std::string(name) + ": fractions must sum to 1");
    }
  };
  checkSide(variableEdgeDist, "variableEdgeDist");
  checkSide(checkEdgeDist, "checkEdgeDist");
}

double DegreeDistribution::designRate() const {
  double invV = 0.0, invC = 0.0;
  for (const auto& [d, f] : variableEdgeDist) invV += f / d;
  for (const auto& [d, f] : checkEdgeDist) invC += f / d;
  return 1.0 - invC / invV;
}

double DegreeDistribution::avgVariableDegree() const {
  double invV = 0.0;
  for (const auto& [d, f] : variableEdgeDist) invV += f / d;
  return 1.0 / invV;
}

long long LdpcCode::numEdges() const {
  long long e = 0;
  for (const auto& adj : varAdj) e += static_cast<long long>(adj.size());
  return e;
}

bool LdpcCode::hasFourCycle() const {
  // two variables sharing two checks <=> duplicate (c1,c2) pair over variables
  std::unordered_set<std::uint64_t> seen;
  for (const auto& adj : varAdj) {
    for (std::size_t a = 0; a < adj.size(); ++a) {
      for (std::size_t b = a + 1; b < adj.size(); ++b) {
        const std::uint64_t key =
            (static_cast<std::uint64_t>(adj[a]) << 32) | static_cast<std::uint32_t>(adj[b]);
        if (!seen.insert(key).second) return true;
      }
    }
  }
  return false;
}

namespace {

// largest-remainder apportionment of n nodes onto degree classes with
// node-perspective weights w_d = f_d / d
std::vector<std::pair<int, int>> apportionNodes(
    const std::vector<std::pair<int, double>>& edgeDist, int n) {
  double invSum = 0.0;
  for (const auto& [d, f] : edgeDist) invSum += f / d;
  std::vector<std::pair<int, double>> exact;
  for (const auto& [d, f] : edgeDist) exact.emplace_back(d, n * (f / d) / invSum);
  std::vector<std::pair<int, int>> counts;
  int assigned = 0;
  for (const auto& [d, x] : exact) {
    const int c = static_cast<int>(std::floor(x));
    counts.emplace_back(d, c);
    assigned += c;
  }
  // distribute the remainder by largest fractional part
  std::vector<std::size_t> idx(exact.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return exact[a].second - std::floor(exact[a].second) >
           exact[b].second - std::floor(exact[b].second);
  });
  for (std::size_t i = 0; assigned < n; ++i) {
    counts[idx[i % idx.size()]].second += 1;
    ++assigned;
  }
  return counts;
}

struct BuildAttempt {
  LdpcCode code;
  bool ok = false;
};

BuildAttempt tryBuild(const DegreeDistribution& dist, int n, std::uint64_t seed,
                      std::uint64_t attempt) {
  StreamRng rng(seed, attempt, Branch::GraphConstruction);
  BuildAttempt result;

  // variable degrees
  auto varCounts = apportionNodes(dist.variableEdgeDist, n);
  std::vector<int> varDeg;
  varDeg.reserve(n);
  for (const auto& [d, c] : varCounts) varDeg.insert(varDeg.end(), c, d);
  long long edges = std::accumulate(varDeg.begin(), varDeg.end(), 0LL);

  // check count from the edge budget
  double invC = 0.0;
  for (const auto& [d, f] : dist.checkEdgeDist) invC += f / d;
  const int numChecks = std::max(1, static_cast<int>(std::llround(edges * invC)));

  // per-check target capacities; trim/pad so capacities sum to the edge count
  auto chkCounts = apportionNodes(dist.checkEdgeDist, numChecks);
  std::vector<int> chkCap;
  chkCap.reserve(numChecks);
  for (const auto& [d, c] : chkCounts) chkCap.insert(chkCap.end(), c, d);
  long long capSum = std::accumulate(chkCap.begin(), chkCap.end(), 0LL);
  for (std::size_t i = 0; capSum != edges && !chkCap.empty(); i = (i + 1) % chkCap.size()) {
    if (capSum < edges) {
      ++chkCap[i];
      ++capSum;
    } else if (chkCap[i] > 1) {
      --chkCap[i];
      --capSum;
    }
  }

  LdpcCode code;
  code.numVariables = n;
  code.numChecks = numChecks;
  code.varAdj.assign(n, {});
  code.chkAdj.assign(numChecks, {});

  // fill order: high-degree variables first, while the check-pair graph is
  // still sparse; order randomized inside a degree class
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> degShuffled = varDeg;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.below(i + 1));
    std::swap(degShuffled[i], degShuffled[j]);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return degShuffled[a] > degShuffled[b]; });

  std::vector<int> fill(numChecks, 0);
  std::vector<int> marked(n, -1);  // variables at distance 2 from current v
  std::vector<int> stamp(numChecks, -1);

  for (int oi = 0; oi < n; ++oi) {
    const int v = order[oi];
    const int dv = degShuffled[v];
    for (int e = 0; e < dv; ++e) {
      // mark all variables reachable through v's current checks
      for (int c : code.varAdj[v]) {
        for (int u : code.chkAdj[c]) marked[u] = v;
      }
      auto allowed = [&](int c) {
        if (stamp[c] == v) return false;  // already a neighbor
        for (int u : code.chkAdj[c]) {
          if (marked[u] == v) return false;  // would close a 4-cycle
        }
        return true;
      };
      // sample open checks first (keeps the check-degree profile), then any
      int chosen = -1;
      int bestRoom = -1;
      for (int trial = 0; trial < 96; ++trial) {
        const int c = static_cast<int>(rng.below(numChecks));
        const int room = chkCap[c] - fill[c];
        if (room <= 0 || !allowed(c)) continue;
        if (room > bestRoom) {
          bestRoom = room;
          chosen = c;
        }
        if (bestRoom >= 2) break;
      }
      if (chosen < 0) {
        // deterministic sweep: first open+allowed, else any allowed
        for (int c = 0; c < numChecks && chosen < 0; ++c) {
          if (fill[c] < chkCap[c] && allowed(c)) chosen = c;
        }
        for (int c = 0; c < numChecks && chosen < 0; ++c) {
          if (allowed(c)) chosen = c;
        }
      }
      if (chosen < 0) return result;  // retry with a fresh permutation
      code.varAdj[v].push_back(chosen);
      code.chkAdj[chosen].push_back(v);
      stamp[chosen] = v;
      ++fill[chosen];
    }
  }

  for (auto& adj : code.varAdj) std::sort(adj.begin(), adj.end());
  for (auto& adj : code.chkAdj) std::sort(adj.begin(), adj.end());
  result.code = std::move(code);
  result.ok = true;
  return result;
}

}  // namespace

LdpcCode buildCode(const DegreeDistribution& dist, int n, std::uint64_t seed) {
  dist.validate();
  if (n < 16) throw std::invalid_argument("buildCode: n must be >= 16");
  constexpr int kRetries = 24;
  for (int attempt = 0; attempt < kRetries; ++attempt) {
    BuildAttempt r = tryBuild(dist, n, seed, static_cast<std::uint64_t>(attempt));
    if (r.ok) return std::move(r.code);
  }
  throw std::runtime_error(
      "buildCode: could not place all edges without 4-cycles within the retry budget");
}

Syndrome computeSyndrome(const LdpcCode& code, const Bits& bits) {
  if (static_cast<int>(bits.size()) != code.numVariables) {
    throw std::invalid_argument("computeSyndrome: bit length mismatch");
  }
  Syndrome s;
  s.bits.assign(code.numChecks, 0);
  for (int j = 0; j < code.numChecks; ++j) {
    std::uint8_t acc = 0;
    for (int v : code.chkAdj[j]) acc ^= bits[v];
    s.bits[j] = acc;
  }
  return s;
}

void BpWorkspace::bind(const LdpcCode& code) {
  if (cached_ == &code) return;
  cached_ = &code;
  const long long e = code.numEdges();
  varToChk_.resize(e);
  chkToVar_.resize(e);
  tanhBuf_.resize(e);
  varOffsets_.assign(code.numVariables + 1, 0);
  edgeVar_.resize(e);
  chkOffsets_.assign(code.numChecks + 1, 0);
  edgeOfVar_.resize(e);

  // check-major edge ids so the check pass walks contiguously
  for (int j = 0; j < code.numChecks; ++j) {
    chkOffsets_[j + 1] = chkOffsets_[j] + static_cast<int>(code.chkAdj[j].size());
  }
  std::vector<int> cursor(chkOffsets_.begin(), chkOffsets_.end() - 1);
  int ve = 0;
  for (int v = 0; v < code.numVariables; ++v) {
    varOffsets_[v + 1] = varOffsets_[v] + static_cast<int>(code.varAdj[v].size());
    for (int c : code.varAdj[v]) {
      const int eid = cursor[c]++;
      edgeVar_[eid] = v;
      edgeOfVar_[ve++] = eid;
    }
  }
}

void BpWorkspace::run(const LdpcCode& code, std::span<const double> priorLlr,
                      const Syndrome& syn, int maxIter, DecodeResult& out,
                      bool stopOnConverged, int minIter) {
  if (static_cast<int>(priorLlr.size()) != code.numVariables) {
    throw std::invalid_argument("syndromeDecode: prior length mismatch");
  }
  if (static_cast<int>(syn.bits.size()) != code.numChecks) {
    throw std::invalid_argument("syndromeDecode: syndrome length mismatch");
  }
  bind(code);
  constexpr double kClamp = 30.0;
  const int n = code.numVariables;

  out.bits.assign(n, 0);
  out.posteriorLlr.assign(priorLlr.begin(), priorLlr.end());
  out.converged = false;
  out.iterations = 0;

  // messages start at the intrinsic values
  for (int v = 0, ei = 0; v < n; ++v) {
    for (std::size_t k = 0; k < code.varAdj[v].size(); ++k, ++ei) {
      varToChk_[edgeOfVar_[ei]] = priorLlr[v];
    }
  }

  auto decideAndCheck = [&]() {
    for (int v = 0; v < n; ++v) out.bits[v] = out.posteriorLlr[v] < 0.0 ? 1 : 0;
    for (int j = 0; j < code.numChecks; ++j) {
      std::uint8_t acc = 0;
      for (int v : code.chkAdj[j]) acc ^= out.bits[v];
      if (acc != syn.bits[j]) return false;
    }
    return true;
  };

  for (int iter = 0; iter <= maxIter; ++iter) {
    out.converged = decideAndCheck();
    out.iterations = iter;
    if (out.converged && stopOnConverged && iter >= minIter) return;
    if (iter == maxIter) break;

    // check pass: prefix/suffix tanh products, no divisions
    for (int j = 0; j < code.numChecks; ++j) {
      const int lo = chkOffsets_[j];
      const int hi = chkOffsets_[j + 1];
      const double sgn = syn.bits[j] ? -1.0 : 1.0;
      for (int e = lo; e < hi; ++e) {
        const double m = std::clamp(varToChk_[e], -kClamp, kClamp);
        tanhBuf_[e] = std::tanh(0.5 * m);
      }
      double prefix = 1.0;
      for (int e = lo; e < hi; ++e) {
        chkToVar_[e] = prefix;
        prefix *= tanhBuf_[e];
      }
      double suffix = 1.0;
      for (int e = hi - 1; e >= lo; --e) {
        const double p = chkToVar_[e] * suffix;
        suffix *= tanhBuf_[e];
        const double t = std::clamp(p, -0.9999999999999998, 0.9999999999999998);
        chkToVar_[e] = sgn * 2.0 * std::atanh(t);
      }
    }

    // variable pass and posterior accumulation
    for (int v = 0, ei = 0; v < n; ++v) {
      const int deg = static_cast<int>(code.varAdj[v].size());
      double sum = priorLlr[v];
      for (int k = 0; k < deg; ++k) sum += chkToVar_[edgeOfVar_[ei + k]];
      out.posteriorLlr[v] = sum;
      for (int k = 0; k < deg; ++k) {
        const int eid = edgeOfVar_[ei + k];
        varToChk_[eid] = sum - chkToVar_[eid];
      }
      ei += deg;
    }
  }
}

DecodeResult syndromeDecode(const LdpcCode& code, std::span<const double> priorLlr,
                            const Syndrome& syn, int maxIter, bool stopOnConverged,
                            int minIter) {
  BpWorkspace ws;
  DecodeResult out;
  ws.run(code, priorLlr, syn, maxIter, out, stopOnConverged, minIter);
  return out;
}

}  // namespace wiretap
