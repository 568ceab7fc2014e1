#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wiretap {

using Bits = std::vector<std::uint8_t>;

// Edge-perspective degree distributions (fractions of edges attached to nodes
// of each degree).
struct DegreeDistribution {
  std::vector<std::pair<int, double>> variableEdgeDist;
  std::vector<std::pair<int, double>> checkEdgeDist;

  void validate() const;           // fractions sum to 1 per side
  double designRate() const;       // 1 - (sum rho_d/d)/(sum lambda_d/d)
  double avgVariableDegree() const;
};

// Sparse bipartite parity-check graph. Adjacency is stored from both sides
// with sorted neighbor lists; construction guarantees no repeated edges and no
// 4-cycles.
struct LdpcCode {
  int numVariables = 0;
  int numChecks = 0;
  std::vector<std::vector<int>> varAdj;  // per variable: check indices
  std::vector<std::vector<int>> chkAdj;  // per check: variable indices

  double rate() const {
    return 1.0 - static_cast<double>(numChecks) / numVariables;
  }
  long long numEdges() const;
  bool hasFourCycle() const;  // exhaustive scan, test support
};

// Random graph matching the distribution within integer rounding, built
// greedily while avoiding 2- and 4-cycles. Deterministic given the seed.
// Throws std::runtime_error when no 4-cycle-free placement is found within the
// retry budget.
LdpcCode buildCode(const DegreeDistribution& dist, int n, std::uint64_t seed);

struct Syndrome {
  Bits bits;  // one per check
};

Syndrome computeSyndrome(const LdpcCode& code, const Bits& bits);

struct DecodeResult {
  Bits bits;
  std::vector<double> posteriorLlr;  // log P[b=0]/P[b=1]
  bool converged = false;
  int iterations = 0;
};

// Syndrome-conditioned belief propagation, flooding schedule. Prior LLRs use
// the log P[b=0]/P[b=1] convention (positive favors 0); check messages carry
// the (1-2s) syndrome sign. Convergence = hard decision matches the syndrome,
// checked before each iteration, so consistent priors converge at iteration 0.
// stopOnConverged=false runs all maxIter passes (the converged flag still
// reports the first match); minIter delays the early stop so the posterior
// carries at least that many message updates.
DecodeResult syndromeDecode(const LdpcCode& code, std::span<const double> priorLlr,
                            const Syndrome& syn, int maxIter = 100,
                            bool stopOnConverged = true, int minIter = 0);

// Reusable message workspace for the frame-throughput path.
class BpWorkspace {
 public:
  void run(const LdpcCode& code, std::span<const double> priorLlr,
           const Syndrome& syn, int maxIter, DecodeResult& out,
           bool stopOnConverged = true, int minIter = 0);

 private:
  std::vector<double> varToChk_;
  std::vector<double> chkToVar_;
  std::vector<double> tanhBuf_;
  std::vector<int> edgeOfVar_;   // CSR: edge ids per variable
  std::vector<int> varOffsets_;
  std::vector<int> edgeVar_;     // per edge: variable
  std::vector<int> chkOffsets_;  // CSR rows for checks
  const LdpcCode* cached_ = nullptr;
  void bind(const LdpcCode& code);
};

// MacKay alist text format, canonical (sorted, zero-padded) ordering.
std::string toAlist(const LdpcCode& code);
LdpcCode codeFromAlist(const std::string& text);

}  // namespace wiretap
