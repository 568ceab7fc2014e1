#include <sstream>
#include <stdexcept>

#include "wiretap/ldpc.hpp"

namespace wiretap {

std::string toAlist(const LdpcCode& code) {
  std::size_t maxDv = 0, maxDc = 0;
  for (const auto& a : code.varAdj) maxDv = std::max(maxDv, a.size());
  for (const auto& a : code.chkAdj) maxDc = std::max(maxDc, a.size());

  std::ostringstream os;
  os << code.numVariables << ' ' << code.numChecks << '\n';
  os << maxDv << ' ' << maxDc << '\n';
  for (int v = 0; v < code.numVariables; ++v) {
    os << code.varAdj[v].size() << (v + 1 < code.numVariables ? ' ' : '\n');
  }
  for (int c = 0; c < code.numChecks; ++c) {
    os << code.chkAdj[c].size() << (c + 1 < code.numChecks ? ' ' : '\n');
  }
  for (const auto& adj : code.varAdj) {
    for (std::size_t k = 0; k < maxDv; ++k) {
      os << (k < adj.size() ? adj[k] + 1 : 0) << (k + 1 < maxDv ? ' ' : '\n');
    }
  }
  for (const auto& adj : code.chkAdj) {
    for (std::size_t k = 0; k < maxDc; ++k) {
      os << (k < adj.size() ? adj[k] + 1 : 0) << (k + 1 < maxDc ? ' ' : '\n');
    }
  }
  return os.str();
}

LdpcCode codeFromAlist(const std::string& text) {
  std::istringstream is(text);
  int n = 0, m = 0, maxDv = 0, maxDc = 0;
  is >> n >> m >> maxDv >> maxDc;
  if (!is || n < 1 || m < 1) throw std::invalid_argument("codeFromAlist: bad header");
  LdpcCode code;
  code.numVariables = n;
  code.numChecks = m;
  std::vector<int> dv(n), dc(m);
  for (int i = 0; i < n; ++i) is >> dv[i];
  for (int j = 0; j < m; ++j) is >> dc[j];
  code.varAdj.assign(n, {});
  code.chkAdj.assign(m, {});
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < maxDv; ++k) {
      int c = 0;
      is >> c;
      if (c > 0) code.varAdj[i].push_back(c - 1);
    }
    if (static_cast<int>(code.varAdj[i].size()) != dv[i]) {
      throw std::invalid_argument("codeFromAlist: variable degree mismatch");
    }
  }
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < maxDc; ++k) {
      int v = 0;
      is >> v;
      if (v > 0) code.chkAdj[j].push_back(v - 1);
    }
    if (static_cast<int>(code.chkAdj[j].size()) != dc[j]) {
      throw std::invalid_argument("codeFromAlist: check degree mismatch");
    }
  }
  if (!is) throw std::invalid_argument("codeFromAlist: truncated");
  return code;
}

}  // namespace wiretap
