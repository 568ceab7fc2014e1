#include "wiretap/codebook.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace wiretap {

namespace {

Codebook buildShipped() {
  Codebook cb;
  auto add = [&](const char* name, double rate,
                 std::vector<std::pair<int, double>> lam,
                 std::vector<std::pair<int, double>> rho) {
    // repair tiny rounding drift so fractions sum to 1 exactly
    for (auto* side : {&lam, &rho}) {
      double s = 0.0;
      for (auto& [d, f] : *side) s += f;
      for (auto& [d, f] : *side) f /= s;
    }
    DegreeDistribution dist{std::move(lam), std::move(rho)};
    dist.validate();
    cb.add({name, rate, std::move(dist)});
  };

  add("rate-0.16", 0.16,
      {{2, 0.313529952262}, {3, 0.356585256148}, {15, 0.32988479159}},
      {{4, 1.0}});
  add("rate-0.24", 0.24,
      {{2, 0.340264417218}, {3, 0.398829479305}, {10, 0.254347794371}, {15, 0.006558309107}},
      {{4, 1.0}});
  add("rate-0.25", 0.25,
      {{2, 0.345170095499}, {3, 0.404190559862}, {8, 0.038166579986}, {10, 0.212472764653}},
      {{4, 1.0}});
  add("rate-0.27", 0.27,
      {{2, 0.261890618287}, {3, 0.337801244518}, {4, 0.014677040767}, {5, 0.007866591024}, {15, 0.377764505403}},
      {{5, 1.0}});
  add("rate-0.86", 0.86,
      {{2, 0.180196652821}, {3, 0.364218124409}, {8, 0.29949497576}, {10, 0.15609024701}},
      {{27, 1.0}});
  add("rate-0.88", 0.88,
      {{2, 0.181665380346}, {3, 0.372543913893}, {8, 0.368965557118}, {10, 0.076825148643}},
      {{31, 1.0}});
  return cb;
}

}  // namespace

const Codebook& Codebook::shipped() {
  static const Codebook cb = buildShipped();
  return cb;
}

const Codebook::Entry* Codebook::byName(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

const Codebook::Entry* Codebook::bestAtMost(double maxRate) const {
  const Entry* best = nullptr;
  for (const auto& e : entries_) {
    if (e.rate <= maxRate + 1e-12 && (!best || e.rate > best->rate)) best = &e;
  }
  return best;
}

const Codebook::Entry* Codebook::highRateAtMost(double maxRate) const {
  const Entry* best = nullptr;
  const Entry* smallestHigh = nullptr;
  for (const auto& e : entries_) {
    if (e.rate < 0.5) continue;
    if (!smallestHigh || e.rate < smallestHigh->rate) smallestHigh = &e;
    if (e.rate <= maxRate + 1e-12 && (!best || e.rate > best->rate)) best = &e;
  }
  return best ? best : smallestHigh;
}

std::string Codebook::toText() const {
  std::ostringstream os;
  os << "wiretap-codebook v1 " << entries_.size() << "\n";
  char buf[96];
  for (const auto& e : entries_) {
    os << "ensemble " << e.name << " rate " << e.rate << "\n";
    os << "lambda " << e.dist.variableEdgeDist.size() << "\n";
    for (const auto& [d, f] : e.dist.variableEdgeDist) {
      std::snprintf(buf, sizeof(buf), "%d %.17g\n", d, f);
      os << buf;
    }
    os << "rho " << e.dist.checkEdgeDist.size() << "\n";
    for (const auto& [d, f] : e.dist.checkEdgeDist) {
      std::snprintf(buf, sizeof(buf), "%d %.17g\n", d, f);
      os << buf;
    }
  }
  return os.str();
}

Codebook Codebook::fromText(const std::string& text) {
  std::istringstream is(text);
  std::string magic, version;
  std::size_t count = 0;
  is >> magic >> version >> count;
  if (magic != "wiretap-codebook" || version != "v1") {
    throw std::invalid_argument("Codebook::fromText: bad header");
  }
  Codebook cb;
  for (std::size_t i = 0; i < count; ++i) {
    std::string tag, name;
    double rate = 0.0;
    is >> tag >> name >> tag >> rate;
    DegreeDistribution dist;
    std::size_t nl = 0, nr = 0;
    is >> tag >> nl;
    for (std::size_t k = 0; k < nl; ++k) {
      int d;
      double f;
      is >> d >> f;
      dist.variableEdgeDist.emplace_back(d, f);
    }
    is >> tag >> nr;
    for (std::size_t k = 0; k < nr; ++k) {
      int d;
      double f;
      is >> d >> f;
      dist.checkEdgeDist.emplace_back(d, f);
    }
    if (!is) throw std::invalid_argument("Codebook::fromText: truncated");
    dist.validate();
    cb.add({name, rate, std::move(dist)});
  }
  return cb;
}

}  // namespace wiretap
