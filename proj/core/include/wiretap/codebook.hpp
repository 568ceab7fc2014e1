#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wiretap/ldpc.hpp"

namespace wiretap {

// The fixed library of component-code ensembles shipped with the simulator,
// one per supported rate. Graphs are instantiated per block length on demand.
class Codebook {
 public:
  struct Entry {
    std::string name;  // "rate-0.25"
    double rate;       // nominal rate used for planning
    DegreeDistribution dist;
  };

  static const Codebook& shipped();
  static Codebook fromText(const std::string& text);
  std::string toText() const;

  const std::vector<Entry>& entries() const { return entries_; }
  const Entry* byName(const std::string& name) const;
  // largest shipped rate <= maxRate (nullptr when none)
  const Entry* bestAtMost(double maxRate) const;
  // same, restricted to high-rate component codes (rate >= 0.5); falls back to
  // the smallest high-rate entry when none is low enough
  const Entry* highRateAtMost(double maxRate) const;

  void add(Entry e) { entries_.push_back(std::move(e)); }

 private:
  std::vector<Entry> entries_;
};

}  // namespace wiretap
