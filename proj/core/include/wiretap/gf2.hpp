#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace wiretap {

// Dense polynomial over GF(2), bit i = coefficient of x^i.
class Gf2Poly {
 public:
  Gf2Poly() = default;
  static Gf2Poly zero() { return {}; }
  static Gf2Poly one();
  static Gf2Poly x(int power);
  // exponents of the nonzero terms, e.g. {8,4,3,1,0}
  static Gf2Poly fromExponents(std::span<const int> exps);
  static Gf2Poly fromBits(std::span<const std::uint8_t> bits);  // bit i = coeff x^i

  int degree() const;  // -1 for the zero polynomial
  bool isZero() const { return degree() < 0; }
  bool bit(int i) const;
  void setBit(int i);
  std::vector<std::uint8_t> toBits(int width) const;
  const std::vector<std::uint64_t>& words() const { return w_; }

  bool operator==(const Gf2Poly& o) const;
  Gf2Poly operator^(const Gf2Poly& o) const;  // addition

  friend Gf2Poly clmul(const Gf2Poly& a, const Gf2Poly& b);
  friend Gf2Poly mod(Gf2Poly a, const Gf2Poly& f);
  friend Gf2Poly gcd(Gf2Poly a, Gf2Poly b);

 private:
  std::vector<std::uint64_t> w_;
  void trim();
};

Gf2Poly mulMod(const Gf2Poly& a, const Gf2Poly& b, const Gf2Poly& f);
Gf2Poly powXMod(std::uint64_t squarings, const Gf2Poly& f);  // x^(2^squarings) mod f

// Rabin test: f irreducible iff x^(2^d) == x (mod f) and
// gcd(x^(2^(d/p)) - x, f) = 1 for every prime p dividing d.
bool isIrreducible(const Gf2Poly& f);

// Deterministic lowest-weight search: trinomials x^d + x^a + 1 in ascending a,
// then pentanomials in lexicographic order. Small widths come from a verified
// built-in table.
Gf2Poly findIrreducible(int degree);

}  // namespace wiretap
