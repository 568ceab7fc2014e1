#include "wiretap/gf2.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>

namespace wiretap {

void Gf2Poly::trim() {
  while (!w_.empty() && w_.back() == 0) w_.pop_back();
}

Gf2Poly Gf2Poly::one() {
  Gf2Poly p;
  p.w_.push_back(1);
  return p;
}

Gf2Poly Gf2Poly::x(int power) {
  Gf2Poly p;
  p.setBit(power);
  return p;
}

Gf2Poly Gf2Poly::fromExponents(std::span<const int> exps) {
  Gf2Poly p;
  for (int e : exps) p.setBit(e);
  return p;
}

Gf2Poly Gf2Poly::fromBits(std::span<const std::uint8_t> bits) {
  Gf2Poly p;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] & 1) p.setBit(static_cast<int>(i));
  }
  return p;
}

int Gf2Poly::degree() const {
  if (w_.empty()) return -1;
  const std::uint64_t top = w_.back();
  return static_cast<int>(w_.size()) * 64 - 1 - std::countl_zero(top);
}

bool Gf2Poly::bit(int i) const {
  const std::size_t word = static_cast<std::size_t>(i) / 64;
  if (word >= w_.size()) return false;
  return (w_[word] >> (i % 64)) & 1ULL;
}

void Gf2Poly::setBit(int i) {
  const std::size_t word = static_cast<std::size_t>(i) / 64;
  if (word >= w_.size()) w_.resize(word + 1, 0);
  w_[word] ^= 1ULL << (i % 64);
  trim();
}

std::vector<std::uint8_t> Gf2Poly::toBits(int width) const {
  std::vector<std::uint8_t> out(width, 0);
  for (int i = 0; i < width; ++i) out[i] = bit(i) ? 1 : 0;
  return out;
}

bool Gf2Poly::operator==(const Gf2Poly& o) const { return w_ == o.w_; }

Gf2Poly Gf2Poly::operator^(const Gf2Poly& o) const {
  Gf2Poly r;
  r.w_.resize(std::max(w_.size(), o.w_.size()), 0);
  for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] ^= w_[i];
  for (std::size_t i = 0; i < o.w_.size(); ++i) r.w_[i] ^= o.w_[i];
  r.trim();
  return r;
}

Gf2Poly clmul(const Gf2Poly& a, const Gf2Poly& b) {
  Gf2Poly r;
  if (a.w_.empty() || b.w_.empty()) return r;
  r.w_.assign(a.w_.size() + b.w_.size(), 0);
  // word-by-word carry-less multiply, bitwise over the second operand
  for (std::size_t i = 0; i < a.w_.size(); ++i) {
    const std::uint64_t av = a.w_[i];
    if (!av) continue;
    for (std::size_t j = 0; j < b.w_.size(); ++j) {
      const std::uint64_t bv = b.w_[j];
      if (!bv) continue;
      std::uint64_t lo = 0, hi = 0;
      for (int k = 0; k < 64; ++k) {
        if ((bv >> k) & 1ULL) {
          lo ^= av << k;
          if (k) hi ^= av >> (64 - k);
        }
      }
      r.w_[i + j] ^= lo;
      r.w_[i + j + 1] ^= hi;
    }
  }
  r.trim();
  return r;
}

Gf2Poly mod(Gf2Poly a, const Gf2Poly& f) {
  const int df = f.degree();
  if (df < 0) throw std::invalid_argument("mod: zero modulus");
  int da = a.degree();
  while (da >= df) {
    const int shift = da - df;
    // a ^= f << shift
    const std::size_t wordShift = static_cast<std::size_t>(shift) / 64;
    const int bitShift = shift % 64;
    if (a.w_.size() < f.w_.size() + wordShift + 1) a.w_.resize(f.w_.size() + wordShift + 1, 0);
    for (std::size_t i = 0; i < f.w_.size(); ++i) {
      a.w_[i + wordShift] ^= f.w_[i] << bitShift;
      if (bitShift) a.w_[i + wordShift + 1] ^= f.w_[i] >> (64 - bitShift);
    }
    a.trim();
    da = a.degree();
  }
  return a;
}

Gf2Poly gcd(Gf2Poly a, Gf2Poly b) {
  while (!b.isZero()) {
    Gf2Poly r = mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Gf2Poly mulMod(const Gf2Poly& a, const Gf2Poly& b, const Gf2Poly& f) {
  return mod(clmul(a, b), f);
}

namespace {

// 16-bit -> 32-bit zero interleave, for word-level squaring
const std::uint32_t* spreadTable() {
  static const auto table = [] {
    auto* t = new std::uint32_t[65536];
    for (std::uint32_t v = 0; v < 65536; ++v) {
      std::uint32_t r = 0;
      for (int b = 0; b < 16; ++b) {
        if ((v >> b) & 1u) r |= 1u << (2 * b);
      }
      t[v] = r;
    }
    return t;
  }();
  return table;
}

// squaring and folding against a sparse modulus, all word-level; this is the
// inner loop of the irreducibility test at hash widths of 10^4 bits
class SparseModSquarer {
 public:
  explicit SparseModSquarer(const Gf2Poly& f) : degree_(f.degree()) {
    for (int i = 0; i <= degree_; ++i) {
      if (f.bit(i)) exps_.push_back(i);
    }
    words_ = static_cast<std::size_t>(degree_) / 64 + 1;
    buf_.assign(2 * words_ + 2, 0);
  }

  int degree() const { return degree_; }

  // r <- r^2 mod f, r given as a bit vector of length degree_
  void squareInPlace(std::vector<std::uint64_t>& r) {
    const std::uint32_t* tab = spreadTable();
    std::fill(buf_.begin(), buf_.end(), 0);
    for (std::size_t i = 0; i < words_; ++i) {
      const std::uint64_t w = r[i];
      buf_[2 * i] = static_cast<std::uint64_t>(tab[w & 0xFFFF]) |
                    (static_cast<std::uint64_t>(tab[(w >> 16) & 0xFFFF]) << 32);
      buf_[2 * i + 1] = static_cast<std::uint64_t>(tab[(w >> 32) & 0xFFFF]) |
                        (static_cast<std::uint64_t>(tab[(w >> 48) & 0xFFFF]) << 32);
    }
    // fold everything at or above `degree_` down through the sparse modulus:
    // folding is linear, so whole words fold with shifted XORs per exponent;
    // words are revisited until clear because a large exponent can cascade
    // back into the word being processed
    const std::size_t loWord = static_cast<std::size_t>(degree_) / 64;
    const std::uint64_t loMask = ~((1ULL << (degree_ % 64)) - 1ULL);
    for (std::size_t wi = buf_.size() - 1; wi + 1 > loWord; --wi) {
      for (;;) {
        std::uint64_t w = buf_[wi];
        if (wi == loWord) w &= loMask;
        if (!w) break;
        buf_[wi] ^= w;
        const long long base = static_cast<long long>(wi) * 64 - degree_;
        for (std::size_t e = 0; e + 1 < exps_.size(); ++e) {  // skip the top term
          const long long t = base + exps_[e];
          const std::size_t tw = static_cast<std::size_t>(t >> 6);
          const int tb = static_cast<int>(t & 63);
          if (t >= 0) {
            buf_[tw] ^= w << tb;
            if (tb) buf_[tw + 1] ^= w >> (64 - tb);
          } else {
            // straddles zero: only the upper part of the word lands in range
            buf_[0] ^= w >> (-t);
          }
        }
      }
    }
    std::copy(buf_.begin(), buf_.begin() + words_, r.begin());
  }

  std::vector<std::uint64_t> xCanonical() const {
    std::vector<std::uint64_t> r(words_, 0);
    r[0] = 2;  // the polynomial x
    return r;
  }

 private:
  int degree_;
  std::vector<int> exps_;  // ascending, includes 0 and degree_
  std::size_t words_;
  std::vector<std::uint64_t> buf_;
};

Gf2Poly fromWords(const std::vector<std::uint64_t>& words, int width) {
  Gf2Poly p;
  for (int i = 0; i < width; ++i) {
    if ((words[static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1ULL) p.setBit(i);
  }
  return p;
}

}  // namespace

Gf2Poly powXMod(std::uint64_t squarings, const Gf2Poly& f) {
  SparseModSquarer sq(f);
  auto r = sq.xCanonical();
  for (std::uint64_t i = 0; i < squarings; ++i) sq.squareInPlace(r);
  return fromWords(r, f.degree());
}

bool isIrreducible(const Gf2Poly& f) {
  const int d = f.degree();
  if (d < 1) return false;
  if (d == 1) return true;
  if (!f.bit(0)) return false;  // divisible by x

  const Gf2Poly x = mod(Gf2Poly::x(1), f);
  SparseModSquarer sq(f);
  auto r = sq.xCanonical();

  // small-factor screen: a factor of degree j divides x^(2^k) - x when j | k
  const int screen = std::min(8, d - 1);
  int done = 0;
  for (int k = 1; k <= screen; ++k) {
    sq.squareInPlace(r);
    ++done;
    const Gf2Poly g = fromWords(r, d) ^ x;
    if (g.isZero()) return false;  // f divides x^(2^k) - x, so deg factors <= k < d
    if (!(gcd(g, f) == Gf2Poly::one())) return false;
  }

  // x^(2^d) == x mod f
  for (int k = done; k < d; ++k) sq.squareInPlace(r);
  if (!(fromWords(r, d) == x)) return false;

  // prime factors of d
  std::vector<int> primes;
  int n = d;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      primes.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) primes.push_back(n);
  for (int p : primes) {
    const int half = d / p;
    if (half <= screen) continue;  // already covered by the screen
    auto rr = sq.xCanonical();
    for (int k = 0; k < half; ++k) sq.squareInPlace(rr);
    const Gf2Poly g = fromWords(rr, d) ^ x;
    if (!(gcd(g, f) == Gf2Poly::one())) return false;
  }
  return true;
}

namespace {

struct KnownPoly {
  int degree;
  std::array<int, 5> exps;  // descending, unused = -1
};

// verified at construction by the Rabin test (see findIrreducible)
constexpr KnownPoly kKnown[] = {
    {2, {2, 1, 0, -1, -1}},      {3, {3, 1, 0, -1, -1}},
    {4, {4, 1, 0, -1, -1}},      {8, {8, 4, 3, 1, 0}},
    {16, {16, 5, 3, 1, 0}},      {32, {32, 7, 3, 2, 0}},
    {64, {64, 4, 3, 1, 0}},      {128, {128, 7, 2, 1, 0}},
    {256, {256, 10, 5, 2, 0}},   {512, {512, 8, 5, 2, 0}},
    {1024, {1024, 19, 6, 1, 0}}, {2048, {2048, 19, 14, 13, 0}},
};

}  // namespace

Gf2Poly findIrreducible(int degree) {
  if (degree < 1) throw std::invalid_argument("findIrreducible: degree must be >= 1");
  if (degree == 1) return Gf2Poly::fromExponents(std::array<int, 2>{1, 0});

  for (const KnownPoly& kp : kKnown) {
    if (kp.degree != degree) continue;
    std::vector<int> exps;
    for (int e : kp.exps) {
      if (e >= 0) exps.push_back(e);
    }
    Gf2Poly f = Gf2Poly::fromExponents(exps);
    if (isIrreducible(f)) return f;  // table entries are re-verified, not trusted
    break;
  }

  // trinomials x^d + x^a + 1; none exist when d = 0 mod 8 (Swan), skip the scan
  if (degree % 8 != 0) {
    for (int a = 1; a < degree; ++a) {
      Gf2Poly f = Gf2Poly::fromExponents(std::array<int, 3>{degree, a, 0});
      if (isIrreducible(f)) return f;
    }
  }
  // pentanomials x^d + x^a + x^b + x^c + 1, a > b > c >= 1
  for (int a = 3; a < degree; ++a) {
    for (int b = 2; b < a; ++b) {
      for (int c = 1; c < b; ++c) {
        Gf2Poly f = Gf2Poly::fromExponents(std::array<int, 5>{degree, a, b, c, 0});
        if (isIrreducible(f)) return f;
      }
    }
  }
  throw std::runtime_error("findIrreducible: no low-weight polynomial found");
}

}  // namespace wiretap
