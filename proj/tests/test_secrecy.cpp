#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "wiretap/rng.hpp"
#include "wiretap/secrecy.hpp"

using namespace wiretap;

namespace {

// schoolbook GF(2) polynomial multiply + long division, independent of Gf2Poly
Bits slowGfMul(const Bits& a, const Bits& b, const Bits& modulus, int width) {
  std::vector<int> prod(2 * width, 0);
  for (int i = 0; i < static_cast<int>(a.size()); ++i) {
    if (!a[i]) continue;
    for (int j = 0; j < static_cast<int>(b.size()); ++j) {
      if (b[j]) prod[i + j] ^= 1;
    }
  }
  // reduce by the modulus (degree = width)
  for (int d = 2 * width - 1; d >= width; --d) {
    if (!prod[d]) continue;
    const int shift = d - width;
    for (int t = 0; t <= width; ++t) {
      if (modulus[t]) prod[t + shift] ^= 1;
    }
  }
  Bits out(width);
  for (int i = 0; i < width; ++i) out[i] = static_cast<std::uint8_t>(prod[i]);
  return out;
}

Bits randomBits(StreamRng& rng, int n) {
  Bits b(n);
  for (auto& v : b) v = static_cast<std::uint8_t>(rng.nextU64() & 1);
  return b;
}

HashSeed makeSeed(int w, int k, const Gf2Poly& multiplier) {
  HashSeed s;
  s.fieldWidth = w;
  s.outputBits = k;
  s.modulus = findIrreducible(w);
  s.multiplier = multiplier;
  return s;
}

}  // namespace

TEST_CASE("key length formula and clamping") {
  // arithmetic oracle: floor(1e4 (0.96*2.192 - 1.0) - 60 - 2 - 30)
  CHECK(keyLength(10000, 0.96, 2.192, 1.0, 30, 30) == 10951);
  // no secrecy advantage: beta=1, equal mutual informations
  CHECK(keyLength(1000, 1.0, 1.5, 1.5, 30, 30) == 0);
  // slack bit linearity before clamping
  const auto k0 = keyLength(10000, 0.96, 2.192, 1.0, 30, 30);
  const auto k1 = keyLength(10000, 0.96, 2.192, 1.0, 30, 31);
  CHECK(k0 - k1 == 1);
}

TEST_CASE("ledger bookkeeping is append-only and monotone") {
  LeakageLedger led;
  led.nSymbols = 10000;
  led.sourceEntropyBits = 10000 * 3.0;
  led.eavesdropperMutualInfoBits = 10000 * 1.0;
  led.infoMainPerSymbol = 2.192;
  led.condEntropyMainPerSymbol = 0.808;
  led.safetyExponent = 30;
  led.slackBits = 30;
  led.addDisclosure(8900);
  const auto beta = led.measuredBeta();
  CHECK(beta == doctest::Approx(1.0 - (0.89 - 0.808) / 2.192).epsilon(1e-12));
  const auto k = led.keyLengthBits();
  led.addDisclosure(100);
  CHECK(led.keyLengthBits() < k);  // nonincreasing in disclosure
  CHECK_THROWS(led.addDisclosure(-1));

  LeakageLedger more = led;
  more.eavesdropperMutualInfoBits += 500;
  CHECK(more.keyLengthBits() <= led.keyLengthBits());
  more = led;
  more.slackBits += 5;
  CHECK(more.keyLengthBits() == led.keyLengthBits() - 5);
}

TEST_CASE("multiplicative identity returns the low-order input bits") {
  StreamRng rng(3);
  const int w = 32, k = 12;
  const auto seed = makeSeed(w, k, Gf2Poly::one());
  const Bits x = randomBits(rng, w);
  const Bits h = gfMultiplyHash(seed, x);
  for (int i = 0; i < k; ++i) CHECK(h[i] == x[i]);
}

TEST_CASE("hand-worked GF(2^4) product") {
  // modulus x^4+x+1, c = x, input = x^3+1: product = x^4+x = (x+1)+x = 1
  HashSeed seed;
  seed.fieldWidth = 4;
  seed.outputBits = 2;
  seed.modulus = Gf2Poly::fromExponents(std::vector<int>{4, 1, 0});
  seed.multiplier = Gf2Poly::x(1);
  Bits input{1, 0, 0, 1};
  const Bits h = gfMultiplyHash(seed, input);
  CHECK(h[0] == 1);
  CHECK(h[1] == 0);
}

TEST_CASE("gf multiply matches the schoolbook oracle exhaustively at w=8") {
  const int w = 8;
  const Gf2Poly mod = findIrreducible(w);
  const Bits modBits = mod.toBits(w + 1);
  for (int c = 1; c < 256; c += 7) {
    HashSeed seed;
    seed.fieldWidth = w;
    seed.outputBits = w;
    seed.modulus = mod;
    Bits cb(w);
    for (int i = 0; i < w; ++i) cb[i] = (c >> i) & 1;
    seed.multiplier = Gf2Poly::fromBits(cb);
    for (int x = 0; x < 256; x += 5) {
      Bits xb(w);
      for (int i = 0; i < w; ++i) xb[i] = (x >> i) & 1;
      CHECK(gfMultiplyHash(seed, xb) == slowGfMul(cb, xb, modBits, w));
    }
  }
}

TEST_CASE("gf multiply matches the schoolbook oracle at w=64 and w=256") {
  StreamRng rng(17);
  for (int w : {64, 256}) {
    const Gf2Poly mod = findIrreducible(w);
    const Bits modBits = mod.toBits(w + 1);
    for (int trial = 0; trial < 250; ++trial) {
      const Bits c = randomBits(rng, w);
      const Bits x = randomBits(rng, w);
      HashSeed seed;
      seed.fieldWidth = w;
      seed.outputBits = w;
      seed.modulus = mod;
      seed.multiplier = Gf2Poly::fromBits(c);
      CHECK(gfMultiplyHash(seed, x) == slowGfMul(c, x, modBits, w));
    }
  }
}

TEST_CASE("hash linearity over random triples") {
  StreamRng rng(23);
  const int w = 64, k = 24;
  const auto seed = makeSeed(w, k, Gf2Poly::fromBits(randomBits(rng, w)));
  for (int trial = 0; trial < 2000; ++trial) {
    const Bits x = randomBits(rng, w);
    const Bits y = randomBits(rng, w);
    Bits xy(w);
    for (int i = 0; i < w; ++i) xy[i] = x[i] ^ y[i];
    const Bits hx = gfMultiplyHash(seed, x);
    const Bits hy = gfMultiplyHash(seed, y);
    const Bits hxy = gfMultiplyHash(seed, xy);
    for (int i = 0; i < k; ++i) CHECK(hxy[i] == (hx[i] ^ hy[i]));
  }
}

TEST_CASE("exhaustive universality at w=8, k=4") {
  // collision count over all multipliers for any x != x' is exactly 2^{w-k}-1
  // excluding c=0 (nondegenerate family), so the pair probability stays under
  // 2^-k
  const int w = 8, k = 4;
  const Gf2Poly mod = findIrreducible(w);
  // h_c(x) ^ h_c(x') = h_c(x ^ x'), so collisions depend on d = x^x' only
  for (int d = 1; d < 256; ++d) {
    Bits db(w);
    for (int i = 0; i < w; ++i) db[i] = (d >> i) & 1;
    int collisions = 0;
    for (int c = 1; c < 256; ++c) {
      Bits cb(w);
      for (int i = 0; i < w; ++i) cb[i] = (c >> i) & 1;
      HashSeed seed;
      seed.fieldWidth = w;
      seed.outputBits = k;
      seed.modulus = mod;
      seed.multiplier = Gf2Poly::fromBits(cb);
      const Bits h = gfMultiplyHash(seed, db);
      bool zero = true;
      for (int i = 0; i < k; ++i) zero &= h[i] == 0;
      collisions += zero ? 1 : 0;
    }
    CHECK(collisions == (1 << (w - k)) - 1);
    CHECK(static_cast<double>(collisions) / 255.0 <= std::exp2(-k));
  }
}

TEST_CASE("monte-carlo universality stays under the family bound at w=16") {
  StreamRng rng(31);
  const int w = 16, k = 8;
  const Gf2Poly mod = findIrreducible(w);
  int collisions = 0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    Bits x = randomBits(rng, w);
    Bits y = randomBits(rng, w);
    bool same = true;
    for (int i = 0; i < w; ++i) same &= x[i] == y[i];
    if (same) {
      --t;
      continue;
    }
    HashSeed seed;
    seed.fieldWidth = w;
    seed.outputBits = k;
    seed.modulus = mod;
    Bits c = randomBits(rng, w);
    bool zero = true;
    for (auto b : c) zero &= b == 0;
    if (zero) c[0] = 1;
    seed.multiplier = Gf2Poly::fromBits(c);
    const Bits hx = gfMultiplyHash(seed, x);
    const Bits hy = gfMultiplyHash(seed, y);
    bool coll = true;
    for (int i = 0; i < k; ++i) coll &= hx[i] == hy[i];
    collisions += coll ? 1 : 0;
  }
  CHECK(static_cast<double>(collisions) / trials <= std::exp2(-k) * 1.1);
}

TEST_CASE("shipped moduli verify irreducible; degenerate cases refused") {
  for (int w : {2, 3, 4, 8, 16, 32, 64, 128, 256}) {
    const Gf2Poly f = findIrreducible(w);
    CHECK(f.degree() == w);
    CHECK(isIrreducible(f));
  }
  // x^4 + x^2 + 1 = (x^2+x+1)^2 is reducible
  CHECK_FALSE(isIrreducible(Gf2Poly::fromExponents(std::vector<int>{4, 2, 0})));
  // x^2 (no constant term) is reducible
  CHECK_FALSE(isIrreducible(Gf2Poly::fromExponents(std::vector<int>{2})));
}

TEST_CASE("privacy amplification end to end") {
  StreamRng rng(47);
  LeakageLedger led;
  led.nSymbols = 64;
  led.sourceEntropyBits = 64 * 1.6;
  led.eavesdropperMutualInfoBits = 64 * 0.1;
  led.infoMainPerSymbol = 0.684;
  led.condEntropyMainPerSymbol = 0.919;
  led.safetyExponent = 5;
  led.slackBits = 5;
  led.addDisclosure(63);  // about 0.98 * 64
  REQUIRE(led.keyLengthBits() >= 1);

  const Bits s = randomBits(rng, 128);  // physical width: 64 symbols * 2 bits
  const auto [key, seed] = privacyAmplify(s, led, 99u);
  CHECK(static_cast<long long>(key.bits.size()) == led.keyLengthBits());
  CHECK(key.uncertaintyLowerBound <= static_cast<double>(key.bits.size()));
  CHECK(key.uncertaintyLowerBound ==
        doctest::Approx(key.bits.size() - std::exp2(-5) / std::log(2.0)));

  // determinism and agreement propagation
  const auto [key2, seed2] = privacyAmplify(s, led, 99u);
  CHECK(key2.bits == key.bits);
  CHECK(gfMultiplyHash(seed, s) == key.bits);

  // seed wire format round trip
  const auto bytes = seed.serialize();
  const auto back = HashSeed::deserialize(bytes);
  CHECK(back.fieldWidth == seed.fieldWidth);
  CHECK(back.outputBits == seed.outputBits);
  CHECK(back.modulus == seed.modulus);
  CHECK(back.multiplier == seed.multiplier);

  // zero budget refuses
  LeakageLedger drained = led;
  drained.addDisclosure(100000);
  CHECK(drained.keyLengthBits() == 0);
  CHECK_THROWS(privacyAmplify(s, drained, 1u));
}

TEST_CASE("one-time pad involution and reuse guard") {
  StreamRng rng(53);
  SecretKey alice;
  alice.bits = randomBits(rng, 256);
  SecretKey bob = alice;
  const Bits msg = randomBits(rng, 100);
  const Bits ct = oneTimePad(alice, msg);
  const Bits pt = oneTimePad(bob, ct);
  CHECK(pt == msg);
  CHECK(ct != msg);  // 100 random key bits virtually never all zero
  // consumed bits may not be reused
  CHECK_THROWS(oneTimePad(alice, msg));
  // oversize message
  SecretKey small;
  small.bits = randomBits(rng, 8);
  const Bits big = randomBits(rng, 9);
  CHECK_THROWS(oneTimePad(small, big));
}

TEST_CASE("all-zero key leaves the message in the clear") {
  SecretKey k;
  k.bits.assign(64, 0);
  StreamRng rng(57);
  const Bits msg = randomBits(rng, 64);
  CHECK(oneTimePad(k, msg) == msg);
}

TEST_CASE("one-time pad ciphertexts are uniform for every fixed message") {
  // exhaustive over 8-bit messages and uniform keys
  for (int msg = 0; msg < 256; msg += 37) {
    std::map<int, int> counts;
    for (int keyv = 0; keyv < 256; ++keyv) {
      SecretKey k;
      k.bits.resize(8);
      Bits m(8);
      for (int i = 0; i < 8; ++i) {
        k.bits[i] = (keyv >> i) & 1;
        m[i] = (msg >> i) & 1;
      }
      const Bits ct = oneTimePad(k, m);
      int v = 0;
      for (int i = 0; i < 8; ++i) v |= ct[i] << i;
      counts[v]++;
    }
    CHECK(counts.size() == 256);
    for (const auto& [v, n] : counts) CHECK(n == 1);
  }
}

TEST_CASE("imperfect CSI deficit anchors") {
  CHECK(imperfectCsiKeyDeficit(100, 2.0, 2.0, 0.0) ==
        doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-12));
  CHECK(imperfectCsiKeyDeficit(100, 2.5, 2.0, 0.5) ==
        doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-12));
  // overestimated secrecy with large n blows the deficit past any key length
  CHECK(imperfectCsiKeyDeficit(10000, 2.0, 1.9, 0.0) > 1e100);
  CHECK(imperfectCsiSecret(2.0, 2.1, 0.0));
  CHECK_FALSE(imperfectCsiSecret(2.0, 1.9, 0.0));
  CHECK(imperfectCsiSecret(2.0, 1.9, 0.2));
}
