#include "wiretap/secrecy.hpp"

#include <cmath>
#include <stdexcept>

#include "wiretap/rng.hpp"

namespace wiretap {

void LeakageLedger::addDisclosure(long long bits) {
  if (bits < 0) throw std::invalid_argument("LeakageLedger: negative disclosure");
  reconciliationBits += bits;
}

double LeakageLedger::measuredBeta() const {
  const double perSymbol = static_cast<double>(reconciliationBits) / nSymbols;
  return 1.0 - (perSymbol - condEntropyMainPerSymbol) / infoMainPerSymbol;
}

long long LeakageLedger::keyLengthBits() const {
  return keyLength(nSymbols, measuredBeta(), infoMainPerSymbol,
                   eavesdropperMutualInfoBits / nSymbols, safetyExponent, slackBits);
}

long long keyLength(long long n, double beta, double infoMain, double infoWiretap,
                    int safetyExponent, int slackBits) {
  if (n < 1) throw std::invalid_argument("keyLength: n must be >= 1");
  const double k = static_cast<double>(n) * (beta * infoMain - infoWiretap) -
                   2.0 * safetyExponent - 2.0 - slackBits;
  if (!(k > 0.0)) return 0;
  return static_cast<long long>(std::floor(k));
}

Bits gfMultiplyHash(const HashSeed& seed, const Bits& inputBits) {
  if (static_cast<int>(inputBits.size()) != seed.fieldWidth) {
    throw std::invalid_argument("gfMultiplyHash: input width mismatch");
  }
  if (seed.outputBits > seed.fieldWidth) {
    throw std::invalid_argument("gfMultiplyHash: k must be <= w");
  }
  const Gf2Poly x = Gf2Poly::fromBits(inputBits);
  const Gf2Poly prod = mulMod(seed.multiplier, x, seed.modulus);
  return prod.toBits(seed.outputBits);
}

std::pair<SecretKey, HashSeed> privacyAmplify(const Bits& reconciled,
                                              const LeakageLedger& ledger,
                                              std::uint64_t rngSeed) {
  const long long k = ledger.keyLengthBits();
  if (k < 1) {
    throw std::runtime_error("privacyAmplify: no extractable key (budget is zero)");
  }
  const int w = static_cast<int>(reconciled.size());
  if (k > w) {
    throw std::runtime_error("privacyAmplify: key budget exceeds the physical width of S");
  }
  HashSeed seed;
  seed.fieldWidth = w;
  seed.outputBits = static_cast<int>(k);
  seed.modulus = findIrreducible(w);

  StreamRng rng(rngSeed, 0, Branch::HashDraw);
  Bits mult(w, 0);
  bool nonzero = false;
  while (!nonzero) {
    for (int i = 0; i < w; ++i) {
      mult[i] = static_cast<std::uint8_t>(rng.nextU64() & 1);
      nonzero |= mult[i] != 0;
    }
  }
  seed.multiplier = Gf2Poly::fromBits(mult);

  SecretKey key;
  key.bits = gfMultiplyHash(seed, reconciled);
  key.provenance = ledger;
  key.uncertaintyLowerBound =
      static_cast<double>(k) - std::exp2(-static_cast<double>(ledger.slackBits)) / std::log(2.0);
  key.boundConfidence = 1.0 - std::exp2(-static_cast<double>(ledger.safetyExponent));
  return {std::move(key), std::move(seed)};
}

Bits oneTimePad(SecretKey& key, const Bits& message) {
  if (key.consumed > 0) {
    throw std::runtime_error("oneTimePad: key bits already consumed (no reuse)");
  }
  if (message.size() > key.bits.size()) {
    throw std::runtime_error("oneTimePad: message longer than the key");
  }
  Bits out(message.size());
  for (std::size_t i = 0; i < message.size(); ++i) {
    out[i] = message[i] ^ key.bits[i];
  }
  key.consumed = message.size();
  return out;
}

double imperfectCsiKeyDeficit(long long n, double cWiretapTrue,
                              double cWiretapEstimated, double alpha) {
  if (n < 1) throw std::invalid_argument("imperfectCsiKeyDeficit: n must be >= 1");
  if (alpha < 0.0) throw std::invalid_argument("imperfectCsiKeyDeficit: alpha must be >= 0");
  const double expo = static_cast<double>(n) * (cWiretapTrue - cWiretapEstimated - alpha);
  return std::exp2(expo) / std::log(2.0);
}

bool imperfectCsiSecret(double cWiretapTrue, double cWiretapEstimated, double alpha) {
  return cWiretapTrue - cWiretapEstimated <= alpha;
}

// ---- seed wire format -------------------------------------------------------

namespace {

void putU64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t getU64(std::span<const std::uint8_t> in, std::size_t& pos) {
  if (pos + 8 > in.size()) throw std::invalid_argument("HashSeed: truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[pos + i]) << (8 * i);
  pos += 8;
  return v;
}

void putBits(std::vector<std::uint8_t>& out, const Bits& bits) {
  putU64(out, bits.size());
  std::uint8_t acc = 0;
  int nb = 0;
  for (std::uint8_t b : bits) {
    acc |= static_cast<std::uint8_t>((b & 1) << nb);
    if (++nb == 8) {
      out.push_back(acc);
      acc = 0;
      nb = 0;
    }
  }
  if (nb) out.push_back(acc);
}

Bits getBits(std::span<const std::uint8_t> in, std::size_t& pos) {
  const std::uint64_t len = getU64(in, pos);
  const std::size_t nbytes = (len + 7) / 8;
  if (pos + nbytes > in.size()) throw std::invalid_argument("HashSeed: truncated bits");
  Bits b(len);
  for (std::uint64_t i = 0; i < len; ++i) {
    b[i] = (in[pos + i / 8] >> (i % 8)) & 1;
  }
  pos += nbytes;
  return b;
}

}  // namespace

std::vector<std::uint8_t> HashSeed::serialize() const {
  std::vector<std::uint8_t> out;
  putU64(out, static_cast<std::uint64_t>(fieldWidth));
  putU64(out, static_cast<std::uint64_t>(outputBits));
  putBits(out, modulus.toBits(fieldWidth + 1));
  putBits(out, multiplier.toBits(fieldWidth));
  return out;
}

HashSeed HashSeed::deserialize(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  HashSeed s;
  s.fieldWidth = static_cast<int>(getU64(bytes, pos));
  s.outputBits = static_cast<int>(getU64(bytes, pos));
  const Bits modBits = getBits(bytes, pos);
  const Bits mulBits = getBits(bytes, pos);
  s.modulus = Gf2Poly::fromBits(modBits);
  s.multiplier = Gf2Poly::fromBits(mulBits);
  return s;
}

}  // namespace wiretap
