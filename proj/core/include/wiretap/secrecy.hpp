#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wiretap/gf2.hpp"
#include "wiretap/ldpc.hpp"  // Bits

namespace wiretap {

// Bit-exact accounting of everything Eve may hold about one reconciled block.
// Rates are per symbol; reconciliationBits is the exact count of syndrome and
// verification bits placed on the wire. Append-only: disclosures are added
// before any key is extracted.
struct LeakageLedger {
  long long nSymbols = 0;
  double sourceEntropyBits = 0.0;            // n * H(X)
  double eavesdropperMutualInfoBits = 0.0;   // n * I(X;Y_W)
  long long reconciliationBits = 0;          // log2|M|
  int safetyExponent = 30;                   // s
  int slackBits = 30;                        // r_0
  double infoMainPerSymbol = 0.0;            // I(X;Y_M)
  double condEntropyMainPerSymbol = 0.0;     // H(X|Y_M)

  void addDisclosure(long long bits);
  double measuredBeta() const;
  long long keyLengthBits() const;
};

// k = floor(n beta I(X;Y_M) - n I(X;Y_W) - 2s - 2 - r0), clamped at zero.
long long keyLength(long long n, double beta, double infoMain, double infoWiretap,
                    int safetyExponent, int slackBits);

// Multiplicative hash over GF(2^w): k chosen bits of c*x. The bit selection is
// fixed protocol-wide to the k lowest-order bits.
struct HashSeed {
  int fieldWidth = 0;   // w
  int outputBits = 0;   // k
  Gf2Poly modulus;      // irreducible, degree w
  Gf2Poly multiplier;   // nonzero element

  std::vector<std::uint8_t> serialize() const;
  static HashSeed deserialize(std::span<const std::uint8_t> bytes);
};

Bits gfMultiplyHash(const HashSeed& seed, const Bits& inputBits);

struct SecretKey {
  Bits bits;
  LeakageLedger provenance;
  double uncertaintyLowerBound = 0.0;  // k - 2^{-r0}/ln 2
  double boundConfidence = 0.0;        // 1 - 2^{-s}
  std::size_t consumed = 0;            // one-time-pad cursor
};

// Draws a random nonzero multiplier, hashes S down to the ledger's key length
// and attaches the uncertainty bound. Throws when the ledger budget is zero.
std::pair<SecretKey, HashSeed> privacyAmplify(const Bits& reconciled,
                                              const LeakageLedger& ledger,
                                              std::uint64_t rngSeed);

// XOR with fresh key bits; marks them consumed. Decryption is the same call on
// the receiving side's copy of the key.
Bits oneTimePad(SecretKey& key, const Bits& message);

// Uncertainty deficit 2^{n (C_W - C_W_hat - alpha)} / ln 2 from CSI error.
double imperfectCsiKeyDeficit(long long n, double cWiretapTrue,
                              double cWiretapEstimated, double alpha);
// secret (true) vs leaked classification of one key
bool imperfectCsiSecret(double cWiretapTrue, double cWiretapEstimated, double alpha);

}  // namespace wiretap
