#pragma once

#include "abc/crypto/ecdsa.hpp"

namespace abc::crypto {

// Two-signature private-key leak.
//
// The first signature is honest with random nonce k1. The second uses
//
//     k2 = SHA256(encode(k1 * pk_receiver) || counter) mod n
//
// for the smallest counter in [0, 256) that gives a usable nonce and a
// non-degenerate signature. The receiver rebuilds k1*G from r1, multiplies by
// its own secret to reach the same shared point, replays the counter
// schedule and solves the second signature equation for the sender's key.

inline constexpr unsigned kKleptoMaxCounter = 256;

struct KleptoPair {
    EcdsaSignature first;
    EcdsaSignature second;
};

KleptoPair klepto_sign_pair(const Scalar& sk_sender, const Point& pk_receiver, const Digest& digest1,
                            const Digest& digest2, HashStream& rng, const Curve& curve = Curve::secp256k1());

/// Throws ExtractionFailed when no (x candidate, parity, counter) combination
/// yields a key matching pk_sender.
Scalar klepto_extract(const Scalar& sk_receiver, const Point& pk_sender, const EcdsaSignature& first,
                      const EcdsaSignature& second, const Digest& digest2,
                      const Curve& curve = Curve::secp256k1());

/// Nonce candidate for a shared point and counter; returns 0 when the hash
/// reduces to zero.
mpz_class klepto_nonce(const Point& shared, unsigned counter, const Curve& curve = Curve::secp256k1());

} // namespace abc::crypto
