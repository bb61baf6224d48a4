#pragma once

#include <optional>

#include "abc/crypto/curve.hpp"
#include "abc/crypto/rng.hpp"

namespace abc::crypto {

using Digest = Hash256;

struct EcdsaSignature {
    Scalar r;
    Scalar s;

    /// 64-byte r || s, both big-endian.
    std::array<std::uint8_t, 64> to_bytes() const;
    static EcdsaSignature from_bytes(ByteView raw);

    friend bool operator==(const EcdsaSignature&, const EcdsaSignature&) = default;
};

KeyPair keypair_generate(std::optional<Seed> seed = std::nullopt, const Curve& curve = Curve::secp256k1());
KeyPair keypair_generate(HashStream& rng, const Curve& curve = Curve::secp256k1());
/// Throws InvalidScalar unless 0 < sk < n.
KeyPair keypair_from_secret(const Scalar& sk, const Curve& curve = Curve::secp256k1());
/// Nonzero scalar drawn from the stream.
Scalar random_scalar(HashStream& rng, const Curve& curve = Curve::secp256k1());

/// Big-endian digest reduced mod n.
mpz_class digest_to_int(const Digest& digest, const Curve& curve = Curve::secp256k1());

/// Textbook ECDSA with the nonce supplied by the caller. The result is left
/// as computed: no low-s normalisation, so the nonce stays recoverable.
/// Throws NonceYieldsZero when r or s comes out zero.
EcdsaSignature ecdsa_sign_with_nonce(const Scalar& sk, const Digest& digest, const Scalar& nonce,
                                     const Curve& curve = Curve::secp256k1());

struct SignedWithNonce {
    EcdsaSignature sig;
    Scalar nonce;
};

/// Honest signature with a fresh random nonce; also returns the nonce.
SignedWithNonce ecdsa_sign(const Scalar& sk, const Digest& digest, HashStream& rng,
                           const Curve& curve = Curve::secp256k1());

/// Accepts both s and n - s.
bool ecdsa_verify(const Point& pk, const Digest& digest, const EcdsaSignature& sig,
                  const Curve& curve = Curve::secp256k1());

/// k = s^-1 (z + r*sk) mod n. Throws InvalidSignature if sig does not verify
/// under sk*G.
Scalar subliminal_extract_nonce(const Scalar& sk, const Digest& digest, const EcdsaSignature& sig,
                                const Curve& curve = Curve::secp256k1());

/// SHA256 of the 32-byte big-endian x coordinate of sk_self * pk_peer.
Hash256 ecdh_chaincode(const Scalar& sk_self, const Point& pk_peer, const Curve& curve = Curve::secp256k1());

} // namespace abc::crypto
