#include "abc/crypto/ecdsa.hpp"

#include <algorithm>

#include "abc/crypto/hash.hpp"

namespace abc::crypto {

std::array<std::uint8_t, 64> EcdsaSignature::to_bytes() const
{
    std::array<std::uint8_t, 64> out;
    Hash256 rb = r.to_bytes();
    Hash256 sb = s.to_bytes();
    std::copy(rb.begin(), rb.end(), out.begin());
    std::copy(sb.begin(), sb.end(), out.begin() + 32);
    return out;
}

EcdsaSignature EcdsaSignature::from_bytes(ByteView raw)
{
    if (raw.size() != 64) throw Error(Errc::InvalidEncoding, "signature must be 64 bytes");
    return {Scalar::from_bytes(raw.first(32)), Scalar::from_bytes(raw.subspan(32))};
}

Scalar random_scalar(HashStream& rng, const Curve& curve)
{
    // 384 bits reduced mod n keeps the bias below 2^-128 on secp256k1.
    for (;;) {
        std::array<std::uint8_t, 48> raw;
        rng.fill(raw);
        mpz_class v = curve.mod_n(mpz_from_bytes(raw));
        if (v != 0) return Scalar(std::move(v));
    }
}

KeyPair keypair_from_secret(const Scalar& sk, const Curve& curve)
{
    if (!curve.valid_secret(sk)) throw Error(Errc::InvalidScalar, "secret key out of range");
    return {sk, curve.mul_base(sk.value())};
}

KeyPair keypair_generate(HashStream& rng, const Curve& curve)
{
    return keypair_from_secret(random_scalar(rng, curve), curve);
}

KeyPair keypair_generate(std::optional<Seed> seed, const Curve& curve)
{
    HashStream rng(seed);
    return keypair_generate(rng, curve);
}

mpz_class digest_to_int(const Digest& digest, const Curve& curve) { return curve.mod_n(mpz_from_bytes(digest)); }

EcdsaSignature ecdsa_sign_with_nonce(const Scalar& sk, const Digest& digest, const Scalar& nonce, const Curve& curve)
{
    if (!curve.valid_secret(sk)) throw Error(Errc::InvalidScalar, "secret key out of range");
    if (!curve.valid_secret(nonce)) throw Error(Errc::InvalidScalar, "nonce out of range");

    Point big_r = curve.mul_base(nonce.value());
    mpz_class r = curve.mod_n(big_r.x);
    if (r == 0) throw Error(Errc::NonceYieldsZero, "nonce gives r = 0");
    mpz_class s = curve.mod_n(curve.inv_n(nonce.value()) * (digest_to_int(digest, curve) + r * sk.value()));
    if (s == 0) throw Error(Errc::NonceYieldsZero, "nonce gives s = 0");
    return {Scalar(std::move(r)), Scalar(std::move(s))};
}

SignedWithNonce ecdsa_sign(const Scalar& sk, const Digest& digest, HashStream& rng, const Curve& curve)
{
    for (;;) {
        Scalar nonce = random_scalar(rng, curve);
        try {
            return {ecdsa_sign_with_nonce(sk, digest, nonce, curve), nonce};
        } catch (const Error& e) {
            if (e.code() != Errc::NonceYieldsZero) throw;
        }
    }
}

bool ecdsa_verify(const Point& pk, const Digest& digest, const EcdsaSignature& sig, const Curve& curve)
{
    if (pk.infinity || !curve.on_curve(pk)) return false;
    if (!curve.valid_secret(sig.r) || !curve.valid_secret(sig.s)) return false;
    mpz_class w = curve.inv_n(sig.s.value());
    mpz_class u1 = curve.mod_n(digest_to_int(digest, curve) * w);
    mpz_class u2 = curve.mod_n(sig.r.value() * w);
    Point x = curve.mul_add(u1, u2, pk);
    if (x.infinity) return false;
    return curve.mod_n(x.x) == sig.r.value();
}

Scalar subliminal_extract_nonce(const Scalar& sk, const Digest& digest, const EcdsaSignature& sig, const Curve& curve)
{
    if (!curve.valid_secret(sk)) throw Error(Errc::InvalidScalar, "secret key out of range");
    if (!ecdsa_verify(curve.mul_base(sk.value()), digest, sig, curve)) {
        throw Error(Errc::InvalidSignature, "signature does not verify under the given key");
    }
    mpz_class k = curve.mod_n(curve.inv_n(sig.s.value()) * (digest_to_int(digest, curve) + sig.r.value() * sk.value()));
    return Scalar(std::move(k));
}

Hash256 ecdh_chaincode(const Scalar& sk_self, const Point& pk_peer, const Curve& curve)
{
    if (!curve.valid_secret(sk_self)) throw Error(Errc::InvalidScalar, "secret key out of range");
    if (!curve.on_curve(pk_peer)) throw Error(Errc::InvalidPoint, "peer key not on curve");
    Point shared = curve.mul(sk_self.value(), pk_peer);
    if (shared.infinity) throw Error(Errc::IdentityPoint, "ECDH product is the identity");
    return sha256(mpz_to_bytes32(shared.x));
}

} // namespace abc::crypto
