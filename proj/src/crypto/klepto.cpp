#include "abc/crypto/klepto.hpp"

#include <vector>

#include "abc/crypto/hash.hpp"

namespace abc::crypto {

mpz_class klepto_nonce(const Point& shared, unsigned counter, const Curve& curve)
{
    CompressedPoint enc = curve.encode(shared);
    std::array<std::uint8_t, 34> data;
    std::copy(enc.begin(), enc.end(), data.begin());
    data[33] = static_cast<std::uint8_t>(counter);
    return curve.mod_n(mpz_from_bytes(sha256(data)));
}

KleptoPair klepto_sign_pair(const Scalar& sk_sender, const Point& pk_receiver, const Digest& digest1,
                            const Digest& digest2, HashStream& rng, const Curve& curve)
{
    if (pk_receiver.infinity || !curve.on_curve(pk_receiver)) {
        throw Error(Errc::InvalidPoint, "receiver key not on curve");
    }
    SignedWithNonce first = ecdsa_sign(sk_sender, digest1, rng, curve);
    Point shared = curve.mul(first.nonce.value(), pk_receiver);

    for (unsigned counter = 0; counter < kKleptoMaxCounter; ++counter) {
        mpz_class k2 = klepto_nonce(shared, counter, curve);
        if (k2 == 0) continue;
        try {
            return {first.sig, ecdsa_sign_with_nonce(sk_sender, digest2, Scalar(k2), curve)};
        } catch (const Error& e) {
            if (e.code() != Errc::NonceYieldsZero) throw;
        }
    }
    throw Error(Errc::DegenerateNonce, "no usable kleptographic nonce in 256 counters");
}

Scalar klepto_extract(const Scalar& sk_receiver, const Point& pk_sender, const EcdsaSignature& first,
                      const EcdsaSignature& second, const Digest& digest2, const Curve& curve)
{
    if (!curve.valid_secret(sk_receiver)) throw Error(Errc::InvalidScalar, "receiver key out of range");
    if (!curve.valid_secret(first.r) || !curve.valid_secret(second.r) || !curve.valid_secret(second.s)) {
        throw Error(Errc::ExtractionFailed, "signature components out of range");
    }

    // r1 = x(k1*G) mod n, so x(k1*G) is r1 + j*n for some j with r1 + j*n < p.
    std::vector<Point> shared;
    for (mpz_class x = first.r.value(); x < curve.p(); x += curve.order()) {
        for (bool odd : {false, true}) {
            if (auto r1 = curve.lift_x(x, odd)) shared.push_back(curve.mul(sk_receiver.value(), *r1));
        }
    }

    const mpz_class z2 = digest_to_int(digest2, curve);
    const mpz_class r2_inv = curve.inv_n(second.r.value());
    for (unsigned counter = 0; counter < kKleptoMaxCounter; ++counter) {
        for (const Point& q : shared) {
            if (q.infinity) continue;
            mpz_class k2 = klepto_nonce(q, counter, curve);
            if (k2 == 0) continue;
            mpz_class sk = curve.mod_n((second.s.value() * k2 - z2) * r2_inv);
            if (sk == 0) continue;
            if (curve.mul_base(sk) != pk_sender) continue;
            if (curve.mod_n(curve.mul_base(k2).x) != second.r.value()) continue;
            return Scalar(std::move(sk));
        }
    }
    throw Error(Errc::ExtractionFailed, "no kleptographic candidate matches the sender key");
}

} // namespace abc::crypto
