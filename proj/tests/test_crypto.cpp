#include "doctest.h"

#include <set>

#include "abc/crypto/hash.hpp"
#include "abc/crypto/klepto.hpp"
#include "oracle/toy_group.hpp"

using namespace abc;
using namespace abc::crypto;

namespace {

const Curve& T = Curve::toy();

Point lift(const toy::Pt& p) { return p.inf ? Point::identity() : Point::affine(p.x, p.y); }

Digest small_digest(int z)
{
    Digest d{};
    d[31] = static_cast<std::uint8_t>(z);
    return d;
}

int as_int(const Scalar& s) { return static_cast<int>(s.value().get_si()); }

} // namespace

TEST_CASE("hash primitives match published vectors")
{
    CHECK(to_hex(sha256(view("abc"))) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(to_hex(sha512(view("abc"))) ==
          "ddaf35a193617abacc417349ae20413112e6fa4e89a97ea20a9eeee64b55d39a"
          "2192992a274fc1a836ba3c23a3feebbd454d4423643ce80e2a9ac94fa54ca49f");
    CHECK(to_hex(ripemd160(view("abc"))) == "8eb208f7e05d987a9b044a8e98c6b087f15a0bfc");
    const Bytes key(20, 0x0b);
    CHECK(to_hex(hmac_sha512(key, view("Hi There"))) ==
          "87aa7cdea5ef619d4ff0b4241a1d6cb02379f4e2ce4ec2787ad0b30545e17cde"
          "daa833b7d6b8a702038b274eaea3f4e4be9d914eeb61f1702e696c203a126854");
}

TEST_CASE("hash stream is reproducible and seed-separated")
{
    Seed s{};
    HashStream a(s), b(s);
    for (int i = 0; i < 100; ++i) CHECK(a() == b());
    CHECK(HashStream::derive(s, "x", 1).next32() != HashStream::derive(s, "x", 2).next32());
    CHECK(HashStream::derive(s, "x", 1).next32() != HashStream::derive(s, "y", 1).next32());

    HashStream r(s);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 500; ++i) {
        const auto v = r.below(7);
        CHECK(v < 7);
        seen.insert(v);
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    CHECK(seen.size() == 7);
    CHECK(seed_from_string("7") == sha256(view("7")));
    CHECK(to_hex(seed_from_string(std::string(64, 'a'))) == std::string(64, 'a'));
}

TEST_CASE("toy curve group law agrees with the brute-force model")
{
    const auto pts = toy::all_points();
    CHECK(pts.size() == 19);
    for (int x = 0; x < toy::P; ++x) {
        for (int y = 0; y < toy::P; ++y) {
            const bool member = std::find(pts.begin(), pts.end(), toy::Pt{x, y, false}) != pts.end();
            CHECK(T.on_curve(Point::affine(x, y)) == member);
        }
    }
    for (const auto& p : pts) {
        for (const auto& q : pts) CHECK(T.add(lift(p), lift(q)) == lift(toy::add(p, q)));
        for (int k = 0; k <= 2 * toy::N; ++k) CHECK(T.mul(k, lift(p)) == lift(toy::mul(k, p)));
    }
    for (int k = 0; k <= 3 * toy::N; ++k) CHECK(T.mul_base(k) == lift(toy::mul(k)));
    CHECK(T.mul_base(toy::N).infinity);
    for (const auto& p : pts) {
        if (p.inf) continue;
        CHECK(T.decode(T.encode(lift(p))) == lift(p));
        CHECK(T.lift_x(p.x, p.y % 2 == 1) == lift(p));
    }
}

TEST_CASE("secp256k1 base multiples")
{
    const Curve& C = Curve::secp256k1();
    CHECK(C.mul_base(1) == C.generator());
    CHECK(to_hex(C.encode(C.mul_base(2))) == "02c6047f9441ed7d6d3045406e95c07cd85c778e4b8cef3ca7abac09b95c709ee5");
    CHECK(to_hex(C.encode(C.mul_base(3))) == "02f9308a019258c31049344f85f89d5229b531c845836f99b08601f113bce036f9");
    CHECK(C.mul_base(C.order()).infinity);
    CHECK(C.mul_base(C.order() - 1) == C.negate(C.generator()));
    const mpz_class k("0x3c6cb8d0f6a264c91ea8b5030fadaa8e538b020f0a387421a12de9319dc93368");
    CHECK(C.mul_base(k) == C.mul(k, C.generator()));
    Bytes too_big(33, 0xff);
    too_big[0] = 0x02;
    CHECK_THROWS_AS(C.decode(too_big), Error);
    Bytes bad_prefix(C.encode(C.generator()).begin(), C.encode(C.generator()).end());
    bad_prefix[0] = 0x04;
    CHECK_THROWS_AS(C.decode(bad_prefix), Error);
}

TEST_CASE("toy ECDSA matches exhaustive arithmetic")
{
    int zero_nonces = 0;
    for (int sk = 1; sk < toy::N; ++sk) {
        const Point pk = T.mul_base(sk);
        for (int k = 1; k < toy::N; ++k) {
            for (int z = 0; z < toy::N; ++z) {
                const auto expect = toy::sign(sk, z, k);
                if (!expect) {
                    CHECK_THROWS_AS(ecdsa_sign_with_nonce(Scalar(sk), small_digest(z), Scalar(k), T), Error);
                    ++zero_nonces;
                    continue;
                }
                const auto sig = ecdsa_sign_with_nonce(Scalar(sk), small_digest(z), Scalar(k), T);
                CHECK(as_int(sig.r) == expect->r);
                CHECK(as_int(sig.s) == expect->s);
                CHECK(ecdsa_verify(pk, small_digest(z), sig, T));
                const EcdsaSignature flipped{sig.r, Scalar(toy::N - expect->s)};
                CHECK(ecdsa_verify(pk, small_digest(z), flipped, T));
            }
        }
    }
    CHECK(zero_nonces > 0);

    const auto fixture = toy::sign(7, 11, 5);
    REQUIRE(fixture);
    const auto sig = ecdsa_sign_with_nonce(Scalar(7), small_digest(11), Scalar(5), T);
    CHECK(as_int(sig.r) == fixture->r);
    CHECK(as_int(sig.s) == fixture->s);
}

TEST_CASE("nonce with x(kG) = 0 is rejected")
{
    int found = 0;
    for (int k = 1; k < toy::N; ++k) {
        if (toy::mul(k).x % toy::N != 0) continue;
        ++found;
        try {
            ecdsa_sign_with_nonce(Scalar(3), small_digest(4), Scalar(k), T);
            FAIL("expected NonceYieldsZero");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::NonceYieldsZero);
        }
    }
    CHECK(found == 2); // (0, 6) and (0, 11)
}

TEST_CASE("subliminal nonce recovery over the whole toy group")
{
    for (int sk = 1; sk < toy::N; ++sk) {
        for (int k = 1; k < toy::N; ++k) {
            const int z = (sk * 3 + k) % toy::N;
            if (!toy::sign(sk, z, k)) continue;
            const auto sig = ecdsa_sign_with_nonce(Scalar(sk), small_digest(z), Scalar(k), T);
            CHECK(as_int(subliminal_extract_nonce(Scalar(sk), small_digest(z), sig, T)) == k);
            const EcdsaSignature neg{sig.r, Scalar(T.order() - sig.s.value())};
            CHECK(as_int(subliminal_extract_nonce(Scalar(sk), small_digest(z), neg, T)) == toy::N - k);
        }
    }
}

TEST_CASE("secp256k1 sign, verify and nonce recovery")
{
    HashStream rng(Seed{1});
    for (int i = 0; i < 200; ++i) {
        const KeyPair kp = keypair_generate(rng);
        const Digest d = rng.next32();
        const Scalar k = random_scalar(rng);
        const auto sig = ecdsa_sign_with_nonce(kp.sk, d, k);
        CHECK(ecdsa_verify(kp.pk, d, sig));
        Digest bad = d;
        bad[i % 32] ^= 0x01;
        CHECK_FALSE(ecdsa_verify(kp.pk, bad, sig));
        CHECK(subliminal_extract_nonce(kp.sk, d, sig) == k);
        const EcdsaSignature neg{sig.r, Scalar(Curve::secp256k1().order() - sig.s.value())};
        CHECK(ecdsa_verify(kp.pk, d, neg));
        CHECK(subliminal_extract_nonce(kp.sk, d, neg).value() == Curve::secp256k1().order() - k.value());
    }
    const KeyPair a = keypair_generate(rng);
    const KeyPair b = keypair_generate(rng);
    const Digest d = rng.next32();
    const auto sig = ecdsa_sign(a.sk, d, rng).sig;
    try {
        subliminal_extract_nonce(b.sk, d, sig);
        FAIL("expected InvalidSignature");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidSignature);
    }
    CHECK(EcdsaSignature::from_bytes(sig.to_bytes()) == sig);
}

TEST_CASE("keypair generation")
{
    const KeyPair a = keypair_generate(Seed{});
    const KeyPair b = keypair_generate(Seed{});
    CHECK(a.sk == b.sk);
    CHECK(a.pk == Curve::secp256k1().mul_base(a.sk.value()));
    CHECK_FALSE(keypair_generate().sk == keypair_generate().sk);
    const KeyPair t = keypair_generate(Seed{}, T);
    CHECK(lift(toy::mul(as_int(t.sk))) == t.pk);
    CHECK_THROWS_AS(keypair_from_secret(Scalar(0ul)), Error);
}

TEST_CASE("toy kleptographic pair matches the replayed nonce schedule")
{
    for (std::uint8_t s = 0; s < 40; ++s) {
        HashStream rng(Seed{s});
        const int sk_a = 1 + static_cast<int>(rng.below(toy::N - 1));
        const int sk_b = 1 + static_cast<int>(rng.below(toy::N - 1));
        const int z1 = static_cast<int>(rng.below(toy::N));
        const int z2 = static_cast<int>(rng.below(toy::N));
        const toy::Pt pk_b = toy::mul(sk_b);

        const KleptoPair pair = klepto_sign_pair(Scalar(sk_a), lift(pk_b), small_digest(z1), small_digest(z2), rng, T);

        // Every k1 consistent with the first signature must predict the second.
        int consistent = 0;
        for (int k1 = 1; k1 < toy::N; ++k1) {
            const auto s1 = toy::sign(sk_a, z1, k1);
            if (!s1 || s1->r != as_int(pair.first.r) || s1->s != as_int(pair.first.s)) continue;
            ++consistent;
            const auto s2 = toy::klepto_second(sk_a, pk_b, k1, z2);
            REQUIRE(s2);
            CHECK(as_int(pair.second.r) == s2->r);
            CHECK(as_int(pair.second.s) == s2->s);
        }
        CHECK(consistent == 1);
        CHECK(as_int(klepto_extract(Scalar(sk_b), lift(toy::mul(sk_a)), pair.first, pair.second, small_digest(z2), T)) ==
              sk_a);
    }
}

TEST_CASE("secp256k1 kleptographic round trip and honest-signature rejection")
{
    HashStream rng(Seed{9});
    for (int i = 0; i < 25; ++i) {
        const KeyPair a = keypair_generate(rng);
        const KeyPair b = keypair_generate(rng);
        const Digest d1 = rng.next32(), d2 = rng.next32();
        const KleptoPair pair = klepto_sign_pair(a.sk, b.pk, d1, d2, rng);
        CHECK(ecdsa_verify(a.pk, d1, pair.first));
        CHECK(ecdsa_verify(a.pk, d2, pair.second));
        CHECK(klepto_extract(b.sk, a.pk, pair.first, pair.second, d2) == a.sk);
    }
    for (int i = 0; i < 5; ++i) {
        const KeyPair a = keypair_generate(rng);
        const KeyPair b = keypair_generate(rng);
        const Digest d1 = rng.next32(), d2 = rng.next32();
        const auto s1 = ecdsa_sign(a.sk, d1, rng).sig;
        const auto s2 = ecdsa_sign(a.sk, d2, rng).sig;
        try {
            klepto_extract(b.sk, a.pk, s1, s2, d2);
            FAIL("expected ExtractionFailed");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::ExtractionFailed);
        }
    }
}

TEST_CASE("ECDH chaincode")
{
    // 3 * (5G) = 15G; the chaincode hashes its x as 32 big-endian bytes.
    const toy::Pt shared = toy::mul(15);
    std::array<std::uint8_t, 32> x{};
    x[31] = static_cast<std::uint8_t>(shared.x);
    const auto expect = toy::sha256(x.data(), x.size());
    const Hash256 got = ecdh_chaincode(Scalar(3), T.mul_base(5), T);
    CHECK(std::equal(got.begin(), got.end(), expect.begin()));

    HashStream rng(Seed{4});
    const KeyPair a = keypair_generate(rng);
    std::set<Hash256> seen;
    for (int i = 0; i < 1000; ++i) {
        const KeyPair b = keypair_generate(rng);
        const Hash256 c = ecdh_chaincode(a.sk, b.pk);
        if (i < 50) CHECK(c == ecdh_chaincode(b.sk, a.pk));
        seen.insert(c);
    }
    CHECK(seen.size() == 1000);
}
