#include "doctest.h"

#include <set>

#include "abc/crypto/ecdsa.hpp"
#include "abc/crypto/hash.hpp"
#include "abc/wallet/base58.hpp"
#include "abc/wallet/hd.hpp"
#include "support/bip32_vectors.hpp"

using namespace abc;
using namespace abc::wallet;

TEST_CASE("BIP32 test vectors 1 and 2")
{
    for (const auto& v : support::bip32_vectors()) {
        CAPTURE(v.seed);
        CHECK(support::replay_bip32(v) == "");
    }
}

TEST_CASE("seed and index preconditions")
{
    CHECK_THROWS_AS(master_from_seed(Bytes(8, 1)), Error);
    CHECK_THROWS_AS(master_from_seed(Bytes(65, 1)), Error);
    CHECK(master_from_seed(Bytes(16, 1)) == master_from_seed(Bytes(16, 1)));
    CHECK_THROWS_AS(DerivationIndex::make(0x80000000u), Error);
    const auto m = master_from_seed(Bytes(32, 7));
    CHECK_THROWS_AS(derive_child_hardened(m, DerivationIndex::make(1, false)), Error);
    CHECK(derive_child_hardened(m, DerivationIndex::make(0)) == derive_child_hardened(m, DerivationIndex::make(0)));
    CHECK_FALSE(derive_child_hardened(m, DerivationIndex::make(0)) == derive_child_hardened(m, DerivationIndex::make(1)));
}

TEST_CASE("base58 encodings")
{
    CHECK(base58_encode(view("Hello World!")) == "2NEpo7TZRRrLZSi2U");
    CHECK(base58_encode(from_hex("000001")) == "112");
    CHECK(base58_decode("112") == from_hex("000001"));
    CHECK(base58_encode({}) == "");
    CHECK_THROWS_AS(base58_decode("0OIl"), Error);
    // Genesis coinbase address.
    CHECK(base58check_encode(from_hex("0062e907b15cbf27d5425399ebf6f0fb50ebb88f18")) ==
          "1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNa");
}

TEST_CASE("key and address from a published testnet WIF")
{
    const WifKey k = wif_decode("cP4tQrMiduNh3tLxFGuMW599YCbkozQ6d1cgAenfYUi8muvsjyZP");
    CHECK(k.network == Network::testnet);
    CHECK(k.sk.to_hex() == "2c564dcdc2d6b2aa3bb90f60fcbcb7b59e700f4930a613808ed910527280e47f");
    const auto& C = crypto::Curve::secp256k1();
    const auto pk = C.mul_base(k.sk.value());
    CHECK(to_hex(C.encode(pk)) == "033cb5eca5fc7cd63df9e0a3840492843e364311800d8eb520f692eb43fc58af3e");
    CHECK(addr_from_sk(k.sk, Network::testnet).rendered() == "mjmuzfmtguwx3QrGpTmucfkyj9oEQ6kBkd");
    CHECK(addr_from_pk(pk, Network::testnet).rendered() == "mjmuzfmtguwx3QrGpTmucfkyj9oEQ6kBkd");
    CHECK(wif_encode(k.sk, Network::testnet) == "cP4tQrMiduNh3tLxFGuMW599YCbkozQ6d1cgAenfYUi8muvsjyZP");

    const Address main = addr_from_sk(k.sk, Network::mainnet);
    CHECK(main.hash == addr_from_sk(k.sk, Network::testnet).hash);
    CHECK(main.rendered() != "mjmuzfmtguwx3QrGpTmucfkyj9oEQ6kBkd");
    CHECK(main.rendered()[0] == '1');
}

TEST_CASE("WIF and address codecs round trip and reject damage")
{
    crypto::HashStream rng(crypto::Seed{3});
    for (int i = 0; i < 1000; ++i) {
        const auto sk = crypto::random_scalar(rng);
        const Network net = i % 2 ? Network::mainnet : Network::testnet;
        const WifKey back = wif_decode(wif_encode(sk, net));
        CHECK(back.sk == sk);
        CHECK(back.network == net);
        if (i < 100) {
            const Address a = addr_from_sk(sk, net);
            CHECK(Address::parse(a.rendered()) == a);
            CHECK(Address::parse(a.rendered()).rendered() == a.rendered());
        }
    }
    std::string wif = "cP4tQrMiduNh3tLxFGuMW599YCbkozQ6d1cgAenfYUi8muvsjyZP";
    wif.back() = wif.back() == 'P' ? 'Q' : 'P';
    try {
        wif_decode(wif);
        FAIL("expected ChecksumMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ChecksumMismatch);
    }
    Bytes payload = from_hex("05");
    payload.resize(21, 0x11);
    try {
        Address::parse(base58check_encode(payload));
        FAIL("expected BadPrefix");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::BadPrefix);
    }
    Bytes wif_payload(34, 0x22);
    wif_payload[0] = 0x81;
    wif_payload[33] = 0x01;
    try {
        wif_decode(base58check_encode(wif_payload));
        FAIL("expected BadPrefix");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::BadPrefix);
    }
}

TEST_CASE("batch derivation equals the serial reference and stays distinct")
{
    const ExtendedPrivateKey esk{crypto::Scalar(12345ul), crypto::sha256(view("chaincode"))};
    const auto par = derive_addresses(esk, 100, 500, Network::testnet);
    const auto ser = derive_addresses_serial(esk, 100, 500, Network::testnet);
    CHECK(par == ser);
    std::set<Hash160> hashes;
    for (const auto& a : par) hashes.insert(a.hash);
    CHECK(hashes.size() == 500);
    CHECK(ser[7] == addr_from_sk(derive_child_hardened(esk, DerivationIndex::make(107)).sk, Network::testnet));
    CHECK_THROWS_AS(derive_addresses(esk, 0x7fffffff, 2, Network::testnet), Error);
}
