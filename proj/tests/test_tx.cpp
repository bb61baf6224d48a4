#include "doctest.h"

#include <openssl/sha.h>

#include "abc/crypto/ecdsa.hpp"
#include "abc/crypto/hash.hpp"
#include "abc/tx/transaction.hpp"

using namespace abc;
using namespace abc::tx;

namespace {

Hash256 sha256d(const Bytes& b)
{
    Hash256 once, twice;
    SHA256(b.data(), b.size(), once.data());
    SHA256(once.data(), once.size(), twice.data());
    return twice;
}

Bytes hex(const char* s) { return from_hex(s); }

void cat(Bytes& out, const Bytes& more) { out.insert(out.end(), more.begin(), more.end()); }

const Hash160 kAlice = array_from_hex<20>("2ab5f7bd0c4e1d5bcd8bbd9b5d3a49d8a7d2a3f1");
const Hash160 kBob = array_from_hex<20>("89abcdefabbaabbaabbaabbaabbaabbaabbaabba");

Transaction two_in_two_out()
{
    Transaction t;
    t.inputs.push_back({OutPoint{array_from_hex<32>(std::string(64, '1')), 0}, hex("aabb"), 0xffffffffu});
    t.inputs.push_back({OutPoint{array_from_hex<32>(std::string(64, '2')), 3}, {}, 0xfffffffeu});
    t.outputs.push_back({50000, p2pkh_script(kAlice)});
    t.outputs.push_back({0x0102030405ull, p2pkh_script(kBob)});
    t.locktime = 7;
    return t;
}

// Byte layout written out by hand.
Bytes expected_bytes(const Bytes& script0, const Bytes& script1, bool with_hashtype)
{
    Bytes b = hex("01000000"
                  "02");
    cat(b, Bytes(32, 0x11));
    cat(b, hex("00000000"));
    b.push_back(static_cast<std::uint8_t>(script0.size()));
    cat(b, script0);
    cat(b, hex("ffffffff"));
    cat(b, Bytes(32, 0x22));
    cat(b, hex("03000000"));
    b.push_back(static_cast<std::uint8_t>(script1.size()));
    cat(b, script1);
    cat(b, hex("feffffff"
               "02"
               "50c3000000000000"
               "19"
               "76a914"));
    cat(b, Bytes(kAlice.begin(), kAlice.end()));
    cat(b, hex("88ac"
               "0504030201000000"
               "19"
               "76a914"));
    cat(b, Bytes(kBob.begin(), kBob.end()));
    cat(b, hex("88ac"
               "07000000"));
    if (with_hashtype) cat(b, hex("01000000"));
    return b;
}

} // namespace

TEST_CASE("serialization matches a hand-assembled layout")
{
    const Transaction t = two_in_two_out();
    const Bytes expect = expected_bytes(hex("aabb"), {}, false);
    CHECK(t.serialize() == expect);
    CHECK(t.txid() == sha256d(expect));
    Hash256 rev = sha256d(expect);
    std::reverse(rev.begin(), rev.end());
    CHECK(t.txid_hex() == to_hex(rev));
    CHECK(txid_from_display(t.txid_hex()) == t.txid());

    const Transaction back = Transaction::deserialize(expect);
    CHECK(back.serialize() == expect);
    CHECK(back.inputs[1].sequence == 0xfffffffeu);
    CHECK(back.outputs[1].value == 0x0102030405ull);
}

TEST_CASE("deserialization rejects damaged input")
{
    Bytes raw = two_in_two_out().serialize();
    Bytes longer = raw;
    longer.push_back(0);
    CHECK_THROWS_AS(Transaction::deserialize(longer), Error);
    for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{40}, raw.size() - 1}) {
        try {
            Transaction::deserialize(ByteView(raw.data(), cut));
            FAIL("expected MalformedData");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::MalformedData);
        }
    }
    // Non-canonical varint for the input count.
    Bytes odd = hex("01000000fd0200");
    CHECK_THROWS_AS(Transaction::deserialize(odd), Error);
}

TEST_CASE("legacy SIGHASH_ALL preimage")
{
    const Transaction t = two_in_two_out();
    const Bytes prev = p2pkh_script(kAlice);
    CHECK(sighash_all(t, 0, prev) == sha256d(expected_bytes(prev, {}, true)));
    CHECK(sighash_all(t, 1, prev) == sha256d(expected_bytes({}, prev, true)));
    CHECK(sighash_all(t, 0, prev) != sighash_all(t, 1, prev));
    CHECK_THROWS_AS(sighash_all(t, 2, prev), Error);
}

TEST_CASE("P2PKH scripts")
{
    const Bytes s = p2pkh_script(kAlice);
    CHECK(to_hex(s) == "76a914" + to_hex(kAlice) + "88ac");
    CHECK(p2pkh_key_hash(s) == kAlice);
    Bytes bad = s;
    bad[0] = 0x00;
    CHECK_FALSE(p2pkh_key_hash(bad));
    CHECK_FALSE(p2pkh_key_hash(hex("76a9")));
}

TEST_CASE("raw transaction construction")
{
    const wallet::Address to{wallet::Network::testnet, kBob};
    const Spend in[] = {{OutPoint{Hash256{}, 0}, 1000}, {OutPoint{Hash256{}, 1}, 500}};
    const Payment pay[] = {{to, 1400}};
    const Transaction t = build_raw_tx(in, pay);
    CHECK(t.inputs.size() == 2);
    CHECK(t.inputs[0].script_sig.empty());
    CHECK(total_output(t) == 1400);

    const Payment all[] = {{to, 1500}};
    try {
        build_raw_tx(in, all);
        FAIL("expected FeeNonPositive");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::FeeNonPositive);
    }
    const Payment zero[] = {{to, 0}};
    CHECK_THROWS_AS(build_raw_tx(in, zero), Error);
    CHECK_THROWS_AS(build_raw_tx({}, pay), Error);
}

TEST_CASE("script_sig layout and signature attachment")
{
    crypto::HashStream rng(crypto::Seed{5});
    const auto kp = crypto::keypair_generate(rng);
    const auto sig = crypto::ecdsa_sign(kp.sk, rng.next32(), rng).sig;
    const Bytes script = make_script_sig({sig, kp.pk});
    REQUIRE(script.size() == 100);
    CHECK(script[0] == 0x41);
    const auto raw = sig.to_bytes();
    CHECK(std::equal(raw.begin(), raw.end(), script.begin() + 1));
    CHECK(script[65] == 0x01);
    CHECK(script[66] == 0x21);
    const auto enc = crypto::Curve::secp256k1().encode(kp.pk);
    CHECK(std::equal(enc.begin(), enc.end(), script.begin() + 67));

    const InputSignature back = parse_script_sig(script);
    CHECK(back.sig == sig);
    CHECK(back.pk == kp.pk);
    Bytes broken = script;
    broken[65] = 0x02;
    try {
        parse_script_sig(broken);
        FAIL("expected MalformedScriptSig");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MalformedScriptSig);
    }

    Transaction t = two_in_two_out();
    const InputSignature one[] = {{sig, kp.pk}};
    try {
        attach_signatures(t, one);
        FAIL("expected ArityMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ArityMismatch);
    }
    const InputSignature two[] = {{sig, kp.pk}, {sig, kp.pk}};
    const Transaction signed_tx = attach_signatures(t, two);
    CHECK(extract_signatures(signed_tx).size() == 2);
    CHECK(extract_signatures(signed_tx)[1].sig == sig);
}
