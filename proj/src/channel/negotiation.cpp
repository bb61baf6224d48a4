#include "abc/channel/negotiation.hpp"

#include "abc/crypto/hash.hpp"
#include "abc/crypto/klepto.hpp"

namespace abc::channel {

using crypto::Curve;

std::optional<std::size_t> input_signed_by(const tx::Transaction& t, const wallet::Address& addr)
{
    const Curve& curve = Curve::secp256k1();
    for (std::size_t i = 0; i < t.inputs.size(); ++i) {
        try {
            const tx::InputSignature s = tx::parse_script_sig(t.inputs[i].script_sig);
            if (crypto::hash160(curve.encode(s.pk)) == addr.hash) return i;
        } catch (const Error&) {
        }
    }
    return std::nullopt;
}

NegotiationResult negotiate_send(const crypto::Scalar& sk_a, const crypto::Point& pk_b,
                                 const wallet::Address& addr_c, const wallet::Address& addr_d,
                                 chain::ChainState& chain, const std::array<tx::OutPoint, 2>& funding,
                                 crypto::HashStream& rng, const NegotiationOptions& opts)
{
    const Curve& curve = Curve::secp256k1();
    const crypto::KeyPair alice = crypto::keypair_from_secret(sk_a);
    if (!curve.on_curve(pk_b) || pk_b.infinity) throw Error(Errc::InvalidPoint, "receiver key is not a curve point");
    const wallet::Address addr_a = wallet::addr_from_pk(alice.pk, opts.network);
    if (addr_c.hash == addr_a.hash || addr_d.hash == addr_a.hash || addr_c.hash == addr_d.hash) {
        throw Error(Errc::InvalidArgument, "Charlie, Dave and Alice need three distinct addresses");
    }
    if (funding[0] == funding[1]) throw Error(Errc::InvalidArgument, "the two funding outputs must differ");

    const std::array<const wallet::Address*, 2> to{&addr_c, &addr_d};
    std::array<tx::Transaction, 2> raw;
    std::array<crypto::Digest, 2> digest;
    for (std::size_t k = 0; k < 2; ++k) {
        auto utxo = chain.find_utxo(funding[k]);
        if (!utxo) throw Error(Errc::UnknownInput, "funding output " + std::to_string(k) + " is not spendable");
        if (tx::p2pkh_key_hash(utxo->script_pubkey) != addr_a.hash) {
            throw Error(Errc::InvalidArgument, "funding output " + std::to_string(k) + " does not pay Alice");
        }
        tx::Satoshi fee = opts.fallback_fee;
        if (opts.fees && opts.fees->cells.contains({1, 1})) fee = masquerade::sample_fee(*opts.fees, {1, 1}, utxo->value, rng);
        if (fee >= utxo->value) {
            throw Error(Errc::FeeNonPositive, "funding output " + std::to_string(k) + " cannot cover the fee");
        }
        const tx::Spend spend{funding[k], utxo->value};
        const tx::Payment pay{*to[k], utxo->value - fee};
        raw[k] = tx::build_raw_tx(std::span(&spend, 1), std::span(&pay, 1));
        digest[k] = tx::sighash_all(raw[k], 0, utxo->script_pubkey);
    }

    const crypto::KleptoPair sigs = crypto::klepto_sign_pair(sk_a, pk_b, digest[0], digest[1], rng);
    const tx::InputSignature s1{sigs.first, alice.pk};
    const tx::InputSignature s2{sigs.second, alice.pk};
    const tx::Transaction t1 = tx::attach_signatures(raw[0], std::span(&s1, 1));
    const tx::Transaction t2 = tx::attach_signatures(raw[1], std::span(&s2, 1));
    chain.validate_tx(t1);
    chain.validate_tx(t2);

    NegotiationResult out;
    out.txid_first = chain.submit_tx(t1);
    out.txid_second = chain.submit_tx(t2);
    out.esk_ab = {sk_a, crypto::ecdh_chaincode(sk_a, pk_b)};
    return out;
}

NegotiationResult negotiate_recv(const crypto::Scalar& sk_b, const crypto::Point& pk_a,
                                 const chain::ChainState& chain, wallet::Network network)
{
    const wallet::Address addr_a = wallet::addr_from_pk(pk_a, network);
    struct Signed {
        tx::Transaction tx;
        crypto::EcdsaSignature sig;
        crypto::Digest digest;
    };
    std::vector<Signed> found;
    const Bytes prev_script = tx::p2pkh_script(addr_a);
    for (const tx::Transaction& t : chain.get_tx_from_addr(addr_a)) {
        auto i = input_signed_by(t, addr_a);
        if (!i) continue;
        found.push_back({t, tx::parse_script_sig(t.inputs[*i].script_sig).sig, tx::sighash_all(t, *i, prev_script)});
        if (found.size() == 2) break;
    }
    if (found.size() < 2) {
        throw Error(Errc::NegotiationNotFound,
                    std::to_string(found.size()) + " transaction(s) signed by " + addr_a.rendered() + ", need 2");
    }

    crypto::Scalar sk_a;
    try {
        sk_a = crypto::klepto_extract(sk_b, pk_a, found[0].sig, found[1].sig, found[1].digest);
    } catch (const Error& e) {
        if (e.code() != Errc::ExtractionFailed) throw;
        sk_a = crypto::klepto_extract(sk_b, pk_a, found[1].sig, found[0].sig, found[0].digest);
        std::swap(found[0], found[1]);
    }

    NegotiationResult out;
    out.esk_ab = {sk_a, crypto::ecdh_chaincode(sk_b, pk_a)};
    out.txid_first = found[0].tx.txid();
    out.txid_second = found[1].tx.txid();
    return out;
}

} // namespace abc::channel
