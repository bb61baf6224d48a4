#include "abc/channel/transport.hpp"

#include <set>

#include "abc/channel/negotiation.hpp"

namespace abc::channel {

namespace {

tx::Satoshi share(tx::Satoshi total, std::size_t parts, std::size_t k)
{
    const tx::Satoshi base = total / parts;
    return k == 0 ? base + total % parts : base;
}

wallet::ExtendedPrivateKey child_at(const SessionState& s, std::uint32_t index)
{
    return wallet::derive_child_hardened(s.esk_ab, wallet::DerivationIndex::make(index));
}

constexpr int kMaxFeatureDraws = 10000;

SendInterrupted interrupted(SessionState& session, std::uint32_t at, const Error& e)
{
    session.advance_to(at);
    return SendInterrupted(at, "stopped at index " + std::to_string(at) + ": " + e.name() + ": " + e.what());
}

} // namespace

SendResult send_message(SessionState& session, ByteView message, chain::ChainState& chain,
                        const masquerade::TrainedPipeline& model, const crypto::Seed& seed)
{
    if (session.role != Role::sender) throw Error(Errc::InvalidArgument, "session is not a sender session");
    const std::uint32_t base = session.index_last;
    const MessageSegments segs = msg_encode(session.esk_ab, message, base);
    const std::size_t total = segs.segments.size();
    const auto& curve = crypto::Curve::secp256k1();
    crypto::HashStream out_keys = crypto::HashStream::derive(seed, "output-keys", base);

    SendResult result;
    result.segments = total;
    std::size_t ordinal = 0;
    std::size_t pos = 0;
    while (pos < total) {
        const std::size_t remaining = total - pos;
        const auto at = static_cast<std::uint32_t>(base + pos);
        masquerade::TxFeatureRecord rec;
        try {
            bool ok = false;
            for (int draw = 0; draw < kMaxFeatureDraws && !ok; ++draw) {
                rec = masquerade::sample_one(model.synth, model.fees, seed, ordinal++);
                ok = static_cast<std::size_t>(rec.input_cnt) <= remaining &&
                     rec.outputs_amount >= static_cast<tx::Satoshi>(rec.output_cnt);
            }
            if (!ok) throw Error(Errc::ModelMismatch, "model never yields a record with at most " +
                                                           std::to_string(remaining) + " inputs");
        } catch (const Error& e) {
            throw interrupted(session, at, e);
        }

        const auto c = static_cast<std::size_t>(rec.input_cnt);
        try {
            std::vector<wallet::ExtendedPrivateKey> children;
            std::vector<wallet::Address> senders;
            std::vector<tx::Spend> spends;
            for (std::size_t k = 0; k < c; ++k) {
                children.push_back(child_at(session, at + static_cast<std::uint32_t>(k)));
                senders.push_back(wallet::addr_from_sk(children.back().sk, session.network));
                const tx::Satoshi value = share(rec.inputs_amount, c, k);
                spends.push_back({chain.faucet_fund(senders.back(), value), value});
            }
            std::vector<tx::Payment> payments;
            for (std::size_t o = 0; o < static_cast<std::size_t>(rec.output_cnt); ++o) {
                const crypto::KeyPair throwaway = crypto::keypair_generate(out_keys);
                payments.push_back({wallet::addr_from_pk(throwaway.pk, session.network),
                                    share(rec.outputs_amount, static_cast<std::size_t>(rec.output_cnt), o)});
            }

            tx::Transaction t = tx::build_raw_tx(spends, payments);
            std::vector<tx::InputSignature> sigs;
            for (std::size_t k = 0; k < c; ++k) {
                const crypto::Digest digest = tx::sighash_all(t, k, tx::p2pkh_script(senders[k]));
                const crypto::Scalar nonce(crypto::mpz_from_bytes(segs.segments[pos + k]));
                sigs.push_back({crypto::ecdsa_sign_with_nonce(children[k].sk, digest, nonce),
                                curve.mul_base(children[k].sk.value())});
            }
            t = tx::attach_signatures(std::move(t), sigs);
            result.transactions.push_back({chain.submit_tx(t), senders, rec});
        } catch (const Error& e) {
            throw interrupted(session, at, e);
        }
        pos += c;
    }
    session.advance_to(static_cast<std::uint32_t>(base + total));
    result.new_index = session.index_last;
    return result;
}

ReceiveResult receive_message(SessionState& session, const chain::ChainState& chain)
{
    if (session.role != Role::receiver) throw Error(Errc::InvalidArgument, "session is not a receiver session");
    MessageSegments collected;
    collected.base_index = session.index_last;
    std::vector<Hash256> carrier;

    for (std::uint32_t index = session.index_last; index < wallet::DerivationIndex::kHardenedBit; ++index) {
        const wallet::ExtendedPrivateKey child = child_at(session, index);
        const wallet::Address addr = wallet::addr_from_sk(child.sk, session.network);
        bool found = false;
        for (const tx::Transaction& t : chain.get_tx_from_addr(addr)) {
            auto i = input_signed_by(t, addr);
            if (!i) continue;
            const crypto::EcdsaSignature sig = tx::parse_script_sig(t.inputs[*i].script_sig).sig;
            const crypto::Digest digest = tx::sighash_all(t, *i, tx::p2pkh_script(addr));
            collected.segments.push_back(crypto::subliminal_extract_nonce(child.sk, digest, sig).to_bytes());
            carrier.push_back(t.txid());
            found = true;
            break;
        }
        if (!found) break;
    }

    ReceiveResult out;
    out.new_index = session.index_last;
    if (collected.segments.empty()) return out;

    std::size_t used = 0;
    out.message = msg_decode(session.esk_ab, collected, &used);
    out.transactions = std::set<Hash256>(carrier.begin(), carrier.begin() + static_cast<std::ptrdiff_t>(used)).size();
    session.advance_to(static_cast<std::uint32_t>(session.index_last + used));
    out.new_index = session.index_last;
    return out;
}

} // namespace abc::channel
