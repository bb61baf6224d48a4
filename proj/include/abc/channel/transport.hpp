#pragma once

#include "abc/chain/chain_state.hpp"
#include "abc/channel/message.hpp"
#include "abc/channel/session.hpp"
#include "abc/masquerade/synth.hpp"

namespace abc::channel {

/// Raised when the chain rejects a transaction part way through a message.
/// Everything up to completed_index is on chain and the session already
/// points there.
class SendInterrupted : public Error {
public:
    SendInterrupted(std::uint32_t completed_index, const std::string& what)
        : Error(Errc::SendInterrupted, what), completed_index_(completed_index)
    {
    }
    std::uint32_t completed_index() const noexcept { return completed_index_; }

private:
    std::uint32_t completed_index_;
};

struct SentTransaction {
    Hash256 txid{};
    std::vector<wallet::Address> senders;
    masquerade::TxFeatureRecord features;
};

struct SendResult {
    std::vector<SentTransaction> transactions;
    std::uint32_t new_index = 0;
    std::size_t segments = 0;
};

/// One covert transaction per sampled feature record. A record with c
/// inputs carries the next c segments; each input spends a faucet UTXO at
/// the hardened child for its index and is signed with the segment as its
/// nonce. Input and output values are equal splits of the sampled totals
/// with the remainder on the first entry. Records with more inputs than
/// segments left, or fewer satoshis than outputs, are redrawn.
SendResult send_message(SessionState& session, ByteView message, chain::ChainState& chain,
                        const masquerade::TrainedPipeline& model, const crypto::Seed& seed);

struct ReceiveResult {
    Bytes message;
    std::uint32_t new_index = 0;
    std::size_t transactions = 0;
};

/// Scans child addresses from index_last until one has no outgoing
/// transaction. No transaction at all leaves the session untouched and
/// returns an empty message.
ReceiveResult receive_message(SessionState& session, const chain::ChainState& chain);

} // namespace abc::channel
