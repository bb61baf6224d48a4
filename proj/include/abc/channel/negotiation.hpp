#pragma once

#include <array>

#include "abc/chain/chain_state.hpp"
#include "abc/masquerade/fee_model.hpp"

namespace abc::channel {

struct NegotiationResult {
    wallet::ExtendedPrivateKey esk_ab;
    Hash256 txid_first{};
    Hash256 txid_second{};
};

struct NegotiationOptions {
    wallet::Network network = wallet::Network::testnet;
    /// Fees for the two 1-in/1-out transactions come from the (1, 1) cell
    /// when a model is given, otherwise fallback_fee is used.
    const masquerade::FeeModel* fees = nullptr;
    tx::Satoshi fallback_fee = 2260;
};

/// Alice's side. Spends funding[0] to Charlie and funding[1] to Dave, the
/// second signature leaking sk_A to Bob. Both transactions are validated
/// before either is submitted.
NegotiationResult negotiate_send(const crypto::Scalar& sk_a, const crypto::Point& pk_b,
                                 const wallet::Address& addr_c, const wallet::Address& addr_d,
                                 chain::ChainState& chain, const std::array<tx::OutPoint, 2>& funding,
                                 crypto::HashStream& rng, const NegotiationOptions& opts = {});

/// Bob's side. Takes the first two transactions Alice's address signed, in
/// submission order, and tries them as (first, second), then swapped.
/// Throws NegotiationNotFound with fewer than two, ExtractionFailed when
/// neither order leaks a key matching pk_a.
NegotiationResult negotiate_recv(const crypto::Scalar& sk_b, const crypto::Point& pk_a,
                                 const chain::ChainState& chain, wallet::Network network = wallet::Network::testnet);

/// Index of the input whose public key hashes to addr, if any.
std::optional<std::size_t> input_signed_by(const tx::Transaction& t, const wallet::Address& addr);

} // namespace abc::channel
