#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abc/crypto/ecdsa.hpp"
#include "abc/wallet/hd.hpp"

namespace abc::tx {

using Satoshi = std::uint64_t;

struct OutPoint {
    Hash256 txid{};
    std::uint32_t vout = 0;

    static OutPoint null() { return {Hash256{}, 0xffffffffu}; }
    bool is_null() const { return *this == null(); }

    friend auto operator<=>(const OutPoint&, const OutPoint&) = default;
};

struct TxInput {
    OutPoint prevout;
    Bytes script_sig;
    std::uint32_t sequence = 0xffffffffu;

    friend bool operator==(const TxInput&, const TxInput&) = default;
};

struct TxOutput {
    Satoshi value = 0;
    Bytes script_pubkey;

    friend bool operator==(const TxOutput&, const TxOutput&) = default;
};

// Legacy (pre-SegWit) layout: le32 version, varint-counted inputs and
// outputs, le32 locktime. Signatures inside script_sig are raw 64-byte r||s
// plus the sighash byte rather than DER.
struct Transaction {
    std::uint32_t version = 1;
    std::vector<TxInput> inputs;
    std::vector<TxOutput> outputs;
    std::uint32_t locktime = 0;

    Bytes serialize() const;
    /// Throws MalformedData on truncation, trailing bytes or absurd counts.
    static Transaction deserialize(ByteView raw);

    Hash256 txid() const;
    std::string txid_hex() const;

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

/// Txids display byte-reversed, as in block explorers.
std::string txid_to_display(const Hash256& txid);
Hash256 txid_from_display(std::string_view hex);

/// OP_DUP OP_HASH160 <20> OP_EQUALVERIFY OP_CHECKSIG
Bytes p2pkh_script(const Hash160& key_hash);
Bytes p2pkh_script(const wallet::Address& addr);
std::optional<Hash160> p2pkh_key_hash(ByteView script);

struct Spend {
    OutPoint outpoint;
    Satoshi value = 0;
};

struct Payment {
    wallet::Address to;
    Satoshi value = 0;
};

/// Unsigned transaction spending `spends` into `recipients` in order. Throws
/// FeeNonPositive unless sum(spends) > sum(recipients).
Transaction build_raw_tx(std::span<const Spend> spends, std::span<const Payment> recipients);

inline constexpr std::uint8_t kSighashAll = 0x01;

/// Legacy SIGHASH_ALL digest for one input. Throws IndexOutOfRange.
crypto::Digest sighash_all(const Transaction& tx, std::size_t input_index, ByteView prev_script_pubkey);

struct InputSignature {
    crypto::EcdsaSignature sig;
    crypto::Point pk;

    friend bool operator==(const InputSignature&, const InputSignature&) = default;
};

/// push(sig64 || 0x01) push(compressed pk)
Bytes make_script_sig(const InputSignature& input_sig);
/// Throws MalformedScriptSig.
InputSignature parse_script_sig(ByteView script_sig);

/// Throws ArityMismatch unless there is exactly one signature per input.
Transaction attach_signatures(Transaction tx, std::span<const InputSignature> sigs);
std::vector<InputSignature> extract_signatures(const Transaction& tx);

Satoshi total_output(const Transaction& tx);

} // namespace abc::tx
