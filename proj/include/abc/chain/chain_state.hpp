#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <vector>

#include "abc/tx/transaction.hpp"

namespace abc::chain {

using tx::OutPoint;
using tx::Satoshi;
using tx::Transaction;

struct Utxo {
    Satoshi value = 0;
    Bytes script_pubkey;

    friend bool operator==(const Utxo&, const Utxo&) = default;
};

struct Block {
    std::uint64_t height = 0;
    std::uint64_t timestamp = 0;
    std::vector<Hash256> txids;

    friend bool operator==(const Block&, const Block&) = default;
};

struct StoredTx {
    Transaction tx;
    Hash256 txid{};
    bool faucet = false;
    std::optional<std::uint64_t> block_height;
};

/// Per-transaction summary used for corpus export.
struct TxSummary {
    Hash256 txid{};
    std::optional<std::uint64_t> block_height;
    std::uint64_t timestamp = 0;
    bool faucet = false;
    std::size_t input_count = 0;
    std::size_t output_count = 0;
    Satoshi inputs_amount = 0;
    Satoshi outputs_amount = 0;
    Satoshi fee = 0;
};

enum class Visibility { include_mempool, confirmed_only };

using AddrIndex = std::map<Hash160, std::vector<Hash256>>;

/// In-process UTXO ledger with a mempool. No proof of work and no reorgs:
/// mine_block() drains the mempool into the next block.
///
/// Faucet transactions are the only value source. They have a single null
/// input, skip input validation, and are kept out of the address index and
/// corpus export.
///
/// Thread safety: mutations take an exclusive lock, queries a shared one.
class ChainState {
public:
    static constexpr std::uint64_t kGenesisTime = 1654041600; // 2022-06-01T00:00:00Z
    static constexpr std::uint64_t kBlockInterval = 600;

    ChainState() = default;
    ChainState(const ChainState& other);
    ChainState& operator=(const ChainState& other);

    /// Accepts a fully signed transaction into the mempool. Throws
    /// UnknownInput, DoubleSpend, BadSignature or FeeNonPositive.
    Hash256 submit_tx(const Transaction& tx);
    /// Runs every submit_tx check without changing state.
    void validate_tx(const Transaction& tx) const;

    Block mine_block();
    OutPoint faucet_fund(const wallet::Address& addr, Satoshi value);

    /// Non-faucet transactions touching addr as sender or receiver, in
    /// submission order.
    std::vector<Transaction> get_tx_from_addr(const wallet::Address& addr) const;
    std::vector<Transaction> get_tx_from_addr(const wallet::Address& addr, Visibility vis) const;

    std::vector<tx::Spend> utxos(const wallet::Address& addr) const;
    std::optional<Utxo> find_utxo(const OutPoint& op) const;

    void set_default_visibility(Visibility vis);
    Visibility default_visibility() const;

    std::uint64_t height() const;
    std::vector<Block> blocks() const;
    std::vector<StoredTx> transactions() const;
    std::optional<StoredTx> find_tx(const Hash256& txid) const;
    std::vector<Hash256> mempool() const;
    AddrIndex addr_index() const;
    /// Confirmed unspent outputs.
    std::map<OutPoint, Utxo> confirmed_utxos() const;
    std::vector<TxSummary> export_summaries() const;

    Bytes serialize() const;
    /// Throws CorruptFile on any structural or checksum problem.
    static ChainState deserialize(ByteView raw);
    /// Writes to a sibling temp file, then renames over path.
    void save(const std::filesystem::path& path) const;
    static ChainState load(const std::filesystem::path& path);

private:
    std::optional<Utxo> spendable(const OutPoint& op) const;
    Satoshi check_tx(const Transaction& tx, bool verify_signatures) const;
    Hash256 accept(const Transaction& tx, bool faucet, bool verify_signatures);
    Block mine_locked(std::uint64_t timestamp);
    Transaction make_faucet_tx(const wallet::Address& addr, Satoshi value) const;

    mutable std::shared_mutex mu_;
    Visibility visibility_ = Visibility::include_mempool;
    std::uint64_t faucet_counter_ = 0;
    std::vector<StoredTx> txs_;
    std::map<Hash256, std::size_t> tx_pos_;
    std::vector<Block> blocks_;
    std::vector<std::size_t> mempool_;
    std::map<OutPoint, Utxo> confirmed_utxo_;
    std::map<OutPoint, Utxo> mempool_created_;
    std::set<OutPoint> spent_;
    std::set<OutPoint> mempool_spent_;
    AddrIndex addr_index_;
};

} // namespace abc::chain
