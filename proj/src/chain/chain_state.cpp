#include "abc/chain/chain_state.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <mutex>

#include "abc/crypto/hash.hpp"

namespace abc::chain {

namespace {

constexpr std::string_view kMagic = "ABCCHAIN";
constexpr std::uint32_t kFormatVersion = 1;

void index_once(AddrIndex& index, const Hash160& key, const Hash256& txid)
{
    auto& list = index[key];
    if (list.empty() || list.back() != txid) list.push_back(txid);
}

} // namespace

ChainState::ChainState(const ChainState& other)
{
    std::shared_lock lock(other.mu_);
    visibility_ = other.visibility_;
    faucet_counter_ = other.faucet_counter_;
    txs_ = other.txs_;
    tx_pos_ = other.tx_pos_;
    blocks_ = other.blocks_;
    mempool_ = other.mempool_;
    confirmed_utxo_ = other.confirmed_utxo_;
    mempool_created_ = other.mempool_created_;
    spent_ = other.spent_;
    mempool_spent_ = other.mempool_spent_;
    addr_index_ = other.addr_index_;
}

ChainState& ChainState::operator=(const ChainState& other)
{
    if (this == &other) return *this;
    ChainState copy(other);
    std::unique_lock lock(mu_);
    visibility_ = copy.visibility_;
    faucet_counter_ = copy.faucet_counter_;
    txs_ = std::move(copy.txs_);
    tx_pos_ = std::move(copy.tx_pos_);
    blocks_ = std::move(copy.blocks_);
    mempool_ = std::move(copy.mempool_);
    confirmed_utxo_ = std::move(copy.confirmed_utxo_);
    mempool_created_ = std::move(copy.mempool_created_);
    spent_ = std::move(copy.spent_);
    mempool_spent_ = std::move(copy.mempool_spent_);
    addr_index_ = std::move(copy.addr_index_);
    return *this;
}

std::optional<Utxo> ChainState::spendable(const OutPoint& op) const
{
    if (spent_.count(op)) return std::nullopt;
    if (auto it = confirmed_utxo_.find(op); it != confirmed_utxo_.end()) return it->second;
    if (auto it = mempool_created_.find(op); it != mempool_created_.end()) return it->second;
    return std::nullopt;
}

Satoshi ChainState::check_tx(const Transaction& tx, bool verify_signatures) const
{
    if (tx.inputs.empty() || tx.outputs.empty()) {
        throw Error(Errc::MalformedData, "transaction needs inputs and outputs");
    }
    std::set<OutPoint> seen;
    Satoshi in_sum = 0;
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
        const OutPoint& op = tx.inputs[i].prevout;
        if (!seen.insert(op).second) throw Error(Errc::DoubleSpend, "transaction spends an outpoint twice");
        auto utxo = spendable(op);
        if (!utxo) {
            if (spent_.count(op)) throw Error(Errc::DoubleSpend, "input already spent: " + tx::txid_to_display(op.txid));
            throw Error(Errc::UnknownInput, "unknown input: " + tx::txid_to_display(op.txid));
        }
        in_sum += utxo->value;

        auto key_hash = tx::p2pkh_key_hash(utxo->script_pubkey);
        if (!key_hash) throw Error(Errc::BadSignature, "spent output is not P2PKH");
        tx::InputSignature sig;
        try {
            sig = tx::parse_script_sig(tx.inputs[i].script_sig);
        } catch (const Error& e) {
            throw Error(Errc::BadSignature, std::string("input ") + std::to_string(i) + ": " + e.what());
        }
        if (crypto::hash160(crypto::Curve::secp256k1().encode(sig.pk)) != *key_hash) {
            throw Error(Errc::BadSignature, "input " + std::to_string(i) + " key does not match the spent output");
        }
        if (verify_signatures &&
            !crypto::ecdsa_verify(sig.pk, tx::sighash_all(tx, i, utxo->script_pubkey), sig.sig)) {
            throw Error(Errc::BadSignature, "input " + std::to_string(i) + " signature does not verify");
        }
    }
    Satoshi out_sum = 0;
    for (const auto& o : tx.outputs) {
        if (o.value == 0) throw Error(Errc::MalformedData, "zero-value output");
        out_sum += o.value;
    }
    if (in_sum <= out_sum) throw Error(Errc::FeeNonPositive, "transaction pays no fee");
    return in_sum - out_sum;
}

Hash256 ChainState::accept(const Transaction& tx, bool faucet, bool verify_signatures)
{
    if (!faucet) check_tx(tx, verify_signatures);
    const Hash256 txid = tx.txid();
    if (tx_pos_.count(txid)) throw Error(Errc::DoubleSpend, "transaction already known");

    StoredTx stored{tx, txid, faucet, std::nullopt};
    if (!faucet) {
        for (const auto& in : tx.inputs) {
            auto utxo = spendable(in.prevout);
            spent_.insert(in.prevout);
            mempool_spent_.insert(in.prevout);
            index_once(addr_index_, *tx::p2pkh_key_hash(utxo->script_pubkey), txid);
        }
    }
    for (std::uint32_t v = 0; v < tx.outputs.size(); ++v) {
        const auto& o = tx.outputs[v];
        mempool_created_[OutPoint{txid, v}] = Utxo{o.value, o.script_pubkey};
        if (!faucet) {
            if (auto h = tx::p2pkh_key_hash(o.script_pubkey)) index_once(addr_index_, *h, txid);
        }
    }
    tx_pos_[txid] = txs_.size();
    mempool_.push_back(txs_.size());
    txs_.push_back(std::move(stored));
    return txid;
}

Hash256 ChainState::submit_tx(const Transaction& tx)
{
    std::unique_lock lock(mu_);
    return accept(tx, false, true);
}

void ChainState::validate_tx(const Transaction& tx) const
{
    std::shared_lock lock(mu_);
    check_tx(tx, true);
}

Block ChainState::mine_locked(std::uint64_t timestamp)
{
    Block block;
    block.height = blocks_.size();
    block.timestamp = timestamp;
    for (std::size_t pos : mempool_) {
        StoredTx& st = txs_[pos];
        if (!st.faucet) {
            for (const auto& in : st.tx.inputs) confirmed_utxo_.erase(in.prevout);
        }
        for (std::uint32_t v = 0; v < st.tx.outputs.size(); ++v) {
            const auto& o = st.tx.outputs[v];
            confirmed_utxo_[OutPoint{st.txid, v}] = Utxo{o.value, o.script_pubkey};
        }
        st.block_height = block.height;
        block.txids.push_back(st.txid);
    }
    mempool_.clear();
    mempool_created_.clear();
    mempool_spent_.clear();
    blocks_.push_back(block);
    return block;
}

Block ChainState::mine_block()
{
    std::unique_lock lock(mu_);
    return mine_locked(kGenesisTime + blocks_.size() * kBlockInterval);
}

Transaction ChainState::make_faucet_tx(const wallet::Address& addr, Satoshi value) const
{
    Transaction tx;
    Bytes marker{'f', 'a', 'u', 'c', 'e', 't'};
    put_le64(marker, faucet_counter_);
    tx.inputs.push_back({OutPoint::null(), marker, 0xffffffffu});
    tx.outputs.push_back({value, tx::p2pkh_script(addr)});
    return tx;
}

OutPoint ChainState::faucet_fund(const wallet::Address& addr, Satoshi value)
{
    if (value == 0) throw Error(Errc::InvalidArgument, "faucet value must be positive");
    std::unique_lock lock(mu_);
    Hash256 txid = accept(make_faucet_tx(addr, value), true, false);
    ++faucet_counter_;
    return {txid, 0};
}

std::vector<Transaction> ChainState::get_tx_from_addr(const wallet::Address& addr) const
{
    return get_tx_from_addr(addr, default_visibility());
}

std::vector<Transaction> ChainState::get_tx_from_addr(const wallet::Address& addr, Visibility vis) const
{
    std::shared_lock lock(mu_);
    std::vector<Transaction> out;
    auto it = addr_index_.find(addr.hash);
    if (it == addr_index_.end()) return out;
    for (const Hash256& id : it->second) {
        const StoredTx& st = txs_[tx_pos_.at(id)];
        if (vis == Visibility::confirmed_only && !st.block_height) continue;
        out.push_back(st.tx);
    }
    return out;
}

std::vector<tx::Spend> ChainState::utxos(const wallet::Address& addr) const
{
    std::shared_lock lock(mu_);
    const Bytes script = tx::p2pkh_script(addr);
    std::vector<tx::Spend> out;
    auto collect = [&](const std::map<OutPoint, Utxo>& set) {
        for (const auto& [op, u] : set) {
            if (u.script_pubkey == script && !spent_.count(op)) out.push_back({op, u.value});
        }
    };
    collect(confirmed_utxo_);
    collect(mempool_created_);
    return out;
}

std::optional<Utxo> ChainState::find_utxo(const OutPoint& op) const
{
    std::shared_lock lock(mu_);
    return spendable(op);
}

void ChainState::set_default_visibility(Visibility vis)
{
    std::unique_lock lock(mu_);
    visibility_ = vis;
}

Visibility ChainState::default_visibility() const
{
    std::shared_lock lock(mu_);
    return visibility_;
}

std::uint64_t ChainState::height() const
{
    std::shared_lock lock(mu_);
    return blocks_.size();
}

std::vector<Block> ChainState::blocks() const
{
    std::shared_lock lock(mu_);
    return blocks_;
}

std::vector<StoredTx> ChainState::transactions() const
{
    std::shared_lock lock(mu_);
    return txs_;
}

std::optional<StoredTx> ChainState::find_tx(const Hash256& txid) const
{
    std::shared_lock lock(mu_);
    auto it = tx_pos_.find(txid);
    if (it == tx_pos_.end()) return std::nullopt;
    return txs_[it->second];
}

std::vector<Hash256> ChainState::mempool() const
{
    std::shared_lock lock(mu_);
    std::vector<Hash256> out;
    for (std::size_t pos : mempool_) out.push_back(txs_[pos].txid);
    return out;
}

AddrIndex ChainState::addr_index() const
{
    std::shared_lock lock(mu_);
    return addr_index_;
}

std::map<OutPoint, Utxo> ChainState::confirmed_utxos() const
{
    std::shared_lock lock(mu_);
    return confirmed_utxo_;
}

std::vector<TxSummary> ChainState::export_summaries() const
{
    std::shared_lock lock(mu_);
    // Every output ever created, so spent inputs can still be valued.
    std::map<OutPoint, Satoshi> values;
    for (const auto& st : txs_) {
        for (std::uint32_t v = 0; v < st.tx.outputs.size(); ++v) values[{st.txid, v}] = st.tx.outputs[v].value;
    }
    std::vector<TxSummary> out;
    for (const auto& st : txs_) {
        if (st.faucet) continue;
        TxSummary s;
        s.txid = st.txid;
        s.block_height = st.block_height;
        s.timestamp = st.block_height ? blocks_[*st.block_height].timestamp
                                      : kGenesisTime + blocks_.size() * kBlockInterval;
        s.input_count = st.tx.inputs.size();
        s.output_count = st.tx.outputs.size();
        for (const auto& in : st.tx.inputs) s.inputs_amount += values.at(in.prevout);
        s.outputs_amount = tx::total_output(st.tx);
        s.fee = s.inputs_amount - s.outputs_amount;
        out.push_back(s);
    }
    return out;
}

// Layout (all integers little-endian):
//   "ABCCHAIN" | u32 version | u8 visibility | u64 faucet_counter
//   varint n_tx   { u8 flags(bit0 = faucet) | varint len | raw tx }
//   varint n_blk  { u64 height | u64 timestamp | varint n | n x txid }
//   32-byte SHA256 over everything above
// Transactions appear in submission order; derived state (UTXO set, address
// index, mempool) is rebuilt by replay on load.
Bytes ChainState::serialize() const
{
    std::shared_lock lock(mu_);
    Bytes out(kMagic.begin(), kMagic.end());
    put_le32(out, kFormatVersion);
    out.push_back(visibility_ == Visibility::confirmed_only ? 1 : 0);
    put_le64(out, faucet_counter_);
    put_varint(out, txs_.size());
    for (const auto& st : txs_) {
        out.push_back(st.faucet ? 1 : 0);
        Bytes raw = st.tx.serialize();
        put_varint(out, raw.size());
        append(out, raw);
    }
    put_varint(out, blocks_.size());
    for (const auto& b : blocks_) {
        put_le64(out, b.height);
        put_le64(out, b.timestamp);
        put_varint(out, b.txids.size());
        for (const auto& id : b.txids) append(out, id);
    }
    append(out, crypto::sha256(out));
    return out;
}

ChainState ChainState::deserialize(ByteView raw)
{
    try {
        if (raw.size() < kMagic.size() + 32) throw Error(Errc::CorruptFile, "chain file too short");
        ByteView body = raw.first(raw.size() - 32);
        Hash256 check = crypto::sha256(body);
        if (!std::equal(check.begin(), check.end(), raw.end() - 32)) {
            throw Error(Errc::CorruptFile, "chain file checksum mismatch");
        }
        Reader rd(body);
        ByteView magic = rd.take(kMagic.size());
        if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) throw Error(Errc::CorruptFile, "bad magic");
        if (rd.le32() != kFormatVersion) throw Error(Errc::CorruptFile, "unsupported chain file version");

        ChainState state;
        std::uint8_t vis = rd.u8();
        if (vis > 1) throw Error(Errc::CorruptFile, "bad visibility flag");
        std::uint64_t faucet_counter = rd.le64();

        struct Entry {
            Transaction tx;
            bool faucet;
        };
        std::vector<Entry> entries(rd.varint());
        for (auto& e : entries) {
            std::uint8_t flags = rd.u8();
            if (flags > 1) throw Error(Errc::CorruptFile, "bad transaction flags");
            e.faucet = flags == 1;
            e.tx = Transaction::deserialize(rd.take(rd.varint()));
        }
        std::size_t next = 0;
        const std::uint64_t n_blocks = rd.varint();
        for (std::uint64_t h = 0; h < n_blocks; ++h) {
            if (rd.le64() != h) throw Error(Errc::CorruptFile, "non-consecutive block height");
            std::uint64_t ts = rd.le64();
            std::uint64_t n = rd.varint();
            for (std::uint64_t i = 0; i < n; ++i) {
                ByteView id = rd.take(32);
                if (next >= entries.size()) throw Error(Errc::CorruptFile, "block references unknown tx");
                Hash256 got = state.accept(entries[next].tx, entries[next].faucet, false);
                if (!std::equal(id.begin(), id.end(), got.begin())) {
                    throw Error(Errc::CorruptFile, "block tx order disagrees with submission order");
                }
                ++next;
            }
            state.mine_locked(ts);
        }
        for (; next < entries.size(); ++next) state.accept(entries[next].tx, entries[next].faucet, false);
        if (!rd.empty()) throw Error(Errc::CorruptFile, "trailing bytes in chain file");
        state.visibility_ = vis ? Visibility::confirmed_only : Visibility::include_mempool;
        state.faucet_counter_ = faucet_counter;
        return state;
    } catch (const Error& e) {
        if (e.code() == Errc::CorruptFile) throw;
        throw Error(Errc::CorruptFile, std::string("chain file: ") + e.what());
    }
}

void ChainState::save(const std::filesystem::path& path) const
{
    Bytes raw = serialize();
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::IoError, "cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (!out) throw Error(Errc::IoError, "short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

ChainState ChainState::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
    Bytes raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(raw);
}

} // namespace abc::chain
