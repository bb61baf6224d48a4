#include "abc/tx/transaction.hpp"

#include <algorithm>
#include <limits>

#include "abc/crypto/hash.hpp"

namespace abc::tx {

namespace {

constexpr std::uint8_t OP_DUP = 0x76;
constexpr std::uint8_t OP_HASH160 = 0xa9;
constexpr std::uint8_t OP_EQUALVERIFY = 0x88;
constexpr std::uint8_t OP_CHECKSIG = 0xac;

// Generous sanity bound; the channel never builds more than a handful.
constexpr std::uint64_t kMaxInOut = 100000;

void write_tx(Bytes& out, const Transaction& tx, std::optional<std::size_t> signing_index, ByteView signing_script)
{
    put_le32(out, tx.version);
    put_varint(out, tx.inputs.size());
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
        const TxInput& in = tx.inputs[i];
        append(out, in.prevout.txid);
        put_le32(out, in.prevout.vout);
        ByteView script = in.script_sig;
        if (signing_index) script = (i == *signing_index) ? signing_script : ByteView{};
        put_varint(out, script.size());
        append(out, script);
        put_le32(out, in.sequence);
    }
    put_varint(out, tx.outputs.size());
    for (const TxOutput& o : tx.outputs) {
        put_le64(out, o.value);
        put_varint(out, o.script_pubkey.size());
        append(out, o.script_pubkey);
    }
    put_le32(out, tx.locktime);
}

Satoshi checked_add(Satoshi a, Satoshi b)
{
    if (a > std::numeric_limits<Satoshi>::max() - b) throw Error(Errc::InvalidArgument, "amount overflow");
    return a + b;
}

} // namespace

Bytes Transaction::serialize() const
{
    Bytes out;
    write_tx(out, *this, std::nullopt, {});
    return out;
}

Transaction Transaction::deserialize(ByteView raw)
{
    Reader rd(raw);
    Transaction tx;
    tx.version = rd.le32();
    std::uint64_t n_in = rd.varint();
    if (n_in > kMaxInOut) throw Error(Errc::MalformedData, "input count too large");
    tx.inputs.resize(n_in);
    for (TxInput& in : tx.inputs) {
        ByteView id = rd.take(32);
        std::copy(id.begin(), id.end(), in.prevout.txid.begin());
        in.prevout.vout = rd.le32();
        ByteView script = rd.take(rd.varint());
        in.script_sig.assign(script.begin(), script.end());
        in.sequence = rd.le32();
    }
    std::uint64_t n_out = rd.varint();
    if (n_out > kMaxInOut) throw Error(Errc::MalformedData, "output count too large");
    tx.outputs.resize(n_out);
    for (TxOutput& o : tx.outputs) {
        o.value = rd.le64();
        ByteView script = rd.take(rd.varint());
        o.script_pubkey.assign(script.begin(), script.end());
    }
    tx.locktime = rd.le32();
    if (!rd.empty()) throw Error(Errc::MalformedData, "trailing bytes after transaction");
    return tx;
}

Hash256 Transaction::txid() const { return crypto::double_sha256(serialize()); }

std::string Transaction::txid_hex() const { return txid_to_display(txid()); }

std::string txid_to_display(const Hash256& txid)
{
    Hash256 rev = txid;
    std::reverse(rev.begin(), rev.end());
    return to_hex(rev);
}

Hash256 txid_from_display(std::string_view hex)
{
    Hash256 id = array_from_hex<32>(hex);
    std::reverse(id.begin(), id.end());
    return id;
}

Bytes p2pkh_script(const Hash160& key_hash)
{
    Bytes s(25);
    s[0] = OP_DUP;
    s[1] = OP_HASH160;
    s[2] = 20;
    std::copy(key_hash.begin(), key_hash.end(), s.begin() + 3);
    s[23] = OP_EQUALVERIFY;
    s[24] = OP_CHECKSIG;
    return s;
}

Bytes p2pkh_script(const wallet::Address& addr) { return p2pkh_script(addr.hash); }

std::optional<Hash160> p2pkh_key_hash(ByteView script)
{
    if (script.size() != 25 || script[0] != OP_DUP || script[1] != OP_HASH160 || script[2] != 20 ||
        script[23] != OP_EQUALVERIFY || script[24] != OP_CHECKSIG) {
        return std::nullopt;
    }
    Hash160 h;
    std::copy(script.begin() + 3, script.begin() + 23, h.begin());
    return h;
}

Transaction build_raw_tx(std::span<const Spend> spends, std::span<const Payment> recipients)
{
    if (spends.empty() || recipients.empty()) {
        throw Error(Errc::InvalidArgument, "a transaction needs at least one input and one output");
    }
    Transaction tx;
    Satoshi in_sum = 0;
    for (const Spend& s : spends) {
        in_sum = checked_add(in_sum, s.value);
        tx.inputs.push_back({s.outpoint, {}, 0xffffffffu});
    }
    Satoshi out_sum = 0;
    for (const Payment& p : recipients) {
        if (p.value == 0) throw Error(Errc::InvalidArgument, "output value must be positive");
        out_sum = checked_add(out_sum, p.value);
        tx.outputs.push_back({p.value, p2pkh_script(p.to)});
    }
    if (in_sum <= out_sum) {
        throw Error(Errc::FeeNonPositive,
                    "inputs " + std::to_string(in_sum) + " do not exceed outputs " + std::to_string(out_sum));
    }
    return tx;
}

crypto::Digest sighash_all(const Transaction& tx, std::size_t input_index, ByteView prev_script_pubkey)
{
    if (input_index >= tx.inputs.size()) throw Error(Errc::IndexOutOfRange, "sighash input index out of range");
    Bytes preimage;
    write_tx(preimage, tx, input_index, prev_script_pubkey);
    put_le32(preimage, kSighashAll);
    return crypto::double_sha256(preimage);
}

Bytes make_script_sig(const InputSignature& input_sig)
{
    Bytes script;
    script.push_back(65);
    append(script, input_sig.sig.to_bytes());
    script.push_back(kSighashAll);
    script.push_back(33);
    append(script, crypto::Curve::secp256k1().encode(input_sig.pk));
    return script;
}

InputSignature parse_script_sig(ByteView script_sig)
{
    if (script_sig.size() != 1 + 65 + 1 + 33 || script_sig[0] != 65 || script_sig[65] != kSighashAll ||
        script_sig[66] != 33) {
        throw Error(Errc::MalformedScriptSig, "script_sig is not push(sig||hashtype) push(pubkey)");
    }
    InputSignature out;
    out.sig = crypto::EcdsaSignature::from_bytes(script_sig.subspan(1, 64));
    try {
        out.pk = crypto::Curve::secp256k1().decode(script_sig.subspan(67, 33));
    } catch (const Error&) {
        throw Error(Errc::MalformedScriptSig, "script_sig public key is not a curve point");
    }
    return out;
}

Transaction attach_signatures(Transaction tx, std::span<const InputSignature> sigs)
{
    if (sigs.size() != tx.inputs.size()) {
        throw Error(Errc::ArityMismatch, std::to_string(sigs.size()) + " signatures for " +
                                             std::to_string(tx.inputs.size()) + " inputs");
    }
    for (std::size_t i = 0; i < sigs.size(); ++i) tx.inputs[i].script_sig = make_script_sig(sigs[i]);
    return tx;
}

std::vector<InputSignature> extract_signatures(const Transaction& tx)
{
    std::vector<InputSignature> out;
    out.reserve(tx.inputs.size());
    for (const TxInput& in : tx.inputs) out.push_back(parse_script_sig(in.script_sig));
    return out;
}

Satoshi total_output(const Transaction& tx)
{
    Satoshi sum = 0;
    for (const auto& o : tx.outputs) sum = checked_add(sum, o.value);
    return sum;
}

} // namespace abc::tx
