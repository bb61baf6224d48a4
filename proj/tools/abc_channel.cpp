// abc-channel: drive the covert channel, the simulator and the masquerade
// pipeline from the shell. Every command prints one result line on stdout
// (key=value pairs, or a JSON object with --json). Failures print the error
// class on stderr and exit nonzero.

#include <fcntl.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "abc/chain/chain_state.hpp"
#include "abc/channel/negotiation.hpp"
#include "abc/channel/transport.hpp"
#include "abc/crypto/hash.hpp"
#include "abc/eval/metrics.hpp"
#include "abc/masquerade/capacity.hpp"
#include "abc/masquerade/corpus_gen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace abc;

namespace {

constexpr const char* kDataDirEnv = "ABC_DATA_DIR";

struct Options {
    std::string data_dir;
    std::string chain;
    std::string wallet;
    std::string session;
    std::string seed;
    bool json = false;

    fs::path data() const { return data_dir; }
    fs::path chain_path() const { return chain.empty() ? data() / "chain.bin" : fs::path(chain); }
    fs::path wallet_path() const { return wallet.empty() ? data() / "wallet.json" : fs::path(wallet); }
    fs::path session_path() const { return session.empty() ? data() / "session.json" : fs::path(session); }
    crypto::Seed seed_value() const { return seed.empty() ? crypto::random_seed() : crypto::seed_from_string(seed); }
};

// Ordered key/value result rendered as one line.
class Result {
public:
    explicit Result(std::string command) { add("command", std::move(command)); }

    Result& add(std::string key, json value)
    {
        fields_.emplace_back(std::move(key), std::move(value));
        return *this;
    }

    void print(bool as_json) const
    {
        if (as_json) {
            json j = json::object();
            for (const auto& [k, v] : fields_) j[k] = v;
            std::cout << j.dump() << '\n';
            return;
        }
        std::cout << "ok";
        for (const auto& [k, v] : fields_) {
            std::cout << ' ' << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump());
        }
        std::cout << '\n';
    }

private:
    std::vector<std::pair<std::string, json>> fields_;
};

// Exclusive owner of the chain file while a mutating command runs.
class ChainLock {
public:
    explicit ChainLock(const fs::path& chain_file) : path_(chain_file)
    {
        path_ += ".lock";
        fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd_ < 0) throw Error(Errc::ChainLocked, "lock file " + path_.string() + " exists");
        const std::string pid = std::to_string(::getpid()) + "\n";
        [[maybe_unused]] auto n = ::write(fd_, pid.data(), pid.size());
    }
    ~ChainLock()
    {
        ::close(fd_);
        std::error_code ec;
        fs::remove(path_, ec);
    }
    ChainLock(const ChainLock&) = delete;
    ChainLock& operator=(const ChainLock&) = delete;

private:
    fs::path path_;
    int fd_ = -1;
};

chain::ChainState load_chain(const Options& o)
{
    return fs::exists(o.chain_path()) ? chain::ChainState::load(o.chain_path()) : chain::ChainState{};
}

void ensure_parent(const fs::path& p)
{
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

struct WalletFile {
    wallet::Network network = wallet::Network::testnet;
    crypto::Scalar sk;
    Hash256 chaincode{};
    std::uint32_t next_index = 0;

    crypto::Point pk() const { return crypto::Curve::secp256k1().mul_base(sk.value()); }
    wallet::Address address() const { return wallet::addr_from_sk(sk, network); }

    static WalletFile load(const fs::path& path)
    {
        std::ifstream in(path);
        if (!in) throw Error(Errc::IoError, "cannot read wallet " + path.string() + " (run keygen)");
        try {
            json j = json::parse(in);
            WalletFile w;
            w.network = wallet::parse_network(j.at("network").get<std::string>());
            const wallet::WifKey key = wallet::wif_decode(j.at("wif").get<std::string>());
            if (key.network != w.network) throw Error(Errc::BadPrefix, "WIF network differs from wallet network");
            w.sk = key.sk;
            w.chaincode = array_from_hex<32>(j.at("chaincode").get<std::string>());
            w.next_index = j.at("next_index").get<std::uint32_t>();
            return w;
        } catch (const json::exception& e) {
            throw Error(Errc::SchemaError, std::string("wallet file: ") + e.what());
        }
    }

    void save(const fs::path& path) const
    {
        ensure_parent(path);
        json j{{"network", "sim-testnet"},
               {"wif", wallet::wif_encode(sk, network)},
               {"chaincode", to_hex(chaincode)},
               {"next_index", next_index}};
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) throw Error(Errc::IoError, "cannot write " + tmp.string());
            out << j.dump(2) << '\n';
        }
        fs::rename(tmp, path);
    }
};

crypto::Point parse_pk(const std::string& hex) { return crypto::Curve::secp256k1().decode(from_hex(hex)); }

Bytes read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read " + p.string());
    return Bytes(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& p, ByteView data)
{
    ensure_parent(p);
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + p.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

// Accepts either a corpus CSV (ingested with the standard filters) or a
// feature CSV (labels ignored).
std::vector<masquerade::TxFeatureRecord> read_records(const fs::path& p)
{
    std::ifstream in(p);
    if (!in) throw Error(Errc::IoError, "cannot read " + p.string());
    std::string header;
    std::getline(in, header);
    in.seekg(0);
    if (header.rfind("txid,", 0) == 0) {
        return masquerade::ingest_corpus(masquerade::read_corpus_csv(in), {}, p.string()).records;
    }
    std::vector<masquerade::TxFeatureRecord> out;
    for (const auto& r : masquerade::read_feature_csv(in)) out.push_back(r.record);
    return out;
}

// ---- commands ----

void cmd_keygen(const Options& o, bool force)
{
    const fs::path path = o.wallet_path();
    if (fs::exists(path) && !force) throw Error(Errc::InvalidArgument, path.string() + " exists (use --force)");
    crypto::HashStream rng(o.seed.empty() ? std::nullopt : std::optional(o.seed_value()));
    WalletFile w;
    w.sk = crypto::keypair_generate(rng).sk;
    rng.fill(w.chaincode);
    w.save(path);
    Result("keygen")
        .add("address", w.address().rendered())
        .add("pk", to_hex(crypto::Curve::secp256k1().encode(w.pk())))
        .add("wallet", path.string())
        .print(o.json);
}

void cmd_address(const Options& o)
{
    const WalletFile w = WalletFile::load(o.wallet_path());
    Result("address")
        .add("address", w.address().rendered())
        .add("pk", to_hex(crypto::Curve::secp256k1().encode(w.pk())))
        .print(o.json);
}

void cmd_faucet(const Options& o, const std::string& addr, std::uint64_t sats)
{
    ensure_parent(o.chain_path());
    ChainLock lock(o.chain_path());
    chain::ChainState c = load_chain(o);
    const tx::OutPoint op = c.faucet_fund(wallet::Address::parse(addr), sats);
    c.save(o.chain_path());
    Result("faucet").add("txid", tx::txid_to_display(op.txid)).add("vout", op.vout).add("value", sats).print(o.json);
}

void cmd_mine(const Options& o)
{
    ensure_parent(o.chain_path());
    ChainLock lock(o.chain_path());
    chain::ChainState c = load_chain(o);
    const chain::Block b = c.mine_block();
    c.save(o.chain_path());
    Result("mine").add("height", b.height).add("txs", b.txids.size()).add("timestamp", b.timestamp).print(o.json);
}

void cmd_negotiate_send(const Options& o, const std::string& peer_hex, std::string charlie, std::string dave,
                        const std::string& model_path)
{
    ensure_parent(o.chain_path());
    ChainLock lock(o.chain_path());
    chain::ChainState c = load_chain(o);
    const WalletFile w = WalletFile::load(o.wallet_path());
    crypto::HashStream rng(o.seed_value());

    auto fresh = [&] { return wallet::addr_from_pk(crypto::keypair_generate(rng).pk, w.network).rendered(); };
    if (charlie.empty()) charlie = fresh();
    if (dave.empty()) dave = fresh();

    auto coins = c.utxos(w.address());
    if (coins.size() < 2) {
        throw Error(Errc::UnknownInput, "negotiation needs two UTXOs at " + w.address().rendered() + ", found " +
                                            std::to_string(coins.size()));
    }
    std::optional<masquerade::TrainedPipeline> model;
    channel::NegotiationOptions opts;
    opts.network = w.network;
    if (!model_path.empty()) {
        model = masquerade::TrainedPipeline::load(model_path);
        opts.fees = &model->fees;
    }
    const auto res = channel::negotiate_send(w.sk, parse_pk(peer_hex), wallet::Address::parse(charlie),
                                             wallet::Address::parse(dave), c,
                                             {coins[0].outpoint, coins[1].outpoint}, rng, opts);
    c.save(o.chain_path());

    channel::SessionState s;
    s.role = channel::Role::sender;
    s.esk_ab = res.esk_ab;
    s.peer_pk = parse_pk(peer_hex);
    s.network = w.network;
    s.wallet_ref = o.wallet_path().string();
    ensure_parent(o.session_path());
    s.save(o.session_path());
    Result("negotiate-send")
        .add("tx1", tx::txid_to_display(res.txid_first))
        .add("tx2", tx::txid_to_display(res.txid_second))
        .add("session", o.session_path().string())
        .print(o.json);
}

void cmd_negotiate_recv(const Options& o, const std::string& peer_hex)
{
    const chain::ChainState c = load_chain(o);
    const WalletFile w = WalletFile::load(o.wallet_path());
    const crypto::Point pk_a = parse_pk(peer_hex);
    const auto res = channel::negotiate_recv(w.sk, pk_a, c, w.network);

    channel::SessionState s;
    s.role = channel::Role::receiver;
    s.esk_ab = res.esk_ab;
    s.peer_pk = pk_a;
    s.network = w.network;
    s.wallet_ref = o.wallet_path().string();
    ensure_parent(o.session_path());
    s.save(o.session_path());
    Result("negotiate-recv")
        .add("tx1", tx::txid_to_display(res.txid_first))
        .add("tx2", tx::txid_to_display(res.txid_second))
        .add("session", o.session_path().string())
        .print(o.json);
}

void cmd_send(const Options& o, const std::string& file, const std::string& model_path)
{
    ensure_parent(o.chain_path());
    ChainLock lock(o.chain_path());
    chain::ChainState c = load_chain(o);
    channel::SessionState s = channel::SessionState::load(o.session_path());
    const auto model = masquerade::TrainedPipeline::load(model_path);
    const Bytes message = read_file(file);
    try {
        const auto res = channel::send_message(s, message, c, model, o.seed_value());
        c.save(o.chain_path());
        s.save(o.session_path());
        Result("send")
            .add("bytes", message.size())
            .add("segments", res.segments)
            .add("txs", res.transactions.size())
            .add("index", res.new_index)
            .print(o.json);
    } catch (const channel::SendInterrupted&) {
        // Whatever made it on chain stays there; keep files consistent with it.
        c.save(o.chain_path());
        s.save(o.session_path());
        throw;
    }
}

void cmd_recv(const Options& o, const std::string& out)
{
    const chain::ChainState c = load_chain(o);
    channel::SessionState s = channel::SessionState::load(o.session_path());
    const std::uint32_t from = s.index_last;
    const auto res = channel::receive_message(s, c);
    const fs::path out_path = out.empty() ? o.data() / "received.bin" : fs::path(out);
    if (res.new_index != from) {
        write_file(out_path, res.message);
        s.save(o.session_path());
    }
    Result("recv")
        .add("bytes", res.message.size())
        .add("txs", res.transactions)
        .add("index", res.new_index)
        .add("found", res.new_index != from)
        .add("sha256", to_hex(crypto::sha256(res.message)))
        .add("out", res.new_index != from ? out_path.string() : "")
        .print(o.json);
}

void cmd_corpus_export(const Options& o, const std::string& out, std::size_t synthetic)
{
    std::vector<masquerade::CorpusRow> rows;
    if (synthetic > 0) {
        rows = masquerade::generate_synthetic_corpus(synthetic, o.seed_value());
    } else {
        for (const auto& t : load_chain(o).export_summaries()) {
            masquerade::CorpusRow r;
            r.txid = tx::txid_to_display(t.txid);
            r.block_height = t.block_height ? static_cast<std::int64_t>(*t.block_height) : -1;
            r.timestamp = t.timestamp;
            r.input_cnt = t.input_count;
            r.output_cnt = t.output_count;
            r.inputs_amount = t.inputs_amount;
            r.outputs_amount = t.outputs_amount;
            r.fee = t.fee;
            rows.push_back(std::move(r));
        }
    }
    const fs::path path = out.empty() ? o.data() / "corpus.csv" : fs::path(out);
    ensure_parent(path);
    masquerade::write_corpus_csv(path, rows);
    Result("corpus-export").add("rows", rows.size()).add("out", path.string()).print(o.json);
}

void cmd_fit(const Options& o, const std::string& corpus_path, const std::string& out, std::size_t intervals,
             int components)
{
    const auto corpus = masquerade::ingest_corpus(masquerade::read_corpus_csv(fs::path(corpus_path)), {}, corpus_path);
    masquerade::MixtureConfig cfg;
    cfg.components = components;
    const auto model = masquerade::train_pipeline(corpus, intervals, cfg, o.seed_value());
    const fs::path path = out.empty() ? o.data() / "pipeline.json" : fs::path(out);
    ensure_parent(path);
    model.save(path);
    std::size_t buckets = 0;
    for (const auto& [_, cell] : model.fees.cells) buckets += cell.buckets.size();
    Result("fit")
        .add("records", corpus.records.size())
        .add("dropped_coinbase", corpus.stats.coinbase)
        .add("dropped_oversize", corpus.stats.too_many_inputs_or_outputs)
        .add("dropped_zero_fee", corpus.stats.zero_fee)
        .add("cells", model.fees.cells.size())
        .add("fee_buckets", buckets)
        .add("out", path.string())
        .print(o.json);
}

void cmd_synth(const Options& o, std::size_t n, const std::string& seed, const std::string& model_path,
               const std::string& out)
{
    const auto model = masquerade::TrainedPipeline::load(model_path);
    const auto sampled = masquerade::sample_features(model.synth, model.fees, n, crypto::seed_from_string(seed));
    const fs::path path = out.empty() ? o.data() / "fake.csv" : fs::path(out);
    ensure_parent(path);
    masquerade::write_feature_csv(path, masquerade::label_all(sampled.records, masquerade::Label::covert));
    Result("synth")
        .add("rows", sampled.records.size())
        .add("fallback", sampled.fallback_ordinals.size())
        .add("out", path.string())
        .print(o.json);
}

void cmd_eval(const Options& o, const std::string& real_path, const std::string& fake_path, double ratio,
              const std::string& out)
{
    const auto real = read_records(real_path);
    const auto fake = read_records(fake_path);
    const crypto::Seed seed = o.seed_value();
    const auto set = eval::mix_datasets(real, fake, ratio, seed);
    const auto rep = eval::evaluate_blackbox(set, seed);
    for (std::size_t c : rep.dropped_columns) {
        std::cerr << "warning: feature column " << c << " is constant and was dropped\n";
    }
    if (!out.empty()) {
        ensure_parent(out);
        std::ofstream f(out, std::ios::trunc);
        if (!f) throw Error(Errc::IoError, "cannot write " + out);
        f << rep.to_json().dump(2) << '\n';
    }
    Result("eval-blackbox")
        .add("ari", rep.ari)
        .add("nmi", rep.nmi)
        .add("n_real", rep.n_real)
        .add("n_covert", rep.n_covert)
        .print(o.json);
}

void cmd_capacity(const Options& o, const std::string& table_path)
{
    const auto table = masquerade::read_capacity_csv(table_path);
    const auto est = masquerade::expected_capacity(table.weights, table.avg_fees);
    auto fmt = [](double v) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(3) << v;
        return s.str();
    };
    Result r("capacity");
    if (o.json) {
        r.add("bits", est.bits_per_tx).add("fee", est.fee_per_tx).add("mean_inputs", est.mean_inputs);
    } else {
        r.add("bits", fmt(est.bits_per_tx)).add("fee", fmt(est.fee_per_tx)).add("mean_inputs", fmt(est.mean_inputs));
    }
    r.print(o.json);
}

int exit_code(Errc c) { return 10 + static_cast<int>(c); }

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"ABC covert channel toolkit over a simulated UTXO chain"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    const char* env_dir = std::getenv(kDataDirEnv);
    o.data_dir = env_dir ? env_dir : "abc-data";
    app.add_option("--data-dir", o.data_dir, std::string("working directory (default $") + kDataDirEnv + " or ./abc-data)");
    app.add_option("--chain", o.chain, "chain file (default <data-dir>/chain.bin)");
    app.add_option("--wallet", o.wallet, "wallet file (default <data-dir>/wallet.json)");
    app.add_option("--session", o.session, "session file (default <data-dir>/session.json)");
    app.add_option("--seed", o.seed, "seed: 64 hex chars, or any text to hash");
    app.add_flag("--json", o.json, "print the result line as JSON");

    std::function<void()> run;

    bool force = false;
    auto* keygen = app.add_subcommand("keygen", "create a wallet");
    keygen->add_flag("--force", force, "overwrite an existing wallet");
    keygen->callback([&] { run = [&] { cmd_keygen(o, force); }; });

    app.add_subcommand("address", "show the wallet address and public key")->callback([&] {
        run = [&] { cmd_address(o); };
    });

    std::string addr;
    std::uint64_t sats = 0;
    auto* faucet = app.add_subcommand("faucet", "mint an output to an address");
    faucet->add_option("addr", addr)->required();
    faucet->add_option("sats", sats)->required()->check(CLI::PositiveNumber);
    faucet->callback([&] { run = [&] { cmd_faucet(o, addr, sats); }; });

    app.add_subcommand("mine", "confirm the mempool in a new block")->callback([&] { run = [&] { cmd_mine(o); }; });

    std::string peer, charlie, dave, model;
    auto* nsend = app.add_subcommand("negotiate-send", "leak the wallet key to a peer via two transactions");
    nsend->add_option("--peer-pk", peer, "receiver public key, compressed hex")->required();
    nsend->add_option("--charlie", charlie, "first recipient (default: fresh address)");
    nsend->add_option("--dave", dave, "second recipient (default: fresh address)");
    nsend->add_option("--model", model, "pipeline file for fees");
    nsend->callback([&] { run = [&] { cmd_negotiate_send(o, peer, charlie, dave, model); }; });

    auto* nrecv = app.add_subcommand("negotiate-recv", "recover the shared extended key from the chain");
    nrecv->add_option("--peer-pk", peer, "sender public key, compressed hex")->required();
    nrecv->callback([&] { run = [&] { cmd_negotiate_recv(o, peer); }; });

    std::string file;
    auto* send = app.add_subcommand("send", "send a file over the channel");
    send->add_option("file", file)->required()->check(CLI::ExistingFile);
    send->add_option("--model", model, "pipeline file from fit")->required();
    send->callback([&] { run = [&] { cmd_send(o, file, model); }; });

    std::string out;
    auto* recv = app.add_subcommand("recv", "receive the next message");
    recv->add_option("--out", out, "output file (default <data-dir>/received.bin)");
    recv->callback([&] { run = [&] { cmd_recv(o, out); }; });

    std::size_t synthetic = 0;
    auto* cexp = app.add_subcommand("corpus-export", "write the chain's transactions as a corpus CSV");
    cexp->add_option("--out", out, "output CSV (default <data-dir>/corpus.csv)");
    cexp->add_option("--synthetic", synthetic, "write N rows from the synthetic generator instead");
    cexp->callback([&] { run = [&] { cmd_corpus_export(o, out, synthetic); }; });

    std::string corpus;
    std::size_t intervals = 5;
    int components = 5;
    auto* fit = app.add_subcommand("fit", "train the fee model and amount synthesizer");
    fit->add_option("corpus", corpus)->required()->check(CLI::ExistingFile);
    fit->add_option("--out", out, "pipeline file (default <data-dir>/pipeline.json)");
    fit->add_option("--intervals", intervals, "amount intervals per cell")->check(CLI::PositiveNumber);
    fit->add_option("--components", components, "mixture components")->check(CLI::PositiveNumber);
    fit->callback([&] { run = [&] { cmd_fit(o, corpus, out, intervals, components); }; });

    std::size_t n = 0;
    std::string synth_seed;
    std::string model_file;
    auto* synth = app.add_subcommand("synth", "sample covert feature records");
    synth->add_option("n", n)->required();
    synth->add_option("seed", synth_seed)->required();
    synth->add_option("--model", model_file, "pipeline file (default <data-dir>/pipeline.json)");
    synth->add_option("--out", out, "feature CSV (default <data-dir>/fake.csv)");
    synth->callback([&] {
        run = [&] { cmd_synth(o, n, synth_seed, model_file.empty() ? (o.data() / "pipeline.json").string() : model_file, out); };
    });

    std::string real_csv, fake_csv;
    double ratio = 0.5;
    auto* ev = app.add_subcommand("eval-blackbox", "k-means indistinguishability test");
    ev->add_option("real", real_csv)->required()->check(CLI::ExistingFile);
    ev->add_option("fake", fake_csv)->required()->check(CLI::ExistingFile);
    ev->add_option("--ratio", ratio, "covert share of the mix")->check(CLI::Range(0.0, 1.0));
    ev->add_option("--out", out, "metrics JSON");
    ev->callback([&] { run = [&] { cmd_eval(o, real_csv, fake_csv, ratio, out); }; });

    std::string table;
    auto* cap = app.add_subcommand("capacity", "expected bits and fee per covert transaction");
    cap->add_option("table", table)->required()->check(CLI::ExistingFile);
    cap->callback([&] { run = [&] { cmd_capacity(o, table); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        run();
    } catch (const channel::SendInterrupted& e) {
        std::cerr << "error " << e.name() << " completed_index=" << e.completed_index() << ": " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const Error& e) {
        std::cerr << "error " << e.name() << ": " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error Internal: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
