#include "doctest.h"

#include "support/errc.hpp"

#include <filesystem>
#include <fstream>

#include "abc/crypto/hash.hpp"
#include "support/workload.hpp"

using namespace abc;
using chain::ChainState;

using support::code_of;

namespace {

crypto::Seed seed_of(const char* s) { return crypto::seed_from_string(s); }

struct Party {
    crypto::KeyPair kp;
    wallet::Address addr;
};

Party party(crypto::HashStream& rng)
{
    auto kp = crypto::keypair_generate(rng);
    auto addr = wallet::addr_from_pk(kp.pk, wallet::Network::testnet);
    return {kp, addr};
}

tx::Transaction pay(const Party& from, const tx::OutPoint& op, tx::Satoshi in_value, const wallet::Address& to,
                    tx::Satoshi out_value, crypto::HashStream& rng)
{
    const tx::Spend ins[] = {{op, in_value}};
    const tx::Payment outs[] = {{to, out_value}};
    return support::sign_spend(tx::build_raw_tx(ins, outs), {&from.kp}, rng);
}

} // namespace

TEST_CASE("random workload keeps the ledger consistent")
{
    ChainState chain;
    auto st = support::run_workload(chain, 400, seed_of("chain-workload"));
    CHECK(st.accepted == 400);
    CHECK(st.double_spend_attempts > 0);
    CHECK(st.double_spends_rejected == st.double_spend_attempts);
    CHECK(chain.mempool().empty());

    auto rep = support::replay_blocks(chain);
    INFO(rep.problem);
    CHECK(rep.ok);
    CHECK(rep.blocks == chain.height());

    CHECK(chain.addr_index() == support::scan_addr_index(chain));

    unsigned __int128 live = 0;
    for (const auto& [op, u] : chain.confirmed_utxos()) live += u.value;
    unsigned __int128 fees = 0;
    for (const auto& s : chain.export_summaries()) fees += s.fee;
    CHECK(live + fees == st.minted);
}

TEST_CASE("address index tracks senders and receivers, never faucets")
{
    crypto::HashStream rng(seed_of("index"));
    ChainState chain;
    auto a = party(rng), b = party(rng), c = party(rng);
    auto op = chain.faucet_fund(a.addr, 50000);
    CHECK(chain.get_tx_from_addr(a.addr).empty());
    CHECK(chain.addr_index().empty());

    auto t1 = pay(a, op, 50000, b.addr, 40000, rng);
    auto id1 = chain.submit_tx(t1);
    auto t2 = pay(b, {id1, 0}, 40000, c.addr, 30000, rng);
    auto id2 = chain.submit_tx(t2);

    auto from_a = chain.get_tx_from_addr(a.addr);
    REQUIRE(from_a.size() == 1);
    CHECK(from_a[0].txid() == id1);
    auto from_b = chain.get_tx_from_addr(b.addr);
    REQUIRE(from_b.size() == 2);
    CHECK(from_b[0].txid() == id1);
    CHECK(from_b[1].txid() == id2);
    CHECK(chain.get_tx_from_addr(c.addr).size() == 1);

    CHECK(chain.get_tx_from_addr(b.addr, chain::Visibility::confirmed_only).empty());
    chain.mine_block();
    CHECK(chain.get_tx_from_addr(b.addr, chain::Visibility::confirmed_only).size() == 2);

    auto summaries = chain.export_summaries();
    REQUIRE(summaries.size() == 2);
    for (const auto& s : summaries) CHECK_FALSE(s.faucet);
    CHECK(summaries[0].fee == 10000);
    CHECK(summaries[0].input_count == 1);
    CHECK(summaries[0].inputs_amount == 50000);
}

TEST_CASE("rejections carry the right error")
{
    crypto::HashStream rng(seed_of("rejects"));
    ChainState chain;
    auto a = party(rng), b = party(rng);
    auto op = chain.faucet_fund(a.addr, 10000);

    tx::OutPoint ghost{crypto::sha256(view(std::string("nothing"))), 0};
    CHECK(code_of([&] { chain.submit_tx(pay(a, ghost, 10000, b.addr, 9000, rng)); }) == Errc::UnknownInput);

    // b signs for a's coin
    CHECK(code_of([&] { chain.submit_tx(pay(b, op, 10000, b.addr, 9000, rng)); }) == Errc::BadSignature);

    // inputs claimed at a higher value than the coin actually holds
    CHECK(code_of([&] { chain.submit_tx(pay(a, op, 20000, b.addr, 15000, rng)); }) == Errc::FeeNonPositive);

    // tamper with an output after signing
    auto t = pay(a, op, 10000, b.addr, 9000, rng);
    t.outputs[0].value = 9001;
    CHECK(code_of([&] { chain.submit_tx(t); }) == Errc::BadSignature);

    auto good = pay(a, op, 10000, b.addr, 9000, rng);
    chain.submit_tx(good);
    CHECK(code_of([&] { chain.submit_tx(good); }) == Errc::DoubleSpend);
    CHECK(code_of([&] { chain.submit_tx(pay(a, op, 10000, b.addr, 8000, rng)); }) == Errc::DoubleSpend);
    chain.mine_block();
    CHECK(code_of([&] { chain.submit_tx(pay(a, op, 10000, b.addr, 7000, rng)); }) == Errc::DoubleSpend);

    CHECK(code_of([&] { chain.faucet_fund(a.addr, 0); }) == Errc::InvalidArgument);
}

TEST_CASE("unconfirmed outputs can be spent and confirm together")
{
    crypto::HashStream rng(seed_of("chained"));
    ChainState chain;
    auto a = party(rng), b = party(rng);
    auto op = chain.faucet_fund(a.addr, 9000);
    auto id1 = chain.submit_tx(pay(a, op, 9000, b.addr, 8000, rng));
    auto id2 = chain.submit_tx(pay(b, {id1, 0}, 8000, a.addr, 7000, rng));
    CHECK(chain.utxos(b.addr).empty());
    REQUIRE(chain.utxos(a.addr).size() == 1);
    auto blk = chain.mine_block();
    CHECK(blk.height == 0);
    CHECK(chain.height() == 1);
    CHECK(blk.timestamp == ChainState::kGenesisTime);
    CHECK(chain.mine_block().timestamp == ChainState::kGenesisTime + 600);
    CHECK(blk.txids.size() == 3);
    CHECK(blk.txids.back() == id2);
    CHECK(support::replay_blocks(chain).ok);
}

TEST_CASE("faucet txids are reproducible and distinct")
{
    crypto::HashStream rng(seed_of("faucet"));
    auto a = party(rng);
    ChainState x, y;
    auto o1 = x.faucet_fund(a.addr, 1000);
    auto o2 = x.faucet_fund(a.addr, 1000);
    CHECK(o1.txid != o2.txid);
    CHECK(y.faucet_fund(a.addr, 1000) == o1);
    CHECK(y.faucet_fund(a.addr, 1000) == o2);
}

TEST_CASE("persistence round trip and corruption detection")
{
    ChainState chain;
    support::run_workload(chain, 60, seed_of("persist"));
    crypto::HashStream rng(seed_of("persist-extra"));
    auto a = party(rng), b = party(rng);
    auto op = chain.faucet_fund(a.addr, 5000);
    chain.submit_tx(pay(a, op, 5000, b.addr, 4000, rng)); // left in the mempool

    auto dir = std::filesystem::temp_directory_path() / "abc-test-chain";
    std::filesystem::create_directories(dir);
    auto path = dir / "chain.bin";
    chain.save(path);
    auto back = ChainState::load(path);
    CHECK(back.serialize() == chain.serialize());
    CHECK(back.addr_index() == chain.addr_index());
    CHECK(back.confirmed_utxos() == chain.confirmed_utxos());
    CHECK(back.mempool() == chain.mempool());
    CHECK(back.blocks() == chain.blocks());
    CHECK(back.utxos(b.addr).size() == 1);

    // state after reload keeps working: next faucet id matches the original's
    ChainState copy = chain;
    CHECK(back.faucet_fund(a.addr, 77) == copy.faucet_fund(a.addr, 77));

    Bytes raw = chain.serialize();
    for (std::size_t pos : {std::size_t{0}, raw.size() / 2, raw.size() - 1}) {
        Bytes bad = raw;
        bad[pos] ^= 0x40;
        CHECK(code_of([&] { ChainState::deserialize(bad); }) == Errc::CorruptFile);
    }
    Bytes truncated(raw.begin(), raw.end() - 7);
    CHECK(code_of([&] { ChainState::deserialize(truncated); }) == Errc::CorruptFile);
    CHECK(code_of([&] { ChainState::deserialize(Bytes{}); }) == Errc::CorruptFile);

    std::filesystem::remove_all(dir);
}
