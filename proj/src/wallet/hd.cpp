#include "abc/wallet/hd.hpp"

#include <algorithm>

#include "abc/crypto/hash.hpp"
#include "abc/wallet/base58.hpp"

namespace abc::wallet {

using crypto::Curve;
using crypto::mpz_from_bytes;

namespace {

constexpr std::uint8_t kMainnetP2pkh = 0x00;
constexpr std::uint8_t kTestnetP2pkh = 0x6f;
constexpr std::uint8_t kMainnetWif = 0x80;
constexpr std::uint8_t kTestnetWif = 0xef;

ExtendedPrivateKey split_key_material(const crypto::Hash512& i, const mpz_class& tweak_base, Errc err)
{
    const Curve& curve = Curve::secp256k1();
    mpz_class il = mpz_from_bytes(ByteView(i.data(), 32));
    if (il >= curve.order()) throw Error(err, "IL >= n");
    mpz_class sk = curve.mod_n(il + tweak_base);
    if (sk == 0) throw Error(err, "derived key is zero");
    ExtendedPrivateKey out;
    out.sk = Scalar(std::move(sk));
    std::copy(i.begin() + 32, i.end(), out.chaincode.begin());
    return out;
}

} // namespace

std::string_view network_name(Network net) { return net == Network::mainnet ? "mainnet" : "testnet"; }

Network parse_network(std::string_view name)
{
    if (name == "mainnet") return Network::mainnet;
    if (name == "testnet" || name == "sim-testnet") return Network::testnet;
    throw Error(Errc::InvalidArgument, "unknown network: " + std::string(name));
}

std::string Address::rendered() const
{
    Bytes payload;
    payload.push_back(network == Network::mainnet ? kMainnetP2pkh : kTestnetP2pkh);
    append(payload, hash);
    return base58check_encode(payload);
}

Address Address::parse(std::string_view text)
{
    Bytes raw = base58check_decode(text);
    if (raw.size() != 21) throw Error(Errc::InvalidEncoding, "address payload must be 21 bytes");
    Address out;
    if (raw[0] == kMainnetP2pkh) {
        out.network = Network::mainnet;
    } else if (raw[0] == kTestnetP2pkh) {
        out.network = Network::testnet;
    } else {
        throw Error(Errc::BadPrefix, "unknown address version byte");
    }
    std::copy(raw.begin() + 1, raw.end(), out.hash.begin());
    return out;
}

DerivationIndex DerivationIndex::make(std::uint32_t index, bool hardened)
{
    if (index >= kHardenedBit) throw Error(Errc::InvalidArgument, "derivation index must be < 2^31");
    return {index, hardened};
}

ExtendedPrivateKey master_from_seed(ByteView seed)
{
    if (seed.size() < 16 || seed.size() > 64) throw Error(Errc::InvalidSeed, "seed must be 16..64 bytes");
    static const std::string kKey = "Bitcoin seed";
    return split_key_material(crypto::hmac_sha512(view(kKey), seed), 0, Errc::InvalidSeedScalar);
}

ExtendedPrivateKey derive_child(const ExtendedPrivateKey& parent, DerivationIndex index)
{
    const Curve& curve = Curve::secp256k1();
    if (!curve.valid_secret(parent.sk)) throw Error(Errc::InvalidScalar, "parent key out of range");
    if (index.index >= DerivationIndex::kHardenedBit) throw Error(Errc::InvalidArgument, "index must be < 2^31");

    Bytes data;
    data.reserve(37);
    if (index.hardened) {
        data.push_back(0x00);
        append(data, parent.sk.to_bytes());
    } else {
        append(data, curve.encode(curve.mul_base(parent.sk.value())));
    }
    put_be32(data, index.wire_value());
    return split_key_material(crypto::hmac_sha512(parent.chaincode, data), parent.sk.value(),
                              Errc::DerivationDegenerate);
}

ExtendedPrivateKey derive_child_hardened(const ExtendedPrivateKey& parent, DerivationIndex index)
{
    if (!index.hardened) throw Error(Errc::InvalidArgument, "channel derivation must be hardened");
    return derive_child(parent, index);
}

Address addr_from_pk(const Point& pk, Network net)
{
    const Curve& curve = Curve::secp256k1();
    return {net, crypto::hash160(curve.encode(pk))};
}

Address addr_from_sk(const Scalar& sk, Network net)
{
    const Curve& curve = Curve::secp256k1();
    if (!curve.valid_secret(sk)) throw Error(Errc::InvalidScalar, "secret key out of range");
    return addr_from_pk(curve.mul_base(sk.value()), net);
}

std::string wif_encode(const Scalar& sk, Network net)
{
    if (!Curve::secp256k1().valid_secret(sk)) throw Error(Errc::InvalidScalar, "secret key out of range");
    Bytes payload;
    payload.push_back(net == Network::mainnet ? kMainnetWif : kTestnetWif);
    append(payload, sk.to_bytes());
    payload.push_back(0x01);
    return base58check_encode(payload);
}

WifKey wif_decode(std::string_view text)
{
    Bytes raw = base58check_decode(text);
    if (raw.size() != 34 || raw[33] != 0x01) {
        throw Error(Errc::InvalidEncoding, "expected a compressed-key WIF payload");
    }
    WifKey out;
    if (raw[0] == kMainnetWif) {
        out.network = Network::mainnet;
    } else if (raw[0] == kTestnetWif) {
        out.network = Network::testnet;
    } else {
        throw Error(Errc::BadPrefix, "unknown WIF version byte");
    }
    out.sk = Scalar::from_bytes(ByteView(raw.data() + 1, 32));
    if (!Curve::secp256k1().valid_secret(out.sk)) throw Error(Errc::InvalidScalar, "WIF key out of range");
    return out;
}

std::vector<Address> derive_addresses_serial(const ExtendedPrivateKey& esk, std::uint32_t first, std::size_t count,
                                             Network net)
{
    std::vector<Address> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto child = derive_child_hardened(esk, DerivationIndex::make(first + static_cast<std::uint32_t>(i)));
        out.push_back(addr_from_sk(child.sk, net));
    }
    return out;
}

std::vector<Address> derive_addresses(const ExtendedPrivateKey& esk, std::uint32_t first, std::size_t count,
                                      Network net)
{
    if (count > 0) DerivationIndex::make(first + static_cast<std::uint32_t>(count - 1));
    std::vector<Address> out(count);
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        auto child = derive_child_hardened(esk, DerivationIndex::make(first + static_cast<std::uint32_t>(i)));
        out[static_cast<std::size_t>(i)] = addr_from_sk(child.sk, net);
    }
    return out;
}

} // namespace abc::wallet
