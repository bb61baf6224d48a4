#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "abc/crypto/curve.hpp"

namespace abc::wallet {

using crypto::Point;
using crypto::Scalar;

enum class Network { mainnet, testnet };

std::string_view network_name(Network net);
Network parse_network(std::string_view name);

/// P2PKH address. Version byte 0x00 on mainnet, 0x6f on testnet.
struct Address {
    Network network = Network::testnet;
    Hash160 hash{};

    std::string rendered() const;
    /// Throws BadPrefix, ChecksumMismatch or InvalidEncoding.
    static Address parse(std::string_view text);

    friend bool operator==(const Address&, const Address&) = default;
};

struct ExtendedPrivateKey {
    Scalar sk;
    Hash256 chaincode{};

    friend bool operator==(const ExtendedPrivateKey&, const ExtendedPrivateKey&) = default;
};

struct DerivationIndex {
    std::uint32_t index = 0;
    bool hardened = true;

    static constexpr std::uint32_t kHardenedBit = 0x80000000u;

    /// Throws InvalidArgument when index >= 2^31.
    static DerivationIndex make(std::uint32_t index, bool hardened = true);
    std::uint32_t wire_value() const { return hardened ? (index | kHardenedBit) : index; }
};

/// BIP32 master key: HMAC-SHA512("Bitcoin seed", seed). Seeds must be
/// 16..64 bytes.
ExtendedPrivateKey master_from_seed(ByteView seed);

/// BIP32 private child derivation (hardened or normal). The normal branch
/// only exists so the published test vectors can be replayed.
ExtendedPrivateKey derive_child(const ExtendedPrivateKey& parent, DerivationIndex index);

/// The only derivation the channel uses. Throws InvalidArgument for a
/// non-hardened index.
ExtendedPrivateKey derive_child_hardened(const ExtendedPrivateKey& parent, DerivationIndex index);

Address addr_from_pk(const Point& pk, Network net);
Address addr_from_sk(const Scalar& sk, Network net);

struct WifKey {
    Scalar sk;
    Network network = Network::testnet;
};

/// Compressed-key WIF: prefix (0x80 / 0xef) || sk || 0x01, base58check.
std::string wif_encode(const Scalar& sk, Network net);
WifKey wif_decode(std::string_view text);

/// Sending address for hardened child `first + i` of esk, i in [0, count).
/// OpenMP-parallel over i.
std::vector<Address> derive_addresses(const ExtendedPrivateKey& esk, std::uint32_t first, std::size_t count,
                                      Network net);
/// Single-threaded reference for derive_addresses.
std::vector<Address> derive_addresses_serial(const ExtendedPrivateKey& esk, std::uint32_t first, std::size_t count,
                                             Network net);

} // namespace abc::wallet
