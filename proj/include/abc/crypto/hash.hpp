#pragma once

#include <array>

#include "abc/bytes.hpp"

namespace abc::crypto {

using Hash512 = std::array<std::uint8_t, 64>;

Hash256 sha256(ByteView data);
Hash512 sha512(ByteView data);
Hash512 hmac_sha512(ByteView key, ByteView data);
Hash160 ripemd160(ByteView data);

/// RIPEMD160(SHA256(data)), the P2PKH key hash.
Hash160 hash160(ByteView data);
/// SHA256(SHA256(data)), used for txids and signature hashes.
Hash256 double_sha256(ByteView data);

} // namespace abc::crypto
