#pragma once

#include <string>
#include <string_view>

#include "abc/bytes.hpp"

namespace abc::wallet {

std::string base58_encode(ByteView data);
/// Throws InvalidEncoding on characters outside the alphabet.
Bytes base58_decode(std::string_view text);

/// payload || first four bytes of SHA256d(payload).
std::string base58check_encode(ByteView payload);
/// Throws ChecksumMismatch when the trailing checksum does not match.
Bytes base58check_decode(std::string_view text);

} // namespace abc::wallet
