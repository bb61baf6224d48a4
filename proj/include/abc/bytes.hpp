#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abc/error.hpp"

namespace abc {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using Hash256 = std::array<std::uint8_t, 32>;
using Hash160 = std::array<std::uint8_t, 20>;

std::string to_hex(ByteView data);
/// Throws Error(InvalidEncoding) on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

template <std::size_t N>
std::array<std::uint8_t, N> array_from_hex(std::string_view hex)
{
    Bytes raw = from_hex(hex);
    if (raw.size() != N) {
        throw Error(Errc::InvalidEncoding,
                    "expected " + std::to_string(N) + " hex bytes, got " + std::to_string(raw.size()));
    }
    std::array<std::uint8_t, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = raw[i];
    return out;
}

inline ByteView view(const std::string& s)
{
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline void append(Bytes& out, ByteView data) { out.insert(out.end(), data.begin(), data.end()); }

void put_le32(Bytes& out, std::uint32_t v);
void put_le64(Bytes& out, std::uint64_t v);
void put_be32(Bytes& out, std::uint32_t v);
void put_varint(Bytes& out, std::uint64_t v);

/// Bounds-checked cursor over a byte buffer. Every read throws
/// Error(MalformedData) when it would run past the end.
class Reader {
public:
    explicit Reader(ByteView data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t le32();
    std::uint64_t le64();
    std::uint32_t be32();
    std::uint64_t varint();
    ByteView take(std::size_t n);

    std::size_t remaining() const { return data_.size() - pos_; }
    bool empty() const { return remaining() == 0; }

private:
    ByteView data_;
    std::size_t pos_ = 0;
};

} // namespace abc
