#include "abc/bytes.hpp"

namespace abc {

std::string to_hex(ByteView data)
{
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

namespace {
int nibble(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
} // namespace

Bytes from_hex(std::string_view hex)
{
    if (hex.size() % 2 != 0) throw Error(Errc::InvalidEncoding, "odd-length hex string");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = nibble(hex[i]);
        int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) throw Error(Errc::InvalidEncoding, "invalid hex character");
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

void put_le32(Bytes& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_le64(Bytes& out, std::uint64_t v)
{
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_be32(Bytes& out, std::uint32_t v)
{
    for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_varint(Bytes& out, std::uint64_t v)
{
    if (v < 0xfd) {
        out.push_back(static_cast<std::uint8_t>(v));
    } else if (v <= 0xffff) {
        out.push_back(0xfd);
        out.push_back(static_cast<std::uint8_t>(v));
        out.push_back(static_cast<std::uint8_t>(v >> 8));
    } else if (v <= 0xffffffff) {
        out.push_back(0xfe);
        put_le32(out, static_cast<std::uint32_t>(v));
    } else {
        out.push_back(0xff);
        put_le64(out, v);
    }
}

ByteView Reader::take(std::size_t n)
{
    if (n > remaining()) throw Error(Errc::MalformedData, "read past end of buffer");
    ByteView out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::uint8_t Reader::u8() { return take(1)[0]; }

std::uint32_t Reader::le32()
{
    ByteView b = take(4);
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
}

std::uint64_t Reader::le64()
{
    std::uint64_t lo = le32();
    std::uint64_t hi = le32();
    return lo | hi << 32;
}

std::uint32_t Reader::be32()
{
    ByteView b = take(4);
    return std::uint32_t(b[3]) | std::uint32_t(b[2]) << 8 | std::uint32_t(b[1]) << 16 | std::uint32_t(b[0]) << 24;
}

std::uint64_t Reader::varint()
{
    std::uint8_t tag = u8();
    std::uint64_t v;
    if (tag < 0xfd) return tag;
    if (tag == 0xfd) {
        ByteView b = take(2);
        v = std::uint64_t(b[0]) | std::uint64_t(b[1]) << 8;
        if (v < 0xfd) throw Error(Errc::MalformedData, "non-canonical varint");
    } else if (tag == 0xfe) {
        v = le32();
        if (v <= 0xffff) throw Error(Errc::MalformedData, "non-canonical varint");
    } else {
        v = le64();
        if (v <= 0xffffffff) throw Error(Errc::MalformedData, "non-canonical varint");
    }
    return v;
}

} // namespace abc
