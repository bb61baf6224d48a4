#include "abc/wallet/base58.hpp"

#include <algorithm>

#include "abc/crypto/hash.hpp"

namespace abc::wallet {

namespace {
constexpr std::string_view kAlphabet = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";
}

std::string base58_encode(ByteView data)
{
    std::size_t zeros = 0;
    while (zeros < data.size() && data[zeros] == 0) ++zeros;

    // Base-58 digits, little-endian; log(256)/log(58) < 1.37.
    std::vector<std::uint8_t> digits((data.size() - zeros) * 137 / 100 + 1, 0);
    std::size_t used = 0;
    for (std::size_t i = zeros; i < data.size(); ++i) {
        unsigned carry = data[i];
        std::size_t j = 0;
        for (; j < used || carry != 0; ++j) {
            carry += 256u * digits[j];
            digits[j] = static_cast<std::uint8_t>(carry % 58);
            carry /= 58;
        }
        used = j;
    }
    std::string out(zeros, '1');
    for (std::size_t j = used; j-- > 0;) out.push_back(kAlphabet[digits[j]]);
    return out;
}

Bytes base58_decode(std::string_view text)
{
    std::size_t ones = 0;
    while (ones < text.size() && text[ones] == '1') ++ones;

    std::vector<std::uint8_t> bytes(text.size() * 733 / 1000 + 1, 0);
    std::size_t used = 0;
    for (std::size_t i = ones; i < text.size(); ++i) {
        auto pos = kAlphabet.find(text[i]);
        if (pos == std::string_view::npos) throw Error(Errc::InvalidEncoding, "invalid base58 character");
        unsigned carry = static_cast<unsigned>(pos);
        std::size_t j = 0;
        for (; j < used || carry != 0; ++j) {
            carry += 58u * bytes[j];
            bytes[j] = static_cast<std::uint8_t>(carry & 0xff);
            carry >>= 8;
        }
        used = j;
    }
    Bytes out(ones, 0);
    for (std::size_t j = used; j-- > 0;) out.push_back(bytes[j]);
    return out;
}

std::string base58check_encode(ByteView payload)
{
    Bytes full(payload.begin(), payload.end());
    Hash256 check = crypto::double_sha256(payload);
    full.insert(full.end(), check.begin(), check.begin() + 4);
    return base58_encode(full);
}

Bytes base58check_decode(std::string_view text)
{
    Bytes raw = base58_decode(text);
    if (raw.size() < 4) throw Error(Errc::InvalidEncoding, "base58check string too short");
    ByteView payload(raw.data(), raw.size() - 4);
    Hash256 check = crypto::double_sha256(payload);
    if (!std::equal(check.begin(), check.begin() + 4, raw.end() - 4)) {
        throw Error(Errc::ChecksumMismatch, "base58check checksum mismatch");
    }
    raw.resize(raw.size() - 4);
    return raw;
}

} // namespace abc::wallet
