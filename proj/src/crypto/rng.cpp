#include "abc/crypto/rng.hpp"

#include <algorithm>

#include <openssl/rand.h>

#include "abc/crypto/hash.hpp"

namespace abc::crypto {

Seed random_seed()
{
    Seed seed;
    if (RAND_bytes(seed.data(), static_cast<int>(seed.size())) != 1) {
        throw Error(Errc::InvalidArgument, "OS entropy source unavailable");
    }
    return seed;
}

Seed seed_from_string(std::string_view text)
{
    if (text.size() == 64) {
        try {
            return array_from_hex<32>(text);
        } catch (const Error&) {
        }
    }
    return sha256({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

HashStream::HashStream(std::optional<Seed> seed) : seed_(seed ? *seed : random_seed()) {}

HashStream HashStream::derive(const Seed& parent, std::string_view label, std::uint64_t ordinal)
{
    Bytes material(parent.begin(), parent.end());
    material.insert(material.end(), label.begin(), label.end());
    for (int i = 7; i >= 0; --i) material.push_back(static_cast<std::uint8_t>(ordinal >> (8 * i)));
    return HashStream(sha256(material));
}

void HashStream::refill()
{
    std::array<std::uint8_t, 40> input{};
    std::copy(seed_.begin(), seed_.end(), input.begin());
    for (int i = 0; i < 8; ++i) input[32 + i] = static_cast<std::uint8_t>(counter_ >> (8 * (7 - i)));
    block_ = sha256(input);
    ++counter_;
    used_ = 0;
}

void HashStream::fill(std::span<std::uint8_t> out)
{
    for (auto& byte : out) {
        if (used_ == block_.size()) refill();
        byte = block_[used_++];
    }
}

Hash256 HashStream::next32()
{
    Hash256 out;
    fill(out);
    return out;
}

HashStream::result_type HashStream::operator()()
{
    std::array<std::uint8_t, 8> raw;
    fill(raw);
    result_type v = 0;
    for (auto b : raw) v = (v << 8) | b;
    return v;
}

double HashStream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::uint64_t HashStream::below(std::uint64_t bound)
{
    if (bound == 0) throw Error(Errc::InvalidArgument, "below(0)");
    const std::uint64_t limit = max() - max() % bound;
    for (;;) {
        std::uint64_t v = (*this)();
        if (v < limit) return v % bound;
    }
}

} // namespace abc::crypto
