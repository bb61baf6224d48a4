#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>

#include "abc/bytes.hpp"

namespace abc::crypto {

using Seed = Hash256;

/// Counter-mode hash stream: block i is SHA256(seed || be64(i)). Every
/// randomized operation in the toolkit draws from one of these so that a
/// fixed seed reproduces the same output bit for bit. Without a seed the
/// stream is keyed from the OS entropy source.
///
/// Satisfies std::uniform_random_bit_generator.
class HashStream {
public:
    using result_type = std::uint64_t;

    explicit HashStream(std::optional<Seed> seed = std::nullopt);

    /// Child stream keyed by SHA256(seed || label || be64(ordinal)).
    /// Used to give every record/trial its own independent stream.
    static HashStream derive(const Seed& parent, std::string_view label, std::uint64_t ordinal);

    void fill(std::span<std::uint8_t> out);
    Hash256 next32();
    result_type operator()();
    /// Uniform double in [0, 1) with 53 bits of precision.
    double uniform();
    /// Uniform integer in [0, bound) without modulo bias.
    std::uint64_t below(std::uint64_t bound);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    const Seed& seed() const { return seed_; }

private:
    void refill();

    Seed seed_{};
    std::uint64_t counter_ = 0;
    Hash256 block_{};
    std::size_t used_ = block_.size();
};

Seed random_seed();
/// Parses a 64-char hex seed, or hashes any other string into a seed so CLI
/// users can pass short mnemonics such as "--seed 7".
Seed seed_from_string(std::string_view text);

} // namespace abc::crypto
