#pragma once

// Brute-force model of y^2 = x^3 + 2x + 2 over F_17 with G = (5, 1).
// Plain ints and textbook affine formulas, nothing shared with the library.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <openssl/sha.h>

namespace toy {

constexpr int P = 17;
constexpr int A = 2;
constexpr int B = 2;
constexpr int N = 19;

struct Pt {
    int x = 0;
    int y = 0;
    bool inf = true;
    bool operator==(const Pt&) const = default;
};

inline int md(long v, int m) { return static_cast<int>(((v % m) + m) % m); }

inline int inv(int a, int m)
{
    for (int i = 1; i < m; ++i) {
        if (md(static_cast<long>(a) * i, m) == 1) return i;
    }
    return 0;
}

inline Pt add(Pt p, Pt q)
{
    if (p.inf) return q;
    if (q.inf) return p;
    if (p.x == q.x && md(p.y + q.y, P) == 0) return {};
    int lambda;
    if (p == q) {
        lambda = md((3L * p.x * p.x + A) * inv(md(2L * p.y, P), P), P);
    } else {
        lambda = md(static_cast<long>(q.y - p.y) * inv(md(q.x - p.x, P), P), P);
    }
    const int x = md(static_cast<long>(lambda) * lambda - p.x - q.x, P);
    const int y = md(static_cast<long>(lambda) * (p.x - x) - p.y, P);
    return {x, y, false};
}

inline const Pt G{5, 1, false};

// k*G by repeated addition.
inline Pt mul(int k, Pt base = G)
{
    Pt acc;
    for (int i = 0; i < md(k, N); ++i) acc = add(acc, base);
    return acc;
}

inline std::vector<Pt> all_points()
{
    std::vector<Pt> pts{Pt{}};
    for (int x = 0; x < P; ++x) {
        for (int y = 0; y < P; ++y) {
            if (md(static_cast<long>(y) * y - (static_cast<long>(x) * x * x + A * x + B), P) == 0) pts.push_back({x, y, false});
        }
    }
    return pts;
}

struct Sig {
    int r = 0;
    int s = 0;
};

// nullopt when r or s is zero.
inline std::optional<Sig> sign(int sk, int z, int k)
{
    const Pt R = mul(k);
    const int r = md(R.x, N);
    if (r == 0) return std::nullopt;
    const int s = md(static_cast<long>(inv(k, N)) * md(z + static_cast<long>(r) * sk, N), N);
    if (s == 0) return std::nullopt;
    return Sig{r, s};
}

// SEC1 compressed encoding with a 32-byte x.
inline std::array<std::uint8_t, 33> encode(Pt p)
{
    std::array<std::uint8_t, 33> out{};
    out[0] = static_cast<std::uint8_t>(p.y % 2 ? 3 : 2);
    out[32] = static_cast<std::uint8_t>(p.x);
    return out;
}

inline std::array<std::uint8_t, 32> sha256(const std::uint8_t* data, std::size_t len)
{
    std::array<std::uint8_t, 32> h{};
    SHA256(data, len, h.data());
    return h;
}

// Big-endian 256-bit value mod a small modulus.
inline int mod_be(const std::array<std::uint8_t, 32>& h, int m)
{
    long acc = 0;
    for (auto b : h) acc = (acc * 256 + b) % m;
    return static_cast<int>(acc);
}

inline int klepto_k2(Pt shared, int counter)
{
    std::array<std::uint8_t, 34> buf{};
    auto enc = encode(shared);
    std::copy(enc.begin(), enc.end(), buf.begin());
    buf[33] = static_cast<std::uint8_t>(counter);
    return mod_be(sha256(buf.data(), buf.size()), N);
}

// Second signature of the kleptographic pair for a known k1.
inline std::optional<Sig> klepto_second(int sk, Pt pk_receiver, int k1, int z2)
{
    const Pt shared = mul(k1, pk_receiver);
    for (int c = 0; c < 256; ++c) {
        const int k2 = klepto_k2(shared, c);
        if (k2 == 0) continue;
        if (auto s = sign(sk, z2, k2)) return s;
    }
    return std::nullopt;
}

} // namespace toy
