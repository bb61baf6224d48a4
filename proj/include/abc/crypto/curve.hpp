#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "abc/bytes.hpp"

namespace abc::crypto {

/// Integer modulo the group order of some curve. The value is not bound to a
/// curve; operations that care check it against Curve::order().
class Scalar {
public:
    Scalar() = default;
    explicit Scalar(mpz_class v) : v_(std::move(v)) {}
    explicit Scalar(unsigned long v) : v_(v) {}

    static Scalar from_bytes(ByteView be);
    /// 32-byte big-endian encoding. Throws InvalidScalar if the value needs more.
    Hash256 to_bytes() const;
    std::string to_hex() const;

    const mpz_class& value() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.v_ == b.v_; }

private:
    mpz_class v_;
};

/// Affine point; identity is flagged rather than encoded in coordinates.
struct Point {
    mpz_class x;
    mpz_class y;
    bool infinity = true;

    static Point identity() { return {}; }
    static Point affine(mpz_class x, mpz_class y) { return {std::move(x), std::move(y), false}; }

    friend bool operator==(const Point& a, const Point& b)
    {
        if (a.infinity || b.infinity) return a.infinity == b.infinity;
        return a.x == b.x && a.y == b.y;
    }
};

using CompressedPoint = std::array<std::uint8_t, 33>;

/// Short-Weierstrass curve y^2 = x^3 + ax + b over F_p with a prime-order
/// base point. Two instances exist: secp256k1 and the 19-element toy curve
/// used by exhaustive tests.
class Curve {
public:
    Curve(std::string name, mpz_class p, mpz_class a, mpz_class b, mpz_class gx, mpz_class gy, mpz_class n,
          unsigned cofactor);

    static const Curve& secp256k1();
    /// y^2 = x^3 + 2x + 2 over F_17, G = (5, 1), n = 19.
    static const Curve& toy();

    const std::string& name() const { return name_; }
    const mpz_class& p() const { return p_; }
    const mpz_class& a() const { return a_; }
    const mpz_class& b() const { return b_; }
    const mpz_class& order() const { return n_; }
    unsigned cofactor() const { return h_; }
    const Point& generator() const { return g_; }

    bool on_curve(const Point& pt) const;
    bool valid_secret(const Scalar& s) const { return s.value() > 0 && s.value() < n_; }

    Point add(const Point& lhs, const Point& rhs) const;
    Point negate(const Point& pt) const;
    Point mul(const mpz_class& k, const Point& pt) const;
    Point mul_base(const mpz_class& k) const;
    /// k1*G + k2*Q, used by verification.
    Point mul_add(const mpz_class& k1, const mpz_class& k2, const Point& q) const;

    /// Point with the given x whose y has the requested parity, if any.
    std::optional<Point> lift_x(const mpz_class& x, bool odd_y) const;

    /// SEC1 compressed form. The x coordinate is always 32 bytes so that
    /// toy-curve points share the secp256k1 byte layout.
    CompressedPoint encode(const Point& pt) const;
    Point decode(ByteView data) const;

    mpz_class mod_n(const mpz_class& v) const;
    mpz_class inv_n(const mpz_class& v) const;

private:
    struct Jacobian;
    Jacobian to_jacobian(const Point& pt) const;
    Point to_affine(const Jacobian& pt) const;
    void dbl_in_place(Jacobian& pt) const;
    void add_in_place(Jacobian& acc, const Jacobian& rhs) const;
    std::optional<mpz_class> sqrt_mod_p(const mpz_class& v) const;

    std::string name_;
    mpz_class p_, a_, b_, n_;
    unsigned h_;
    Point g_;
    // 64 windows x 16 multiples of (16^i * G), built once for mul_base.
    std::vector<std::array<Point, 16>> base_table_;
};

struct KeyPair {
    Scalar sk;
    Point pk;
};

mpz_class mpz_from_bytes(ByteView be);
Hash256 mpz_to_bytes32(const mpz_class& v);

} // namespace abc::crypto
