#include "abc/crypto/curve.hpp"

#include <algorithm>

namespace abc::crypto {

mpz_class mpz_from_bytes(ByteView be)
{
    mpz_class v;
    if (!be.empty()) mpz_import(v.get_mpz_t(), be.size(), 1, 1, 1, 0, be.data());
    return v;
}

Hash256 mpz_to_bytes32(const mpz_class& v)
{
    if (v < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 256) {
        throw Error(Errc::InvalidScalar, "integer does not fit in 32 bytes");
    }
    Hash256 out{};
    std::size_t count = 0;
    std::array<std::uint8_t, 32> tmp{};
    mpz_export(tmp.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
    std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(count), out.end() - static_cast<std::ptrdiff_t>(count));
    return out;
}

Scalar Scalar::from_bytes(ByteView be) { return Scalar(mpz_from_bytes(be)); }

Hash256 Scalar::to_bytes() const { return mpz_to_bytes32(v_); }

std::string Scalar::to_hex() const { return abc::to_hex(to_bytes()); }

struct Curve::Jacobian {
    mpz_class x, y, z;
    bool inf = true;
};

namespace {

void reduce(mpz_class& v, const mpz_class& m) { mpz_mod(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t()); }

mpz_class hex_mpz(const char* hex) { return mpz_class(hex, 16); }

} // namespace

Curve::Curve(std::string name, mpz_class p, mpz_class a, mpz_class b, mpz_class gx, mpz_class gy, mpz_class n,
             unsigned cofactor)
    : name_(std::move(name)), p_(std::move(p)), a_(std::move(a)), b_(std::move(b)), n_(std::move(n)), h_(cofactor),
      g_(Point::affine(std::move(gx), std::move(gy)))
{
    if (!on_curve(g_)) throw Error(Errc::InvalidPoint, "base point not on curve " + name_);

    const std::size_t windows = (mpz_sizeinbase(n_.get_mpz_t(), 2) + 3) / 4;
    base_table_.resize(windows);
    Jacobian step = to_jacobian(g_);
    for (std::size_t w = 0; w < windows; ++w) {
        Jacobian acc;
        base_table_[w][0] = Point::identity();
        for (std::size_t j = 1; j < 16; ++j) {
            add_in_place(acc, step);
            base_table_[w][j] = to_affine(acc);
        }
        for (int d = 0; d < 4; ++d) dbl_in_place(step);
    }
}

const Curve& Curve::secp256k1()
{
    static const Curve curve("secp256k1", hex_mpz("FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F"),
                             mpz_class(0), mpz_class(7),
                             hex_mpz("79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798"),
                             hex_mpz("483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8"),
                             hex_mpz("FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141"), 1);
    return curve;
}

const Curve& Curve::toy()
{
    static const Curve curve("toy17", 17, 2, 2, 5, 1, 19, 1);
    return curve;
}

bool Curve::on_curve(const Point& pt) const
{
    if (pt.infinity) return true;
    if (pt.x < 0 || pt.x >= p_ || pt.y < 0 || pt.y >= p_) return false;
    mpz_class lhs = pt.y * pt.y - (pt.x * pt.x * pt.x + a_ * pt.x + b_);
    reduce(lhs, p_);
    return lhs == 0;
}

Curve::Jacobian Curve::to_jacobian(const Point& pt) const
{
    if (pt.infinity) return {};
    return {pt.x, pt.y, 1, false};
}

Point Curve::to_affine(const Jacobian& pt) const
{
    if (pt.inf) return Point::identity();
    mpz_class zinv;
    mpz_invert(zinv.get_mpz_t(), pt.z.get_mpz_t(), p_.get_mpz_t());
    mpz_class zinv2 = zinv * zinv;
    reduce(zinv2, p_);
    mpz_class x = pt.x * zinv2;
    reduce(x, p_);
    mpz_class y = pt.y * zinv2;
    reduce(y, p_);
    y *= zinv;
    reduce(y, p_);
    return Point::affine(std::move(x), std::move(y));
}

void Curve::dbl_in_place(Jacobian& pt) const
{
    if (pt.inf) return;
    if (pt.y == 0) {
        pt = {};
        return;
    }
    mpz_class xx = pt.x * pt.x;
    reduce(xx, p_);
    mpz_class yy = pt.y * pt.y;
    reduce(yy, p_);
    mpz_class yyyy = yy * yy;
    reduce(yyyy, p_);
    mpz_class s = 4 * pt.x * yy;
    reduce(s, p_);
    mpz_class m = 3 * xx;
    if (a_ != 0) {
        mpz_class z2 = pt.z * pt.z;
        reduce(z2, p_);
        mpz_class z4 = z2 * z2;
        reduce(z4, p_);
        m += a_ * z4;
    }
    reduce(m, p_);
    mpz_class x3 = m * m - 2 * s;
    reduce(x3, p_);
    mpz_class y3 = m * (s - x3) - 8 * yyyy;
    reduce(y3, p_);
    mpz_class z3 = 2 * pt.y * pt.z;
    reduce(z3, p_);
    pt.x = std::move(x3);
    pt.y = std::move(y3);
    pt.z = std::move(z3);
}

void Curve::add_in_place(Jacobian& acc, const Jacobian& rhs) const
{
    if (rhs.inf) return;
    if (acc.inf) {
        acc = rhs;
        return;
    }
    const bool rhs_affine = rhs.z == 1;
    mpz_class z1z1 = acc.z * acc.z;
    reduce(z1z1, p_);
    mpz_class u1 = acc.x;
    mpz_class s1 = acc.y;
    if (!rhs_affine) {
        mpz_class z2z2 = rhs.z * rhs.z;
        reduce(z2z2, p_);
        u1 *= z2z2;
        reduce(u1, p_);
        s1 *= z2z2 * rhs.z;
        reduce(s1, p_);
    }
    mpz_class u2 = rhs.x * z1z1;
    reduce(u2, p_);
    mpz_class s2 = rhs.y * z1z1;
    reduce(s2, p_);
    s2 *= acc.z;
    reduce(s2, p_);

    if (u1 == u2) {
        if (s1 == s2) {
            dbl_in_place(acc);
        } else {
            acc = {};
        }
        return;
    }
    mpz_class h = u2 - u1;
    reduce(h, p_);
    mpz_class r = s2 - s1;
    reduce(r, p_);
    mpz_class hh = h * h;
    reduce(hh, p_);
    mpz_class hhh = hh * h;
    reduce(hhh, p_);
    mpz_class v = u1 * hh;
    reduce(v, p_);
    mpz_class x3 = r * r - hhh - 2 * v;
    reduce(x3, p_);
    mpz_class y3 = r * (v - x3) - s1 * hhh;
    reduce(y3, p_);
    mpz_class z3 = acc.z * h;
    reduce(z3, p_);
    if (!rhs_affine) {
        z3 *= rhs.z;
        reduce(z3, p_);
    }
    acc.x = std::move(x3);
    acc.y = std::move(y3);
    acc.z = std::move(z3);
}

Point Curve::add(const Point& lhs, const Point& rhs) const
{
    Jacobian acc = to_jacobian(lhs);
    add_in_place(acc, to_jacobian(rhs));
    return to_affine(acc);
}

Point Curve::negate(const Point& pt) const
{
    if (pt.infinity) return pt;
    mpz_class y = p_ - pt.y;
    reduce(y, p_);
    return Point::affine(pt.x, std::move(y));
}

Point Curve::mul(const mpz_class& k, const Point& pt) const
{
    mpz_class e = mod_n(k);
    if (e == 0 || pt.infinity) return Point::identity();

    std::array<Jacobian, 16> table;
    table[1] = to_jacobian(pt);
    for (std::size_t j = 2; j < 16; ++j) {
        table[j] = table[j - 1];
        add_in_place(table[j], table[1]);
    }
    const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    const std::size_t windows = (bits + 3) / 4;
    Jacobian acc;
    for (std::size_t w = windows; w-- > 0;) {
        for (int d = 0; d < 4; ++d) dbl_in_place(acc);
        unsigned nib = 0;
        for (int bit = 3; bit >= 0; --bit) {
            nib = (nib << 1) | static_cast<unsigned>(mpz_tstbit(e.get_mpz_t(), w * 4 + static_cast<unsigned>(bit)));
        }
        if (nib) add_in_place(acc, table[nib]);
    }
    return to_affine(acc);
}

Point Curve::mul_base(const mpz_class& k) const
{
    mpz_class e = mod_n(k);
    Jacobian acc;
    for (std::size_t w = 0; w < base_table_.size(); ++w) {
        unsigned nib = 0;
        for (int bit = 3; bit >= 0; --bit) {
            nib = (nib << 1) | static_cast<unsigned>(mpz_tstbit(e.get_mpz_t(), w * 4 + static_cast<unsigned>(bit)));
        }
        if (nib) add_in_place(acc, to_jacobian(base_table_[w][nib]));
    }
    return to_affine(acc);
}

Point Curve::mul_add(const mpz_class& k1, const mpz_class& k2, const Point& q) const
{
    return add(mul_base(k1), mul(k2, q));
}

std::optional<mpz_class> Curve::sqrt_mod_p(const mpz_class& v) const
{
    mpz_class a = v;
    reduce(a, p_);
    if (a == 0) return mpz_class(0);
    if (mpz_legendre(a.get_mpz_t(), p_.get_mpz_t()) != 1) return std::nullopt;

    mpz_class root;
    if (mpz_tstbit(p_.get_mpz_t(), 0) && mpz_tstbit(p_.get_mpz_t(), 1)) {
        mpz_class e = (p_ + 1) / 4;
        mpz_powm(root.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p_.get_mpz_t());
        return root;
    }

    // Tonelli-Shanks for p = 1 mod 4.
    mpz_class q = p_ - 1;
    unsigned s = 0;
    while (mpz_even_p(q.get_mpz_t())) {
        q /= 2;
        ++s;
    }
    mpz_class z = 2;
    while (mpz_legendre(z.get_mpz_t(), p_.get_mpz_t()) != -1) ++z;
    mpz_class c, t, r;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p_.get_mpz_t());
    mpz_class e = (q + 1) / 2;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p_.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p_.get_mpz_t());
    unsigned m = s;
    while (t != 1) {
        unsigned i = 0;
        mpz_class t2 = t;
        while (t2 != 1) {
            t2 = t2 * t2;
            reduce(t2, p_);
            ++i;
        }
        mpz_class b = c;
        for (unsigned j = 0; j + i + 1 < m; ++j) {
            b = b * b;
            reduce(b, p_);
        }
        m = i;
        c = b * b;
        reduce(c, p_);
        t = t * c;
        reduce(t, p_);
        r = r * b;
        reduce(r, p_);
    }
    return r;
}

std::optional<Point> Curve::lift_x(const mpz_class& x, bool odd_y) const
{
    if (x < 0 || x >= p_) return std::nullopt;
    mpz_class rhs = x * x * x + a_ * x + b_;
    reduce(rhs, p_);
    auto y = sqrt_mod_p(rhs);
    if (!y) return std::nullopt;
    if ((mpz_odd_p(y->get_mpz_t()) != 0) != odd_y) {
        if (*y == 0) return std::nullopt;
        *y = p_ - *y;
    }
    return Point::affine(x, std::move(*y));
}

CompressedPoint Curve::encode(const Point& pt) const
{
    if (pt.infinity) throw Error(Errc::IdentityPoint, "cannot encode the identity");
    CompressedPoint out;
    out[0] = mpz_odd_p(pt.y.get_mpz_t()) ? 0x03 : 0x02;
    Hash256 x = mpz_to_bytes32(pt.x);
    std::copy(x.begin(), x.end(), out.begin() + 1);
    return out;
}

Point Curve::decode(ByteView data) const
{
    if (data.size() != 33 || (data[0] != 0x02 && data[0] != 0x03)) {
        throw Error(Errc::InvalidPoint, "expected 33-byte compressed point");
    }
    auto pt = lift_x(mpz_from_bytes(data.subspan(1)), data[0] == 0x03);
    if (!pt) throw Error(Errc::InvalidPoint, "x coordinate not on curve " + name_);
    return *pt;
}

mpz_class Curve::mod_n(const mpz_class& v) const
{
    mpz_class out = v;
    reduce(out, n_);
    return out;
}

mpz_class Curve::inv_n(const mpz_class& v) const
{
    mpz_class out;
    mpz_class base = mod_n(v);
    if (base == 0 || mpz_invert(out.get_mpz_t(), base.get_mpz_t(), n_.get_mpz_t()) == 0) {
        throw Error(Errc::InvalidScalar, "scalar has no inverse mod n");
    }
    return out;
}

} // namespace abc::crypto
