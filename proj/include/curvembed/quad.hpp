#pragma once
#include <optional>
#include <string>
#include <utility>

#include "rational.hpp"

namespace curvembed {

namespace detail {

// If x = (s/t)^2 for rationals, return s/t >= 0.
inline std::optional<Rat> exact_sqrt(const Rat& x) {
    if (sgn(x) < 0) return std::nullopt;
    const Int& n = x.get_num();
    const Int& d = x.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
        return std::nullopt;
    Int sn, sd;
    mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
    return rat(sn, sd);
}

}  // namespace detail

// Value a + b*sqrt(r).  Invariants: r >= 0; b == 0 implies r == 0; r is
// never a perfect square (those fold into the rational part).
struct Quad {
    Rat a, b, r;

    Quad() : a(0), b(0), r(0) {}
    /*implicit*/ Quad(const Rat& v) : a(v), b(0), r(0) {}
    /*implicit*/ Quad(long v) : a(v), b(0), r(0) {}

    Quad(const Rat& a_, const Rat& b_, const Rat& r_) : a(a_), b(b_), r(r_) { normalize(); }

    bool is_rational() const { return sgn(b) == 0; }

    // Only valid when is_rational().
    const Rat& rational() const {
        require(is_rational(), "quad value is irrational");
        return a;
    }

  private:
    void normalize() {
        require(sgn(r) >= 0, "negative radicand");
        if (sgn(b) == 0 || sgn(r) == 0) {
            b = 0;
            r = 0;
            return;
        }
        if (auto s = detail::exact_sqrt(r)) {
            a += b * *s;
            b = 0;
            r = 0;
        }
    }
};

inline Quad quad_sqrt(const Rat& x) {
    require(sgn(x) >= 0, "sqrt of negative rational");
    return Quad(Rat(0), Rat(1), x);
}

// sign(a + b*sqrt(r)) without approximation.
inline int quad_sign(const Quad& q) {
    int sa = sgn(q.a), sb = sgn(q.b);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: |a| vs |b|*sqrt(r)  <=>  a^2 vs b^2*r
    int t = sgn(Rat(q.a * q.a - q.b * q.b * q.r));
    if (t > 0) return sa;
    if (t < 0) return sb;
    return 0;
}

namespace detail {

// sign(A + B*sqrt(u) + C*sqrt(v)), u and v nonnegative, not necessarily equal.
inline int sign3(const Rat& A, const Rat& B, const Rat& u, const Rat& C, const Rat& v) {
    if (sgn(B) == 0 || sgn(u) == 0) return quad_sign(Quad(A, C, v));
    if (sgn(C) == 0 || sgn(v) == 0) return quad_sign(Quad(A, B, u));
    Quad left(A, B, u);  // may fold to rational
    if (left.is_rational()) return quad_sign(Quad(left.a, C, v));
    int sl = quad_sign(left);
    int sc = sgn(C);
    if (sl == 0) return sc;
    if (sl == sc) return sl;
    // compare (A + B*sqrt(u))^2 vs C^2*v; the square is again a 2-term value
    Rat A2 = A * A + B * B * u - C * C * v;
    Rat B2 = 2 * A * B;
    int t = quad_sign(Quad(A2, B2, u));
    if (t > 0) return sl;
    if (t < 0) return sc;
    return 0;
}

}  // namespace detail

// sign(x - y); handles distinct radicands.
inline int quad_cmp(const Quad& x, const Quad& y) {
    if (x.r == y.r) return quad_sign(Quad(x.a - y.a, x.b - y.b, x.r));
    if (x.is_rational()) return -quad_sign(Quad(y.a - x.a, y.b, y.r));
    if (y.is_rational()) return quad_sign(Quad(x.a - y.a, x.b, x.r));
    return detail::sign3(x.a - y.a, x.b, x.r, -y.b, y.r);
}

inline bool operator==(const Quad& x, const Quad& y) { return quad_cmp(x, y) == 0; }
inline bool operator!=(const Quad& x, const Quad& y) { return quad_cmp(x, y) != 0; }
inline bool operator<(const Quad& x, const Quad& y) { return quad_cmp(x, y) < 0; }
inline bool operator<=(const Quad& x, const Quad& y) { return quad_cmp(x, y) <= 0; }
inline bool operator>(const Quad& x, const Quad& y) { return quad_cmp(x, y) > 0; }
inline bool operator>=(const Quad& x, const Quad& y) { return quad_cmp(x, y) >= 0; }

inline const Quad& quad_min(const Quad& x, const Quad& y) { return quad_cmp(y, x) < 0 ? y : x; }
inline const Quad& quad_max(const Quad& x, const Quad& y) { return quad_cmp(x, y) < 0 ? y : x; }

// Sum restricted to compatible radicands (equal, or one side rational).
inline Quad quad_add(const Quad& x, const Quad& y) {
    if (y.is_rational()) return Quad(x.a + y.a, x.b, x.r);
    if (x.is_rational()) return Quad(x.a + y.a, y.b, y.r);
    require(x.r == y.r, "sum of quads with distinct radicands");
    return Quad(x.a + y.a, x.b + y.b, x.r);
}

inline Quad quad_neg(const Quad& x) { return Quad(-x.a, -x.b, x.r); }

inline Quad quad_sub(const Quad& x, const Quad& y) { return quad_add(x, quad_neg(y)); }

inline Quad quad_scale(const Rat& c, const Quad& x) {
    if (sgn(c) == 0) return Quad();
    return Quad(c * x.a, c * x.b, x.r);
}

inline double quad_d(const Quad& x) {
    double root = 0.0;
    if (sgn(x.b) != 0) root = std::sqrt(rat_d(x.r));
    return rat_d(x.a) + rat_d(x.b) * root;
}

inline std::string quad_str(const Quad& x) {
    if (x.is_rational()) return rat_str(x.a);
    return rat_str(x.a) + " + " + rat_str(x.b) + "*sqrt(" + rat_str(x.r) + ")";
}

// Roots of A*s^2 + B*s + C = 0 with A != 0 and discriminant >= 0, sorted.
inline std::pair<Quad, Quad> quad_roots(const Rat& A, const Rat& B, const Rat& C) {
    require(sgn(A) != 0, "quad_roots needs a true quadratic");
    Rat disc = B * B - 4 * A * C;
    require(sgn(disc) >= 0, "quad_roots with negative discriminant");
    Rat inv = Rat(1) / (2 * A);
    Quad lo(-B * inv, -rat_abs(inv), disc);
    Quad hi(-B * inv, rat_abs(inv), disc);
    return {lo, hi};
}

// Encloses x in a rational interval [lo, hi] with hi - lo <= width.
inline std::pair<Rat, Rat> quad_bracket(const Quad& x, const Rat& width) {
    require(sgn(width) > 0, "bracket width must be positive");
    if (x.is_rational()) return {x.a, x.a};
    // sqrt(n/d) = sqrt(n*d)/d; scale by 2^k for precision
    Int n = x.r.get_num(), d = x.r.get_den();
    Int nd = n * d;
    // width of sqrt bracket: 1/(d*2^k); need |b|/(d*2^k) <= width
    Rat need = rat_abs(x.b) / (Rat(d) * width);  // require 2^k >= need
    unsigned long k = 1;
    if (sgn(need) > 0) {
        Int c = rat_ceil(need);
        k = mpz_sizeinbase(c.get_mpz_t(), 2) + 1;
    }
    Int scaled = nd << (2 * k);
    Int f;
    mpz_sqrt(f.get_mpz_t(), scaled.get_mpz_t());
    Int den = d << k;
    Rat root_lo = rat(f, den), root_hi = rat(f + 1, den);
    if (sgn(x.b) > 0) return {x.a + x.b * root_lo, x.a + x.b * root_hi};
    return {x.a + x.b * root_hi, x.a + x.b * root_lo};
}

// A rational strictly between x and y (requires x < y).
inline Rat rat_strictly_between(const Quad& x, const Quad& y) {
    require(quad_cmp(x, y) < 0, "rat_strictly_between needs x < y");
    Rat width = 1;
    for (int iter = 0; iter < 100000; ++iter) {
        auto bx = quad_bracket(x, width);
        auto by = quad_bracket(y, width);
        if (bx.second < by.first) {
            Rat mid = (bx.second + by.first) / 2;
            if (quad_cmp(Quad(mid), x) > 0 && quad_cmp(Quad(mid), y) < 0) return mid;
        }
        width /= 16;
    }
    fail("rat_strictly_between failed to converge");
}

// Largest-step rational at most x (within width below when x is irrational).
inline Rat rat_at_most(const Quad& x, const Rat& width) {
    if (x.is_rational()) return x.a;
    Rat lo = quad_bracket(x, width).first;
    return lo;
}

// Rational at least x (within width above when x is irrational).
inline Rat rat_at_least(const Quad& x, const Rat& width) {
    if (x.is_rational()) return x.a;
    return quad_bracket(x, width).second;
}

}  // namespace curvembed
