#pragma once
#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

#include "common.hpp"

namespace curvembed {

using Int = mpz_class;
using Rat = mpq_class;

// mpq_class's two-argument constructor does not canonicalize; every
// construction from a numerator/denominator pair must go through here.
inline Rat rat(long num, long den = 1) {
    require(den != 0, "rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat rat(const Int& num, const Int& den) {
    require(den != 0, "rational with zero denominator");
    Rat q(num);
    q /= Rat(den);
    return q;
}

inline double rat_d(const Rat& q) { return q.get_d(); }

inline int rat_sign(const Rat& q) { return sgn(q); }

inline Rat rat_abs(const Rat& q) { return abs(q); }

inline Int rat_floor(const Rat& q) {
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

inline Int rat_ceil(const Rat& q) {
    Int r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

inline const Rat& rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline const Rat& rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

// Canonical form: "p" when the denominator is 1, else "p/q" with q > 0.
inline std::string rat_str(const Rat& q) { return q.get_str(10); }

namespace detail {

inline std::optional<Int> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = 0;
    if (s[0] == '+' || s[0] == '-') i = 1;
    if (i == s.size()) return std::nullopt;
    for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') return std::nullopt;
    Int v;
    if (mpz_set_str(v.get_mpz_t(), std::string(s).c_str(), 10) != 0) return std::nullopt;
    return v;
}

}  // namespace detail

// Accepts "p", "p/q", decimal ("-1.25"), and scientific ("2.5e-3") forms,
// all converted exactly.
inline std::optional<Rat> rat_parse(std::string_view s) {
    if (s.empty()) return std::nullopt;
    auto slash = s.find('/');
    if (slash != std::string_view::npos) {
        auto num = detail::parse_int(s.substr(0, slash));
        auto den = detail::parse_int(s.substr(slash + 1));
        if (!num || !den || *den == 0) return std::nullopt;
        return rat(*num, *den);
    }
    std::string_view mant = s;
    long expo = 0;
    auto e = s.find_first_of("eE");
    if (e != std::string_view::npos) {
        auto ev = detail::parse_int(s.substr(e + 1));
        if (!ev || !ev->fits_slong_p()) return std::nullopt;
        expo = ev->get_si();
        mant = s.substr(0, e);
    }
    std::string digits;
    long frac_digits = 0;
    bool neg = false, seen_digit = false, seen_dot = false;
    for (std::size_t i = 0; i < mant.size(); ++i) {
        char c = mant[i];
        if (i == 0 && (c == '+' || c == '-')) {
            neg = (c == '-');
        } else if (c == '.') {
            if (seen_dot) return std::nullopt;
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_dot) ++frac_digits;
            seen_digit = true;
        } else {
            return std::nullopt;
        }
    }
    if (!seen_digit) return std::nullopt;
    Int num;
    mpz_set_str(num.get_mpz_t(), digits.c_str(), 10);
    if (neg) num = -num;
    Rat q(num);
    long net = expo - frac_digits;
    Int p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
    if (net < 0)
        q /= Rat(p10);
    else
        q *= Rat(p10);
    q.canonicalize();
    return q;
}

inline Rat rat_parse_or_throw(std::string_view s) {
    auto q = rat_parse(s);
    if (!q) fail("cannot parse rational: '" + std::string(s) + "'");
    return *q;
}

// A distance tolerance, stored as its square so values like sqrt(2) stay
// exactly representable.
struct Tol {
    Rat sq;  // square of the tolerance; must be >= 0
};

inline Tol tol_of_square(const Rat& sq) {
    require(sgn(sq) >= 0, "tolerance square must be nonnegative");
    return Tol{sq};
}

inline Tol tol_of_value(const Rat& v) {
    require(sgn(v) >= 0, "tolerance must be nonnegative");
    return Tol{v * v};
}

}  // namespace curvembed
