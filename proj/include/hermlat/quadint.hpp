#pragma once

// Exact arithmetic in the ring of integers O of Q(sqrt(-m)), m square-free.
// O = Z[w] with w = sqrt(-m) when m = 1,2 (mod 4) and w = (1+sqrt(-m))/2
// when m = 3 (mod 4). Elements are stored as a + b*w with bigint a, b.

#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hermlat/numeric.hpp"

namespace hermlat {

enum class OmegaKind { Sqrt, Half };

class QuadField {
public:
    static QuadField of(long m) {
        if (m <= 0) throw std::invalid_argument("QuadField: m must be positive");
        if (!is_square_free(Int(m))) throw std::invalid_argument("QuadField: m must be square-free");
        const OmegaKind kind = (m % 4 == 3) ? OmegaKind::Half : OmegaKind::Sqrt;
        return QuadField(m, kind);
    }

    long m() const { return m_; }
    OmegaKind kind() const { return kind_; }
    bool half() const { return kind_ == OmegaKind::Half; }

    // w satisfies w^2 = omega_trace()*w - omega_norm()
    Int omega_norm() const { return half() ? Int((m_ + 1) / 4) : Int(m_); }
    int omega_trace() const { return half() ? 1 : 0; }

    friend bool operator==(const QuadField& a, const QuadField& b) { return a.m_ == b.m_; }
    friend bool operator!=(const QuadField& a, const QuadField& b) { return !(a == b); }

private:
    QuadField(long m, OmegaKind k) : m_(m), kind_(k) {}
    long m_;
    OmegaKind kind_;
};

class QuadInt {
public:
    QuadInt(const QuadField& f, Int a, Int b) : field_(f), a_(std::move(a)), b_(std::move(b)) {}
    static QuadInt zero(const QuadField& f) { return QuadInt(f, 0, 0); }
    static QuadInt one(const QuadField& f) { return QuadInt(f, 1, 0); }
    static QuadInt omega(const QuadField& f) { return QuadInt(f, 0, 1); }

    const QuadField& field() const { return field_; }
    const Int& a() const { return a_; }
    const Int& b() const { return b_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }

    QuadInt conj() const {
        // conj(w) = omega_trace - w
        return QuadInt(field_, a_ + b_ * field_.omega_trace(), -b_);
    }

    Int norm() const {
        return a_ * a_ + a_ * b_ * field_.omega_trace() + b_ * b_ * field_.omega_norm();
    }

    Int trace() const { return 2 * a_ + b_ * field_.omega_trace(); }

    friend QuadInt operator+(const QuadInt& x, const QuadInt& y) {
        x.require_same_field(y);
        return QuadInt(x.field_, x.a_ + y.a_, x.b_ + y.b_);
    }
    friend QuadInt operator-(const QuadInt& x, const QuadInt& y) {
        x.require_same_field(y);
        return QuadInt(x.field_, x.a_ - y.a_, x.b_ - y.b_);
    }
    friend QuadInt operator-(const QuadInt& x) { return QuadInt(x.field_, -x.a_, -x.b_); }
    friend QuadInt operator*(const QuadInt& x, const QuadInt& y) {
        x.require_same_field(y);
        // (a1 + b1 w)(a2 + b2 w) with w^2 = t w - N
        const Int t(x.field_.omega_trace());
        const Int n = x.field_.omega_norm();
        const Int bb = x.b_ * y.b_;
        return QuadInt(x.field_, x.a_ * y.a_ - bb * n, x.a_ * y.b_ + x.b_ * y.a_ + bb * t);
    }
    friend QuadInt operator*(const Int& k, const QuadInt& x) {
        return QuadInt(x.field_, k * x.a_, k * x.b_);
    }

    friend bool operator==(const QuadInt& x, const QuadInt& y) {
        return x.field_ == y.field_ && x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const QuadInt& x, const QuadInt& y) { return !(x == y); }

    /// Lexicographic on (b, a); used only for deterministic ordering.
    friend bool lex_less(const QuadInt& x, const QuadInt& y) {
        if (x.b_ != y.b_) return x.b_ < y.b_;
        return x.a_ < y.a_;
    }

private:
    void require_same_field(const QuadInt& y) const {
        if (field_ != y.field_) throw std::invalid_argument("QuadInt: field mismatch");
    }
    QuadField field_;
    Int a_, b_;
};

/// The unit group of O: {1,-1} in general, plus the extra units for m = 1, 3.
inline std::vector<QuadInt> units(const QuadField& f) {
    std::vector<QuadInt> u{QuadInt::one(f), -QuadInt::one(f)};
    if (f.m() == 1) {
        u.push_back(QuadInt::omega(f));
        u.push_back(-QuadInt::omega(f));
    } else if (f.m() == 3) {
        // w = (1+sqrt(-3))/2 is a primitive 6th root of unity; w^2 = w - 1
        u.push_back(QuadInt::omega(f));
        u.push_back(-QuadInt::omega(f));
        u.push_back(QuadInt(f, -1, 1));
        u.push_back(QuadInt(f, 1, -1));
    }
    return u;
}

/// All x in O with norm(x) <= bound, ordered lexicographically on (b, a).
/// With t = omega_trace and N = omega_norm, norm(a+bw) <= B is equivalent
/// to (2a + tb)^2 <= 4B - (4N - t^2) b^2, which bounds b and then a exactly.
inline std::vector<QuadInt> elements_of_norm_at_most(const QuadField& f, const Int& bound) {
    std::vector<QuadInt> out;
    if (bound < 0) return out;
    const Int t(f.omega_trace());
    const Int d4 = 4 * f.omega_norm() - t * t;  // 4m for sqrt-type, m for half-type
    const Int bmax = floor_sqrt_rat(4 * bound, d4);
    for (Int b = -bmax; b <= bmax; ++b) {
        const Int rem = 4 * bound - d4 * b * b;
        const Int s = isqrt(rem);  // |2a + tb| <= s
        // smallest a with 2a + tb >= -s, largest with 2a + tb <= s
        const Int alo = -floor_div(s + t * b, Int(2));
        const Int ahi = floor_div(s - t * b, Int(2));
        for (Int a = alo; a <= ahi; ++a) out.emplace_back(f, a, b);
    }
    return out;
}

/// The complete set {x in O : norm(x) = t}, ordered lexicographically on (b, a).
inline std::vector<QuadInt> solve_norm_equation(const QuadField& f, const Int& t) {
    if (t < 1) throw std::invalid_argument("solve_norm_equation: t must be >= 1");
    std::vector<QuadInt> out;
    for (const QuadInt& x : elements_of_norm_at_most(f, t))
        if (x.norm() == t) out.push_back(x);
    return out;
}

/// Prints in the canonical element syntax: "a", "a+bw", "a-bw" (with "w",
/// "-w", "2w" abbreviations). parse_quadint accepts exactly this plus the
/// conjugate token "cw" for conj(w).
inline std::string to_string(const QuadInt& x) {
    std::ostringstream os;
    if (x.b() == 0) {
        os << x.a();
        return os.str();
    }
    if (x.a() != 0) {
        os << x.a();
        if (x.b() > 0) os << "+";
    }
    if (x.b() == -1)
        os << "-";
    else if (x.b() != 1)
        os << x.b();
    os << "w";
    return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const QuadInt& x) { return os << to_string(x); }

namespace detail {
inline void skip_spaces(std::string_view& s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
}
inline bool parse_int(std::string_view& s, Int& out) {
    skip_spaces(s);
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i == start) return false;
    out = Int(std::string(s.substr(0, i)));
    s.remove_prefix(i);
    return true;
}
}  // namespace detail

inline QuadInt parse_quadint(const QuadField& f, std::string_view s) {
    using detail::skip_spaces;
    const std::string_view orig = s;
    auto fail = [&]() -> QuadInt {
        throw std::invalid_argument("parse_quadint: cannot parse '" + std::string(orig) + "'");
    };

    // one term: [sign] [digits] [w | cw], at most two terms
    Int a = 0, b_w = 0, b_cw = 0;
    bool any = false;
    skip_spaces(s);
    while (!s.empty()) {
        int sign = 1;
        skip_spaces(s);
        if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
            if (s.front() == '-') sign = -1;
            s.remove_prefix(1);
            skip_spaces(s);
        } else if (any) {
            return fail();  // terms must be joined by +/-
        }
        Int coef = 1;
        bool has_digits = false;
        {
            std::size_t i = 0;
            while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
            if (i > 0) {
                coef = Int(std::string(s.substr(0, i)));
                s.remove_prefix(i);
                has_digits = true;
            }
        }
        skip_spaces(s);
        if (!s.empty() && s.front() == 'c' && s.size() >= 2 && s[1] == 'w') {
            b_cw += sign * coef;
            s.remove_prefix(2);
        } else if (!s.empty() && s.front() == 'w') {
            b_w += sign * coef;
            s.remove_prefix(1);
        } else {
            if (!has_digits) return fail();
            a += sign * coef;
        }
        any = true;
        skip_spaces(s);
    }
    if (!any) throw std::invalid_argument("parse_quadint: empty input");
    // cw = conj(w) = omega_trace - w
    a += b_cw * f.omega_trace();
    b_w -= b_cw;
    return QuadInt(f, a, b_w);
}

}  // namespace hermlat
