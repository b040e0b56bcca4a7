#pragma once

// Exact integer/rational helpers shared by all of hermlat. Everything here
// is arbitrary precision; no floating point is used anywhere in the library.

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hermlat {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using IntVec = std::vector<Int>;
using IntMat = std::vector<std::vector<Int>>;

inline Int floor_div(const Int& a, const Int& b) {
    if (b <= 0) throw std::invalid_argument("floor_div: divisor must be positive");
    Int q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

inline Int mod_floor(const Int& a, const Int& b) { return a - floor_div(a, b) * b; }

/// floor(sqrt(n)) for n >= 0.
inline Int isqrt(const Int& n) {
    if (n < 0) throw std::invalid_argument("isqrt: negative argument");
    return boost::multiprecision::sqrt(n);
}

/// floor(sqrt(num/den)) for num >= 0, den > 0.
inline Int floor_sqrt_rat(const Int& num, const Int& den) {
    if (num < 0 || den <= 0) throw std::invalid_argument("floor_sqrt_rat: bad arguments");
    // s = isqrt(floor(num/den)) satisfies s <= sqrt(num/den) < s+1 exactly.
    return isqrt(num / den);
}

/// Integer solutions of (x + c)^2 <= t. Returns false when empty (t < 0).
/// The interval is [-c - sqrt(t), -c + sqrt(t)]; endpoints are computed
/// exactly from integer square roots, no rounding error possible.
inline bool quad_interval(const Rat& c, const Rat& t, Int& lo, Int& hi) {
    if (t < 0) return false;
    const Int p = numerator(c);
    const Int q = denominator(c);  // q > 0
    // s = floor(q * sqrt(t))
    const Int s = floor_sqrt_rat(q * q * numerator(t), denominator(t));
    hi = floor_div(s - p, q);
    lo = -floor_div(s + p, q);
    return lo <= hi;
}

inline bool is_square_free(const Int& m) {
    if (m <= 0) return false;
    Int n = m;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return false;
        }
    }
    return true;
}

/// Legendre symbol (a/p) for odd prime p: +1 residue, -1 non-residue, 0 if p | a.
inline int legendre_symbol(const Int& a, const Int& p) {
    Int base = mod_floor(a, p);
    if (base == 0) return 0;
    Int result = 1;
    Int exp = (p - 1) / 2;
    while (exp > 0) {
        if (exp % 2 == 1) result = result * base % p;
        base = base * base % p;
        exp /= 2;
    }
    return result == 1 ? 1 : -1;
}

inline IntMat mat_identity(std::size_t n) {
    IntMat id(n, IntVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
    return id;
}

inline IntMat mat_transpose(const IntMat& a) {
    if (a.empty()) return {};
    IntMat t(a[0].size(), IntVec(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
    return t;
}

inline IntMat mat_mul(const IntMat& a, const IntMat& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    IntMat c(n, IntVec(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

inline IntVec mat_apply(const IntMat& a, const IntVec& x) {
    IntVec y(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    return y;
}

/// Fraction-free determinant (Bareiss).
inline Int det_bareiss(IntMat a) {
    const std::size_t n = a.size();
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t piv = k + 1;
            while (piv < n && a[piv][k] == 0) ++piv;
            if (piv == n) return 0;
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

/// Exact positive-semidefiniteness test for a symmetric integer matrix,
/// by rational elimination with positive diagonal pivots. Returns the rank
/// when PSD, nullopt otherwise.
inline std::optional<std::size_t> psd_rank(const IntMat& a) {
    const std::size_t n = a.size();
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) throw std::invalid_argument("psd_rank: matrix not square");
        for (std::size_t j = 0; j < n; ++j) {
            if (a[i][j] != a[j][i]) throw std::invalid_argument("psd_rank: matrix not symmetric");
            m[i][j] = Rat(a[i][j]);
        }
    }
    std::vector<bool> done(n, false);
    std::size_t rank = 0;
    for (;;) {
        std::size_t piv = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            if (m[i][i] < 0) return std::nullopt;
            if (m[i][i] > 0 && piv == n) piv = i;
        }
        if (piv == n) {
            // remaining diagonal all zero: PSD iff remaining block is zero
            for (std::size_t i = 0; i < n; ++i) {
                if (done[i]) continue;
                for (std::size_t j = 0; j < n; ++j)
                    if (!done[j] && m[i][j] != 0) return std::nullopt;
            }
            return rank;
        }
        ++rank;
        done[piv] = true;
        const Rat d = m[piv][piv];
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i] || m[i][piv] == 0) continue;
            const Rat f = m[i][piv] / d;
            for (std::size_t j = 0; j < n; ++j)
                if (!done[j]) m[i][j] -= f * m[piv][j];
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!done[i]) m[i][piv] = m[piv][i] = 0;
        }
    }
}

inline long to_long(const Int& v) { return static_cast<long>(v); }

}  // namespace hermlat
