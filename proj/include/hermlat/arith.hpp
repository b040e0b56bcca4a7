#pragma once

// Excluded-integer classes p^d u / p^e u (odd/even power of p times a unit
// condition), shift-covering scans, the three built-in universality
// criterion sets, the per-field critical-number table, and the desk-scale
// genus checks used for the one exceptional binary lattice analysis.

#include <array>
#include <set>

#include "hermlat/hlattice.hpp"
#include "hermlat/zform.hpp"

namespace hermlat {

struct ExcludedClass {
    enum class Parity { Odd, Even, Any };
    long p = 2;
    Parity parity = Parity::Any;
    // for p = 2: unit residue k mod 8 (k in {1,3,5,7}); for odd p: +1 means
    // quadratic residue unit (u+), -1 non-residue (u-)
    int unit_mod8 = 0;
    int residue_sign = 0;

    static ExcludedClass pow2(Parity par, int k) { return ExcludedClass{2, par, k, 0}; }
    static ExcludedClass odd_prime(long p, Parity par, int sign) {
        return ExcludedClass{p, par, 0, sign};
    }
};

inline bool match_class(long n, const ExcludedClass& c) {
    if (n < 1) return false;
    int v = 0;
    long u = n;
    while (u % c.p == 0) {
        u /= c.p;
        ++v;
    }
    switch (c.parity) {
        case ExcludedClass::Parity::Odd:
            if (v % 2 == 0) return false;
            break;
        case ExcludedClass::Parity::Even:
            if (v % 2 == 1) return false;
            break;
        case ExcludedClass::Parity::Any:
            break;
    }
    if (c.p == 2) return u % 8 == c.unit_mod8;
    return legendre_symbol(Int(u), Int(c.p)) == c.residue_sign;
}

inline bool match_class(const Int& n, const ExcludedClass& c) { return match_class(to_long(n), c); }

/// Syntax: "2^e u7", "2^d u5", "3^d u-", "13^d u+".
inline ExcludedClass parse_excluded_class(const std::string& text) {
    std::istringstream is(text);
    long p;
    char caret, dch, uch;
    std::string unit;
    if (!(is >> p >> caret >> dch >> uch) || caret != '^')
        throw std::invalid_argument("parse_excluded_class: bad syntax '" + text + "'");
    ExcludedClass::Parity par;
    if (dch == 'd')
        par = ExcludedClass::Parity::Odd;
    else if (dch == 'e')
        par = ExcludedClass::Parity::Even;
    else if (dch == '*')
        par = ExcludedClass::Parity::Any;
    else
        throw std::invalid_argument("parse_excluded_class: parity must be d, e or *");
    if (uch != 'u') throw std::invalid_argument("parse_excluded_class: expected unit spec");
    is >> unit;
    if (p == 2) return ExcludedClass::pow2(par, std::stoi(unit));
    if (unit == "+") return ExcludedClass::odd_prime(p, par, +1);
    if (unit == "-") return ExcludedClass::odd_prime(p, par, -1);
    throw std::invalid_argument("parse_excluded_class: unit must be + or - for odd p");
}

inline std::string to_string(const ExcludedClass& c) {
    std::ostringstream os;
    os << c.p << "^"
       << (c.parity == ExcludedClass::Parity::Odd
               ? "d"
               : (c.parity == ExcludedClass::Parity::Even ? "e" : "*"))
       << " u";
    if (c.p == 2)
        os << c.unit_mod8;
    else
        os << (c.residue_sign > 0 ? "+" : "-");
    return os.str();
}

/// {k <= bound : k not represented by f}.
inline std::vector<Int> excluded_set(const ZQuadForm& f, const Int& bound) {
    if (bound < 1) throw std::invalid_argument("excluded_set: bound must be >= 1");
    return Enumerator(f).missing_up_to(bound);
}

struct ShiftCoverReport {
    bool holds = true;
    std::vector<long> counterexamples;  // first few n where no shift leaves the class
};

/// For every n in [start, bound] in the class, some shift s must give n - s
/// outside the class.
inline ShiftCoverReport verify_shift_covering(const ExcludedClass& c, const std::vector<long>& shifts,
                                              long start, long bound) {
    long maxshift = 0;
    for (long s : shifts) maxshift = std::max(maxshift, s);
    if (start < maxshift) throw std::invalid_argument("verify_shift_covering: start < max shift");
    ShiftCoverReport rep;
    for (long n = start; n <= bound; ++n) {
        if (!match_class(n, c)) continue;
        bool covered = false;
        for (long s : shifts) {
            if (n - s < 1 || !match_class(n - s, c)) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            rep.holds = false;
            if (rep.counterexamples.size() < 10) rep.counterexamples.push_back(n);
        }
    }
    return rep;
}

struct CriterionSet {
    std::string name;
    std::vector<Int> numbers;
};

inline const CriterionSet& classical_15_set() {
    static const CriterionSet s{"classical15", {1, 2, 3, 5, 6, 7, 10, 14, 15}};
    return s;
}

inline const CriterionSet& bhargava_290_set() {
    static const CriterionSet s{"bhargava290",
                                {1,  2,  3,  5,  6,  7,  10, 13, 14, 15,  17,  19,  21,  22, 23,
                                 26, 29, 30, 31, 34, 35, 37, 42, 58, 93, 110, 145, 203, 290}};
    return s;
}

inline const CriterionSet& hermitian_15_set() {
    static const CriterionSet s{"hermitian15", {1, 2, 3, 5, 6, 7, 10, 13, 14, 15}};
    return s;
}

struct CriticalSet {
    std::vector<Int> numbers;
    bool default_row = false;  // true when m fell through to the catch-all row
};

/// Per-field critical numbers: representing all of them implies universality
/// over Q(sqrt(-m)).
inline CriticalSet critical_numbers(long m) {
    if (m <= 0 || !is_square_free(Int(m)))
        throw std::invalid_argument("critical_numbers: m must be positive square-free");
    auto in = [m](std::initializer_list<long> xs) {
        for (long x : xs)
            if (x == m) return true;
        return false;
    };
    if (in({3, 11})) return {{1, 2}, false};
    if (in({1, 7})) return {{1, 3}, false};
    if (in({2})) return {{1, 5}, false};
    if (in({5, 19})) return {{1, 2, 3}, false};
    if (in({6})) return {{1, 2, 3, 5}, false};
    if (in({15, 23})) return {{1, 2, 3, 5, 7}, false};
    if (in({10, 31})) return {{1, 2, 3, 5, 6, 7}, false};
    if (in({13, 14})) return {{1, 2, 3, 5, 6, 7, 10}, false};
    if (in({39})) return {{1, 2, 3, 5, 6, 7, 13}, false};
    if (in({35, 43, 51, 59})) return {{1, 2, 3, 5, 6, 7, 10, 14}, false};
    if (in({55})) return {{1, 2, 3, 5, 6, 7, 10, 15}, false};
    return {{1, 2, 3, 5, 6, 7, 10, 14, 15}, true};
}

inline bool represents_all(const ZQuadForm& f, const std::vector<Int>& numbers) {
    Enumerator eng(f);
    for (const Int& k : numbers)
        if (!eng.represents(k)) return false;
    return true;
}

inline bool classical_15_check(const ZQuadForm& f) {
    if (!f.classical())
        throw std::invalid_argument("classical_15_check: form is not classical");
    return represents_all(f, classical_15_set().numbers);
}

inline bool nonclassical_290_check(const ZQuadForm& f) {
    return represents_all(f, bhargava_290_set().numbers);
}

inline bool hermitian_15_check(const HermitianLattice& l) {
    return represents_all(l.associated_zform(), hermitian_15_set().numbers);
}

// ---------------------------------------------------------------------------
// Desk-scale stand-in for the genus argument of the exceptional binary
// lattice over Q(sqrt(-39)): two explicit ternary forms in one genus, plus
// the residue-driven subtrahend table for odd integers.

inline const ZQuadForm& genus_form_a() {
    static const ZQuadForm f = ZQuadForm::from_gram({{1, 0, 0}, {0, 8, 2}, {0, 2, 20}});
    return f;
}

inline const ZQuadForm& genus_form_b() {
    static const ZQuadForm f = ZQuadForm::from_gram({{4, 0, 2}, {0, 5, 1}, {2, 1, 9}});
    return f;
}

/// n is representable "by the genus" here means: by at least one of the two
/// listed forms. No genus enumeration is attempted.
inline bool genus_pair_check(const ZQuadForm& fa, const ZQuadForm& fb, const Int& n) {
    if (n < 0) return false;
    return fa.represents(n) || fb.represents(n);
}

struct SubtrahendRow {
    int n_mod4;                 // 1 or 3
    ExcludedClass::Parity v13;  // parity of the 13-adic valuation
    int sign;                   // +1 = u+, -1 = u- (mod 13)
    std::vector<int> residues;  // u mod 13
    int s;                      // subtrahend is 39 * s^2
};

inline const std::vector<SubtrahendRow>& genus_subtrahend_table() {
    using P = ExcludedClass::Parity;
    static const std::vector<SubtrahendRow> rows = {
        {1, P::Odd, +1, {1, 4, 10}, 2},
        {1, P::Odd, +1, {3}, 4},
        {1, P::Odd, +1, {9, 12}, 6},
        {3, P::Even, +1, {1, 4, 9, 10, 12}, 1},
        {3, P::Even, +1, {3}, 3},
        {3, P::Even, -1, {2, 5, 6, 7, 8, 11}, 1},
        {3, P::Odd, +1, {1, 9, 10}, 1},
        {3, P::Odd, +1, {3, 12}, 3},
        {3, P::Odd, +1, {4}, 5},
        {3, P::Odd, -1, {2}, 5},
        {3, P::Odd, -1, {5, 8, 11}, 1},
        {3, P::Odd, -1, {6, 7}, 3},
    };
    return rows;
}

/// For odd n: the table's subtrahend 39*s^2, or nullopt when the genus pair
/// is expected to represent n directly (n = 1 mod 4 and not 13^d u+).
inline std::optional<int> genus_subtrahend_for(long n) {
    if (n % 2 == 0) throw std::invalid_argument("genus_subtrahend_for: n must be odd");
    int v = 0;
    long u = n;
    while (u % 13 == 0) {
        u /= 13;
        ++v;
    }
    const auto par = (v % 2 == 1) ? ExcludedClass::Parity::Odd : ExcludedClass::Parity::Even;
    const int sign = legendre_symbol(Int(u), Int(13));
    const int nmod4 = static_cast<int>(n % 4);
    if (nmod4 == 1 && !(par == ExcludedClass::Parity::Odd && sign == +1)) return std::nullopt;
    const int r = static_cast<int>(u % 13);
    for (const auto& row : genus_subtrahend_table()) {
        if (row.n_mod4 != nmod4 || row.v13 != par || row.sign != sign) continue;
        for (int res : row.residues)
            if (res == r) return row.s;
    }
    throw std::logic_error("genus_subtrahend_for: residue not covered by the table");
}

struct GenusScanReport {
    bool ok = true;
    long first_failure = 0;
};

/// Checks that for every odd n in [lo, hi], subtracting the table's 39*s^2
/// (or nothing, when the table says the genus covers n directly) leaves an
/// integer represented by one of the two genus forms.
inline GenusScanReport verify_genus_subtrahend_scan(long lo, long hi) {
    Enumerator ea(genus_form_a()), eb(genus_form_b());
    const auto ta = ea.represented_table(Int(hi));
    const auto tb = eb.represented_table(Int(hi));
    GenusScanReport rep;
    for (long n = lo | 1; n <= hi; n += 2) {
        const auto s = genus_subtrahend_for(n);
        const long target = s ? n - 39L * (*s) * (*s) : n;
        if (target < 0 || (!ta[static_cast<std::size_t>(target)] &&
                           !tb[static_cast<std::size_t>(target)])) {
            rep.ok = false;
            rep.first_failure = n;
            return rep;
        }
    }
    return rep;
}

}  // namespace hermlat
