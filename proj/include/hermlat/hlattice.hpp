#pragma once

// Hermitian lattices over the ring of integers O of Q(sqrt(-m)), stored as
// Hermitian Gram matrices of a generating set. Free rank-n lattices use an
// n x n positive definite Gram; non-free lattices are encoded by an
// (n+1) x (n+1) positive semidefinite Gram of Hermitian rank n (the extra
// generator spans the two-generated ideal part). The inner product is
// H(x, y) = sum_{i,j} gram[i][j] x_i conj(y_j), so gram[i][j] = H(v_i, v_j).

#include <cassert>
#include <optional>
#include <sstream>
#include <string>

#include "hermlat/quadint.hpp"
#include "hermlat/zform.hpp"

namespace hermlat {

using QuadMat = std::vector<std::vector<QuadInt>>;

class HermitianLattice {
public:
    static HermitianLattice from_gram(const QuadField& f, QuadMat gram) {
        const std::size_t d = gram.size();
        for (std::size_t i = 0; i < d; ++i) {
            if (gram[i].size() != d)
                throw std::invalid_argument("HermitianLattice: gram not square");
            if (!gram[i][i].is_rational() || gram[i][i].a() < 0)
                throw std::invalid_argument("HermitianLattice: diagonal must be rational and >= 0");
            for (std::size_t j = 0; j < d; ++j) {
                if (gram[i][j].field() != f)
                    throw std::invalid_argument("HermitianLattice: entry field mismatch");
                if (gram[j][i] != gram[i][j].conj())
                    throw std::invalid_argument("HermitianLattice: gram not Hermitian");
            }
        }
        HermitianLattice lat(f, std::move(gram));
        const auto zrank = psd_rank(lat.doubled_gram());
        if (!zrank) throw std::invalid_argument("HermitianLattice: gram not positive semidefinite");
        if (*zrank % 2 != 0) throw std::logic_error("HermitianLattice: odd Z-rank");
        lat.rank_ = *zrank / 2;
        return lat;
    }

    static HermitianLattice diagonal(const QuadField& f, const IntVec& diag) {
        QuadMat g(diag.size(), std::vector<QuadInt>(diag.size(), QuadInt::zero(f)));
        for (std::size_t i = 0; i < diag.size(); ++i) g[i][i] = QuadInt(f, diag[i], 0);
        return from_gram(f, std::move(g));
    }

    const QuadField& field() const { return field_; }
    std::size_t dim() const { return gram_.size(); }
    std::size_t hermitian_rank() const { return rank_; }
    bool positive_definite() const { return rank_ == dim(); }
    const QuadMat& gram() const { return gram_; }
    const QuadInt& at(std::size_t i, std::size_t j) const { return gram_[i][j]; }

    QuadInt inner(const std::vector<QuadInt>& x, const std::vector<QuadInt>& y) const {
        if (x.size() != dim() || y.size() != dim())
            throw std::invalid_argument("HermitianLattice: coordinate length mismatch");
        QuadInt s = QuadInt::zero(field_);
        for (std::size_t i = 0; i < dim(); ++i) {
            if (x[i].is_zero()) continue;
            if (x[i].field() != field_) throw std::invalid_argument("HermitianLattice: field mismatch");
            for (std::size_t j = 0; j < dim(); ++j)
                s = s + gram_[i][j] * x[i] * y[j].conj();
        }
        return s;
    }

    /// The Hermitian norm H(x); always a rational integer >= 0.
    Int norm_of(const std::vector<QuadInt>& x) const {
        const QuadInt h = inner(x, x);
        assert(h.is_rational() && h.a() >= 0);
        return h.a();
    }

    /// Doubled Gram of the associated quadratic Z-form on the interleaved
    /// basis (v_1, w v_1, ..., v_d, w v_d): entry Tr(H(w^s v_i, w^t v_j)).
    IntMat doubled_gram() const {
        const std::size_t d = dim();
        const QuadInt one = QuadInt::one(field_);
        const QuadInt w = QuadInt::omega(field_);
        const QuadInt pw[2] = {one, w};
        IntMat a(2 * d, IntVec(2 * d));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                for (int s = 0; s < 2; ++s)
                    for (int t = 0; t < 2; ++t)
                        a[2 * i + s][2 * j + t] = (pw[s] * pw[t].conj() * gram_[i][j]).trace();
        return a;
    }

    ZQuadForm associated_zform() const { return ZQuadForm::from_doubled(doubled_gram()); }

    /// Hermitian coordinates -> interleaved Z-coordinates (a_1, b_1, a_2, ...).
    static IntVec z_coords(const std::vector<QuadInt>& x) {
        IntVec z(2 * x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            z[2 * i] = x[i].a();
            z[2 * i + 1] = x[i].b();
        }
        return z;
    }
    static std::vector<QuadInt> from_z_coords(const QuadField& f, const IntVec& z) {
        std::vector<QuadInt> x;
        x.reserve(z.size() / 2);
        for (std::size_t i = 0; i + 1 < z.size(); i += 2) x.emplace_back(f, z[i], z[i + 1]);
        return x;
    }

    /// Extends the lattice by one generator: column entries are the inner
    /// products H(v_i, v_new), the new diagonal is t. Rejects non-PSD results.
    HermitianLattice adjoined(const Int& t, const std::vector<QuadInt>& column) const {
        if (t < 1) throw std::invalid_argument("adjoined: new diagonal must be >= 1");
        if (column.size() != dim()) throw std::invalid_argument("adjoined: column length mismatch");
        const std::size_t d = dim();
        QuadMat g(d + 1, std::vector<QuadInt>(d + 1, QuadInt::zero(field_)));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) g[i][j] = gram_[i][j];
        for (std::size_t i = 0; i < d; ++i) {
            g[i][d] = column[i];
            g[d][i] = column[i].conj();
        }
        g[d][d] = QuadInt(field_, t, 0);
        return from_gram(field_, std::move(g));  // PSD validated there
    }

    HermitianLattice conjugated() const {
        QuadMat g = gram_;
        for (auto& row : g)
            for (auto& e : row) e = e.conj();
        return from_gram(field_, std::move(g));
    }

    /// True when every Gram entry is a rational integer (b = 0).
    bool entries_all_rational() const {
        for (const auto& row : gram_)
            for (const auto& e : row)
                if (!e.is_rational()) return false;
        return true;
    }

    HermitianLattice size_reduced() const;

    std::string gram_rows_text() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < dim(); ++i) {
            if (i) os << ";";
            for (std::size_t j = 0; j < dim(); ++j) {
                if (j) os << ",";
                os << to_string(gram_[i][j]);
            }
        }
        return os.str();
    }

    std::string to_text() const {
        std::ostringstream os;
        os << "m=" << field_.m() << " rank=" << rank_ << "; " << gram_rows_text();
        return os.str();
    }

    /// Rows in element syntax, separated by ';', entries by ','.
    static HermitianLattice parse_gram_rows(const QuadField& f, const std::string& text) {
        std::vector<std::vector<QuadInt>> rows;
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line, ';')) {
            std::vector<QuadInt> row;
            std::istringstream rs(line);
            std::string cell;
            while (std::getline(rs, cell, ',')) row.push_back(parse_quadint(f, cell));
            if (!row.empty()) rows.push_back(std::move(row));
        }
        if (rows.empty()) throw std::invalid_argument("parse_gram_rows: empty gram");
        return from_gram(f, std::move(rows));
    }

    static HermitianLattice from_text(const std::string& text) {
        const auto mpos = text.find("m=");
        const auto rpos = text.find("rank=");
        const auto semi = text.find(';');
        if (mpos == std::string::npos || rpos == std::string::npos || semi == std::string::npos)
            throw std::invalid_argument("HermitianLattice::from_text: missing header");
        const long m = std::stol(text.substr(mpos + 2));
        return parse_gram_rows(QuadField::of(m), text.substr(semi + 1));
    }

    friend bool operator==(const HermitianLattice& a, const HermitianLattice& b) {
        return a.field_ == b.field_ && a.gram_ == b.gram_;
    }
    friend bool operator!=(const HermitianLattice& a, const HermitianLattice& b) {
        return !(a == b);
    }

private:
    HermitianLattice(const QuadField& f, QuadMat g) : field_(f), gram_(std::move(g)), rank_(0) {}

    QuadField field_;
    QuadMat gram_;
    std::size_t rank_;
};

namespace detail {

// Flattened comparison key for the greedy reduction: diagonal first, then
// off-diagonal norms, then a sign/coefficient tiebreak per entry. Reduction
// moves are accepted only when they strictly decrease this key, which makes
// the fixpoint deterministic and the procedure idempotent.
inline std::vector<Int> gram_key(const QuadMat& g) {
    const std::size_t d = g.size();
    std::vector<Int> key;
    key.reserve(d + 3 * d * d);
    for (std::size_t i = 0; i < d; ++i) key.push_back(g[i][i].a());
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) key.push_back(g[i][j].norm());
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            const QuadInt& e = g[i][j];
            const bool flipped = e.b() < 0 || (e.b() == 0 && e.a() < 0);
            key.push_back(Int(flipped ? 1 : 0));
            key.push_back(e.b());
            key.push_back(e.a());
        }
    return key;
}

inline void apply_swap(QuadMat& g, std::size_t x, std::size_t y) {
    for (auto& row : g) std::swap(row[x], row[y]);
    std::swap(g[x], g[y]);
}

// v_j -> v_j - conj(c) v_i; the (i, j) entry moves by -c * g[i][i].
inline void apply_translate(QuadMat& g, std::size_t i, std::size_t j, const QuadInt& c) {
    const std::size_t d = g.size();
    const QuadInt gamma = c.conj();
    // new diagonal H(v_j - gamma v_i), from the old entries
    const QuadInt newdiag = g[j][j] - gamma * g[i][j] - gamma.conj() * g[j][i] +
                            gamma * gamma.conj() * g[i][i];
    for (std::size_t k = 0; k < d; ++k) {
        if (k == j) continue;
        g[k][j] = g[k][j] - gamma.conj() * g[k][i];
        g[j][k] = g[k][j].conj();
    }
    g[j][j] = newdiag;
}

// v_j -> u v_j for a unit u; column j scales by conj(u), row j by u.
inline void apply_unit(QuadMat& g, std::size_t j, const QuadInt& u) {
    const std::size_t d = g.size();
    for (std::size_t k = 0; k < d; ++k) {
        if (k == j) continue;
        g[k][j] = u.conj() * g[k][j];
        g[j][k] = g[k][j].conj();
    }
}

}  // namespace detail

/// Greedy canonical reduction: sorts the diagonal, translates off-diagonal
/// entries into minimal-norm residues modulo the adjacent diagonal, drops
/// zero generators, and normalizes units. Every move is unimodular over O,
/// so the isometry class is preserved; moves apply only when they strictly
/// decrease a well-founded key, so the result is a deterministic fixpoint
/// and size_reduced is idempotent.
inline HermitianLattice HermitianLattice::size_reduced() const {
    using detail::gram_key;
    QuadMat g = gram_;
    const QuadField& f = field_;
    const auto unit_list = units(f);

    bool changed = true;
    int guard = 0;
    while (changed && ++guard < 10000) {
        changed = false;
        const std::size_t d = g.size();

        // drop zero generators (a PSD Gram with zero diagonal has a zero row)
        for (std::size_t i = 0; i < d; ++i) {
            if (g[i][i].is_zero()) {
                bool rowzero = true;
                for (std::size_t k = 0; k < d; ++k)
                    if (!g[i][k].is_zero()) rowzero = false;
                if (rowzero) {
                    g.erase(g.begin() + static_cast<long>(i));
                    for (auto& row : g) row.erase(row.begin() + static_cast<long>(i));
                    changed = true;
                    break;
                }
            }
        }
        if (changed) continue;

        auto key = gram_key(g);
        auto try_apply = [&](QuadMat&& cand) {
            auto ck = gram_key(cand);
            if (ck < key) {
                g = std::move(cand);
                changed = true;
                return true;
            }
            return false;
        };

        // adjacent swaps toward an ascending diagonal
        for (std::size_t i = 0; i + 1 < d && !changed; ++i) {
            if (g[i][i].a() > g[i + 1][i + 1].a()) {
                QuadMat cand = g;
                detail::apply_swap(cand, i, i + 1);
                try_apply(std::move(cand));
            }
        }
        if (changed) continue;

        // translations v_j -= conj(c) v_i, candidate c near g[i][j] / d_i
        for (std::size_t j = 1; j < d && !changed; ++j) {
            for (std::size_t i = 0; i < j && !changed; ++i) {
                const Int di = g[i][i].a();
                if (di == 0) continue;
                const QuadInt& e = g[i][j];
                const Int ca = floor_div(2 * e.a() + di, 2 * di);  // round(e.a / di)
                const Int cb = floor_div(2 * e.b() + di, 2 * di);
                for (Int da = -2; da <= 2 && !changed; ++da)
                    for (Int db = -2; db <= 2 && !changed; ++db) {
                        const QuadInt c(f, ca + da, cb + db);
                        if (c.is_zero()) continue;
                        QuadMat cand = g;
                        detail::apply_translate(cand, i, j, c);
                        try_apply(std::move(cand));
                    }
            }
        }
        if (changed) continue;

        // unit normalization per column
        for (std::size_t j = 0; j < d && !changed; ++j) {
            for (const QuadInt& u : unit_list) {
                if (u == QuadInt::one(f)) continue;
                QuadMat cand = g;
                detail::apply_unit(cand, j, u);
                if (try_apply(std::move(cand))) break;
            }
        }
    }
    return HermitianLattice::from_gram(f, std::move(g));
}

}  // namespace hermlat
