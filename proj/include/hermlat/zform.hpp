#pragma once

// Positive semidefinite integral quadratic forms over Z, stored by their
// doubled Gram matrix A (symmetric, even diagonal): Q(x) = x^T A x / 2.
// Representation testing is exact branch-and-bound with rational Cholesky
// bounds; semidefinite forms are first split into definite part + radical
// by unimodular integer column reduction.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "hermlat/numeric.hpp"

namespace hermlat {

class ZQuadForm;

/// Result of splitting off the radical of a PSD form.
struct DefiniteSplit;

class ZQuadForm {
public:
    static ZQuadForm from_doubled(IntMat a) {
        const std::size_t d = a.size();
        for (std::size_t i = 0; i < d; ++i) {
            if (a[i].size() != d) throw std::invalid_argument("ZQuadForm: matrix not square");
            if (a[i][i] % 2 != 0 || a[i][i] < 0)
                throw std::invalid_argument("ZQuadForm: diagonal must be even and nonnegative");
            for (std::size_t j = 0; j < d; ++j)
                if (a[i][j] != a[j][i]) throw std::invalid_argument("ZQuadForm: matrix not symmetric");
        }
        auto rank = psd_rank(a);
        if (!rank) throw std::invalid_argument("ZQuadForm: matrix not positive semidefinite");
        bool classical = true;
        for (std::size_t i = 0; i < d && classical; ++i)
            for (std::size_t j = 0; j < d; ++j)
                if (a[i][j] % 2 != 0) {
                    classical = false;
                    break;
                }
        return ZQuadForm(std::move(a), classical, *rank);
    }

    /// From a classical Gram matrix g (Q(x) = x^T g x): doubled = 2g.
    static ZQuadForm from_gram(const IntMat& g) {
        IntMat a(g.size(), IntVec(g.size()));
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) a[i][j] = 2 * g[i][j];
        return from_doubled(std::move(a));
    }

    /// Diagonal form <d1,...,dn>_Z.
    static ZQuadForm diagonal(const IntVec& diag) {
        IntMat a(diag.size(), IntVec(diag.size(), 0));
        for (std::size_t i = 0; i < diag.size(); ++i) a[i][i] = 2 * diag[i];
        return from_doubled(std::move(a));
    }

    std::size_t dim() const { return a_.size(); }
    const IntMat& doubled() const { return a_; }
    bool classical() const { return classical_; }
    std::size_t rank() const { return rank_; }
    bool definite() const { return rank_ == dim(); }
    Int det_doubled() const { return det_bareiss(a_); }

    Int inner_doubled(const IntVec& x, const IntVec& y) const {
        if (x.size() != dim() || y.size() != dim())
            throw std::invalid_argument("ZQuadForm: vector length mismatch");
        Int s = 0;
        for (std::size_t i = 0; i < dim(); ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; j < dim(); ++j) s += x[i] * a_[i][j] * y[j];
        }
        return s;
    }

    Int evaluate(const IntVec& x) const { return inner_doubled(x, x) / 2; }

    /// Splits off the radical by integer column reduction: finds unimodular V
    /// with A V = [nonzero | 0]; the leading rank x rank block of V^T A V is
    /// the definite part and represents exactly the same integers.
    DefiniteSplit definite_part() const;

    bool represents(const Int& k) const;
    std::optional<IntVec> represent(const Int& k) const;
    std::vector<Int> theta_prefix(const Int& n) const;
    std::optional<Int> truant(const Int& limit) const;

    std::string to_text() const {
        std::ostringstream os;
        os << "d=" << dim() << ";";
        for (std::size_t i = 0; i < dim(); ++i) {
            os << " ";
            for (std::size_t j = 0; j < dim(); ++j) {
                if (j) os << ",";
                os << a_[i][j];
            }
            if (i + 1 < dim()) os << ";";
        }
        return os.str();
    }

    static ZQuadForm from_text(const std::string& text);

    friend bool operator==(const ZQuadForm& f, const ZQuadForm& g) { return f.a_ == g.a_; }

private:
    ZQuadForm(IntMat a, bool classical, std::size_t rank)
        : a_(std::move(a)), classical_(classical), rank_(rank) {}
    IntMat a_;
    bool classical_;
    std::size_t rank_;
};

struct DefiniteSplit {
    ZQuadForm form;  // positive definite, dimension = rank
    IntMat basis;    // dim x rank; original coords = basis * reduced coords
};

inline DefiniteSplit ZQuadForm::definite_part() const {
    const std::size_t d = dim();
    if (definite()) return DefiniteSplit{*this, mat_identity(d)};
    IntMat b = a_;               // maintained as A * V
    IntMat v = mat_identity(d);  // unimodular column ops
    std::size_t col = 0;
    auto col_swap = [&](std::size_t x, std::size_t y) {
        for (std::size_t i = 0; i < d; ++i) {
            std::swap(b[i][x], b[i][y]);
            std::swap(v[i][x], v[i][y]);
        }
    };
    auto col_addmul = [&](std::size_t dst, std::size_t src, const Int& q) {
        for (std::size_t i = 0; i < d; ++i) {
            b[i][dst] -= q * b[i][src];
            v[i][dst] -= q * v[i][src];
        }
    };
    for (std::size_t row = 0; row < d && col < d; ++row) {
        for (;;) {
            std::size_t best = d;
            for (std::size_t j = col; j < d; ++j) {
                if (b[row][j] == 0) continue;
                if (best == d || abs(b[row][j]) < abs(b[row][best])) best = j;
            }
            if (best == d) break;  // row is zero on the active columns
            if (best != col) col_swap(col, best);
            bool cleared = true;
            for (std::size_t j = col + 1; j < d; ++j) {
                if (b[row][j] == 0) continue;
                const Int q = b[row][j] / b[row][col];  // truncated; remainder shrinks
                col_addmul(j, col, q);
                if (b[row][j] != 0) cleared = false;
            }
            if (cleared) {
                ++col;
                break;
            }
        }
    }
    const std::size_t r = col;
    // definite part D = V1^T (A V1) = V1^T B1
    IntMat dpart(r, IntVec(r, 0));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t k = 0; k < d; ++k) dpart[i][j] += v[k][i] * b[k][j];
    IntMat basis(d, IntVec(r));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < r; ++j) basis[i][j] = v[i][j];
    ZQuadForm form = ZQuadForm::from_doubled(std::move(dpart));
    if (!form.definite()) throw std::logic_error("definite_part: split is not definite");
    return DefiniteSplit{std::move(form), std::move(basis)};
}

inline ZQuadForm ZQuadForm::from_text(const std::string& text) {
    std::string s = text;
    for (char& c : s)
        if (c == ';') c = '\n';
    std::istringstream is(s);
    std::string line;
    if (!std::getline(is, line) || line.find("d=") == std::string::npos)
        throw std::invalid_argument("ZQuadForm::from_text: missing 'd=' header");
    const std::size_t d = std::stoul(line.substr(line.find("d=") + 2));
    IntMat a(d, IntVec(d));
    for (std::size_t i = 0; i < d; ++i) {
        if (!std::getline(is, line)) throw std::invalid_argument("ZQuadForm::from_text: missing row");
        std::istringstream row(line);
        std::string cell;
        for (std::size_t j = 0; j < d; ++j) {
            if (!std::getline(row, cell, ','))
                throw std::invalid_argument("ZQuadForm::from_text: missing entry");
            const auto begin = cell.find_first_not_of(" \t");
            const auto end = cell.find_last_not_of(" \t");
            if (begin == std::string::npos)
                throw std::invalid_argument("ZQuadForm::from_text: empty entry");
            a[i][j] = Int(cell.substr(begin, end - begin + 1));
        }
    }
    return from_doubled(std::move(a));
}

/// Exact branch-and-bound over a PSD form. Builds the definite split and a
/// rational Cholesky decomposition Q(x) = sum_i q_i (x_i + sum_{j>i} u_ij x_j)^2
/// once, then answers representation queries. All bounds are integer square
/// roots of rationals, so the search tree is exact.
class Enumerator {
public:
    explicit Enumerator(const ZQuadForm& f) : split_(f.definite_part()) {
        const std::size_t r = split_.form.dim();
        const IntMat& a = split_.form.doubled();
        std::vector<std::vector<Rat>> g(r, std::vector<Rat>(r));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) g[i][j] = Rat(a[i][j], 2);
        q_.resize(r);
        u_.assign(r, std::vector<Rat>(r, Rat(0)));
        for (std::size_t i = 0; i < r; ++i) {
            q_[i] = g[i][i];
            if (q_[i] <= 0) throw std::logic_error("Enumerator: nonpositive Cholesky pivot");
            for (std::size_t j = i + 1; j < r; ++j) u_[i][j] = g[i][j] / q_[i];
            for (std::size_t j = i + 1; j < r; ++j)
                for (std::size_t k = i + 1; k < r; ++k) g[j][k] -= g[j][i] * g[i][k] / g[i][i];
        }
    }

    const ZQuadForm& definite() const { return split_.form; }
    const IntMat& basis() const { return split_.basis; }

    /// Visits every reduced-coordinate vector x with Q(x) = k, innermost
    /// coordinate first ascending. Callback returns true to stop the search.
    bool for_each_of_norm(const Int& k, const std::function<bool(const IntVec&)>& cb) const {
        const std::size_t r = q_.size();
        if (k < 0) return false;
        if (r == 0) {
            IntVec empty;
            return k == 0 ? cb(empty) : false;
        }
        IntVec x(r, 0);
        return descend(r - 1, Rat(k), x, cb, nullptr, nullptr);
    }

    /// Visits every vector with Q(x) <= bound, reporting its value.
    void for_each_up_to(const Int& bound,
                        const std::function<void(const IntVec&, const Int&)>& cb) const {
        const std::size_t r = q_.size();
        if (bound < 0) return;
        if (r == 0) {
            IntVec empty;
            cb(empty, 0);
            return;
        }
        IntVec x(r, 0);
        Rat total(bound);
        const std::function<bool(const IntVec&, const Rat&)> leaf = [&](const IntVec& v,
                                                                        const Rat& rem) {
            Rat val = total - rem;
            cb(v, numerator(val));  // rem has denominator 1 at a leaf
            return false;
        };
        descend(r - 1, total, x, nullptr, &leaf, nullptr);
    }

    bool represents(const Int& k) const {
        if (k == 0) return true;
        return for_each_of_norm(k, [](const IntVec&) { return true; });
    }

    std::optional<IntVec> represent(const Int& k) const {
        if (k < 0) return std::nullopt;
        std::optional<IntVec> witness;
        if (k == 0) {
            witness = IntVec(split_.basis.size(), 0);
            return witness;
        }
        for_each_of_norm(k, [&](const IntVec& x) {
            witness = mat_apply(split_.basis, x);
            return true;
        });
        return witness;
    }

    std::vector<Int> theta_counts(const Int& n) const {
        std::vector<Int> counts(static_cast<std::size_t>(to_long(n)) + 1, 0);
        for_each_up_to(n, [&](const IntVec&, const Int& val) {
            ++counts[static_cast<std::size_t>(to_long(val))];
        });
        return counts;
    }

    /// represented[k] for 0 <= k <= bound, by a single enumeration sweep.
    /// Only sensible for small rank; callers with dense high-rank forms
    /// should query represents(k) per value instead.
    std::vector<bool> represented_table(const Int& bound) const {
        std::vector<bool> table(static_cast<std::size_t>(to_long(bound)) + 1, false);
        for_each_up_to(bound, [&](const IntVec&, const Int& val) {
            table[static_cast<std::size_t>(to_long(val))] = true;
        });
        return table;
    }

    std::optional<Int> truant(const Int& limit) const {
        for (Int k = 1; k <= limit; ++k)
            if (!represents(k)) return k;
        return std::nullopt;
    }

    std::vector<Int> missing_up_to(const Int& bound) const {
        std::vector<Int> missing;
        if (definite().dim() <= 4) {
            auto table = represented_table(bound);
            for (Int k = 1; k <= bound; ++k)
                if (!table[static_cast<std::size_t>(to_long(k))]) missing.push_back(k);
        } else {
            for (Int k = 1; k <= bound; ++k)
                if (!represents(k)) missing.push_back(k);
        }
        return missing;
    }

private:
    // cb_exact: stop-on-true callback for exact-norm search (rem must be 0).
    // cb_leaf: called at every leaf with remaining budget (<= search).
    bool descend(std::size_t level, const Rat& budget, IntVec& x,
                 const std::function<bool(const IntVec&)>& cb_exact,
                 const std::function<bool(const IntVec&, const Rat&)>* cb_leaf,
                 const void*) const {
        Rat c(0);
        for (std::size_t j = level + 1; j < q_.size(); ++j)
            if (x[j] != 0) c += u_[level][j] * x[j];
        Int lo, hi;
        if (!quad_interval(c, budget / q_[level], lo, hi)) return false;
        for (Int v = lo; v <= hi; ++v) {
            x[level] = v;
            const Rat off = Rat(v) + c;
            const Rat rem = budget - q_[level] * off * off;
            if (level == 0) {
                if (cb_leaf) {
                    if ((*cb_leaf)(x, rem)) return true;
                } else if (rem == 0) {
                    if (cb_exact(x)) return true;
                }
            } else if (descend(level - 1, rem, x, cb_exact, cb_leaf, nullptr)) {
                return true;
            }
        }
        x[level] = 0;
        return false;
    }

    DefiniteSplit split_;
    std::vector<Rat> q_;
    std::vector<std::vector<Rat>> u_;
};

inline bool ZQuadForm::represents(const Int& k) const { return Enumerator(*this).represents(k); }

inline std::optional<IntVec> ZQuadForm::represent(const Int& k) const {
    return Enumerator(*this).represent(k);
}

inline std::vector<Int> ZQuadForm::theta_prefix(const Int& n) const {
    return Enumerator(*this).theta_counts(n);
}

inline std::optional<Int> ZQuadForm::truant(const Int& limit) const {
    if (limit < 1) throw std::invalid_argument("truant: limit must be >= 1");
    return Enumerator(*this).truant(limit);
}

/// Z-isometry of positive definite forms: searches an integer matrix U with
/// U^T A_g U = A_f by mapping basis vectors of f to vectors of g of equal
/// norm with matching pairwise inner products. Equal determinants make any
/// such U unimodular, so success is exactly isometry.
inline bool is_isometric(const ZQuadForm& f, const ZQuadForm& g) {
    if (f.dim() != g.dim()) throw std::invalid_argument("is_isometric: dimension mismatch");
    if (!f.definite() || !g.definite())
        throw std::invalid_argument("is_isometric: forms must be definite");
    const std::size_t d = f.dim();
    if (d == 0) return true;
    if (f.det_doubled() != g.det_doubled()) return false;

    const IntMat& a = f.doubled();
    Enumerator eng(g);
    std::map<Int, std::vector<IntVec>> candidates;
    for (std::size_t i = 0; i < d; ++i) {
        const Int norm = a[i][i] / 2;
        if (candidates.count(norm)) continue;
        std::vector<IntVec> list;
        eng.for_each_of_norm(norm, [&](const IntVec& x) {
            list.push_back(x);
            return false;
        });
        candidates[norm] = std::move(list);
    }
    std::vector<std::size_t> order(d);
    for (std::size_t i = 0; i < d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const auto sx = candidates[a[x][x] / 2].size();
        const auto sy = candidates[a[y][y] / 2].size();
        return sx != sy ? sx < sy : x < y;
    });

    std::vector<IntVec> chosen(d);
    std::function<bool(std::size_t)> dfs = [&](std::size_t pos) -> bool {
        if (pos == d) return true;
        const std::size_t i = order[pos];
        for (const IntVec& w : candidates[a[i][i] / 2]) {
            bool ok = true;
            for (std::size_t p = 0; p < pos && ok; ++p) {
                const std::size_t j = order[p];
                if (g.inner_doubled(w, chosen[j]) != a[i][j]) ok = false;
            }
            if (!ok) continue;
            chosen[i] = w;
            if (dfs(pos + 1)) return true;
        }
        return false;
    };
    return dfs(0);
}

}  // namespace hermlat
