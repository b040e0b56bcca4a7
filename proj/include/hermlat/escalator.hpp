#pragma once

// The escalation method: Hermitian truants, generation of all escalation
// lattices at a truant, duplicate detection (reduced-Gram equality,
// Z-isometry of associated forms, or Hermitian isometry), breadth-first
// escalation trees, and universality certification.

#include <map>
#include <set>

#include "hermlat/arith.hpp"
#include "hermlat/hlattice.hpp"

namespace hermlat {

inline std::optional<Int> truant_hermitian(const HermitianLattice& l, const Int& limit) {
    if (limit < 1) throw std::invalid_argument("truant_hermitian: limit must be >= 1");
    return Enumerator(l.associated_zform()).truant(limit);
}

// ---------------------------------------------------------------------------
// Isometry testing

/// Hermitian (O-linear) isometry: maps the generators of l1 to module vectors
/// of l2 with identical Hermitian Gram. Together with equal Z-determinants
/// this is exactly an O-isometry of the underlying lattices: the generator
/// map preserves relations (norm-zero combinations must map to zero) and its
/// image is a full sublattice of equal determinant, hence everything.
inline bool is_isometric_hermitian(const HermitianLattice& l1, const HermitianLattice& l2) {
    if (l1.field() != l2.field()) return false;
    if (l1.hermitian_rank() != l2.hermitian_rank()) return false;
    Enumerator e1(l1.associated_zform());
    Enumerator e2(l2.associated_zform());
    if (e1.definite().det_doubled() != e2.definite().det_doubled()) return false;

    Int maxn = 0;
    for (std::size_t i = 0; i < l1.dim(); ++i) maxn = std::max(maxn, l1.at(i, i).a());
    for (std::size_t i = 0; i < l2.dim(); ++i) maxn = std::max(maxn, l2.at(i, i).a());
    if (e1.theta_counts(maxn) != e2.theta_counts(maxn)) return false;

    const QuadField& f = l1.field();
    const std::size_t d1 = l1.dim();
    std::map<Int, std::vector<std::vector<QuadInt>>> candidates;
    for (std::size_t i = 0; i < d1; ++i) {
        const Int n = l1.at(i, i).a();
        if (candidates.count(n)) continue;
        std::vector<std::vector<QuadInt>> list;
        e2.for_each_of_norm(n, [&](const IntVec& x) {
            list.push_back(HermitianLattice::from_z_coords(f, mat_apply(e2.basis(), x)));
            return false;
        });
        candidates[n] = std::move(list);
    }
    std::vector<std::size_t> order(d1);
    for (std::size_t i = 0; i < d1; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const auto sx = candidates[l1.at(x, x).a()].size();
        const auto sy = candidates[l1.at(y, y).a()].size();
        return sx != sy ? sx < sy : x < y;
    });

    std::vector<std::vector<QuadInt>> chosen(d1);
    std::function<bool(std::size_t)> dfs = [&](std::size_t pos) -> bool {
        if (pos == d1) return true;
        const std::size_t i = order[pos];
        for (const auto& w : candidates[l1.at(i, i).a()]) {
            bool ok = true;
            for (std::size_t p = 0; p < pos && ok; ++p) {
                const std::size_t j = order[p];
                if (l2.inner(w, chosen[j]) != l1.at(i, j)) ok = false;
            }
            if (!ok) continue;
            chosen[i] = w;
            if (dfs(pos + 1)) return true;
        }
        return false;
    };
    return dfs(0);
}

/// Z-isometry of the associated quadratic forms (conjugate lattices always
/// compare equal under this relation; Hermitian isometry distinguishes them).
inline bool is_isometric_associated(const HermitianLattice& l1, const HermitianLattice& l2) {
    Enumerator e1(l1.associated_zform());
    Enumerator e2(l2.associated_zform());
    if (e1.definite().dim() != e2.definite().dim()) return false;
    return is_isometric(e1.definite(), e2.definite());
}

// ---------------------------------------------------------------------------
// Escalations

enum class DedupRelation { GramEqual, ZIsometry, OIsometry };

struct EscalationCandidate {
    HermitianLattice parent;
    Int truant_used;
    std::vector<QuadInt> column;  // inner products H(v_i, v_new) of the adjoined vector
    HermitianLattice result;      // size-reduced
};

namespace detail {

/// Fast exact PSD test for adjoining one generator to a fixed PSD parent:
/// the doubled Gram of the extension is PSD iff the new doubled columns B
/// are orthogonal to the radical and the 2x2 Schur complement
/// C - B^T A+ B is PSD, with A+ = V1 D^-1 V1^T a generalized inverse built
/// from the definite split. Everything is exact rational arithmetic.
class AdjoinTester {
public:
    explicit AdjoinTester(const HermitianLattice& parent)
        : parent_(&parent), split_(parent.associated_zform().definite_part()) {
        const std::size_t r = split_.form.dim();
        const std::size_t d2 = 2 * parent.dim();
        // kernel basis: columns of the full unimodular V beyond the rank.
        // Recompute: definite_part only returns V1, so rebuild kernel by
        // solving A x = 0 over Q with integer elimination on A itself.
        kernel_ = rational_kernel(parent.doubled_gram());
        dinv_ = invert_rational(split_.form.doubled());  // inverse of doubled D, times 2 later
        v1_ = split_.basis;
        (void)d2;
        (void)r;
    }

    bool ok(const std::vector<QuadInt>& column, const Int& t) const {
        const QuadField& f = parent_->field();
        const QuadInt one = QuadInt::one(f), w = QuadInt::omega(f);
        const QuadInt pw[2] = {one, w};
        const std::size_t d = parent_->dim();
        // doubled cross block B (2d x 2) and corner C (2 x 2)
        IntMat b(2 * d, IntVec(2, 0));
        for (std::size_t i = 0; i < d; ++i)
            for (int s = 0; s < 2; ++s)
                for (int tt = 0; tt < 2; ++tt)
                    b[2 * i + s][tt] = (pw[s] * pw[tt].conj() * column[i]).trace();
        IntMat c(2, IntVec(2));
        for (int s = 0; s < 2; ++s)
            for (int tt = 0; tt < 2; ++tt)
                c[s][tt] = (pw[s] * pw[tt].conj() * QuadInt(f, t, 0)).trace();
        // radical orthogonality
        for (const auto& k : kernel_) {
            for (int col = 0; col < 2; ++col) {
                Rat dot(0);
                for (std::size_t i = 0; i < 2 * d; ++i)
                    if (b[i][col] != 0) dot += k[i] * b[i][col];
                if (dot != 0) return false;
            }
        }
        // Schur complement: S = C/2 - (E^T (D/2)^-1 E)/4 with doubled data;
        // work with doubled throughout: S2 = C - B^T V1 (D_doubled)^-1 V1^T B * 2
        const std::size_t r = v1_.empty() ? 0 : v1_[0].size();
        std::vector<std::vector<Rat>> e(r, std::vector<Rat>(2, Rat(0)));
        for (std::size_t i = 0; i < r; ++i)
            for (int col = 0; col < 2; ++col) {
                Rat s(0);
                for (std::size_t kk = 0; kk < v1_.size(); ++kk)
                    if (v1_[kk][i] != 0 && b[kk][col] != 0) s += Rat(v1_[kk][i] * b[kk][col]);
                e[i][col] = s;
            }
        // q = E^T Dinv E (Dinv is inverse of doubled D); doubled Schur = C - 2 q
        std::vector<std::vector<Rat>> q(2, std::vector<Rat>(2, Rat(0)));
        for (int col = 0; col < 2; ++col) {
            std::vector<Rat> tmp(r, Rat(0));
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j)
                    if (e[j][col] != 0 && dinv_[i][j] != 0) tmp[i] += dinv_[i][j] * e[j][col];
            for (int row = 0; row < 2; ++row) {
                Rat s(0);
                for (std::size_t i = 0; i < r; ++i)
                    if (e[i][row] != 0) s += e[i][row] * tmp[i];
                q[row][col] = s;
            }
        }
        const Rat s00 = Rat(c[0][0]) - 2 * q[0][0];
        const Rat s01 = Rat(c[0][1]) - 2 * q[0][1];
        const Rat s11 = Rat(c[1][1]) - 2 * q[1][1];
        if (s00 < 0 || s11 < 0) return false;
        return s00 * s11 - s01 * s01 >= 0;
    }

private:
    static std::vector<std::vector<Rat>> rational_kernel(const IntMat& a) {
        const std::size_t n = a.size();
        std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m[i][j] = Rat(a[i][j]);
        std::vector<std::size_t> pivot_col;
        std::size_t row = 0;
        for (std::size_t col = 0; col < n && row < n; ++col) {
            std::size_t piv = row;
            while (piv < n && m[piv][col] == 0) ++piv;
            if (piv == n) continue;
            std::swap(m[piv], m[row]);
            const Rat p = m[row][col];
            for (std::size_t j = 0; j < n; ++j) m[row][j] /= p;
            for (std::size_t i = 0; i < n; ++i) {
                if (i == row || m[i][col] == 0) continue;
                const Rat ff = m[i][col];
                for (std::size_t j = 0; j < n; ++j) m[i][j] -= ff * m[row][j];
            }
            pivot_col.push_back(col);
            ++row;
        }
        std::vector<bool> is_pivot(n, false);
        for (auto c : pivot_col) is_pivot[c] = true;
        std::vector<std::vector<Rat>> kernel;
        for (std::size_t freec = 0; freec < n; ++freec) {
            if (is_pivot[freec]) continue;
            std::vector<Rat> v(n, Rat(0));
            v[freec] = 1;
            for (std::size_t r2 = 0; r2 < pivot_col.size(); ++r2) v[pivot_col[r2]] = -m[r2][freec];
            kernel.push_back(std::move(v));
        }
        return kernel;
    }

    static std::vector<std::vector<Rat>> invert_rational(const IntMat& a) {
        const std::size_t n = a.size();
        std::vector<std::vector<Rat>> m(n, std::vector<Rat>(2 * n, Rat(0)));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) m[i][j] = Rat(a[i][j]);
            m[i][n + i] = 1;
        }
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            while (piv < n && m[piv][col] == 0) ++piv;
            if (piv == n) throw std::logic_error("invert_rational: singular matrix");
            std::swap(m[piv], m[col]);
            const Rat p = m[col][col];
            for (std::size_t j = 0; j < 2 * n; ++j) m[col][j] /= p;
            for (std::size_t i = 0; i < n; ++i) {
                if (i == col || m[i][col] == 0) continue;
                const Rat ff = m[i][col];
                for (std::size_t j = 0; j < 2 * n; ++j) m[i][j] -= ff * m[col][j];
            }
        }
        std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
        return inv;
    }

    const HermitianLattice* parent_;
    DefiniteSplit split_;
    std::vector<std::vector<Rat>> kernel_;
    std::vector<std::vector<Rat>> dinv_;
    IntMat v1_;
};

struct CandidateStats {
    std::size_t rank;
    Int det;
    std::vector<Int> theta;
    std::string text;
};

inline CandidateStats candidate_stats(const HermitianLattice& l) {
    Enumerator eng(l.associated_zform());
    return CandidateStats{l.hermitian_rank(), eng.definite().det_doubled(), eng.theta_counts(12),
                          l.gram_rows_text()};
}

}  // namespace detail

/// All escalations of l by a vector of norm t: every column of inner
/// products (c_1, ..., c_d) with norm(c_i) <= diag_i * t (Cauchy-Schwarz)
/// whose extension stays PSD, size-reduced and deduplicated under the given
/// relation. Ordering is deterministic (by rank, then reduced Gram text).
inline std::vector<EscalationCandidate> escalations(const HermitianLattice& l, const Int& t,
                                                    DedupRelation rel = DedupRelation::ZIsometry,
                                                    bool allow_non_truant = false,
                                                    const Int& truant_limit = 300) {
    if (t < 1) throw std::invalid_argument("escalations: t must be >= 1");
    if (!allow_non_truant) {
        const auto tr = truant_hermitian(l, std::max(t, truant_limit));
        if (!tr || *tr != t)
            throw std::invalid_argument("escalations: t is not the truant of the lattice");
    }
    const QuadField& f = l.field();
    const std::size_t d = l.dim();
    std::vector<std::vector<QuadInt>> choices;
    choices.reserve(d);
    for (std::size_t i = 0; i < d; ++i)
        choices.push_back(elements_of_norm_at_most(f, l.at(i, i).a() * t));

    detail::AdjoinTester tester(l);

    struct Entry {
        EscalationCandidate cand;
        detail::CandidateStats stats;
    };
    std::map<std::string, Entry> by_text;  // reduced-Gram dedup

    std::vector<QuadInt> column(d, QuadInt::zero(f));
    std::function<void(std::size_t)> walk = [&](std::size_t i) {
        if (i == d) {
            if (!tester.ok(column, t)) return;
            HermitianLattice extended = l.adjoined(t, column);
            HermitianLattice reduced = extended.size_reduced();
            std::string key = reduced.gram_rows_text();
            if (by_text.count(key)) return;
            auto stats = detail::candidate_stats(reduced);
            by_text.emplace(std::move(key),
                            Entry{EscalationCandidate{l, t, column, std::move(reduced)},
                                  std::move(stats)});
            return;
        }
        for (const QuadInt& c : choices[i]) {
            column[i] = c;
            walk(i + 1);
        }
        column[i] = QuadInt::zero(f);
    };
    walk(0);

    // cross-Gram merge under the requested relation, bucketed by invariants
    std::vector<Entry> entries;
    entries.reserve(by_text.size());
    for (auto& kv : by_text) entries.push_back(std::move(kv.second));
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.stats.rank != b.stats.rank) return a.stats.rank < b.stats.rank;
        return a.stats.text < b.stats.text;
    });

    std::vector<EscalationCandidate> out;
    if (rel == DedupRelation::GramEqual) {
        for (auto& e : entries) out.push_back(std::move(e.cand));
        return out;
    }
    std::vector<const Entry*> kept;
    for (const Entry& e : entries) {
        bool dup = false;
        for (const Entry* k : kept) {
            if (k->stats.rank != e.stats.rank || k->stats.det != e.stats.det ||
                k->stats.theta != e.stats.theta)
                continue;
            const bool iso = (rel == DedupRelation::OIsometry)
                                 ? is_isometric_hermitian(k->cand.result, e.cand.result)
                                 : is_isometric_associated(k->cand.result, e.cand.result);
            if (iso) {
                dup = true;
                break;
            }
        }
        if (!dup) kept.push_back(&e);
    }
    for (const Entry* k : kept) out.push_back(k->cand);
    return out;
}

// ---------------------------------------------------------------------------
// Certification

enum class CertifyMode { CriticalSet, Empirical, InheritedSublattice };

inline const char* to_string(CertifyMode m) {
    switch (m) {
        case CertifyMode::CriticalSet: return "critical";
        case CertifyMode::Empirical: return "empirical";
        case CertifyMode::InheritedSublattice: return "inherited";
    }
    return "?";
}

struct UniversalityCertificate {
    HermitianLattice lattice;
    CertifyMode mode;
    std::vector<Int> critical_set;  // the numbers whose representation was certified
    Int checked_bound = 0;
    std::map<Int, std::vector<QuadInt>> witnesses;
    std::string citation;
    bool default_critical_row = false;
};

struct CertifyOutcome {
    std::optional<UniversalityCertificate> certificate;
    std::optional<Int> failing;  // smallest unrepresented integer found
    bool certified() const { return certificate.has_value(); }
};

inline bool is_inherited(const HermitianLattice& l) {
    return l.size_reduced().entries_all_rational();
}

inline CertifyOutcome certify_universal(const HermitianLattice& l, CertifyMode mode,
                                        const Int& bound) {
    const long m = l.field().m();
    CertifyOutcome out;

    auto store_witness = [&](UniversalityCertificate& cert, Enumerator& eng, const Int& k) {
        if (auto w = eng.represent(k))
            cert.witnesses[k] = HermitianLattice::from_z_coords(l.field(), *w);
    };

    switch (mode) {
        case CertifyMode::CriticalSet: {
            const CriticalSet cs = critical_numbers(m);
            if (bound < cs.numbers.back())
                throw std::invalid_argument("certify_universal: bound below max critical number");
            Enumerator eng(l.associated_zform());
            UniversalityCertificate cert{l, mode, cs.numbers, cs.numbers.back(), {}, "", cs.default_row};
            for (const Int& k : cs.numbers) {
                if (!eng.represents(k)) {
                    out.failing = k;
                    return out;
                }
                store_witness(cert, eng, k);
            }
            cert.citation = "critical numbers for m=" + std::to_string(m) +
                            (cs.default_row ? " (default row)" : "") +
                            "; representing them implies universality";
            out.certificate = std::move(cert);
            return out;
        }
        case CertifyMode::Empirical: {
            if (bound < 1) throw std::invalid_argument("certify_universal: bound must be >= 1");
            Enumerator eng(l.associated_zform());
            if (eng.definite().dim() <= 4) {
                const auto table = eng.represented_table(bound);
                for (Int k = 1; k <= bound; ++k)
                    if (!table[static_cast<std::size_t>(to_long(k))]) {
                        out.failing = k;
                        return out;
                    }
            } else {
                for (Int k = 1; k <= bound; ++k)
                    if (!eng.represents(k)) {
                        out.failing = k;
                        return out;
                    }
            }
            UniversalityCertificate cert{l, mode, {}, bound, {}, "", false};
            for (const Int& k : hermitian_15_set().numbers)
                if (k <= bound) store_witness(cert, eng, k);
            cert.citation = "empirical check of 1.." + std::string(bound.str()) +
                            "; universality beyond the bound is not claimed";
            out.certificate = std::move(cert);
            return out;
        }
        case CertifyMode::InheritedSublattice: {
            const HermitianLattice red = l.size_reduced();
            if (red.entries_all_rational()) {
                const IntMat big = red.doubled_gram();
                const std::size_t d = red.dim();
                for (std::size_t k = 0; k < d; ++k) {
                    // Z-sublattice on (v_1, ..., v_d, w v_k)
                    std::vector<std::size_t> idx;
                    for (std::size_t i = 0; i < d; ++i) idx.push_back(2 * i);
                    idx.push_back(2 * k + 1);
                    IntMat sub(idx.size(), IntVec(idx.size()));
                    for (std::size_t i = 0; i < idx.size(); ++i)
                        for (std::size_t j = 0; j < idx.size(); ++j)
                            sub[i][j] = big[idx[i]][idx[j]];
                    ZQuadForm zf = ZQuadForm::from_doubled(sub);
                    if (!zf.definite()) continue;
                    const bool universal =
                        zf.classical() ? classical_15_check(zf) : nonclassical_290_check(zf);
                    if (!universal) continue;
                    UniversalityCertificate cert{l, mode, {}, 0, {}, "", false};
                    cert.critical_set =
                        zf.classical() ? classical_15_set().numbers : bhargava_290_set().numbers;
                    cert.checked_bound = cert.critical_set.back();
                    cert.citation = "represents the universal Z-sublattice [" + zf.to_text() +
                                    "] certified by " +
                                    (zf.classical() ? classical_15_set().name
                                                    : bhargava_290_set().name);
                    out.certificate = std::move(cert);
                    return out;
                }
            }
            // no certifying sublattice: report the smallest missing integer, if any
            out.failing = Enumerator(l.associated_zform()).truant(std::max(bound, Int(300)));
            return out;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Escalation tree

struct TreeNode {
    HermitianLattice lattice;  // size-reduced
    std::size_t parent;        // index into nodes; npos for the root
    int depth = 0;
    enum class Status { Universal, Escalated, RankLimit, UniversalUpToLimit } status =
        Status::Escalated;
    std::optional<Int> truant;
    std::vector<QuadInt> column;  // escalation column that produced this node
    std::optional<UniversalityCertificate> certificate;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct EscalationTree {
    long m = 0;
    int max_rank = 0;
    std::vector<TreeNode> nodes;
    std::map<Int, int> truant_multiset;
    bool resource_limited = false;
};

struct TreeOptions {
    Int truant_limit = 300;
    Int certify_bound = 2000;
    CertifyMode certify_mode = CertifyMode::Empirical;
    bool prune_universal = true;  // do not escalate certified-universal nodes
    std::size_t node_cap = 20000;
    DedupRelation dedup = DedupRelation::ZIsometry;
    // nodes with rank >= skip_rank_at_least are neither certified nor expanded
    // (used by the minimal-rank search to cut off once a witness is known)
    std::optional<std::size_t> skip_rank_at_least;
};

inline EscalationTree escalation_tree(long m, int max_rank, const TreeOptions& opt = {}) {
    if (max_rank < 1) throw std::invalid_argument("escalation_tree: max_rank must be >= 1");
    const QuadField field = QuadField::of(m);
    EscalationTree tree;
    tree.m = m;
    tree.max_rank = max_rank;

    std::vector<detail::CandidateStats> stats;
    auto add_node = [&](TreeNode&& node) -> std::size_t {
        stats.push_back(detail::candidate_stats(node.lattice));
        tree.nodes.push_back(std::move(node));
        return tree.nodes.size() - 1;
    };
    auto duplicate_of = [&](const HermitianLattice& cand) -> bool {
        const auto cs = detail::candidate_stats(cand);
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            if (stats[i].text == cs.text) return true;
            if (opt.dedup == DedupRelation::GramEqual) continue;
            if (stats[i].rank != cs.rank || stats[i].det != cs.det || stats[i].theta != cs.theta)
                continue;
            const bool iso = (opt.dedup == DedupRelation::OIsometry)
                                 ? is_isometric_hermitian(tree.nodes[i].lattice, cand)
                                 : is_isometric_associated(tree.nodes[i].lattice, cand);
            if (iso) return true;
        }
        return false;
    };

    add_node(TreeNode{HermitianLattice::diagonal(field, {1}), TreeNode::npos, 0});
    std::size_t next = 0;
    while (next < tree.nodes.size()) {
        const std::size_t id = next++;
        const HermitianLattice lat = tree.nodes[id].lattice;
        const int depth = tree.nodes[id].depth;
        const std::size_t rank = lat.hermitian_rank();
        if (opt.skip_rank_at_least && rank >= *opt.skip_rank_at_least) {
            tree.nodes[id].status = TreeNode::Status::RankLimit;
            continue;
        }
        auto outcome = certify_universal(lat, opt.certify_mode, opt.certify_bound);
        if (outcome.certified()) {
            tree.nodes[id].status = TreeNode::Status::Universal;
            tree.nodes[id].certificate = std::move(outcome.certificate);
            if (!opt.prune_universal) {
                // exhaustive sweep: a certified lattice must have no truant
                if (truant_hermitian(lat, opt.truant_limit))
                    throw std::logic_error("escalation_tree: certified node has a truant");
            }
            continue;
        }
        std::optional<Int> t;
        if (opt.certify_mode == CertifyMode::Empirical && outcome.failing &&
            *outcome.failing <= opt.truant_limit)
            t = outcome.failing;  // the empirical failure is already the truant
        else
            t = truant_hermitian(lat, opt.truant_limit);
        if (!t) {
            tree.nodes[id].status = TreeNode::Status::UniversalUpToLimit;
            continue;
        }
        tree.nodes[id].truant = t;
        ++tree.truant_multiset[*t];
        if (static_cast<int>(rank) >= max_rank || depth >= max_rank) {
            tree.nodes[id].status = TreeNode::Status::RankLimit;
            continue;
        }
        if (tree.nodes.size() >= opt.node_cap) {
            tree.resource_limited = true;
            continue;
        }
        auto children = escalations(lat, *t, opt.dedup, /*allow_non_truant=*/true);
        for (auto& child : children) {
            if (duplicate_of(child.result)) continue;
            if (tree.nodes.size() >= opt.node_cap) {
                tree.resource_limited = true;
                break;
            }
            TreeNode node{std::move(child.result), id, depth + 1};
            node.column = std::move(child.column);
            add_node(std::move(node));
        }
        tree.nodes[id].status = TreeNode::Status::Escalated;
    }
    return tree;
}

// ---------------------------------------------------------------------------
// Minimal universal rank

struct MinimalRankRecord {
    long m = 0;
    std::optional<int> u;  // nullopt: nothing certified within max_rank
    std::optional<HermitianLattice> witness;
    Int certify_bound = 0;
    int max_rank = 0;
    std::string note;
};

/// Breadth-first escalation with empirical certification; returns the least
/// Hermitian rank at which a certified-universal lattice appears. Nodes of
/// rank >= the best rank found so far are skipped (escalation ranks never
/// decrease along a path, so they cannot improve the minimum).
inline MinimalRankRecord minimal_universal_rank(long m, const Int& certify_bound, int max_rank) {
    if (max_rank < 1) throw std::invalid_argument("minimal_universal_rank: max_rank must be >= 1");
    const QuadField field = QuadField::of(m);
    MinimalRankRecord rec;
    rec.m = m;
    rec.certify_bound = certify_bound;
    rec.max_rank = max_rank;

    std::size_t best_rank = static_cast<std::size_t>(max_rank) + 1;
    std::optional<HermitianLattice> witness;

    std::vector<HermitianLattice> level{HermitianLattice::diagonal(field, {1})};
    std::vector<detail::CandidateStats> seen_stats;
    std::vector<HermitianLattice> seen;
    auto known = [&](const HermitianLattice& cand, const detail::CandidateStats& cs) {
        for (std::size_t i = 0; i < seen.size(); ++i) {
            if (seen_stats[i].text == cs.text) return true;
            if (seen_stats[i].rank != cs.rank || seen_stats[i].det != cs.det ||
                seen_stats[i].theta != cs.theta)
                continue;
            if (is_isometric_associated(seen[i], cand)) return true;
        }
        return false;
    };

    for (int depth = 0; depth <= max_rank && !level.empty(); ++depth) {
        // sort the level so cheaper (smaller-rank) lattices certify first
        std::sort(level.begin(), level.end(), [](const HermitianLattice& a, const HermitianLattice& b) {
            if (a.hermitian_rank() != b.hermitian_rank())
                return a.hermitian_rank() < b.hermitian_rank();
            return a.gram_rows_text() < b.gram_rows_text();
        });
        std::vector<HermitianLattice> nextlevel;
        for (const HermitianLattice& lat : level) {
            const std::size_t rank = lat.hermitian_rank();
            if (rank >= best_rank) continue;
            auto outcome = certify_universal(lat, CertifyMode::Empirical, certify_bound);
            if (outcome.certified()) {
                if (rank < best_rank) {
                    best_rank = rank;
                    witness = lat;
                }
                continue;
            }
            if (!outcome.failing || depth == max_rank) continue;
            if (rank >= static_cast<std::size_t>(max_rank)) continue;
            if (*outcome.failing > 300) continue;  // beyond any desk-scale truant
            for (auto& child : escalations(lat, *outcome.failing, DedupRelation::ZIsometry,
                                           /*allow_non_truant=*/true)) {
                const auto cs = detail::candidate_stats(child.result);
                if (cs.rank >= best_rank) continue;
                if (known(child.result, cs)) continue;
                seen.push_back(child.result);
                seen_stats.push_back(cs);
                nextlevel.push_back(std::move(child.result));
            }
        }
        level = std::move(nextlevel);
    }
    if (best_rank <= static_cast<std::size_t>(max_rank)) {
        rec.u = static_cast<int>(best_rank);
        rec.witness = witness;
        rec.note = "certification is empirical to the stated bound";
    } else {
        rec.note = "no certified lattice within max_rank";
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Z-side escalation classes (quadratic lattices over Z, classical Gram)

/// All positive definite (d+1)-dimensional extensions [G, x; x^T, t] of a
/// classical Gram G by an integer column with x_i^2 <= G_ii * t, up to
/// Z-isometry. Used to reproduce the per-case isometry class counts.
inline std::vector<ZQuadForm> z_escalation_classes(const IntMat& base, const Int& t) {
    const std::size_t d = base.size();
    std::vector<ZQuadForm> classes;
    std::vector<Int> dets;
    std::vector<std::vector<Int>> thetas;
    IntVec x(d, 0);
    std::vector<Int> bound(d);
    for (std::size_t i = 0; i < d; ++i) bound[i] = isqrt(base[i][i] * t);

    std::function<void(std::size_t)> walk = [&](std::size_t i) {
        if (i == d) {
            IntMat g(d + 1, IntVec(d + 1));
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b) g[a][b] = base[a][b];
            for (std::size_t a = 0; a < d; ++a) {
                g[a][d] = x[a];
                g[d][a] = x[a];
            }
            g[d][d] = t;
            if (det_bareiss(g) <= 0) return;  // definite extensions only
            ZQuadForm f = ZQuadForm::from_gram(g);
            const Int det = f.det_doubled();
            const auto theta = Enumerator(f).theta_counts(std::min(Int(t + 2), Int(16)));
            for (std::size_t c = 0; c < classes.size(); ++c) {
                if (dets[c] != det || thetas[c] != theta) continue;
                if (is_isometric(classes[c], f)) return;
            }
            classes.push_back(std::move(f));
            dets.push_back(det);
            thetas.push_back(theta);
            return;
        }
        for (Int v = -bound[i]; v <= bound[i]; ++v) {
            x[i] = v;
            walk(i + 1);
        }
        x[i] = 0;
    };
    walk(0);
    return classes;
}

}  // namespace hermlat
