#pragma once

#include "jetvar/lie_algebra.hpp"
#include "jetvar/relative.hpp"
#include "jetvar/superalgebra.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace jetvar {

// Weil algebra of a Lie algebra: generators l_i (odd, degree 1) and
// L_i (even, degree 2), Koszul differential, interior products and Lie
// derivatives, optional symmetric-degree truncation (W_(k) retains symmetric
// degree <= k).
struct WeilAlgebra {
    LieAlgebra g;
    SuperAlgebraPtr algebra;
    Derivation d;
    std::vector<Derivation> iota;  // per g-basis vector
    std::vector<Derivation> lie;   // L_e = d iota_e + iota_e d
    std::optional<std::uint32_t> truncation;

    std::uint32_t lambda(std::uint32_t i) const { return i; }
    std::uint32_t capital(std::uint32_t i) const { return g.dim() + i; }

    SuperElement gen_lambda(std::uint32_t i) const {
        return SuperElement::generator(algebra, lambda(i));
    }
    SuperElement gen_capital(std::uint32_t i) const {
        return SuperElement::generator(algebra, capital(i));
    }

    SuperElement apply_iota(const std::vector<Rational>& h, const SuperElement& x) const {
        SuperElement out(algebra);
        for (std::uint32_t i = 0; i < g.dim(); ++i)
            if (!h[i].is_zero()) out += h[i] * iota[i].apply(x);
        return out;
    }
    SuperElement apply_lie(const std::vector<Rational>& h, const SuperElement& x) const {
        SuperElement out(algebra);
        for (std::uint32_t i = 0; i < g.dim(); ++i)
            if (!h[i].is_zero()) out += h[i] * lie[i].apply(x);
        return out;
    }
};

// symmetric degree of a word = total exponent of the even (S g*) generators
inline std::uint32_t weil_symmetric_degree(const SuperWord& w, const SuperAlgebra& alg) {
    std::uint32_t s = 0;
    for (auto& [g, e] : w.factors())
        if (!alg.generator(g).odd) s += e;
    return s;
}

inline WeilAlgebra build_weil(const LieAlgebra& g,
                              std::optional<std::uint32_t> truncation = std::nullopt) {
    const std::uint32_t n = g.dim();
    std::vector<GeneratorSpec> gens;
    gens.reserve(2 * n);
    for (std::uint32_t i = 0; i < n; ++i)
        gens.push_back({"l." + g.basis_name(i), true, 1, 0});
    for (std::uint32_t i = 0; i < n; ++i)
        gens.push_back({"L." + g.basis_name(i), false, 2, 0});

    SuperAlgebra::KilledPredicate killed = nullptr;
    if (truncation) {
        std::uint32_t k = *truncation;
        killed = [k](const SuperWord& w, const SuperAlgebra& alg) {
            return weil_symmetric_degree(w, alg) > k;
        };
    }
    auto alg = SuperAlgebra::create(std::move(gens), std::move(killed));

    auto lam = [&](std::uint32_t i) { return SuperElement::generator(alg, i); };
    auto cap = [&](std::uint32_t i) { return SuperElement::generator(alg, n + i); };

    // d l^i = L^i - 1/2 c^i_jk l^j l^k ; d L^i = -c^i_jk l^j L^k (the index
    // placement is forced by d∘d = 0, checked below)
    std::vector<SuperElement> action;
    for (std::uint32_t i = 0; i < n; ++i) {
        SuperElement v = cap(i);
        for (std::uint32_t j = 0; j < n; ++j)
            for (std::uint32_t k = 0; k < n; ++k) {
                Rational c = g.c(i, j, k);
                if (c.is_zero()) continue;
                v -= Rational(1, 2) * c * (lam(j) * lam(k));
            }
        action.push_back(v);
    }
    for (std::uint32_t i = 0; i < n; ++i) {
        SuperElement v(alg);
        for (std::uint32_t j = 0; j < n; ++j)
            for (std::uint32_t k = 0; k < n; ++k) {
                Rational c = g.c(i, j, k);
                if (c.is_zero()) continue;
                v -= c * (lam(j) * cap(k));
            }
        action.push_back(v);
    }
    Derivation d(alg, true, std::move(action));
    if (!d.squares_to_zero()) throw std::logic_error("build_weil: differential does not square to zero");

    std::vector<Derivation> iota;
    for (std::uint32_t e = 0; e < n; ++e) {
        std::vector<SuperElement> act(2 * n, SuperElement(alg));
        act[e] = SuperElement::unit(alg);  // iota_e l^j = delta
        iota.emplace_back(alg, true, std::move(act));
    }
    std::vector<Derivation> lie;
    for (std::uint32_t e = 0; e < n; ++e) lie.push_back(Derivation::anticommutator(d, iota[e]));

    return WeilAlgebra{g, alg, std::move(d), std::move(iota), std::move(lie), truncation};
}

inline DgComplexOps weil_ops(const WeilAlgebra& w, const SubalgebraEmbedding& h) {
    DgComplexOps ops;
    ops.alg = w.algebra;
    ops.d = [&w](const SuperElement& x) { return w.d.apply(x); };
    for (std::uint32_t s = 0; s < h.sub.dim(); ++s) {
        const auto& col = h.inclusion[s];
        ops.iota.push_back([&w, col](const SuperElement& x) { return w.apply_iota(col, x); });
        ops.lie.push_back([&w, col](const SuperElement& x) { return w.apply_lie(col, x); });
    }
    ops.degree_basis = [&w](std::uint32_t deg) { return w.algebra->basis(deg); };
    return ops;
}

using RelativeCohomologyRow = BasicCohomologyRow;

// Cohomology of the h-basic subcomplex of W(g) over a degree range.
inline std::vector<RelativeCohomologyRow> relative_cohomology(const WeilAlgebra& w,
                                                              const SubalgebraEmbedding& h,
                                                              std::uint32_t deg_lo,
                                                              std::uint32_t deg_hi) {
    return basic_cohomology(weil_ops(w, h), deg_lo, deg_hi);
}

// WO_n: exterior generators U_i (degree 2i-1, odd i <= n) tensor the
// C-polynomial algebra truncated above degree 2n, with dU_i = C_i.
struct WOAlgebra {
    std::uint32_t n = 0;
    SuperAlgebraPtr algebra;
    Derivation d;
    std::vector<std::uint32_t> u_gen;  // generator ids of U_i, indexed by odd i
    std::vector<std::uint32_t> c_gen;  // generator ids of C_i
};

inline WOAlgebra build_wo(std::uint32_t n) {
    if (n < 1) throw std::invalid_argument("build_wo: n must be positive");
    std::vector<GeneratorSpec> gens;
    std::vector<std::uint32_t> u_ids, c_ids;
    for (std::uint32_t i = 1; i <= n; i += 2) {
        u_ids.push_back(static_cast<std::uint32_t>(gens.size()));
        gens.push_back({"U" + std::to_string(i), true, 2 * i - 1, 0});
    }
    for (std::uint32_t i = 1; i <= n; ++i) {
        c_ids.push_back(static_cast<std::uint32_t>(gens.size()));
        gens.push_back({"C" + std::to_string(i), false, 2 * i, 0});
    }
    auto killed = [n](const SuperWord& w, const SuperAlgebra& alg) {
        std::uint32_t cdeg = 0;
        for (auto& [g, e] : w.factors())
            if (!alg.generator(g).odd) cdeg += alg.generator(g).degree * e;
        return cdeg > 2 * n;
    };
    auto alg = SuperAlgebra::create(std::move(gens), killed);
    std::vector<SuperElement> action(alg->generator_count(), SuperElement(alg));
    for (std::uint32_t k = 0; k < u_ids.size(); ++k) {
        std::uint32_t i = 2 * k + 1;  // U_i with odd i
        action[u_ids[k]] = SuperElement::generator(alg, c_ids[i - 1]);
    }
    Derivation d(alg, true, std::move(action));
    if (!d.squares_to_zero()) throw std::logic_error("build_wo: differential does not square to zero");
    return WOAlgebra{n, alg, std::move(d), std::move(u_ids), std::move(c_ids)};
}

struct CohomologyRow {
    std::uint32_t degree = 0;
    std::uint32_t dimension = 0;
    std::vector<SuperElement> representatives;
};

inline std::vector<CohomologyRow> dga_cohomology(const SuperAlgebraPtr& alg, const Derivation& d,
                                                 std::uint32_t deg_lo, std::uint32_t deg_hi) {
    std::vector<CohomologyRow> table;
    for (std::uint32_t deg = deg_lo; deg <= deg_hi; ++deg) {
        auto slice = complex_slice(d, deg);
        auto basis = alg->basis(deg);
        auto res = cohomology(slice);
        CohomologyRow row;
        row.degree = deg;
        row.dimension = res.dimension;
        for (auto& v : res.representatives) {
            SuperElement e(alg);
            for (auto& [i, c] : v) e.add_term(basis[i], c);
            row.representatives.push_back(std::move(e));
        }
        table.push_back(std::move(row));
    }
    return table;
}

inline std::vector<CohomologyRow> wo_cohomology(std::uint32_t n, std::uint32_t deg_lo,
                                                std::uint32_t deg_hi) {
    auto wo = build_wo(n);
    return dga_cohomology(wo.algebra, wo.d, deg_lo, deg_hi);
}

// x = d(y) for some y of one degree lower, in the full complex.
inline bool is_exact(const SuperAlgebraPtr& alg, const Derivation& d, const SuperElement& x) {
    if (x.is_zero()) return true;
    std::uint32_t deg = x.degree();
    auto here = alg->basis(deg);
    auto below = deg > 0 ? alg->basis(deg - 1) : std::vector<SuperWord>{};
    SparseMatrix m(static_cast<std::uint32_t>(here.size()), static_cast<std::uint32_t>(below.size()));
    std::map<SuperWord, std::uint32_t> index;
    for (std::uint32_t i = 0; i < here.size(); ++i) index.emplace(here[i], i);
    for (std::uint32_t j = 0; j < below.size(); ++j) {
        auto img = d.apply(SuperElement(alg, below[j]));
        for (auto& [w, c] : img.terms()) m.set(index.at(w), j, c);
    }
    return solve(m, expand_on_basis(x, here, "is_exact")).has_value();
}

// k-th Chern word of gl(n) inside W(gl(n)): coefficient of t^k in det(I + tL)
// where L is the matrix of the even generators.
inline SuperElement gl_chern_word(const WeilAlgebra& w, std::uint32_t n, std::uint32_t k) {
    if (w.g.dim() != n * n) throw std::invalid_argument("gl_chern_word: not a gl(n) Weil algebra");
    std::vector<std::uint32_t> idx(k);
    SuperElement sum(w.algebra);
    std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t pos, std::uint32_t from) {
        if (pos == k) {
            std::vector<std::uint32_t> rows(idx.begin(), idx.end());
            std::vector<std::uint32_t> p(rows);
            SuperElement det(w.algebra);
            do {
                int sign = 1;
                for (std::uint32_t a = 0; a < k; ++a)
                    for (std::uint32_t b = a + 1; b < k; ++b)
                        if (p[a] > p[b]) sign = -sign;
                SuperElement prod = SuperElement::unit(w.algebra);
                for (std::uint32_t a = 0; a < k; ++a)
                    prod = prod * w.gen_capital(rows[a] * n + p[a]);
                det += Rational(sign) * prod;
            } while (std::next_permutation(p.begin(), p.end()));
            sum += det;
            return;
        }
        for (std::uint32_t i = from; i < n; ++i) {
            idx[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
    return sum;
}

// The classes 1, T (degree n) and T^2 = C_n picture for n even:
// H(W_(n)(gl(n)), so(n)) versus H(WO_n) with one extra degree-n class whose
// square matches the class of C_n.
struct EvenEulerReport {
    bool dims_match = true;
    bool has_degree_n_class = false;
    bool square_is_cn_class = false;
    std::vector<std::uint32_t> w_dims, wo_dims, expected_dims;
};

inline EvenEulerReport check_even_euler_extension(std::uint32_t n, std::uint32_t deg_lo,
                                                  std::uint32_t deg_hi) {
    if (n % 2 != 0) throw std::invalid_argument("check_even_euler_extension: n must be even");
    EvenEulerReport rep;
    auto w = build_weil(LieAlgebra::gl(n), n);
    auto emb = SubalgebraEmbedding::so_in_gl(n);
    auto ops = weil_ops(w, emb);
    auto wtab = basic_cohomology(ops, deg_lo, deg_hi);
    auto wotab = wo_cohomology(n, deg_lo, deg_hi);
    for (auto& r : wtab) rep.w_dims.push_back(r.dimension);
    for (auto& r : wotab) rep.wo_dims.push_back(r.dimension);
    // expected: H(WO_n)[T]/(T^2 - C_n) with deg T = n
    auto wo_all = wo_cohomology(n, 0, deg_hi);
    for (std::uint32_t deg = deg_lo; deg <= deg_hi; ++deg) {
        std::uint32_t dim = wo_all[deg].dimension;
        if (deg >= n) dim += wo_all[deg - n].dimension;
        rep.expected_dims.push_back(dim);
    }
    rep.dims_match = rep.w_dims == rep.expected_dims;

    // reduce [T^2] and [C_n] modulo the image inside the basic subcomplex; the
    // residues must be nonzero and proportional
    auto t_rows = basic_cohomology(ops, n, n);
    if (t_rows[0].dimension == 1) {
        rep.has_degree_n_class = true;
        SuperElement t = t_rows[0].representatives[0];
        SuperElement t2 = t * t;
        SuperElement cn = gl_chern_word(w, n, n);
        auto b_below = basic_slice(ops, 2 * n - 1);
        auto b_here = basic_slice(ops, 2 * n);
        SparseMatrix d_in = restrict_d(ops, b_below, b_here, 2 * n);
        SparseMatrix basis(static_cast<std::uint32_t>(b_here.word_basis.size()),
                           static_cast<std::uint32_t>(b_here.basic_basis.size()));
        for (std::uint32_t j = 0; j < b_here.basic_basis.size(); ++j)
            for (auto& [i, v] : b_here.basic_basis[j]) basis.set(i, j, v);
        auto tv = solve(basis, expand_on_basis(t2, b_here.word_basis));
        auto cv = solve(basis, expand_on_basis(cn, b_here.word_basis));
        if (tv && cv) {
            EchelonStore image;
            for (std::uint32_t c = 0; c < d_in.cols(); ++c) image.insert(d_in.column(c));
            SparseVec rt = image.reduce(*tv), rc = image.reduce(*cv);
            if (!rt.empty() && !rc.empty()) {
                Rational s = rt.begin()->second / rc.begin()->second;
                rep.square_is_cn_class = (rt.begin()->first == rc.begin()->first) &&
                                         vec_scale(rc, s) == rt;
            }
        }
    }
    return rep;
}

}  // namespace jetvar
