#pragma once

#include "jetvar/lie_algebra.hpp"
#include "jetvar/multiindex.hpp"
#include "jetvar/relative.hpp"
#include "jetvar/superalgebra.hpp"
#include "jetvar/weil.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetvar {

// Continuous Chevalley-Eilenberg model of the formal vector fields on R^n,
// optionally with a gauge factor. Generators t{i}_J pair a field X with
// (-1)^{|J|} d^J X^i(0) and carry weight |J| - 1; s{a}_J pair the gauge
// component the same way and carry weight |J|. Generators are materialized
// up to max_order; the differential is defined where its image stays in
// range (|J| < max_order).
class FormalVfModel {
public:
    FormalVfModel(std::uint32_t n, std::optional<LieAlgebra> gauge, std::uint32_t max_order)
        : n_(n), gauge_(std::move(gauge)), max_order_(max_order) {
        std::vector<GeneratorSpec> gens;
        for (std::uint32_t ord = 0; ord <= max_order; ++ord) {
            for (auto& J : mi_all(n, ord)) {
                for (std::uint32_t i = 0; i < n; ++i) {
                    theta_id_[{i, J}] = static_cast<std::uint32_t>(gens.size());
                    std::string name = "t" + std::to_string(i + 1);
                    if (!J.empty()) name += "_" + mi_str(J);
                    gens.push_back({name, true, 1, static_cast<int>(ord) - 1});
                }
                if (gauge_) {
                    for (std::uint32_t a = 0; a < gauge_->dim(); ++a) {
                        sigma_id_[{a, J}] = static_cast<std::uint32_t>(gens.size());
                        std::string name = "s" + std::to_string(a + 1);
                        if (!J.empty()) name += "_" + mi_str(J);
                        gens.push_back({name, true, 1, static_cast<int>(ord)});
                    }
                }
            }
        }
        alg_ = SuperAlgebra::create(std::move(gens));
        build_differential();
    }

    std::uint32_t n() const { return n_; }
    const std::optional<LieAlgebra>& gauge() const { return gauge_; }
    std::uint32_t max_order() const { return max_order_; }
    const SuperAlgebraPtr& algebra() const { return alg_; }

    SuperElement theta(std::uint32_t i, const MultiIndex& J = {}) const {
        return SuperElement::generator(alg_, theta_gen(i, J));
    }
    SuperElement sigma(std::uint32_t a, const MultiIndex& J = {}) const {
        return SuperElement::generator(alg_, sigma_gen(a, J));
    }

    std::uint32_t theta_gen(std::uint32_t i, const MultiIndex& J) const {
        auto it = theta_id_.find({i, J});
        if (it == theta_id_.end())
            throw std::out_of_range("FormalVfModel: theta generator order exceeds max_order");
        return it->second;
    }
    std::uint32_t sigma_gen(std::uint32_t a, const MultiIndex& J) const {
        if (!gauge_) throw std::logic_error("FormalVfModel: no gauge factor");
        auto it = sigma_id_.find({a, J});
        if (it == sigma_id_.end())
            throw std::out_of_range("FormalVfModel: sigma generator order exceeds max_order");
        return it->second;
    }

    // order |J| of a generator
    std::uint32_t gen_order(std::uint32_t g) const { return order_of_[g]; }

    struct GenInfo {
        bool is_theta = true;
        std::uint32_t index = 0;  // base index i or gauge index a
        MultiIndex J;
    };
    GenInfo gen_info(std::uint32_t g) const {
        for (auto& [key, gid] : theta_id_)
            if (gid == g) return {true, key.first, key.second};
        for (auto& [key, gid] : sigma_id_)
            if (gid == g) return {false, key.first, key.second};
        throw std::out_of_range("FormalVfModel: unknown generator");
    }

    // Chevalley-Eilenberg differential; rejects elements whose image cannot
    // be expressed with the materialized generators.
    SuperElement d(const SuperElement& x) const {
        for (auto& [w, c] : x.terms())
            for (auto& [g, e] : w.factors())
                if (order_of_[g] + 1 > max_order_)
                    throw std::out_of_range(
                        "FormalVfModel: differential needs generators beyond max_order; "
                        "rebuild the model with a larger order window");
        return d_.apply(x);
    }

    // curvature 2-cochains R^i_j = d t^i_j + t^i_k ^ t^k_j
    SuperElement curvature_R(std::uint32_t i, std::uint32_t j) const {
        SuperElement r = d(theta(i, {j}));
        for (std::uint32_t k = 0; k < n_; ++k) r += theta(i, {k}) * theta(k, {j});
        return r;
    }
    // gauge curvature S^a = d s^a + 1/2 c^a_bc s^b s^c
    SuperElement curvature_S(std::uint32_t a) const {
        if (!gauge_) throw std::logic_error("FormalVfModel: no gauge factor");
        SuperElement s = d(sigma(a));
        for (std::uint32_t b = 0; b < gauge_->dim(); ++b)
            for (std::uint32_t c = 0; c < gauge_->dim(); ++c) {
                Rational v = gauge_->c(a, b, c);
                if (!v.is_zero()) s += Rational(1, 2) * v * (sigma(b) * sigma(c));
            }
        return s;
    }

    // interior product along an element of the linearly embedded gl(n)
    // (matrix A, field A^i_j x^j d_i) plus a constant gauge part.
    SuperElement iota_linear(const std::vector<std::vector<Rational>>& A,
                             const std::vector<Rational>& gauge_part,
                             const SuperElement& x) const {
        std::vector<SuperElement> action(alg_->generator_count(), SuperElement(alg_));
        for (auto& [key, gid] : theta_id_) {
            auto& [i, J] = key;
            if (J.size() == 1) {
                Rational v = -A[i][J[0]];
                if (!v.is_zero()) action[gid] = SuperElement::unit(alg_, v);
            }
        }
        if (gauge_) {
            for (auto& [key, gid] : sigma_id_) {
                auto& [a, J] = key;
                if (J.empty() && !gauge_part[a].is_zero())
                    action[gid] = SuperElement::unit(alg_, gauge_part[a]);
            }
        }
        Derivation iota(alg_, true, std::move(action));
        return iota.apply(x);
    }

    SuperElement lie_linear(const std::vector<std::vector<Rational>>& A,
                            const std::vector<Rational>& gauge_part, const SuperElement& x) const {
        return d(iota_linear(A, gauge_part, x)) + iota_linear(A, gauge_part, d(x));
    }

private:
    void build_differential() {
        std::vector<SuperElement> action(alg_->generator_count(), SuperElement(alg_));
        order_of_.assign(alg_->generator_count(), 0);
        // d t^i_J = sum over splittings K+L=J of m * t^j_K ^ t^i_{L+j}
        for (auto& [key, gid] : theta_id_) {
            const auto& [i, J] = key;
            order_of_[gid] = static_cast<std::uint32_t>(J.size());
            if (J.size() + 1 > max_order_) continue;  // action undefined, guarded in d()
            SuperElement v(alg_);
            mi_splittings(J, [&](const MultiIndex& K, const MultiIndex& L, const Rational& m) {
                for (std::uint32_t j = 0; j < n_; ++j)
                    v += m * (theta(j, K) * theta(i, mi_plus(L, j)));
            });
            action[gid] = v;
        }
        // d s^a_J = sum m * t^j_K ^ s^a_{L+j} - 1/2 c^a_bc sum m * s^b_K s^c_L
        for (auto& [key, gid] : sigma_id_) {
            const auto& [a, J] = key;
            order_of_[gid] = static_cast<std::uint32_t>(J.size());
            if (J.size() + 1 > max_order_) continue;
            SuperElement v(alg_);
            mi_splittings(J, [&](const MultiIndex& K, const MultiIndex& L, const Rational& m) {
                for (std::uint32_t j = 0; j < n_; ++j)
                    v += m * (theta(j, K) * sigma(a, mi_plus(L, j)));
                for (std::uint32_t b = 0; b < gauge_->dim(); ++b)
                    for (std::uint32_t c = 0; c < gauge_->dim(); ++c) {
                        Rational s = gauge_->c(a, b, c);
                        if (!s.is_zero())
                            v -= Rational(1, 2) * s * m * (sigma(b, K) * sigma(c, L));
                    }
            });
            action[gid] = v;
        }
        d_ = Derivation(alg_, true, std::move(action));
    }

    std::uint32_t n_;
    std::optional<LieAlgebra> gauge_;
    std::uint32_t max_order_;
    SuperAlgebraPtr alg_;
    Derivation d_;
    std::map<std::pair<std::uint32_t, MultiIndex>, std::uint32_t> theta_id_, sigma_id_;
    std::vector<std::uint32_t> order_of_;
};

// Algebra map from the truncated Weil algebra of gl(n) (or gl(n) x g) that
// sends l^i_j -> t^i_j, L^i_j -> R^i_j, l^a -> s^a, L^a -> S^a, extended
// multiplicatively.
class BetaMap {
public:
    BetaMap(const WeilAlgebra& w, const FormalVfModel& model) : w_(&w), model_(&model) {
        const std::uint32_t n = model.n();
        const std::uint32_t gl_dim = n * n;
        const std::uint32_t gdim = model.gauge() ? model.gauge()->dim() : 0;
        if (w.g.dim() != gl_dim + gdim)
            throw std::invalid_argument("BetaMap: Weil algebra does not match gl(n) (x g)");
        images_.resize(2 * w.g.dim());
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j) {
                images_[w.lambda(i * n + j)] = model.theta(i, {j});
                images_[w.capital(i * n + j)] = model.curvature_R(i, j);
            }
        for (std::uint32_t a = 0; a < gdim; ++a) {
            images_[w.lambda(gl_dim + a)] = model.sigma(a);
            images_[w.capital(gl_dim + a)] = model.curvature_S(a);
        }
    }

    SuperElement apply(const SuperElement& x) const {
        SuperElement out(model_->algebra());
        for (auto& [word, c] : x.terms()) {
            SuperElement term = SuperElement::unit(model_->algebra(), c);
            for (auto& [g, e] : word.factors())
                for (std::uint32_t r = 0; r < e && !term.is_zero(); ++r)
                    term = term * images_[g];
            out += term;
        }
        return out;
    }

    // beta(d w) = d(beta w) on every generator
    bool is_cochain_map() const {
        for (std::uint32_t g = 0; g < w_->algebra->generator_count(); ++g) {
            SuperElement eg = SuperElement::generator(w_->algebra, g);
            if (model_->d(apply(eg)) != apply(w_->d.apply(eg))) return false;
        }
        return true;
    }

private:
    const WeilAlgebra* w_;
    const FormalVfModel* model_;
    std::vector<SuperElement> images_;
};

enum class RelSubalgebra { none, so_n, so_n_times_g };

struct CeCohomologyRow {
    std::uint32_t degree = 0;
    int weight = 0;
    std::uint32_t dimension = 0;
    std::vector<SuperElement> representatives;
};

// Per-(degree, weight) relative Gelfand-Fuks cohomology of the model. The
// model must have max_order at least (max weight + max degree + 1); we check
// and reject rather than truncate silently.
inline std::vector<CeCohomologyRow> relative_ce_cohomology(const FormalVfModel& model,
                                                           RelSubalgebra rel,
                                                           std::uint32_t deg_lo, std::uint32_t deg_hi,
                                                           int w_lo, int w_hi) {
    const std::uint32_t n = model.n();
    // a degree-k weight-w word has theta orders summing to w + (theta count)
    // <= w + k; the differential needs one more order
    const int needed = w_hi + static_cast<int>(deg_hi) + 2;
    if (needed > 0 && static_cast<std::uint32_t>(needed) > model.max_order())
        throw std::invalid_argument(
            "relative_ce_cohomology: weight/degree window needs max_order >= " +
            std::to_string(needed));

    std::vector<std::function<SuperElement(const SuperElement&)>> iotas, lies;
    auto add_linear = [&](const std::vector<std::vector<Rational>>& A,
                          const std::vector<Rational>& gpart) {
        iotas.push_back([&model, A, gpart](const SuperElement& x) {
            return model.iota_linear(A, gpart, x);
        });
        lies.push_back([&model, A, gpart](const SuperElement& x) {
            return model.lie_linear(A, gpart, x);
        });
    };
    const std::uint32_t gdim = model.gauge() ? model.gauge()->dim() : 0;
    if (rel == RelSubalgebra::so_n || rel == RelSubalgebra::so_n_times_g) {
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = i + 1; j < n; ++j) {
                std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n, Rational(0)));
                A[i][j] = Rational(1);
                A[j][i] = Rational(-1);
                add_linear(A, std::vector<Rational>(gdim, Rational(0)));
            }
    }
    if (rel == RelSubalgebra::so_n_times_g) {
        for (std::uint32_t a = 0; a < gdim; ++a) {
            std::vector<Rational> gpart(gdim, Rational(0));
            gpart[a] = Rational(1);
            add_linear(std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, Rational(0))),
                       gpart);
        }
    }

    std::vector<CeCohomologyRow> table;
    for (int w = w_lo; w <= w_hi; ++w) {
        DgComplexOps ops;
        ops.alg = model.algebra();
        ops.d = [&model](const SuperElement& x) { return model.d(x); };
        ops.iota = iotas;
        ops.lie = lies;
        ops.degree_basis = [&model, w](std::uint32_t deg) {
            return model.algebra()->basis(deg, w);
        };
        auto rows = basic_cohomology(ops, deg_lo, deg_hi);
        for (auto& r : rows)
            table.push_back({r.degree, w, r.dimension, std::move(r.representatives)});
    }
    return table;
}

}  // namespace jetvar
