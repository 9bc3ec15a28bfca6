#pragma once

#include "jetvar/jet_fields.hpp"
#include "jetvar/jet_form.hpp"
#include "jetvar/lie_algebra.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetvar {

// Square matrix of jet forms with the wedge product; entries of a fixed
// degree, Koszul signs handled by the entry wedge.
struct MatrixOfForms {
    JetContextPtr ctx;
    std::vector<std::vector<JetForm>> e;

    MatrixOfForms() = default;
    MatrixOfForms(JetContextPtr c, std::uint32_t size)
        : ctx(std::move(c)), e(size, std::vector<JetForm>(size, JetForm(ctx))) {}

    std::uint32_t size() const { return static_cast<std::uint32_t>(e.size()); }

    MatrixOfForms operator+(const MatrixOfForms& o) const {
        MatrixOfForms r(ctx, size());
        for (std::uint32_t i = 0; i < size(); ++i)
            for (std::uint32_t j = 0; j < size(); ++j) r.e[i][j] = e[i][j] + o.e[i][j];
        return r;
    }
    MatrixOfForms operator-(const MatrixOfForms& o) const {
        MatrixOfForms r(ctx, size());
        for (std::uint32_t i = 0; i < size(); ++i)
            for (std::uint32_t j = 0; j < size(); ++j) r.e[i][j] = e[i][j] - o.e[i][j];
        return r;
    }
    MatrixOfForms scaled(const RationalFunction& c) const {
        MatrixOfForms r(ctx, size());
        for (std::uint32_t i = 0; i < size(); ++i)
            for (std::uint32_t j = 0; j < size(); ++j) r.e[i][j] = e[i][j] * c;
        return r;
    }

    // matrix product with entrywise wedge
    MatrixOfForms mul(const MatrixOfForms& o) const {
        MatrixOfForms r(ctx, size());
        for (std::uint32_t i = 0; i < size(); ++i)
            for (std::uint32_t j = 0; j < size(); ++j)
                for (std::uint32_t k = 0; k < size(); ++k)
                    r.e[i][j] += wedge(e[i][k], o.e[k][j]);
        return r;
    }

    MatrixOfForms d() const {
        MatrixOfForms r(ctx, size());
        for (std::uint32_t i = 0; i < size(); ++i)
            for (std::uint32_t j = 0; j < size(); ++j) r.e[i][j] = e[i][j].d();
        return r;
    }

    JetForm trace() const {
        JetForm t(ctx);
        for (std::uint32_t i = 0; i < size(); ++i) t += e[i][i];
        return t;
    }

    MatrixOfForms transpose() const {
        MatrixOfForms r(ctx, size());
        for (std::uint32_t i = 0; i < size(); ++i)
            for (std::uint32_t j = 0; j < size(); ++j) r.e[i][j] = e[j][i];
        return r;
    }

    JetForm trace_power(std::uint32_t k) const {
        if (k == 0) return JetForm(ctx, RationalFunction(Rational(static_cast<long>(size()))));
        MatrixOfForms p = *this;
        for (std::uint32_t i = 1; i < k; ++i) p = p.mul(*this);
        return p.trace();
    }

    MatrixOfForms map_entries(const std::function<JetForm(const JetForm&)>& fn) const {
        MatrixOfForms r(ctx, size());
        for (std::uint32_t i = 0; i < size(); ++i)
            for (std::uint32_t j = 0; j < size(); ++j) r.e[i][j] = fn(e[i][j]);
        return r;
    }

    // curvature of a connection matrix: d w + w ^ w
    MatrixOfForms curvature() const { return d() + mul(*this); }
};

// determinant by permutation expansion; entries must be of even form degree
inline JetForm form_det(const MatrixOfForms& m) {
    const std::uint32_t n = m.size();
    std::vector<std::uint32_t> p(n);
    for (std::uint32_t i = 0; i < n; ++i) p[i] = i;
    JetForm out(m.ctx);
    do {
        int sign = 1;
        for (std::uint32_t a = 0; a < n; ++a)
            for (std::uint32_t b = a + 1; b < n; ++b)
                if (p[a] > p[b]) sign = -sign;
        JetForm prod(m.ctx, RationalFunction(Rational(sign)));
        for (std::uint32_t i = 0; i < n && !prod.is_zero(); ++i) prod = wedge(prod, m.e[i][p[i]]);
        out += prod;
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// Pfaffian of an antisymmetric matrix of even-degree forms, by the matching
// recursion Pf(A) = sum_j (-1)^j A_{i0, ij} Pf(rest)
inline JetForm form_pfaffian(const MatrixOfForms& m) {
    const std::uint32_t n = m.size();
    if (n % 2) throw std::invalid_argument("form_pfaffian: odd size");
    std::function<JetForm(std::vector<std::uint32_t>)> rec =
        [&](std::vector<std::uint32_t> idx) -> JetForm {
        if (idx.empty()) return JetForm(m.ctx, RationalFunction(1));
        JetForm out(m.ctx);
        std::uint32_t i0 = idx[0];
        for (std::size_t j = 1; j < idx.size(); ++j) {
            std::vector<std::uint32_t> rest;
            for (std::size_t r = 1; r < idx.size(); ++r)
                if (r != j) rest.push_back(idx[r]);
            JetForm term = wedge(m.e[i0][idx[j]], rec(std::move(rest)));
            if (j % 2 == 0) term = -term;
            out += term;
        }
        return out;
    };
    std::vector<std::uint32_t> all(n);
    for (std::uint32_t i = 0; i < n; ++i) all[i] = i;
    return rec(all);
}

// Coordinate model of the bundle of Riemannian metrics: fiber coordinates
// y_{ij} (i <= j), exact inverse through adjugate/determinant.
class MetricJetModel {
public:
    explicit MetricJetModel(std::uint32_t n) : n_(n) {
        std::vector<std::string> fibers;
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = i; j < n; ++j) {
                pair_index_[{i, j}] = static_cast<std::uint32_t>(fibers.size());
                fibers.push_back("y" + std::to_string(i + 1) + std::to_string(j + 1));
            }
        ctx_ = std::make_shared<JetContext>(n, std::move(fibers));
        build_inverse();
    }

    std::uint32_t n() const { return n_; }
    const JetContextPtr& context() const { return ctx_; }

    std::uint32_t fiber_index(std::uint32_t i, std::uint32_t j) const {
        return pair_index_.at({std::min(i, j), std::max(i, j)});
    }

    RationalFunction metric(std::uint32_t i, std::uint32_t j) const {
        return RationalFunction::variable(ctx_->jet_symbol(fiber_index(i, j), {}));
    }
    RationalFunction metric_jet(std::uint32_t i, std::uint32_t j, const MultiIndex& k) const {
        return RationalFunction::variable(ctx_->jet_symbol(fiber_index(i, j), k));
    }
    // inverse metric y^{ij} as adjugate over determinant
    const RationalFunction& inverse(std::uint32_t i, std::uint32_t j) const {
        return inverse_[i][j];
    }
    const RationalFunction& det() const { return det_; }

    // Gamma^i_{jk} = 1/2 y^{ia} (y_{aj,k} + y_{ak,j} - y_{jk,a})
    RationalFunction christoffel(std::uint32_t i, std::uint32_t j, std::uint32_t k) const {
        RationalFunction g;
        for (std::uint32_t a = 0; a < n_; ++a)
            g += inverse_[i][a] *
                 (metric_jet(a, j, {k}) + metric_jet(a, k, {j}) - metric_jet(j, k, {a}));
        return RationalFunction(Rational(1, 2)) * g;
    }

    // contact matrix: theta^i_j = y^{ia}(dy_aj - y_{aj,k} dx^k) = y^{ia} th_{aj}
    MatrixOfForms theta_form() const {
        MatrixOfForms t(ctx_, n_);
        for (std::uint32_t i = 0; i < n_; ++i)
            for (std::uint32_t j = 0; j < n_; ++j)
                for (std::uint32_t a = 0; a < n_; ++a)
                    t.e[i][j] += JetForm::theta(ctx_, fiber_index(a, j)) * inverse_[i][a];
        return t;
    }

    // local matrix of the Levi-Civita pullback connection: Gamma^i_{jk} dx^k
    MatrixOfForms omega_hor() const {
        MatrixOfForms w(ctx_, n_);
        for (std::uint32_t i = 0; i < n_; ++i)
            for (std::uint32_t j = 0; j < n_; ++j)
                for (std::uint32_t k = 0; k < n_; ++k)
                    w.e[i][j] += JetForm::dx(ctx_, k) * christoffel(i, j, k);
        return w;
    }

    // universal Levi-Civita connection omega = omega_hor + 1/2 theta
    MatrixOfForms omega() const {
        return omega_hor() + theta_form().scaled(RationalFunction(Rational(1, 2)));
    }

    // evaluation at sigma: y = delta, all jets zero, x = 0; formal parameter
    // symbols pass through untouched
    RationalFunction at_normal_point(const RationalFunction& c) const {
        std::map<Symbol, MultiPoly> at;
        for (Symbol v : c.variables()) {
            if (ctx_->base_index(v)) {
                at[v] = MultiPoly(0);
            } else if (auto info = ctx_->jet_info(v)) {
                long val = 0;
                if (info->second.empty()) {
                    for (std::uint32_t i = 0; i < n_; ++i)
                        if (info->first == fiber_index(i, i)) val = 1;
                }
                at[v] = MultiPoly(val);
            }
        }
        return c.substitute(at);
    }
    JetForm at_normal_point(const JetForm& a) const {
        return a.map_coefficients([this](const RationalFunction& c) { return at_normal_point(c); });
    }

    // lift of a base field X^i d/dx^i to the bundle of metrics
    ProjectableField lift(const std::vector<RationalFunction>& x_components) const {
        std::vector<RationalFunction> f = x_components;
        std::vector<RationalFunction> g(ctx_->fiber_dim());
        for (std::uint32_t i = 0; i < n_; ++i)
            for (std::uint32_t j = i; j < n_; ++j) {
                RationalFunction v;
                for (std::uint32_t k = 0; k < n_; ++k) {
                    v -= x_components[k].derivative(ctx_->base_symbol(i)) * metric(k, j);
                    v -= x_components[k].derivative(ctx_->base_symbol(j)) * metric(k, i);
                }
                g[fiber_index(i, j)] = v;
            }
        return ProjectableField(ctx_, std::move(f), std::move(g));
    }

private:
    void build_inverse() {
        // adjugate / det of the symmetric coordinate matrix
        std::vector<std::vector<MultiPoly>> y(n_, std::vector<MultiPoly>(n_));
        for (std::uint32_t i = 0; i < n_; ++i)
            for (std::uint32_t j = 0; j < n_; ++j)
                y[i][j] = MultiPoly::variable(ctx_->jet_symbol(fiber_index(i, j), {}));
        std::function<MultiPoly(const std::vector<std::uint32_t>&, const std::vector<std::uint32_t>&)>
            minor_det = [&](const std::vector<std::uint32_t>& rows,
                            const std::vector<std::uint32_t>& cols) -> MultiPoly {
            if (rows.empty()) return MultiPoly(1);
            MultiPoly out;
            for (std::size_t c = 0; c < cols.size(); ++c) {
                std::vector<std::uint32_t> r2(rows.begin() + 1, rows.end());
                std::vector<std::uint32_t> c2;
                for (std::size_t t = 0; t < cols.size(); ++t)
                    if (t != c) c2.push_back(cols[t]);
                MultiPoly term = y[rows[0]][cols[c]] * minor_det(r2, c2);
                out += (c % 2) ? -term : term;
            }
            return out;
        };
        std::vector<std::uint32_t> all(n_);
        for (std::uint32_t i = 0; i < n_; ++i) all[i] = i;
        MultiPoly det = minor_det(all, all);
        det_ = RationalFunction(det);
        inverse_.assign(n_, std::vector<RationalFunction>(n_));
        for (std::uint32_t i = 0; i < n_; ++i)
            for (std::uint32_t j = 0; j < n_; ++j) {
                std::vector<std::uint32_t> rows, cols;
                for (std::uint32_t r = 0; r < n_; ++r)
                    if (r != j) rows.push_back(r);
                for (std::uint32_t c = 0; c < n_; ++c)
                    if (c != i) cols.push_back(c);
                MultiPoly cof = minor_det(rows, cols);
                if ((i + j) % 2) cof = -cof;
                inverse_[i][j] = RationalFunction(cof, det);
            }
    }

    std::uint32_t n_;
    JetContextPtr ctx_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> pair_index_;
    std::vector<std::vector<RationalFunction>> inverse_;
    RationalFunction det_;
};

// Coordinate model of the bundle of connections: fiber coordinates A^a_i.
class ConnectionJetModel {
public:
    ConnectionJetModel(std::uint32_t n, LieAlgebra g) : n_(n), g_(std::move(g)) {
        std::vector<std::string> fibers;
        for (std::uint32_t a = 0; a < g_.dim(); ++a)
            for (std::uint32_t i = 0; i < n; ++i) {
                index_[{a, i}] = static_cast<std::uint32_t>(fibers.size());
                fibers.push_back("A" + std::to_string(a + 1) + "_" + std::to_string(i + 1));
            }
        ctx_ = std::make_shared<JetContext>(n, std::move(fibers));
    }

    std::uint32_t n() const { return n_; }
    const LieAlgebra& gauge() const { return g_; }
    const JetContextPtr& context() const { return ctx_; }

    std::uint32_t fiber_index(std::uint32_t a, std::uint32_t i) const { return index_.at({a, i}); }
    RationalFunction coordinate(std::uint32_t a, std::uint32_t i) const {
        return RationalFunction::variable(ctx_->jet_symbol(fiber_index(a, i), {}));
    }

    // tautological g-valued 1-form A^a_j dx^j
    std::vector<JetForm> tautological() const {
        std::vector<JetForm> a(g_.dim(), JetForm(ctx_));
        for (std::uint32_t al = 0; al < g_.dim(); ++al)
            for (std::uint32_t j = 0; j < n_; ++j)
                a[al] += JetForm::dx(ctx_, j) * coordinate(al, j);
        return a;
    }

    // curvature of the canonical connection,
    //   F^a = dA^a_j ^ dx^j + 1/2 c^a_bc A^b_j A^c_k dx^j ^ dx^k.
    // The quadratic coefficient is calibrated once against the classical
    // dA + 1/2 [A, A] through the sigma_A pullback and frozen.
    std::vector<JetForm> curvature() const {
        std::vector<JetForm> f(g_.dim(), JetForm(ctx_));
        for (std::uint32_t al = 0; al < g_.dim(); ++al) {
            for (std::uint32_t j = 0; j < n_; ++j)
                f[al] += wedge(JetForm::dy(ctx_, fiber_index(al, j)), JetForm::dx(ctx_, j));
            for (std::uint32_t b = 0; b < g_.dim(); ++b)
                for (std::uint32_t c = 0; c < g_.dim(); ++c) {
                    Rational s = g_.c(al, b, c);
                    if (s.is_zero()) continue;
                    for (std::uint32_t j = 0; j < n_; ++j)
                        for (std::uint32_t k = 0; k < n_; ++k)
                            f[al] += wedge(JetForm::dx(ctx_, j), JetForm::dx(ctx_, k)) *
                                     (RationalFunction(s * Rational(1, 2)) * coordinate(b, j) *
                                      coordinate(c, k));
                }
        }
        return f;
    }

    // lift of an infinitesimal automorphism (f^i(x), g^a(x)) to the bundle
    // of connections
    ProjectableField lift(const std::vector<RationalFunction>& f,
                          const std::vector<RationalFunction>& gpart) const {
        std::vector<RationalFunction> fiber(ctx_->fiber_dim());
        for (std::uint32_t al = 0; al < g_.dim(); ++al)
            for (std::uint32_t j = 0; j < n_; ++j) {
                RationalFunction v;
                for (std::uint32_t i = 0; i < n_; ++i)
                    v -= f[i].derivative(ctx_->base_symbol(j)) * coordinate(al, i);
                v -= gpart[al].derivative(ctx_->base_symbol(j));
                for (std::uint32_t b = 0; b < g_.dim(); ++b)
                    for (std::uint32_t c = 0; c < g_.dim(); ++c) {
                        Rational s = g_.c(al, b, c);
                        if (!s.is_zero()) v += RationalFunction(s) * gpart[b] * coordinate(c, j);
                    }
                fiber[fiber_index(al, j)] = v;
            }
        return ProjectableField(ctx_, f, std::move(fiber));
    }

    // evaluation at sigma: A = 0, all jets zero, x = 0; formal parameter
    // symbols pass through untouched
    RationalFunction at_zero_point(const RationalFunction& c) const {
        std::map<Symbol, MultiPoly> at;
        for (Symbol v : c.variables())
            if (ctx_->base_index(v) || ctx_->jet_info(v)) at[v] = MultiPoly(0);
        return c.substitute(at);
    }
    JetForm at_zero_point(const JetForm& a) const {
        return a.map_coefficients([this](const RationalFunction& c) { return at_zero_point(c); });
    }

private:
    std::uint32_t n_;
    LieAlgebra g_;
    JetContextPtr ctx_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> index_;
};

// transgression of a product-of-trace-powers invariant polynomial between two
// connection matrices; exact t-integration on the affine path
inline JetForm transgression(const std::vector<std::uint32_t>& trace_powers,
                             const MatrixOfForms& c0, const MatrixOfForms& c1) {
    if (c0.size() != c1.size()) throw std::invalid_argument("transgression: size mismatch");
    const auto& ctx = c0.ctx;
    Symbol t = sym("tvar");
    RationalFunction tv = RationalFunction::variable(t);
    MatrixOfForms eta = c1 - c0;
    MatrixOfForms conn_t = c0 + eta.scaled(tv);
    MatrixOfForms f_t = conn_t.curvature();

    // powers of F_t once
    std::map<std::uint32_t, JetForm> tr_pow;
    std::uint32_t max_pow = 0;
    for (auto k : trace_powers) max_pow = std::max(max_pow, k);
    {
        MatrixOfForms p = f_t;
        for (std::uint32_t k = 1; k <= max_pow; ++k) {
            tr_pow[k] = p.trace();
            if (k < max_pow) p = p.mul(f_t);
        }
    }
    // eta ^ F_t^{k-1} traces
    auto eta_trace = [&](std::uint32_t k) {
        MatrixOfForms p = eta;
        for (std::uint32_t i = 1; i < k; ++i) p = p.mul(f_t);
        return p.trace();
    };

    JetForm integrand(ctx);
    for (std::size_t j = 0; j < trace_powers.size(); ++j) {
        JetForm piece(ctx, RationalFunction(Rational(static_cast<long>(trace_powers[j]))));
        piece = wedge(piece, eta_trace(trace_powers[j]));
        for (std::size_t l = 0; l < trace_powers.size(); ++l)
            if (l != j) piece = wedge(piece, tr_pow[trace_powers[l]]);
        integrand += piece;
    }

    // integrate coefficients in t over [0, 1]
    auto integrate = [&](const RationalFunction& c) {
        for (Symbol v : c.denominator().variables())
            if (v == t) throw std::logic_error("transgression: t in a denominator");
        MultiPoly out;
        for (auto& [mo, coeff] : c.numerator().terms()) {
            std::uint32_t e = mo.exponent(t);
            auto rest = mo.divide(Monomial(t, e));
            out.add_term(*rest, coeff / Rational(static_cast<long>(e + 1)));
        }
        return RationalFunction(out, c.denominator());
    };
    return integrand.map_coefficients(integrate);
}

// the invariant polynomial itself, as a product of trace powers
inline JetForm char_form_traces(const std::vector<std::uint32_t>& trace_powers,
                                const MatrixOfForms& curv) {
    JetForm out(curv.ctx, RationalFunction(1));
    for (auto k : trace_powers) out = wedge(out, curv.trace_power(k));
    return out;
}

}  // namespace jetvar
