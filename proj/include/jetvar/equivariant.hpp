#pragma once

#include "jetvar/formal_vf.hpp"
#include "jetvar/geometry.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetvar {

// Truncated formal vector field with free coefficient symbols: the base
// components are sum_{|J| <= truncation} a^i_J x^J, plus an optional gauge
// part with its own coefficients. Distinct instances use distinct tags so
// several independent parameters can coexist in one expression.
class FormalParameter {
public:
    FormalParameter(JetContextPtr ctx, std::uint32_t truncation, std::string tag,
                    std::uint32_t gauge_dim = 0)
        : ctx_(std::move(ctx)), truncation_(truncation), tag_(std::move(tag)),
          gauge_dim_(gauge_dim) {
        const std::uint32_t n = ctx_->base_dim();
        for (std::uint32_t o = 0; o <= truncation_; ++o)
            for (auto& J : mi_all(n, o)) {
                for (std::uint32_t i = 0; i < n; ++i)
                    base_syms_[{i, J}] = sym(tag_ + "a" + std::to_string(i + 1) +
                                             (J.empty() ? "" : "_" + mi_str(J)));
                for (std::uint32_t a = 0; a < gauge_dim_; ++a)
                    gauge_syms_[{a, J}] = sym(tag_ + "b" + std::to_string(a + 1) +
                                              (J.empty() ? "" : "_" + mi_str(J)));
            }
    }

    const JetContextPtr& context() const { return ctx_; }
    std::uint32_t truncation() const { return truncation_; }
    std::uint32_t gauge_dim() const { return gauge_dim_; }
    const std::string& tag() const { return tag_; }

    Symbol coeff(std::uint32_t i, const MultiIndex& j) const { return base_syms_.at({i, j}); }
    Symbol gauge_coeff(std::uint32_t a, const MultiIndex& j) const {
        return gauge_syms_.at({a, j});
    }

    std::vector<Symbol> all_symbols() const {
        std::vector<Symbol> out;
        for (auto& [k, s] : base_syms_) out.push_back(s);
        for (auto& [k, s] : gauge_syms_) out.push_back(s);
        return out;
    }

    // X^i = sum a^i_J x^J
    RationalFunction base_component(std::uint32_t i) const {
        MultiPoly p;
        for (auto& [key, s] : base_syms_) {
            if (key.first != i) continue;
            Monomial mo(s);
            for (auto ix : key.second) mo = mo * Monomial(ctx_->base_symbol(ix));
            p.add_term(mo, Rational(1));
        }
        return RationalFunction(p);
    }
    RationalFunction gauge_component(std::uint32_t a) const {
        MultiPoly p;
        for (auto& [key, s] : gauge_syms_) {
            if (key.first != a) continue;
            Monomial mo(s);
            for (auto ix : key.second) mo = mo * Monomial(ctx_->base_symbol(ix));
            p.add_term(mo, Rational(1));
        }
        return RationalFunction(p);
    }
    std::vector<RationalFunction> base_components() const {
        std::vector<RationalFunction> v;
        for (std::uint32_t i = 0; i < ctx_->base_dim(); ++i) v.push_back(base_component(i));
        return v;
    }
    std::vector<RationalFunction> gauge_components() const {
        std::vector<RationalFunction> v;
        for (std::uint32_t a = 0; a < gauge_dim_; ++a) v.push_back(gauge_component(a));
        return v;
    }

    // derivative of a component at x = 0: d^J X^i(0) as a parameter polynomial
    MultiPoly derivative_at_zero(std::uint32_t i, const MultiIndex& j, bool gauge_part = false) const {
        RationalFunction comp = gauge_part ? gauge_component(i) : base_component(i);
        MultiPoly p = comp.as_polynomial();
        for (auto ix : j) p = p.derivative(ctx_->base_symbol(ix));
        std::map<Symbol, MultiPoly> at;
        for (std::uint32_t b = 0; b < ctx_->base_dim(); ++b) at[ctx_->base_symbol(b)] = MultiPoly(0);
        return p.substitute(at);
    }

    // pairing against the Gelfand-Fuks generators: th^i_J -> (-1)^|J| d^J X^i(0)
    MultiPoly pair_theta(std::uint32_t i, const MultiIndex& j) const {
        MultiPoly v = derivative_at_zero(i, j, false);
        if (j.size() % 2) v = -v;
        return v;
    }
    MultiPoly pair_sigma(std::uint32_t a, const MultiIndex& j) const {
        MultiPoly v = derivative_at_zero(a, j, true);
        if (j.size() % 2) v = -v;
        return v;
    }

    // polynomial degree in this parameter's symbols
    std::uint32_t degree_in(const MultiPoly& p) const {
        std::uint32_t best = 0;
        for (auto& [mo, c] : p.terms()) {
            std::uint32_t d = 0;
            for (auto& [v, e] : mo.factors())
                if (is_mine(v)) d += e;
            best = std::max(best, d);
        }
        return best;
    }

    bool is_mine(Symbol v) const {
        const std::string& name = sym_name(v);
        return name.rfind(tag_, 0) == 0;
    }

private:
    JetContextPtr ctx_;
    std::uint32_t truncation_;
    std::string tag_;
    std::uint32_t gauge_dim_;
    std::map<std::pair<std::uint32_t, MultiIndex>, Symbol> base_syms_, gauge_syms_;
};

// JetForm-valued polynomial in a formal parameter; the equivariant degree of
// a term is its form degree plus twice its polynomial degree in the
// parameter. Evaluation at a concrete field is substitution for the
// coefficient symbols.
struct EquivariantJetForm {
    JetForm value;
    const FormalParameter* parameter = nullptr;

    std::uint32_t max_parameter_degree() const {
        std::uint32_t best = 0;
        for (auto& [w, c] : value.terms()) {
            best = std::max(best, parameter->degree_in(c.numerator()));
        }
        return best;
    }
    JetForm evaluate(const std::map<Symbol, MultiPoly>& coeffs) const {
        return value.map_coefficients(
            [&](const RationalFunction& c) { return c.substitute(coeffs); });
    }
};

// ---- metrics ---------------------------------------------------------------

// moment matrix mu(X)^i_j = (iota_{pr lift(X)} omega)^i_j + dX^i/dx^j; the
// 0-form part of the equivariant curvature Omega - mu(X)
inline MatrixOfForms metric_moment_matrix(const MetricJetModel& model, const FormalParameter& par) {
    const auto& ctx = model.context();
    const std::uint32_t n = model.n();
    auto lift = model.lift(par.base_components());
    ProlongedField pr = prolong(lift);
    MatrixOfForms omega = model.omega();
    MatrixOfForms mu(ctx, n);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) {
            JetForm contracted = contract_pr(pr, omega.e[i][j]);
            contracted += JetForm(ctx, par.base_component(i).derivative(ctx->base_symbol(j)));
            mu.e[i][j] = contracted;
        }
    return mu;
}

// Omega - mu(X): 2-form part plus 0-form part of the equivariant curvature
struct MetricEquivariantCurvature {
    MatrixOfForms omega2;  // plain curvature
    MatrixOfForms mu0;     // parameter-linear vertical term
    MatrixOfForms total() const { return omega2 - mu0; }
};

inline MetricEquivariantCurvature metric_equivariant_curvature(const MetricJetModel& model,
                                                               const FormalParameter& par) {
    return {model.omega().curvature(), metric_moment_matrix(model, par)};
}

// Cartan differential of a parameter-dependent form on the metric jet space
inline JetForm cartan_d_metric(const MetricJetModel& model, const FormalParameter& par,
                               const JetForm& alpha) {
    auto lift = model.lift(par.base_components());
    return alpha.d() - contract_pr(prolong(lift), alpha);
}

// parameter-linear piece of p(Omega_G(X)): the integrand of the moment map.
// For n = 4k-2 and deg p = n/2+1 this is exactly the form-degree-n component;
// for other degrees it is the inspection-mode current.
inline JetForm moment_integrand(const MetricJetModel& model, const FormalParameter& par,
                                const std::vector<std::uint32_t>& trace_powers) {
    auto eq = metric_equivariant_curvature(model, par);
    JetForm full = char_form_traces(trace_powers, eq.total());
    JetForm out(model.context());
    for (auto& [w, c] : full.terms()) {
        MultiPoly linear;
        for (auto& [mo, v] : c.numerator().terms()) {
            std::uint32_t d = 0;
            for (auto& [s, e] : mo.factors())
                if (par.is_mine(s)) d += e;
            if (d == 1) linear.add_term(mo, v);
        }
        if (!linear.is_zero()) out.add_term(w, RationalFunction(linear, c.denominator()));
    }
    return out;
}

// ---- gauge -----------------------------------------------------------------

// mu(X)^a = g^a + A^a_i f^i, the vertical term of the gauge equivariant
// curvature (the relative sign inside is pinned by d_c-closedness)
inline std::vector<RationalFunction> gauge_moment(const ConnectionJetModel& model,
                                                  const FormalParameter& par) {
    std::vector<RationalFunction> mu;
    for (std::uint32_t a = 0; a < model.gauge().dim(); ++a) {
        RationalFunction v = par.gauge_component(a);
        for (std::uint32_t i = 0; i < model.n(); ++i)
            v += model.coordinate(a, i) * par.base_component(i);
        mu.push_back(v);
    }
    return mu;
}

struct GaugeEquivariantCurvature {
    std::vector<JetForm> f2;            // plain curvature components
    std::vector<RationalFunction> mu0;  // vertical term components
};

inline GaugeEquivariantCurvature gauge_equivariant_curvature(const ConnectionJetModel& model,
                                                             const FormalParameter& par) {
    return {model.curvature(), gauge_moment(model, par)};
}

inline JetForm cartan_d_gauge(const ConnectionJetModel& model, const FormalParameter& par,
                              const JetForm& alpha) {
    auto lift = model.lift(par.base_components(), par.gauge_components());
    return alpha.d() - contract_pr(prolong(lift), alpha);
}

// ---- lemma verifications ----------------------------------------------------

struct IdentityReport {
    bool ok = true;
    std::string failure;  // offending component when not ok

    void check(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            failure = what;
        }
    }
};

// at sigma: Omega_hor(pr X, pr Y)^i_j = X^r d2 Y^i/dx^j dx^r - Y^r d2 X^i/dx^j dx^r,
// and the symmetric part of the frame-evaluated connection equals -1/2 theta(pr X)
inline IdentityReport verify_lemma15(std::uint32_t n) {
    if (n > 3) throw std::invalid_argument("verify_lemma15: n <= 3");
    IdentityReport rep;
    MetricJetModel model(n);
    const auto& ctx = model.context();
    FormalParameter X(ctx, 3, "vx."), Y(ctx, 3, "vy.");
    auto prx = prolong(model.lift(X.base_components()));
    auto pry = prolong(model.lift(Y.base_components()));

    MatrixOfForms omega_hor = model.omega_hor();
    MatrixOfForms curv = omega_hor.curvature();
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) {
            JetForm v = contract_pr(pry, contract_pr(prx, curv.e[i][j]));
            RationalFunction lhs = model.at_normal_point(v).terms().empty()
                                       ? RationalFunction()
                                       : model.at_normal_point(v).terms().begin()->second;
            // X^r d2Y^i/dx^j dx^r - Y^r d2X^i/dx^j dx^r at 0
            MultiPoly rhs;
            for (std::uint32_t r = 0; r < n; ++r) {
                MultiPoly x0 = X.derivative_at_zero(r, {});
                MultiPoly ddy = Y.derivative_at_zero(i, {std::min(j, r), std::max(j, r)});
                MultiPoly y0 = Y.derivative_at_zero(r, {});
                MultiPoly ddx = X.derivative_at_zero(i, {std::min(j, r), std::max(j, r)});
                rhs += x0 * ddy - y0 * ddx;
            }
            rep.check(lhs == RationalFunction(rhs),
                      "curvature contraction entry (" + std::to_string(i + 1) + "," +
                          std::to_string(j + 1) + ")");
        }

    // frame evaluation E = iota_{prX} omega_hor + Jacobian; at sigma its
    // symmetric part equals -1/2 theta(prX) = +1/2 (dX^i/dx^j + dX^j/dx^i)
    MatrixOfForms theta = model.theta_form();
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) {
            auto scalar_at_sigma = [&](const JetForm& f) {
                JetForm v = model.at_normal_point(f);
                return v.terms().empty() ? RationalFunction() : v.terms().begin()->second;
            };
            RationalFunction eij = scalar_at_sigma(contract_pr(prx, omega_hor.e[i][j])) +
                                   RationalFunction(X.derivative_at_zero(i, {j}));
            RationalFunction eji = scalar_at_sigma(contract_pr(prx, omega_hor.e[j][i])) +
                                   RationalFunction(X.derivative_at_zero(j, {i}));
            RationalFunction sym = RationalFunction(Rational(1, 2)) * (eij + eji);
            RationalFunction theta_c = scalar_at_sigma(contract_pr(prx, theta.e[i][j]));
            rep.check(sym == RationalFunction(Rational(-1, 2)) * theta_c,
                      "symmetric part vs -1/2 theta at (" + std::to_string(i + 1) + "," +
                          std::to_string(j + 1) + ")");
            RationalFunction expected = RationalFunction(Rational(1, 2)) *
                                        RationalFunction(X.derivative_at_zero(i, {j}) +
                                                         X.derivative_at_zero(j, {i}));
            rep.check(sym == expected, "symmetric part value at (" + std::to_string(i + 1) + "," +
                                           std::to_string(j + 1) + ")");
        }
    return rep;
}

// at sigma: F(X_C, Y_C) = (f1^i dg2^a/dx^i - f2^i dg1^a/dx^i) B_a
inline IdentityReport verify_lemma20(std::uint32_t n, const LieAlgebra& g) {
    if (n > 3) throw std::invalid_argument("verify_lemma20: n <= 3");
    IdentityReport rep;
    ConnectionJetModel model(n, g);
    const auto& ctx = model.context();
    FormalParameter X(ctx, 3, "wx.", g.dim()), Y(ctx, 3, "wy.", g.dim());
    auto prx = prolong(model.lift(X.base_components(), X.gauge_components()));
    auto pry = prolong(model.lift(Y.base_components(), Y.gauge_components()));
    auto curv = model.curvature();
    for (std::uint32_t a = 0; a < g.dim(); ++a) {
        JetForm v = contract_pr(pry, contract_pr(prx, curv[a]));
        JetForm at = model.at_zero_point(v);
        RationalFunction lhs = at.terms().empty() ? RationalFunction()
                                                  : at.terms().begin()->second;
        MultiPoly rhs;
        for (std::uint32_t i = 0; i < n; ++i)
            rhs += X.derivative_at_zero(i, {}) * Y.derivative_at_zero(a, {i}, true) -
                   Y.derivative_at_zero(i, {}) * X.derivative_at_zero(a, {i}, true);
        rep.check(lhs == RationalFunction(rhs), "curvature component " + std::to_string(a + 1));
    }
    return rep;
}

// Bianchi identities for the metric connections and closedness of the gauge
// characteristic forms.
inline IdentityReport verify_bianchi(std::uint32_t n, const LieAlgebra& g) {
    IdentityReport rep;
    MetricJetModel model(n);
    for (auto conn : {model.omega(), model.omega_hor()}) {
        auto curv = conn.curvature();
        auto b = curv.d() + conn.mul(curv) - curv.mul(conn);
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j)
                rep.check(b.e[i][j].is_zero(), "metric Bianchi entry (" + std::to_string(i + 1) +
                                                   "," + std::to_string(j + 1) + ")");
    }
    ConnectionJetModel cmodel(n, g);
    auto f = cmodel.curvature();
    // closedness of the quadratic characteristic form (sum of squares)
    JetForm quad(cmodel.context());
    for (auto& fa : f) quad += wedge(fa, fa);
    rep.check(quad.d().is_zero(), "d of the quadratic gauge characteristic form");
    return rep;
}

// d_c closedness of the equivariant characteristic forms (the metric p1-type
// form and the abelian quadratic gauge form)
inline IdentityReport verify_cartan(std::uint32_t n, std::uint32_t truncation = 3) {
    IdentityReport rep;
    {
        MetricJetModel model(n);
        FormalParameter par(model.context(), truncation, "vc.");
        auto eq = metric_equivariant_curvature(model, par);
        JetForm fg = char_form_traces({2}, eq.total());
        rep.check(cartan_d_metric(model, par, fg).is_zero(), "metric equivariant p1-type form");
    }
    {
        ConnectionJetModel model(n, LieAlgebra::abelian(1, "u1"));
        FormalParameter par(model.context(), truncation, "vg.", 1);
        auto eq = gauge_equivariant_curvature(model, par);
        JetForm fg = wedge(eq.f2[0], eq.f2[0]) - Rational(2) * (eq.f2[0] * eq.mu0[0]) +
                     JetForm(model.context(), eq.mu0[0] * eq.mu0[0]);
        rep.check(cartan_d_gauge(model, par, fg).is_zero(), "abelian gauge quadratic form");
    }
    return rep;
}

// ---- nu_sigma and psi_sigma --------------------------------------------------

// matrix of the linear map nu_sigma: parameter coefficients -> tangent
// coordinates at sigma (base directions plus jet directions up to the cutoff)
inline SparseMatrix nu_sigma_matrix(const MetricJetModel& model, const FormalParameter& par,
                                    std::uint32_t jet_cutoff) {
    const auto& ctx = model.context();
    const std::uint32_t n = model.n();
    auto pr = prolong(model.lift(par.base_components()));
    std::vector<Symbol> cols = par.all_symbols();
    std::map<Symbol, std::uint32_t> col_of;
    for (std::uint32_t c = 0; c < cols.size(); ++c) col_of[cols[c]] = c;

    std::vector<MultiPoly> rows;
    for (std::uint32_t i = 0; i < n; ++i) {
        RationalFunction v = model.at_normal_point(par.base_component(i));
        rows.push_back(v.as_polynomial());
    }
    for (std::uint32_t a = 0; a < ctx->fiber_dim(); ++a)
        for (std::uint32_t o = 0; o <= jet_cutoff; ++o)
            for (auto& J : mi_all(n, o)) {
                RationalFunction v = model.at_normal_point(pr.jet_coefficient(a, J));
                rows.push_back(v.as_polynomial());
            }

    SparseMatrix m(static_cast<std::uint32_t>(rows.size()),
                   static_cast<std::uint32_t>(cols.size()));
    for (std::uint32_t r = 0; r < rows.size(); ++r)
        for (auto& [mo, c] : rows[r].terms()) {
            if (mo.degree() != 1)
                throw std::logic_error("nu_sigma_matrix: coefficient not linear in the parameter");
            m.add_at(r, col_of.at(mo.factors()[0].first), c);
        }
    return m;
}

// evaluate every degree-k word of the target model against k parameters and
// solve for the cochain matching the given parameter polynomial
inline SuperElement reconstruct_cochain(const MultiPoly& value, std::uint32_t k,
                                        const std::vector<FormalParameter>& pars,
                                        const FormalVfModel& target) {
    auto words = target.algebra()->basis(k);
    std::vector<MultiPoly> pairings;
    pairings.reserve(words.size());
    for (auto& w : words) {
        std::vector<std::uint32_t> gens;
        for (auto& [g, e] : w.factors())
            for (std::uint32_t r = 0; r < e; ++r) gens.push_back(g);
        // det over the k parameters
        std::vector<std::uint32_t> perm(k);
        for (std::uint32_t i = 0; i < k; ++i) perm[i] = i;
        MultiPoly det;
        do {
            int sign = 1;
            for (std::uint32_t a = 0; a < k; ++a)
                for (std::uint32_t b = a + 1; b < k; ++b)
                    if (perm[a] > perm[b]) sign = -sign;
            MultiPoly prod = MultiPoly(Rational(sign));
            for (std::uint32_t a = 0; a < k && !prod.is_zero(); ++a) {
                auto info = target.gen_info(gens[a]);
                MultiPoly p = info.is_theta ? pars[perm[a]].pair_theta(info.index, info.J)
                                            : pars[perm[a]].pair_sigma(info.index, info.J);
                prod *= p;
            }
            det += prod;
        } while (std::next_permutation(perm.begin(), perm.end()));
        pairings.push_back(det);
    }

    std::map<Monomial, std::uint32_t, GrevlexGreater> mono_row;
    auto row_of = [&](const Monomial& mo) {
        auto it = mono_row.find(mo);
        if (it == mono_row.end())
            it = mono_row.emplace(mo, static_cast<std::uint32_t>(mono_row.size())).first;
        return it->second;
    };
    std::vector<std::tuple<std::uint32_t, std::uint32_t, Rational>> entries;
    for (std::uint32_t wcol = 0; wcol < pairings.size(); ++wcol)
        for (auto& [mo, c] : pairings[wcol].terms()) entries.emplace_back(row_of(mo), wcol, c);
    SparseVec rhs;
    for (auto& [mo, c] : value.terms()) rhs[row_of(mo)] = c;
    SparseMatrix m(static_cast<std::uint32_t>(mono_row.size()),
                   static_cast<std::uint32_t>(pairings.size()));
    for (auto& [r, c, v] : entries) m.add_at(r, c, v);
    auto x = solve(m, rhs);
    if (!x) throw std::logic_error("reconstruct_cochain: value outside the word-basis span");
    SuperElement out(target.algebra());
    for (auto& [col, c] : *x) out.add_term(words[col], c);
    return out;
}

// psi_sigma on forms with no connection slots (tensorial invariant forms):
// contract with the prolonged lifts, evaluate at sigma, expand in the
// Gelfand-Fuks word basis
inline SuperElement psi_sigma(const MetricJetModel& model, const JetForm& alpha, std::uint32_t k,
                              const std::vector<FormalParameter>& pars,
                              const FormalVfModel& target) {
    if (pars.size() != k) throw std::invalid_argument("psi_sigma: need k parameters");
    JetForm contracted = alpha;
    for (std::uint32_t m = 0; m < k; ++m)
        contracted = contract_pr(prolong(model.lift(pars[m].base_components())), contracted);
    JetForm at = model.at_normal_point(contracted);
    RationalFunction value_rf = at.terms().empty() ? RationalFunction()
                                                   : at.terms().begin()->second;
    if (k % 2) value_rf = -value_rf;
    if (!value_rf.is_polynomial())
        throw std::logic_error("psi_sigma: value not polynomial at sigma");
    return reconstruct_cochain(value_rf.numerator(), k, pars, target);
}

// Slot types for invariant words in the connection and its curvature: a
// symmetric connection slot eats one argument through the frame-corrected
// evaluation (iota omega_hor + Jacobian, symmetrized), a curvature slot eats
// an ordered pair.
enum class InvariantSlot { sym_connection, curvature };

// psi_sigma of tr(slot_1 ^ ... ^ slot_r) evaluated upstairs on the lifted
// arguments: shuffle-expanded over the argument distribution.
inline SuperElement psi_sigma_trace_word(const MetricJetModel& model,
                                         const std::vector<InvariantSlot>& slots,
                                         const std::vector<FormalParameter>& pars,
                                         const FormalVfModel& target) {
    const std::uint32_t n = model.n();
    std::uint32_t k = 0;
    for (auto s : slots) k += (s == InvariantSlot::sym_connection) ? 1 : 2;
    if (pars.size() != k) throw std::invalid_argument("psi_sigma_trace_word: need k parameters");

    std::vector<ProlongedField> lifts;
    lifts.reserve(k);
    for (auto& p : pars) lifts.push_back(prolong(model.lift(p.base_components())));

    MatrixOfForms omega_hor = model.omega_hor();
    MatrixOfForms curv = omega_hor.curvature();

    auto scalar0 = [&](const JetForm& f) {
        JetForm v = model.at_normal_point(f);
        return v.terms().empty() ? MultiPoly()
                                 : v.terms().begin()->second.as_polynomial();
    };
    // E(Y)^S entries at sigma
    auto sym_eval = [&](std::uint32_t arg) {
        std::vector<std::vector<MultiPoly>> e(n, std::vector<MultiPoly>(n));
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j) {
                MultiPoly eij = scalar0(contract_pr(lifts[arg], omega_hor.e[i][j])) +
                                pars[arg].derivative_at_zero(i, {j});
                e[i][j] = eij;
            }
        std::vector<std::vector<MultiPoly>> s(n, std::vector<MultiPoly>(n));
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j) {
                s[i][j] = (e[i][j] + e[j][i]) * Rational(1, 2);
            }
        return s;
    };
    auto curv_eval = [&](std::uint32_t arg1, std::uint32_t arg2) {
        std::vector<std::vector<MultiPoly>> c(n, std::vector<MultiPoly>(n));
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j)
                c[i][j] = scalar0(contract_pr(lifts[arg2], contract_pr(lifts[arg1], curv.e[i][j])));
        return c;
    };

    // shuffle expansion: distribute the ordered arguments 0..k-1 across the
    // slots, increasing within each slot block
    MultiPoly value;
    std::vector<std::uint32_t> perm(k);
    for (std::uint32_t i = 0; i < k; ++i) perm[i] = i;
    do {
        bool increasing = true;
        std::uint32_t pos = 0;
        for (auto s : slots) {
            std::uint32_t len = (s == InvariantSlot::sym_connection) ? 1 : 2;
            for (std::uint32_t t = 1; t < len; ++t)
                if (perm[pos + t - 1] > perm[pos + t]) increasing = false;
            pos += len;
        }
        if (!increasing) continue;
        int sign = 1;
        for (std::uint32_t a = 0; a < k; ++a)
            for (std::uint32_t b = a + 1; b < k; ++b)
                if (perm[a] > perm[b]) sign = -sign;
        // matrix product of the slot evaluations, then trace
        std::vector<std::vector<MultiPoly>> acc(n, std::vector<MultiPoly>(n));
        for (std::uint32_t i = 0; i < n; ++i) acc[i][i] = MultiPoly(1);
        pos = 0;
        for (auto s : slots) {
            std::vector<std::vector<MultiPoly>> mslot =
                (s == InvariantSlot::sym_connection) ? sym_eval(perm[pos])
                                                     : curv_eval(perm[pos], perm[pos + 1]);
            pos += (s == InvariantSlot::sym_connection) ? 1 : 2;
            std::vector<std::vector<MultiPoly>> next(n, std::vector<MultiPoly>(n));
            for (std::uint32_t i = 0; i < n; ++i)
                for (std::uint32_t j = 0; j < n; ++j)
                    for (std::uint32_t l = 0; l < n; ++l) next[i][j] += acc[i][l] * mslot[l][j];
            acc = std::move(next);
        }
        MultiPoly tr;
        for (std::uint32_t i = 0; i < n; ++i) tr += acc[i][i];
        value += Rational(sign) * tr;
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (k % 2) value = -value;
    return reconstruct_cochain(value, k, pars, target);
}

// psi_sigma(q(omega_hor^S, Omega_hor)) = q(theta^S, R) for the low-degree
// trace words at the given n
inline IdentityReport verify_prop14(std::uint32_t n) {
    IdentityReport rep;
    MetricJetModel model(n);
    const auto& ctx = model.context();
    FormalVfModel target(n, std::nullopt, 3);
    {
        std::vector<FormalParameter> pars = {FormalParameter(ctx, 3, "pa.")};
        auto psi = psi_sigma_trace_word(model, {InvariantSlot::sym_connection}, pars, target);
        SuperElement expect(target.algebra());
        for (std::uint32_t i = 0; i < n; ++i) expect += target.theta(i, {i});
        rep.check(psi == expect, "tr over the symmetric connection slot");
    }
    {
        std::vector<FormalParameter> pars = {FormalParameter(ctx, 3, "pb."),
                                             FormalParameter(ctx, 3, "pc.")};
        auto psi = psi_sigma_trace_word(model, {InvariantSlot::curvature}, pars, target);
        SuperElement expect(target.algebra());
        for (std::uint32_t i = 0; i < n; ++i) expect += target.curvature_R(i, i);
        rep.check(psi == expect, "tr over the curvature slot");
    }
    {
        std::vector<FormalParameter> pars = {FormalParameter(ctx, 3, "pd."),
                                             FormalParameter(ctx, 3, "pe."),
                                             FormalParameter(ctx, 3, "pf.")};
        auto psi = psi_sigma_trace_word(
            model, {InvariantSlot::sym_connection, InvariantSlot::curvature}, pars, target);
        SuperElement expect(target.algebra());
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j) {
                SuperElement ts = Rational(1, 2) * (target.theta(i, {j}) + target.theta(j, {i}));
                expect += ts * target.curvature_R(j, i);
            }
        rep.check(psi == expect, "mixed trace word tr(omega^S Omega)");
    }
    return rep;
}

}  // namespace jetvar
