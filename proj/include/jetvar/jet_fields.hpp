#pragma once

#include "jetvar/jet_form.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace jetvar {

// Vertical field with jet-space coefficients: Q^a d/dy^a.
struct EvolutionaryField {
    JetContextPtr ctx;
    std::vector<RationalFunction> q;
};

// f^i(x) d/dx^i + g^a(x, y) d/dy^a. Projectability (f depends on the base
// coordinates only) is enforced; g may depend on order-0 fiber coordinates.
struct ProjectableField {
    JetContextPtr ctx;
    std::vector<RationalFunction> f;
    std::vector<RationalFunction> g;

    ProjectableField(JetContextPtr c, std::vector<RationalFunction> fc,
                     std::vector<RationalFunction> gc)
        : ctx(std::move(c)), f(std::move(fc)), g(std::move(gc)) {
        if (f.size() != ctx->base_dim() || g.size() != ctx->fiber_dim())
            throw std::invalid_argument("ProjectableField: component count mismatch");
        for (auto& fi : f)
            for (Symbol v : fi.variables())
                if (ctx->jet_info(v))
                    throw std::invalid_argument(
                        "ProjectableField: base components must depend on x only");
        for (auto& ga : g)
            for (Symbol v : ga.variables()) {
                auto info = ctx->jet_info(v);
                if (info && !info->second.empty())
                    throw std::invalid_argument(
                        "ProjectableField: fiber components may use order-0 coordinates only");
            }
    }

    static ProjectableField zero(const JetContextPtr& ctx) {
        return ProjectableField(ctx,
                                std::vector<RationalFunction>(ctx->base_dim(), RationalFunction()),
                                std::vector<RationalFunction>(ctx->fiber_dim(), RationalFunction()));
    }
};

// ev X = (g^a - y^a_i f^i) d/dy^a
inline EvolutionaryField evolutionary_part(const ProjectableField& x) {
    EvolutionaryField ev;
    ev.ctx = x.ctx;
    for (std::uint32_t a = 0; a < x.ctx->fiber_dim(); ++a) {
        RationalFunction q = x.g[a];
        for (std::uint32_t i = 0; i < x.ctx->base_dim(); ++i)
            q -= x.f[i] * RationalFunction::variable(x.ctx->jet_symbol(a, {i}));
        ev.q.push_back(q);
    }
    return ev;
}

// Prolongation of a projectable (or evolutionary) field. The prolonged
// coefficient on y^a_J is D_J(Q^a) + f^i y^a_{J+i}; the pairing against a
// contact covector th^a_J is D_J(Q^a).
class ProlongedField {
public:
    explicit ProlongedField(const ProjectableField& x)
        : ctx_(x.ctx), f_(x.f), ev_(evolutionary_part(x)) {}
    explicit ProlongedField(const EvolutionaryField& q)
        : ctx_(q.ctx), f_(q.ctx->base_dim(), RationalFunction()), ev_(q) {}

    const JetContextPtr& context() const { return ctx_; }
    const std::vector<RationalFunction>& base_components() const { return f_; }

    RationalFunction contact_pairing(std::uint32_t a, const MultiIndex& j) const {
        std::lock_guard<std::mutex> lock(cache_->mu);
        auto key = std::make_pair(a, j);
        auto it = cache_->memo.find(key);
        if (it != cache_->memo.end()) return it->second;
        RationalFunction v = ctx_->total_derivative(ev_.q[a], j);
        cache_->memo.emplace(key, v);
        return v;
    }

    // coefficient of the prolonged field on the coordinate vector d/dy^a_J
    RationalFunction jet_coefficient(std::uint32_t a, const MultiIndex& j) const {
        RationalFunction v = contact_pairing(a, j);
        for (std::uint32_t i = 0; i < ctx_->base_dim(); ++i)
            v += f_[i] * RationalFunction::variable(ctx_->jet_symbol(a, mi_plus(j, i)));
        return v;
    }

    RationalFunction pair_covector(const Covector& cv) const {
        if (!cv.contact) return f_[cv.idx];
        return contact_pairing(cv.idx, cv.J);
    }

    // action as a derivation on jet functions
    RationalFunction apply(const RationalFunction& h) const {
        RationalFunction out;
        for (std::uint32_t i = 0; i < ctx_->base_dim(); ++i) {
            if (f_[i].is_zero()) continue;
            RationalFunction dh = h.derivative(ctx_->base_symbol(i));
            if (!dh.is_zero()) out += f_[i] * dh;
        }
        for (Symbol v : h.variables()) {
            auto info = ctx_->jet_info(v);
            if (!info) continue;
            RationalFunction dh = h.derivative(v);
            if (dh.is_zero()) continue;
            out += jet_coefficient(info->first, info->second) * dh;
        }
        return out;
    }

private:
    struct Cache {
        std::mutex mu;
        std::map<std::pair<std::uint32_t, MultiIndex>, RationalFunction> memo;
    };

    JetContextPtr ctx_;
    std::vector<RationalFunction> f_;
    EvolutionaryField ev_;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

inline ProlongedField prolong(const ProjectableField& x) { return ProlongedField(x); }
inline ProlongedField prolong(const EvolutionaryField& q) { return ProlongedField(q); }

inline JetForm contract_pr(const ProlongedField& x, const JetForm& a) {
    return a.contract([&](const Covector& cv) { return x.pair_covector(cv); });
}

// Cartan formula along the prolongation
inline JetForm lie_derivative_pr(const ProlongedField& x, const JetForm& a) {
    return contract_pr(x, a.d()) + contract_pr(x, a).d();
}

// bracket of projectable fields
inline ProjectableField field_bracket(const ProjectableField& x, const ProjectableField& y) {
    const auto& ctx = x.ctx;
    auto act0 = [&](const ProjectableField& v, const RationalFunction& h) {
        RationalFunction out;
        for (std::uint32_t i = 0; i < ctx->base_dim(); ++i) {
            RationalFunction dh = h.derivative(ctx->base_symbol(i));
            if (!dh.is_zero()) out += v.f[i] * dh;
        }
        for (std::uint32_t a = 0; a < ctx->fiber_dim(); ++a) {
            RationalFunction dh = h.derivative(ctx->jet_symbol(a, {}));
            if (!dh.is_zero()) out += v.g[a] * dh;
        }
        return out;
    };
    std::vector<RationalFunction> f, g;
    for (std::uint32_t i = 0; i < ctx->base_dim(); ++i)
        f.push_back(act0(x, y.f[i]) - act0(y, x.f[i]));
    for (std::uint32_t a = 0; a < ctx->fiber_dim(); ++a)
        g.push_back(act0(x, y.g[a]) - act0(y, x.g[a]));
    return ProjectableField(ctx, std::move(f), std::move(g));
}

// necessary condition for weak invariance: the Euler-Lagrange form of the
// Lie derivative vanishes
inline bool weak_invariance_check(const JetForm& lambda, const ProjectableField& x) {
    JetForm lie = lie_derivative_pr(prolong(x), lambda);
    const std::uint32_t n = lambda.context()->base_dim();
    if (!lie.is_homogeneous_bidegree(n, 0))
        throw std::logic_error("weak_invariance_check: Lie derivative left bidegree (n, 0)");
    return euler_lagrange(lie).is_zero();
}

}  // namespace jetvar
