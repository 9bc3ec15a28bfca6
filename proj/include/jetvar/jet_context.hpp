#pragma once

#include "jetvar/multiindex.hpp"
#include "jetvar/multipoly.hpp"
#include "jetvar/ratfunc.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetvar {

// Local coordinates on an infinite jet bundle: base coordinates x^1..x^n and
// fiber coordinates with all their symmetric jet prolongations. Jet symbols
// are interned on demand (the order grows as total derivatives are taken);
// everything else is immutable.
class JetContext {
public:
    JetContext(std::uint32_t n, std::vector<std::string> fiber_names, std::string base_prefix = "x")
        : n_(n), fibers_(std::move(fiber_names)), base_prefix_(std::move(base_prefix)) {
        if (n_ < 1 || fibers_.empty())
            throw std::invalid_argument("JetContext: need at least one base and fiber coordinate");
        for (std::uint32_t i = 0; i < n_; ++i)
            base_.push_back(sym(base_prefix_ + std::to_string(i + 1)));
        for (std::uint32_t a = 0; a < fibers_.size(); ++a) intern_jet(a, {});
    }

    static std::shared_ptr<JetContext> trivial_bundle(std::uint32_t n, std::uint32_t m) {
        std::vector<std::string> names;
        for (std::uint32_t a = 1; a <= m; ++a) names.push_back("u" + std::to_string(a));
        return std::make_shared<JetContext>(n, std::move(names));
    }

    std::uint32_t base_dim() const { return n_; }
    std::uint32_t fiber_dim() const { return static_cast<std::uint32_t>(fibers_.size()); }
    const std::string& fiber_name(std::uint32_t a) const { return fibers_.at(a); }

    Symbol base_symbol(std::uint32_t i) const { return base_.at(i); }
    std::optional<std::uint32_t> base_index(Symbol s) const {
        for (std::uint32_t i = 0; i < n_; ++i)
            if (base_[i] == s) return i;
        return std::nullopt;
    }

    Symbol jet_symbol(std::uint32_t a, const MultiIndex& j) const { return intern_jet(a, j); }

    std::optional<std::pair<std::uint32_t, MultiIndex>> jet_info(Symbol s) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = reverse_.find(s);
        if (it == reverse_.end()) return std::nullopt;
        return it->second;
    }

    std::uint32_t current_max_order() const {
        std::lock_guard<std::mutex> lock(mu_);
        return max_order_;
    }

    MultiPoly base_var(std::uint32_t i) const { return MultiPoly::variable(base_symbol(i)); }
    MultiPoly jet_var(std::uint32_t a, const MultiIndex& j = {}) const {
        return MultiPoly::variable(jet_symbol(a, j));
    }

    // total derivative d/dx^i: cuts through base and jet symbols, treats any
    // other symbol (formal parameters) as constant
    MultiPoly total_derivative(const MultiPoly& p, std::uint32_t i) const {
        MultiPoly out = p.derivative(base_symbol(i));
        for (Symbol v : p.variables()) {
            auto info = jet_info(v);
            if (!info) continue;
            MultiPoly dp = p.derivative(v);
            if (dp.is_zero()) continue;
            out += MultiPoly::variable(jet_symbol(info->first, mi_plus(info->second, i))) * dp;
        }
        return out;
    }

    RationalFunction total_derivative(const RationalFunction& f, std::uint32_t i) const {
        MultiPoly dn = total_derivative(f.numerator(), i);
        MultiPoly dd = total_derivative(f.denominator(), i);
        if (dd.is_zero()) return RationalFunction(dn, f.denominator());
        return RationalFunction(dn * f.denominator() - f.numerator() * dd,
                                f.denominator() * f.denominator());
    }

    RationalFunction total_derivative(const RationalFunction& f, const MultiIndex& j) const {
        RationalFunction out = f;
        for (auto i : j) out = total_derivative(out, i);
        return out;
    }

private:
    Symbol intern_jet(std::uint32_t a, const MultiIndex& j) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(a, j);
        auto it = forward_.find(key);
        if (it != forward_.end()) return it->second;
        std::string name = fibers_.at(a);
        if (!j.empty()) name += "_" + mi_str(j);
        Symbol s = sym(name);
        forward_.emplace(key, s);
        reverse_.emplace(s, key);
        max_order_ = std::max<std::uint32_t>(max_order_, static_cast<std::uint32_t>(j.size()));
        return s;
    }

    std::uint32_t n_;
    std::vector<std::string> fibers_;
    std::string base_prefix_;
    std::vector<Symbol> base_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<std::uint32_t, MultiIndex>, Symbol> forward_;
    mutable std::map<Symbol, std::pair<std::uint32_t, MultiIndex>> reverse_;
    mutable std::uint32_t max_order_ = 0;
};

using JetContextPtr = std::shared_ptr<JetContext>;

}  // namespace jetvar
