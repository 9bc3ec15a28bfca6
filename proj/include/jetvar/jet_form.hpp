#pragma once

#include "jetvar/jet_context.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetvar {

// Basis covector on the jet space: a contact form th^a_J = dy^a_J -
// y^a_{J+i} dx^i, or a horizontal dx^i. Contact covectors order before
// horizontal ones so functional forms print as th ^ volume.
struct Covector {
    bool contact = true;
    std::uint32_t idx = 0;  // fiber index a, or base index i
    MultiIndex J;           // empty for dx

    static Covector dx(std::uint32_t i) { return {false, i, {}}; }
    static Covector theta(std::uint32_t a, MultiIndex j = {}) { return {true, a, std::move(j)}; }

    friend bool operator==(const Covector& a, const Covector& b) {
        return a.contact == b.contact && a.idx == b.idx && a.J == b.J;
    }
    friend bool operator<(const Covector& a, const Covector& b) {
        if (a.contact != b.contact) return a.contact;  // contact first
        if (a.contact) {
            if (a.idx != b.idx) return a.idx < b.idx;
            if (a.J.size() != b.J.size()) return a.J.size() < b.J.size();
            return a.J < b.J;
        }
        return a.idx < b.idx;
    }
};

using WedgeWord = std::vector<Covector>;  // strictly increasing

// merge with Koszul sign; all covectors are odd. Returns sign 0 on repeats.
inline std::pair<WedgeWord, int> merge_words(const WedgeWord& a, const WedgeWord& b) {
    WedgeWord out;
    out.reserve(a.size() + b.size());
    std::size_t ia = 0, ib = 0;
    int sign = 1;
    while (ia < a.size() || ib < b.size()) {
        if (ib == b.size() || (ia < a.size() && a[ia] < b[ib])) {
            out.push_back(a[ia++]);
        } else if (ia < a.size() && a[ia] == b[ib]) {
            return {WedgeWord{}, 0};
        } else {
            if ((a.size() - ia) % 2) sign = -sign;
            out.push_back(b[ib++]);
        }
    }
    return {out, sign};
}

class JetForm {
public:
    JetForm() = default;
    explicit JetForm(JetContextPtr ctx) : ctx_(std::move(ctx)) {}
    JetForm(JetContextPtr ctx, const RationalFunction& coeff) : ctx_(std::move(ctx)) {
        add_term({}, coeff);
    }
    JetForm(JetContextPtr ctx, const Covector& c, const RationalFunction& coeff = RationalFunction(1))
        : ctx_(std::move(ctx)) {
        add_term({c}, coeff);
    }

    static JetForm dx(const JetContextPtr& ctx, std::uint32_t i) {
        return JetForm(ctx, Covector::dx(i));
    }
    static JetForm theta(const JetContextPtr& ctx, std::uint32_t a, MultiIndex j = {}) {
        return JetForm(ctx, Covector::theta(a, std::move(j)));
    }
    // dy^a_J = th^a_J + y^a_{J+i} dx^i
    static JetForm dy(const JetContextPtr& ctx, std::uint32_t a, const MultiIndex& j = {}) {
        JetForm out = theta(ctx, a, j);
        for (std::uint32_t i = 0; i < ctx->base_dim(); ++i)
            out.add_term({Covector::dx(i)}, RationalFunction::variable(ctx->jet_symbol(a, mi_plus(j, i))));
        return out;
    }
    static JetForm volume(const JetContextPtr& ctx) {
        WedgeWord w;
        for (std::uint32_t i = 0; i < ctx->base_dim(); ++i) w.push_back(Covector::dx(i));
        JetForm out(ctx);
        out.add_term(w, RationalFunction(1));
        return out;
    }

    const JetContextPtr& context() const { return ctx_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<WedgeWord, RationalFunction>& terms() const { return terms_; }

    void add_term(const WedgeWord& w, const RationalFunction& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(w, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    JetForm operator-() const {
        JetForm r(ctx_);
        for (auto& [w, c] : terms_) r.terms_.emplace(w, -c);
        return r;
    }
    JetForm& operator+=(const JetForm& o) {
        merge_ctx(o);
        for (auto& [w, c] : o.terms_) add_term(w, c);
        return *this;
    }
    JetForm& operator-=(const JetForm& o) {
        merge_ctx(o);
        for (auto& [w, c] : o.terms_) add_term(w, -c);
        return *this;
    }
    friend JetForm operator+(JetForm a, const JetForm& b) { return a += b; }
    friend JetForm operator-(JetForm a, const JetForm& b) { return a -= b; }

    JetForm& operator*=(const RationalFunction& c) {
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        JetForm r(ctx_);
        for (auto& [w, v] : terms_) r.add_term(w, v * c);
        return *this = r;
    }
    friend JetForm operator*(JetForm a, const RationalFunction& c) { return a *= c; }
    friend JetForm operator*(const RationalFunction& c, JetForm a) { return a *= c; }
    friend JetForm operator*(JetForm a, const Rational& c) { return a *= RationalFunction(c); }
    friend JetForm operator*(const Rational& c, JetForm a) { return a *= RationalFunction(c); }

    friend JetForm wedge(const JetForm& a, const JetForm& b) {
        JetForm r(a.ctx_ ? a.ctx_ : b.ctx_);
        for (auto& [wa, ca] : a.terms_)
            for (auto& [wb, cb] : b.terms_) {
                auto [w, sign] = merge_words(wa, wb);
                if (sign == 0) continue;
                r.add_term(w, ca * cb * RationalFunction(Rational(sign)));
            }
        return r;
    }
    friend JetForm operator^(const JetForm& a, const JetForm& b) { return wedge(a, b); }

    bool operator==(const JetForm& o) const {
        if (is_zero()) return o.is_zero();
        if (o.is_zero()) return false;
        return terms_ == o.terms_;
    }
    bool operator!=(const JetForm& o) const { return !(*this == o); }

    // (horizontal, contact) bidegree of a word
    static std::pair<std::uint32_t, std::uint32_t> word_bidegree(const WedgeWord& w) {
        std::uint32_t p = 0, q = 0;
        for (auto& c : w) (c.contact ? q : p)++;
        return {p, q};
    }

    std::map<std::pair<std::uint32_t, std::uint32_t>, JetForm> bigrade() const {
        std::map<std::pair<std::uint32_t, std::uint32_t>, JetForm> out;
        for (auto& [w, c] : terms_) {
            auto key = word_bidegree(w);
            auto it = out.find(key);
            if (it == out.end()) it = out.emplace(key, JetForm(ctx_)).first;
            it->second.add_term(w, c);
        }
        return out;
    }

    JetForm component(std::uint32_t p, std::uint32_t q) const {
        JetForm out(ctx_);
        for (auto& [w, c] : terms_)
            if (word_bidegree(w) == std::make_pair(p, q)) out.add_term(w, c);
        return out;
    }

    bool is_homogeneous_bidegree(std::uint32_t p, std::uint32_t q) const {
        for (auto& [w, c] : terms_)
            if (word_bidegree(w) != std::make_pair(p, q)) return false;
        return true;
    }

    std::optional<std::uint32_t> total_degree() const {
        std::optional<std::uint32_t> d;
        for (auto& [w, c] : terms_) {
            std::uint32_t k = static_cast<std::uint32_t>(w.size());
            if (!d) d = k;
            else if (*d != k)
                return std::nullopt;
        }
        return d;
    }

    // horizontal differential
    JetForm d_h() const {
        JetForm out(ctx_);
        for (auto& [w, F] : terms_) {
            // coefficient part: D_i F dx^i ^ w
            for (std::uint32_t i = 0; i < ctx_->base_dim(); ++i) {
                RationalFunction df = ctx_->total_derivative(F, i);
                if (df.is_zero()) continue;
                auto [mw, sign] = merge_words({Covector::dx(i)}, w);
                if (sign) out.add_term(mw, df * RationalFunction(Rational(sign)));
            }
            // covector part: d_H th^a_J = dx^i ^ th^a_{J+i}
            for (std::size_t j = 0; j < w.size(); ++j) {
                if (!w[j].contact) continue;
                int opsign = (j % 2) ? -1 : 1;
                WedgeWord prefix(w.begin(), w.begin() + j);
                WedgeWord suffix(w.begin() + j + 1, w.end());
                for (std::uint32_t i = 0; i < ctx_->base_dim(); ++i) {
                    WedgeWord img{Covector::dx(i), Covector::theta(w[j].idx, mi_plus(w[j].J, i))};
                    // dx > theta in the order, so the pair needs normalizing
                    auto [img_sorted, s0] = merge_words({img[0]}, {img[1]});
                    auto [w1, s1] = merge_words(prefix, img_sorted);
                    if (!s1) continue;
                    auto [w2, s2] = merge_words(w1, suffix);
                    if (!s2) continue;
                    out.add_term(w2, F * RationalFunction(Rational(opsign * s0 * s1 * s2)));
                }
            }
        }
        return out;
    }

    // vertical differential: hits coefficients only
    JetForm d_v() const {
        JetForm out(ctx_);
        for (auto& [w, F] : terms_) {
            for (Symbol v : F.variables()) {
                auto info = ctx_->jet_info(v);
                if (!info) continue;
                RationalFunction df = F.derivative(v);
                if (df.is_zero()) continue;
                auto [mw, sign] = merge_words({Covector::theta(info->first, info->second)}, w);
                if (sign) out.add_term(mw, df * RationalFunction(Rational(sign)));
            }
        }
        return out;
    }

    JetForm d() const { return d_h() + d_v(); }

    // total derivative along x^i, as an even derivation on forms
    JetForm total_derivative(std::uint32_t i) const {
        JetForm out(ctx_);
        for (auto& [w, F] : terms_) {
            RationalFunction df = ctx_->total_derivative(F, i);
            if (!df.is_zero()) out.add_term(w, df);
            for (std::size_t j = 0; j < w.size(); ++j) {
                if (!w[j].contact) continue;
                WedgeWord prefix(w.begin(), w.begin() + j);
                WedgeWord suffix(w.begin() + j + 1, w.end());
                auto [w1, s1] = merge_words(prefix, {Covector::theta(w[j].idx, mi_plus(w[j].J, i))});
                if (!s1) continue;
                auto [w2, s2] = merge_words(w1, suffix);
                if (!s2) continue;
                out.add_term(w2, F * RationalFunction(Rational(s1 * s2)));
            }
        }
        return out;
    }

    // interior product against a pairing of basis covectors with a field
    JetForm contract(const std::function<RationalFunction(const Covector&)>& pair) const {
        JetForm out(ctx_);
        for (auto& [w, F] : terms_) {
            for (std::size_t j = 0; j < w.size(); ++j) {
                RationalFunction p = pair(w[j]);
                if (p.is_zero()) continue;
                int sign = (j % 2) ? -1 : 1;
                WedgeWord rest;
                rest.reserve(w.size() - 1);
                for (std::size_t r = 0; r < w.size(); ++r)
                    if (r != j) rest.push_back(w[r]);
                out.add_term(rest, F * p * RationalFunction(Rational(sign)));
            }
        }
        return out;
    }

    // apply a map to every coefficient (substitution, evaluation at a point)
    JetForm map_coefficients(const std::function<RationalFunction(const RationalFunction&)>& fn) const {
        JetForm out(ctx_);
        for (auto& [w, c] : terms_) out.add_term(w, fn(c));
        return out;
    }

    // pullback along a section: substitute jet coordinates, kill contact forms
    JetForm pullback_section(const std::map<Symbol, MultiPoly>& section_values) const {
        JetForm out(ctx_);
        for (auto& [w, c] : terms_) {
            bool has_contact = false;
            for (auto& cv : w)
                if (cv.contact) has_contact = true;
            if (has_contact) continue;
            out.add_term(w, c.substitute(section_values));
        }
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [w, c] : terms_) {
            std::string cs = coeff_str(c);
            bool neg = !cs.empty() && cs[0] == '-';
            std::string mag = neg ? cs.substr(1) : cs;
            std::string ws;
            for (auto& cv : w) {
                if (!ws.empty()) ws += " ^ ";
                ws += covector_str(cv);
            }
            std::string body;
            if (ws.empty())
                body = mag;
            else if (mag == "1")
                body = ws;
            else
                body = mag + " " + ws;
            if (first)
                os << (neg ? "-" : "") << body;
            else
                os << (neg ? " - " : " + ") << body;
            first = false;
        }
        return os.str();
    }

    std::string covector_str(const Covector& cv) const {
        if (!cv.contact) return "d(" + base_name(cv.idx) + ")";
        std::string jet = ctx_->fiber_name(cv.idx);
        if (!cv.J.empty()) jet += "_" + mi_str(cv.J);
        return "th(" + jet + ")";
    }

private:
    std::string base_name(std::uint32_t i) const { return sym_name(ctx_->base_symbol(i)); }

    static std::string coeff_str(const RationalFunction& c) {
        bool wrap = c.numerator().term_count() > 1 && c.is_polynomial();
        std::string s = c.str();
        if (wrap) s = "(" + s + ")";
        return s;
    }

    void merge_ctx(const JetForm& o) {
        if (!ctx_) ctx_ = o.ctx_;
        else if (o.ctx_ && o.ctx_ != ctx_)
            throw std::invalid_argument("JetForm: operands from different jet contexts");
    }

    JetContextPtr ctx_;
    std::map<WedgeWord, RationalFunction> terms_;
};

// 1/k * sum_a th^a ^ sum_J (-D)_J (contraction of d/dy^a_J), the interior
// Euler operator on (n, k) forms.
inline JetForm interior_euler(const JetForm& a, std::uint32_t k) {
    const auto& ctx = a.context();
    if (k < 1) throw std::invalid_argument("interior_euler: contact degree must be >= 1");
    const std::uint32_t n = ctx->base_dim();
    for (auto& [w, c] : a.terms())
        if (JetForm::word_bidegree(w) != std::make_pair(n, k))
            throw std::invalid_argument("interior_euler: form is not of bidegree (n, k)");

    // contact coordinates present per fiber index
    std::map<std::uint32_t, std::set<MultiIndex>> present;
    for (auto& [w, c] : a.terms())
        for (auto& cv : w)
            if (cv.contact) present[cv.idx].insert(cv.J);

    JetForm total(ctx);
    for (auto& [alpha, js] : present) {
        JetForm e_alpha(ctx);
        for (auto& J : js) {
            auto pairing = [&](const Covector& cv) {
                if (cv.contact && cv.idx == alpha && cv.J == J) return RationalFunction(1);
                return RationalFunction(0);
            };
            JetForm piece = a.contract(pairing);
            for (auto i : J) piece = piece.total_derivative(i);
            if (J.size() % 2) piece = -piece;
            e_alpha += piece;
        }
        total += wedge(JetForm::theta(ctx, alpha), e_alpha);
    }
    return total * RationalFunction(Rational(1, static_cast<long>(k)));
}

// delta_V on a horizontal top-degree lagrangian: the Euler-Lagrange source form
inline JetForm euler_lagrange(const JetForm& lambda) {
    const auto& ctx = lambda.context();
    const std::uint32_t n = ctx->base_dim();
    if (!lambda.is_homogeneous_bidegree(n, 0))
        throw std::invalid_argument("euler_lagrange: lagrangian must have bidegree (n, 0)");
    return interior_euler(lambda.d_v(), 1);
}

// delta_V on a source form: the Helmholtz obstruction, zero iff locally variational
inline JetForm helmholtz(const JetForm& source) {
    const auto& ctx = source.context();
    const std::uint32_t n = ctx->base_dim();
    if (!source.is_homogeneous_bidegree(n, 1))
        throw std::invalid_argument("helmholtz: source form must have bidegree (n, 1)");
    if (interior_euler(source, 1) != source)
        throw std::invalid_argument("helmholtz: input is not a functional form");
    return interior_euler(source.d_v(), 2);
}

// S[alpha] = S[beta] iff I((alpha - beta)_{n,k}) = 0
inline bool functional_equiv(const JetForm& a, const JetForm& b, std::uint32_t k) {
    if (k < 1) throw std::invalid_argument("functional_equiv: k must be >= 1");
    const auto& ctx = a.context() ? a.context() : b.context();
    const std::uint32_t n = ctx->base_dim();
    auto da = a.total_degree(), db = b.total_degree();
    if (da && *da != n + k) throw std::invalid_argument("functional_equiv: degree mismatch");
    if (db && *db != n + k) throw std::invalid_argument("functional_equiv: degree mismatch");
    JetForm diff = (a - b).component(n, k);
    if (diff.is_zero()) return true;
    return interior_euler(diff, k).is_zero();
}

}  // namespace jetvar
