#pragma once

#include "jetvar/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetvar {

using Symbol = std::uint32_t;

// Process-wide interning table for polynomial variables. Append-only; the
// creation order of symbols is the global variable order used by the
// graded-reverse-lexicographic term order, so printing is deterministic for
// a deterministic program run.
class SymbolTable {
public:
    static SymbolTable& instance() {
        static SymbolTable t;
        return t;
    }

    Symbol intern(const std::string& name) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        Symbol id = static_cast<Symbol>(names_.size());
        names_.push_back(name);
        index_.emplace(name, id);
        return id;
    }

    std::string name(Symbol s) const {
        std::lock_guard<std::mutex> lock(mu_);
        return names_.at(s);
    }

    std::optional<Symbol> lookup(const std::string& name) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

private:
    SymbolTable() = default;
    mutable std::mutex mu_;
    std::vector<std::string> names_;
    std::map<std::string, Symbol> index_;
};

inline Symbol sym(const std::string& name) { return SymbolTable::instance().intern(name); }
inline std::string sym_name(Symbol s) { return SymbolTable::instance().name(s); }

// Sparse monomial: (variable, exponent) pairs sorted by variable id,
// exponents strictly positive.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(Symbol v, std::uint32_t e = 1) {
        if (e > 0) vars_.emplace_back(v, e);
    }

    static Monomial one() { return Monomial(); }

    bool is_one() const { return vars_.empty(); }
    std::uint64_t degree() const {
        std::uint64_t d = 0;
        for (auto& [v, e] : vars_) d += e;
        return d;
    }

    std::uint32_t exponent(Symbol v) const {
        for (auto& [w, e] : vars_)
            if (w == v) return e;
        return 0;
    }

    const std::vector<std::pair<Symbol, std::uint32_t>>& factors() const { return vars_; }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        r.vars_.reserve(vars_.size() + o.vars_.size());
        auto a = vars_.begin();
        auto b = o.vars_.begin();
        while (a != vars_.end() || b != o.vars_.end()) {
            if (b == o.vars_.end() || (a != vars_.end() && a->first < b->first))
                r.vars_.push_back(*a++);
            else if (a == vars_.end() || b->first < a->first)
                r.vars_.push_back(*b++);
            else {
                r.vars_.emplace_back(a->first, a->second + b->second);
                ++a;
                ++b;
            }
        }
        return r;
    }

    // Exact monomial quotient, or nullopt if some exponent would go negative.
    std::optional<Monomial> divide(const Monomial& o) const {
        Monomial r;
        auto a = vars_.begin();
        for (auto& [v, e] : o.vars_) {
            while (a != vars_.end() && a->first < v) r.vars_.push_back(*a++);
            if (a == vars_.end() || a->first != v || a->second < e) return std::nullopt;
            if (a->second > e) r.vars_.emplace_back(v, a->second - e);
            ++a;
        }
        while (a != vars_.end()) r.vars_.push_back(*a++);
        return r;
    }

    bool operator==(const Monomial& o) const { return vars_ == o.vars_; }

    // Graded reverse-lexicographic order: higher total degree first; ties
    // broken by the smallest exponent on the latest variable.
    static int cmp_grevlex(const Monomial& a, const Monomial& b) {
        std::uint64_t da = a.degree(), db = b.degree();
        if (da != db) return da < db ? -1 : 1;
        auto ia = a.vars_.rbegin();
        auto ib = b.vars_.rbegin();
        while (ia != a.vars_.rend() || ib != b.vars_.rend()) {
            Symbol va = ia != a.vars_.rend() ? ia->first : 0;
            Symbol vb = ib != b.vars_.rend() ? ib->first : 0;
            if (ia == a.vars_.rend()) return 1;   // a has 0 exponent on vb: a "greater"
            if (ib == b.vars_.rend()) return -1;
            if (va != vb) {
                // later variable present means a nonzero exponent where the
                // other has zero; the one with nonzero exponent is smaller
                return va > vb ? -1 : 1;
            }
            if (ia->second != ib->second) return ia->second > ib->second ? -1 : 1;
            ++ia;
            ++ib;
        }
        return 0;
    }

    std::string str() const {
        if (vars_.empty()) return "1";
        std::ostringstream os;
        bool first = true;
        for (auto& [v, e] : vars_) {
            if (!first) os << "*";
            first = false;
            os << sym_name(v);
            if (e > 1) os << "**" << e;
        }
        return os.str();
    }

private:
    std::vector<std::pair<Symbol, std::uint32_t>> vars_;
};

struct GrevlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return Monomial::cmp_grevlex(a, b) > 0;
    }
};

// Multivariate polynomial over Rational. Terms held in descending grevlex
// order (leading term first); zero coefficients never stored.
class MultiPoly {
public:
    using TermMap = std::map<Monomial, Rational, GrevlexGreater>;

    MultiPoly() = default;
    MultiPoly(const Rational& c) {
        if (!c.is_zero()) terms_.emplace(Monomial::one(), c);
    }
    MultiPoly(long c) : MultiPoly(Rational(c)) {}

    static MultiPoly variable(Symbol v) {
        MultiPoly p;
        p.terms_.emplace(Monomial(v), Rational(1));
        return p;
    }
    static MultiPoly variable(const std::string& name) { return variable(sym(name)); }
    static MultiPoly term(const Monomial& m, const Rational& c) {
        MultiPoly p;
        if (!c.is_zero()) p.terms_.emplace(m, c);
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
    }
    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (!is_constant()) throw std::logic_error("MultiPoly: not a constant");
        return terms_.begin()->second;
    }

    std::uint64_t total_degree() const {
        std::uint64_t d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    const Monomial& leading_monomial() const {
        if (terms_.empty()) throw std::logic_error("MultiPoly: leading term of zero");
        return terms_.begin()->first;
    }
    const Rational& leading_coefficient() const {
        if (terms_.empty()) throw std::logic_error("MultiPoly: leading term of zero");
        return terms_.begin()->second;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    MultiPoly operator-() const {
        MultiPoly r;
        for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r;
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

    MultiPoly& operator*=(const Rational& c) {
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, v] : terms_) v *= c;
        return *this;
    }
    friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
    friend MultiPoly operator*(const Rational& c, MultiPoly a) { return a *= c; }

    MultiPoly pow(std::uint32_t k) const {
        MultiPoly r(1);
        for (std::uint32_t i = 0; i < k; ++i) r *= *this;
        return r;
    }

    bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    MultiPoly derivative(Symbol v) const {
        MultiPoly r;
        for (auto& [m, c] : terms_) {
            std::uint32_t e = m.exponent(v);
            if (e == 0) continue;
            auto q = m.divide(Monomial(v));
            r.add_term(*q, c * Rational(static_cast<long>(e)));
        }
        return r;
    }

    // Simultaneous substitution of polynomials for variables.
    MultiPoly substitute(const std::map<Symbol, MultiPoly>& assign) const {
        MultiPoly r;
        for (auto& [m, c] : terms_) {
            MultiPoly t(c);
            for (auto& [v, e] : m.factors()) {
                auto it = assign.find(v);
                if (it == assign.end()) {
                    t *= MultiPoly::variable(v).pow(e);
                } else {
                    t *= it->second.pow(e);
                }
            }
            r += t;
        }
        return r;
    }

    // All variables that occur with nonzero exponent.
    std::vector<Symbol> variables() const {
        std::vector<Symbol> out;
        for (auto& [m, c] : terms_)
            for (auto& [v, e] : m.factors()) out.push_back(v);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // Positive rational c with (1/c)*this integer-coefficient and content 1.
    Rational content() const {
        if (terms_.empty()) return Rational(1);
        mpz_class num_gcd = 0, den_lcm = 1;
        for (auto& [m, c] : terms_) {
            mpz_class n;
            mpz_gcd(n.get_mpz_t(), num_gcd.get_mpz_t(), c.numerator().get_mpz_t());
            num_gcd = n;
            mpz_class l;
            mpz_lcm(l.get_mpz_t(), den_lcm.get_mpz_t(), c.denominator().get_mpz_t());
            den_lcm = l;
        }
        return Rational(mpq_class(num_gcd, den_lcm));
    }

    // Exact polynomial quotient if divisible.
    std::optional<MultiPoly> try_divide(const MultiPoly& b) const {
        if (b.is_zero()) throw std::domain_error("MultiPoly: division by zero");
        MultiPoly q, r = *this;
        const Monomial& lb = b.leading_monomial();
        const Rational& cb = b.leading_coefficient();
        while (!r.is_zero()) {
            auto m = r.leading_monomial().divide(lb);
            if (!m) return std::nullopt;
            Rational c = r.leading_coefficient() / cb;
            MultiPoly t = MultiPoly::term(*m, c);
            q += t;
            r -= t * b;
        }
        return q;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [m, c] : terms_) {
            Rational a = c;
            if (first) {
                if (a.sign() < 0) {
                    os << "-";
                    a = -a;
                }
            } else {
                os << (a.sign() < 0 ? " - " : " + ");
                if (a.sign() < 0) a = -a;
            }
            first = false;
            if (m.is_one())
                os << a.str();
            else if (a.is_one())
                os << m.str();
            else
                os << a.str() << "*" << m.str();
        }
        return os.str();
    }

private:
    TermMap terms_;
};

inline std::ostream& operator<<(std::ostream& os, const MultiPoly& p) { return os << p.str(); }

}  // namespace jetvar
