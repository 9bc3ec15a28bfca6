#pragma once

#include "jetvar/multipoly.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace jetvar {

// Element of the fraction field of MultiPoly. The denominator is nonzero,
// scaled so its leading coefficient is 1. Exact cancellation is attempted by
// content reduction and trial exact division; no polynomial factorization.
class RationalFunction {
public:
    RationalFunction() : num_(0), den_(1) {}
    RationalFunction(const Rational& c) : num_(c), den_(1) {}
    RationalFunction(long c) : num_(c), den_(1) {}
    RationalFunction(MultiPoly p) : num_(std::move(p)), den_(1) {}
    RationalFunction(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw std::domain_error("RationalFunction: zero denominator");
        reduce();
    }

    static RationalFunction variable(Symbol v) { return RationalFunction(MultiPoly::variable(v)); }
    static RationalFunction variable(const std::string& name) {
        return RationalFunction(MultiPoly::variable(name));
    }

    const MultiPoly& numerator() const { return num_; }
    const MultiPoly& denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_ == MultiPoly(1); }
    const MultiPoly& as_polynomial() const {
        if (!is_polynomial()) throw std::logic_error("RationalFunction: not a polynomial");
        return num_;
    }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }

    RationalFunction operator-() const {
        RationalFunction r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        if (a.den_ == b.den_) return RationalFunction(a.num_ - b.num_, a.den_);
        return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        if (a.num_.is_zero() || b.num_.is_zero()) return RationalFunction();
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.num_.is_zero()) throw std::domain_error("RationalFunction: division by zero");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }

    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

    RationalFunction pow(std::uint32_t k) const {
        RationalFunction r(1);
        for (std::uint32_t i = 0; i < k; ++i) r *= *this;
        return r;
    }

    // Equality in the fraction field (cross multiplication).
    bool operator==(const RationalFunction& o) const {
        if (den_ == o.den_) return num_ == o.num_;
        return num_ * o.den_ == o.num_ * den_;
    }
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

    RationalFunction derivative(Symbol v) const {
        MultiPoly dn = num_.derivative(v);
        MultiPoly dd = den_.derivative(v);
        if (dd.is_zero()) return RationalFunction(dn, den_);
        return RationalFunction(dn * den_ - num_ * dd, den_ * den_);
    }

    RationalFunction substitute(const std::map<Symbol, MultiPoly>& assign) const {
        MultiPoly n = num_.substitute(assign);
        MultiPoly d = den_.substitute(assign);
        if (d.is_zero()) throw std::domain_error("RationalFunction: substitution gives zero denominator");
        return RationalFunction(std::move(n), std::move(d));
    }

    std::vector<Symbol> variables() const {
        auto v = num_.variables();
        auto w = den_.variables();
        v.insert(v.end(), w.begin(), w.end());
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }

    std::string str() const {
        if (is_polynomial()) return num_.str();
        std::string n = num_.term_count() > 1 ? "(" + num_.str() + ")" : num_.str();
        std::string d = den_.term_count() > 1 ? "(" + den_.str() + ")" : den_.str();
        return n + "/" + d;
    }

private:
    void reduce() {
        if (num_.is_zero()) {
            den_ = MultiPoly(1);
            return;
        }
        if (!den_.is_constant()) {
            if (auto q = num_.try_divide(den_)) {
                num_ = std::move(*q);
                den_ = MultiPoly(1);
            } else if (auto p = den_.try_divide(num_)) {
                // num/den = 1/(den/num)
                den_ = std::move(*p);
                num_ = MultiPoly(1);
            }
        }
        Rational lead = den_.leading_coefficient();
        if (!lead.is_one()) {
            Rational inv = lead.inverse();
            num_ *= inv;
            den_ *= inv;
        }
    }

    MultiPoly num_, den_;
};

inline std::ostream& operator<<(std::ostream& os, const RationalFunction& f) {
    return os << f.str();
}

}  // namespace jetvar
