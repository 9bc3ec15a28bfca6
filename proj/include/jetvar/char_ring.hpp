#pragma once

#include "jetvar/multipoly.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetvar {

// Presentation of an invariant-polynomial ring: SO(n) with Pontryagin
// generators p_i of grade 2i (form degree 4i) and, for n even, the Euler
// generator e of grade n/2 with the rewrite e^2 -> p_{n/2}; or U(N) with
// Chern generators c_i of grade i.
struct RingPresentation {
    enum class Kind { so, u };
    Kind kind = Kind::so;
    std::uint32_t n = 0;  // SO(n) or U(N)
    std::string tag;
    std::vector<Symbol> gens;       // p_1.. or c_1..
    std::optional<Symbol> euler;    // n even SO only
    std::map<Symbol, std::uint32_t> grade;

    static RingPresentation so(std::uint32_t n) {
        RingPresentation r;
        r.kind = Kind::so;
        r.n = n;
        r.tag = "so" + std::to_string(n) + ".";
        for (std::uint32_t i = 1; i <= n / 2; ++i) {
            Symbol s = sym(r.tag + "p" + std::to_string(i));
            r.gens.push_back(s);
            r.grade[s] = 2 * i;
        }
        if (n % 2 == 0 && n > 0) {
            Symbol s = sym(r.tag + "e");
            r.euler = s;
            r.grade[s] = n / 2;
        }
        return r;
    }

    static RingPresentation u(std::uint32_t N) {
        RingPresentation r;
        r.kind = Kind::u;
        r.n = N;
        r.tag = "u" + std::to_string(N) + ".";
        for (std::uint32_t i = 1; i <= N; ++i) {
            Symbol s = sym(r.tag + "c" + std::to_string(i));
            r.gens.push_back(s);
            r.grade[s] = i;
        }
        return r;
    }

    std::uint32_t roots() const { return kind == Kind::so ? n / 2 : n; }

    bool owns(Symbol s) const { return grade.count(s) > 0; }

    std::uint32_t monomial_grade(const Monomial& m) const {
        std::uint32_t g = 0;
        for (auto& [v, e] : m.factors()) {
            auto it = grade.find(v);
            if (it == grade.end())
                throw std::invalid_argument("RingPresentation: foreign symbol " + sym_name(v) +
                                            " in monomial (presentation " + tag + ")");
            g += it->second * e;
        }
        return g;
    }

    // apply the Euler relation e^2 = p_{n/2}
    MultiPoly normalize(const MultiPoly& p) const {
        if (!euler) return p;
        Symbol e = *euler;
        Symbol top = gens.at(n / 2 - 1);
        MultiPoly out;
        for (auto& [m, c] : p.terms()) {
            std::uint32_t ee = m.exponent(e);
            if (ee < 2) {
                out.add_term(m, c);
                continue;
            }
            auto rest = m.divide(Monomial(e, ee));
            Monomial nm = *rest;
            nm = nm * Monomial(top, ee / 2);
            if (ee % 2) nm = nm * Monomial(e);
            out.add_term(nm, c);
        }
        return out;
    }

    // number of grade-g monomials with Euler exponent <= 1 (form degree 2g)
    std::uint32_t dimension_at_grade(std::uint32_t g) const {
        std::vector<std::pair<std::uint32_t, bool>> weights;  // (grade, is_euler)
        for (auto s : gens) weights.push_back({grade.at(s), false});
        if (euler) weights.push_back({grade.at(*euler), true});
        std::function<std::uint32_t(std::size_t, std::uint32_t)> rec =
            [&](std::size_t pos, std::uint32_t left) -> std::uint32_t {
            if (left == 0) return 1;
            if (pos == weights.size()) return 0;
            auto [w, is_e] = weights[pos];
            std::uint32_t count = 0;
            std::uint32_t max_exp = is_e ? 1u : left / w;
            for (std::uint32_t e = 0; e <= max_exp && e * w <= left; ++e)
                count += rec(pos + 1, left - e * w);
            return count;
        };
        return rec(0, g);
    }
};

// graded element of a presentation (or a tensor product of two); all
// characteristic-form 1/(2pi)^k normalizations are dropped from the stored
// coefficients and tracked in the exponent tag
struct InvariantPolynomial {
    std::vector<RingPresentation> factors;  // one or two
    MultiPoly value;
    int two_pi_exponent = 0;

    bool is_zero() const { return value.is_zero(); }

    std::uint32_t monomial_grade(const Monomial& m) const {
        std::uint32_t g = 0;
        for (auto& [v, e] : m.factors()) {
            bool found = false;
            for (auto& f : factors)
                if (f.owns(v)) {
                    g += f.grade.at(v) * e;
                    found = true;
                    break;
                }
            if (!found) throw std::invalid_argument("InvariantPolynomial: foreign symbol");
        }
        return g;
    }

    InvariantPolynomial component(std::uint32_t g) const {
        InvariantPolynomial out{factors, MultiPoly(), two_pi_exponent};
        for (auto& [m, c] : value.terms())
            if (monomial_grade(m) == g) out.value.add_term(m, c);
        return out;
    }

    // grade in one tensor factor only
    std::uint32_t factor_grade(const Monomial& m, std::size_t which) const {
        std::uint32_t g = 0;
        for (auto& [v, e] : m.factors())
            if (factors.at(which).owns(v)) g += factors[which].grade.at(v) * e;
        return g;
    }

    InvariantPolynomial bidegree_component(std::uint32_t r, std::uint32_t s) const {
        if (factors.size() != 2)
            throw std::logic_error("InvariantPolynomial: bidegree needs a tensor product");
        InvariantPolynomial out{factors, MultiPoly(), two_pi_exponent};
        for (auto& [m, c] : value.terms())
            if (factor_grade(m, 0) == r && factor_grade(m, 1) == s) out.value.add_term(m, c);
        return out;
    }

    friend InvariantPolynomial operator+(const InvariantPolynomial& a,
                                         const InvariantPolynomial& b) {
        return {a.factors, a.value + b.value, a.two_pi_exponent};
    }
    friend InvariantPolynomial operator*(const InvariantPolynomial& a,
                                         const InvariantPolynomial& b) {
        return {a.factors, a.value * b.value, a.two_pi_exponent + b.two_pi_exponent};
    }
};

namespace series {

// truncated univariate series as coefficient vectors c[0..len-1]
using Coeffs = std::vector<Rational>;

inline Coeffs mul(const Coeffs& a, const Coeffs& b, std::size_t len) {
    Coeffs r(len, Rational(0));
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size() && i + j < len; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

// series log of a series with constant term 1
inline Coeffs log1(const Coeffs& a, std::size_t len) {
    // log(a) = integral of a'/a; solve g with exp(g) = a by the recurrence
    // a' = g' a  =>  (k) a_k = sum_{j=1}^{k} j g_j a_{k-j}
    Coeffs g(len, Rational(0));
    for (std::size_t k = 1; k < len; ++k) {
        Rational acc = Rational(static_cast<long>(k)) * a[k];
        for (std::size_t j = 1; j < k; ++j)
            acc -= Rational(static_cast<long>(j)) * g[j] * a[k - j];
        g[k] = acc / Rational(static_cast<long>(k));
    }
    return g;
}

// (x/2)/sinh(x/2): even series, computed by solving sinh(x/2) * f = x/2
inline Coeffs a_hat_root_series(std::size_t len) {
    // sinh(x/2)/(x/2) = sum_{k>=0} (x/2)^{2k} / (2k+1)!
    Coeffs s(len, Rational(0));
    mpz_class fact = 1;
    mpz_class pow4 = 1;
    for (std::size_t k = 0; 2 * k < len; ++k) {
        if (k > 0) {
            fact *= static_cast<unsigned long>(2 * k);
            fact *= static_cast<unsigned long>(2 * k + 1);
            pow4 *= 4;
        }
        s[2 * k] = Rational(mpq_class(1, fact * pow4));
    }
    // invert the even series
    Coeffs f(len, Rational(0));
    f[0] = Rational(1);
    for (std::size_t k = 1; k < len; ++k) {
        Rational acc(0);
        for (std::size_t j = 1; j <= k; ++j) acc += s[j] * f[k - j];
        f[k] = -acc;
    }
    return f;
}

// 2 cosh(x/2) and cosh(x/2) series
inline Coeffs cosh_half_series(std::size_t len) {
    Coeffs c(len, Rational(0));
    mpz_class fact = 1, pow4 = 1;
    for (std::size_t k = 0; 2 * k < len; ++k) {
        if (k > 0) {
            fact *= static_cast<unsigned long>(2 * k - 1);
            fact *= static_cast<unsigned long>(2 * k);
            pow4 *= 4;
        }
        c[2 * k] = Rational(mpq_class(1, fact * pow4));
    }
    return c;
}

}  // namespace series

namespace char_detail {

// power sums of the squared roots in the p_i generators by Newton's identity
inline std::vector<MultiPoly> squared_power_sums(const RingPresentation& pres,
                                                 std::uint32_t max_k) {
    const std::uint32_t m = pres.roots();
    auto e_of = [&](std::uint32_t i) -> MultiPoly {
        if (i == 0) return MultiPoly(1);
        if (i > m || i > pres.gens.size()) return MultiPoly(0);
        return MultiPoly::variable(pres.gens[i - 1]);
    };
    std::vector<MultiPoly> s(max_k + 1);
    s[0] = MultiPoly(Rational(static_cast<long>(m)));
    for (std::uint32_t k = 1; k <= max_k; ++k) {
        MultiPoly acc;
        for (std::uint32_t j = 1; j < k; ++j) {
            MultiPoly t = e_of(j) * s[k - j];
            acc += (j % 2) ? t : -t;
        }
        // s_k = e_1 s_{k-1} - e_2 s_{k-2} + ... + (-1)^{k-1} k e_k
        MultiPoly last = e_of(k) * MultiPoly(Rational(static_cast<long>(k)));
        acc += (k % 2) ? last : -last;
        s[k] = acc;
    }
    return s;
}

// power sums of the roots themselves for U(N), e_i = c_i
inline std::vector<MultiPoly> u_power_sums(const RingPresentation& pres, std::uint32_t max_k) {
    const std::uint32_t m = pres.roots();
    auto e_of = [&](std::uint32_t i) -> MultiPoly {
        if (i == 0) return MultiPoly(1);
        if (i > m) return MultiPoly(0);
        return MultiPoly::variable(pres.gens[i - 1]);
    };
    std::vector<MultiPoly> s(max_k + 1);
    s[0] = MultiPoly(Rational(static_cast<long>(m)));
    for (std::uint32_t k = 1; k <= max_k; ++k) {
        MultiPoly acc;
        for (std::uint32_t j = 1; j < k; ++j) {
            MultiPoly t = e_of(j) * s[k - j];
            acc += (j % 2) ? t : -t;
        }
        MultiPoly last = e_of(k) * MultiPoly(Rational(static_cast<long>(k)));
        acc += (k % 2) ? last : -last;
        s[k] = acc;
    }
    return s;
}

inline MultiPoly truncate_grade(const RingPresentation& pres, const MultiPoly& p,
                                std::uint32_t max_grade) {
    MultiPoly out;
    for (auto& [m, c] : p.terms())
        if (pres.monomial_grade(m) <= max_grade) out.add_term(m, c);
    return out;
}

// exp of a graded polynomial with zero constant term, truncated
inline MultiPoly graded_exp(const RingPresentation& pres, const MultiPoly& g,
                            std::uint32_t max_grade) {
    MultiPoly out(1);
    MultiPoly power(1);
    mpz_class fact = 1;
    for (std::uint32_t k = 1; k <= max_grade; ++k) {
        power = truncate_grade(pres, power * g, max_grade);
        if (power.is_zero()) break;
        fact *= static_cast<unsigned long>(k);
        out += power * Rational(mpq_class(1, fact));
    }
    return out;
}

}  // namespace char_detail

// A-hat genus in the Pontryagin generators, exact to the given grade
// (form degree = 2 * grade)
inline InvariantPolynomial a_hat(const RingPresentation& pres, std::uint32_t max_grade) {
    if (pres.kind != RingPresentation::Kind::so)
        throw std::invalid_argument("a_hat: SO(n) presentation required");
    const std::size_t len = 2 * max_grade + 2;
    auto f = series::a_hat_root_series(len);
    auto logf = series::log1(f, len);
    // sum_j log f(x_j) = sum_k logf[2k] * s_k(x^2); grade of s_k is 2k
    auto s = char_detail::squared_power_sums(pres, max_grade);
    MultiPoly acc;
    for (std::uint32_t k = 1; 2 * k < len && 2 * k <= max_grade; ++k)
        acc += s[k] * logf[2 * k];
    MultiPoly result = char_detail::graded_exp(pres, acc, max_grade);
    return {{pres}, char_detail::truncate_grade(pres, result, max_grade), 0};
}

// representation descriptor for Chern characters
struct RepDescriptor {
    enum class Kind { trivial, vector_rep, dirac_spinor, line, user_power_sums, direct_sum };
    Kind kind = Kind::trivial;
    long rank = 0;    // trivial rank, or line charge
    MultiPoly character;  // polynomial in power-sum symbols ps1, ps2, ...
    std::vector<RepDescriptor> summands;

    static RepDescriptor trivial(long r) { return {Kind::trivial, r, {}, {}}; }
    static RepDescriptor vector_rep() { return {Kind::vector_rep, 0, {}, {}}; }
    static RepDescriptor dirac_spinor() { return {Kind::dirac_spinor, 0, {}, {}}; }
    static RepDescriptor line(long charge) { return {Kind::line, charge, {}, {}}; }
    static RepDescriptor user(MultiPoly p) {
        return {Kind::user_power_sums, 0, std::move(p), {}};
    }
    static RepDescriptor sum(std::vector<RepDescriptor> parts) {
        return {Kind::direct_sum, 0, {}, std::move(parts)};
    }
};

inline Symbol power_sum_symbol(std::uint32_t k) { return sym("ps" + std::to_string(k)); }

// Chern character of a representation in the presentation's generators
inline InvariantPolynomial chern_character(const RingPresentation& pres, const RepDescriptor& rep,
                                           std::uint32_t max_grade) {
    using Kind = RepDescriptor::Kind;
    const std::size_t len = 2 * max_grade + 2;
    switch (rep.kind) {
        case Kind::trivial:
            return {{pres}, MultiPoly(Rational(rep.rank)), 0};
        case Kind::direct_sum: {
            InvariantPolynomial acc{{pres}, MultiPoly(), 0};
            for (auto& part : rep.summands) acc = acc + chern_character(pres, part, max_grade);
            return acc;
        }
        case Kind::vector_rep: {
            if (pres.kind != RingPresentation::Kind::so)
                throw std::invalid_argument("chern_character: vector rep needs SO(n)");
            // sum_j (e^{x_j} + e^{-x_j}) = 2m + sum_k 2 s_k(x^2) / (2k)!
            auto s = char_detail::squared_power_sums(pres, max_grade);
            MultiPoly acc(Rational(static_cast<long>(2 * pres.roots())));
            mpz_class fact = 1;
            for (std::uint32_t k = 1; k <= max_grade; ++k) {
                fact *= static_cast<unsigned long>(2 * k - 1);
                fact *= static_cast<unsigned long>(2 * k);
                acc += s[k] * Rational(mpq_class(2, fact));
            }
            return {{pres}, char_detail::truncate_grade(pres, acc, max_grade), 0};
        }
        case Kind::dirac_spinor: {
            if (pres.kind != RingPresentation::Kind::so)
                throw std::invalid_argument("chern_character: dirac spinor needs SO(n)");
            // prod_j 2 cosh(x_j / 2) = 2^m exp(sum_j log cosh(x_j / 2))
            auto cosh = series::cosh_half_series(len);
            auto logc = series::log1(cosh, len);
            auto s = char_detail::squared_power_sums(pres, max_grade);
            MultiPoly acc;
            for (std::uint32_t k = 1; 2 * k < len && 2 * k <= max_grade; ++k)
                acc += s[k] * logc[2 * k];
            MultiPoly result = char_detail::graded_exp(pres, acc, max_grade);
            mpz_class two_m = 1;
            for (std::uint32_t i = 0; i < pres.roots(); ++i) two_m *= 2;
            result *= Rational(mpq_class(two_m));
            return {{pres}, char_detail::truncate_grade(pres, result, max_grade), 0};
        }
        case Kind::line: {
            if (pres.kind != RingPresentation::Kind::u || pres.n != 1)
                throw std::invalid_argument("chern_character: line rep needs U(1)");
            MultiPoly c1 = MultiPoly::variable(pres.gens[0]);
            MultiPoly acc(1);
            MultiPoly pow(1);
            mpz_class fact = 1;
            for (std::uint32_t k = 1; k <= max_grade; ++k) {
                pow = pow * c1 * Rational(rep.rank);
                fact *= static_cast<unsigned long>(k);
                acc += pow * Rational(mpq_class(1, fact));
            }
            return {{pres}, char_detail::truncate_grade(pres, acc, max_grade), 0};
        }
        case Kind::user_power_sums: {
            // substitute the Newton expressions for ps_k symbols
            std::map<Symbol, MultiPoly> assign;
            if (pres.kind == RingPresentation::Kind::so) {
                auto s = char_detail::squared_power_sums(pres, max_grade);
                for (std::uint32_t k = 1; k <= max_grade; ++k)
                    assign[power_sum_symbol(2 * k)] = s[k];
                // odd power sums of +-x_j roots vanish
                for (std::uint32_t k = 1; 2 * k - 1 <= 2 * max_grade; ++k)
                    assign[power_sum_symbol(2 * k - 1)] = MultiPoly(0);
            } else {
                auto s = char_detail::u_power_sums(pres, max_grade);
                for (std::uint32_t k = 1; k <= max_grade; ++k) assign[power_sum_symbol(k)] = s[k];
            }
            MultiPoly v = rep.character.substitute(assign);
            return {{pres}, char_detail::truncate_grade(pres, v, max_grade), 0};
        }
    }
    throw std::logic_error("chern_character: unreachable");
}

struct AnomalyResult {
    InvariantPolynomial polynomial;
    bool cancels = false;
};

// P = [A-hat ch^rho]_{n/2+1}; the local gravitational anomaly cancels iff P = 0
inline AnomalyResult anomaly_P(std::uint32_t n, const RepDescriptor& rho) {
    if (n % 4 != 2) throw std::invalid_argument("anomaly_P: need n = 2 mod 4");
    const std::uint32_t target = n / 2 + 1;
    RingPresentation pres = RingPresentation::so(n);
    auto prod = a_hat(pres, target) * chern_character(pres, rho, target);
    auto comp = prod.component(target);
    comp.value = pres.normalize(comp.value);
    return {comp, comp.is_zero()};
}

struct BidegreeVerdict {
    std::uint32_t grav = 0, gauge = 0;
    bool vanishes = true;
};

struct MixedAnomalyResult {
    InvariantPolynomial polynomial;  // tensor element
    bool cancels = false;
    std::vector<BidegreeVerdict> bidegrees;
};

// Q = [A-hat ch^rho (x) ch^beta]_{n/2+1} in I^{SO(n)} (x) I^G; Q = 0 iff
// every bidegree component vanishes, so gravitational and gauge pieces can
// never cancel against each other
inline MixedAnomalyResult anomaly_Q(std::uint32_t n, const RepDescriptor& rho,
                                    const RingPresentation& gauge_pres,
                                    const RepDescriptor& beta) {
    if (n % 2 != 0) throw std::invalid_argument("anomaly_Q: need n even");
    const std::uint32_t target = n / 2 + 1;
    RingPresentation so_pres = RingPresentation::so(n);
    auto grav = a_hat(so_pres, target) * chern_character(so_pres, rho, target);
    auto gauge = chern_character(gauge_pres, beta, target);
    InvariantPolynomial tensor{{so_pres, gauge_pres},
                               so_pres.normalize(grav.value) * gauge.value, 0};
    auto comp = InvariantPolynomial{tensor.factors, MultiPoly(), 0};
    for (auto& [m, c] : tensor.value.terms())
        if (tensor.monomial_grade(m) == target) comp.value.add_term(m, c);
    MixedAnomalyResult res;
    res.polynomial = comp;
    res.cancels = comp.is_zero();
    for (std::uint32_t r = 0; r <= target; ++r) {
        auto part = comp.bidegree_component(r, target - r);
        res.bidegrees.push_back({r, target - r, part.is_zero()});
    }
    return res;
}

inline std::uint32_t invariant_ring_dimension(const RingPresentation& pres,
                                              std::uint32_t form_degree) {
    if (form_degree % 2) return 0;
    return pres.dimension_at_grade(form_degree / 2);
}

}  // namespace jetvar
