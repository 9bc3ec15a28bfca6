#pragma once

#include "jetvar/linalg.hpp"
#include "jetvar/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetvar {

struct GeneratorSpec {
    std::string name;
    bool odd = true;
    std::uint32_t degree = 1;
    int weight = 0;
};

class SuperAlgebra;
using SuperAlgebraPtr = std::shared_ptr<const SuperAlgebra>;

// Word in a free graded-commutative algebra: factors (generator, exponent)
// sorted by the canonical generator order, exponent 1 for odd generators.
class SuperWord {
public:
    SuperWord() = default;
    explicit SuperWord(std::vector<std::pair<std::uint32_t, std::uint32_t>> factors)
        : factors_(std::move(factors)) {}

    static SuperWord one() { return SuperWord(); }

    bool is_one() const { return factors_.empty(); }
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& factors() const { return factors_; }

    std::uint32_t exponent(std::uint32_t gen) const {
        for (auto& [g, e] : factors_)
            if (g == gen) return e;
        return 0;
    }

    bool operator==(const SuperWord& o) const { return factors_ == o.factors_; }
    bool operator<(const SuperWord& o) const { return factors_ < o.factors_; }

private:
    std::vector<std::pair<std::uint32_t, std::uint32_t>> factors_;
};

// Immutable algebra descriptor: generator list, canonical order, optional
// monomial truncation ideal.
class SuperAlgebra : public std::enable_shared_from_this<SuperAlgebra> {
public:
    using KilledPredicate = std::function<bool(const SuperWord&, const SuperAlgebra&)>;

    static SuperAlgebraPtr create(std::vector<GeneratorSpec> gens,
                                  KilledPredicate killed = nullptr) {
        auto a = SuperAlgebraPtr(new SuperAlgebra(std::move(gens), std::move(killed)));
        return a;
    }

    std::uint32_t generator_count() const { return static_cast<std::uint32_t>(gens_.size()); }
    const GeneratorSpec& generator(std::uint32_t g) const { return gens_.at(g); }

    std::optional<std::uint32_t> find_generator(const std::string& name) const {
        for (std::uint32_t g = 0; g < gens_.size(); ++g)
            if (gens_[g].name == name) return g;
        return std::nullopt;
    }

    // canonical order: (degree, name); rank_[g] is the sort position of g
    std::uint32_t rank(std::uint32_t g) const { return rank_.at(g); }
    std::uint32_t generator_at_rank(std::uint32_t r) const { return by_rank_.at(r); }

    bool killed(const SuperWord& w) const { return killed_ && killed_(w, *this); }
    bool has_truncation() const { return killed_ != nullptr; }

    std::uint32_t word_degree(const SuperWord& w) const {
        std::uint32_t d = 0;
        for (auto& [g, e] : w.factors()) d += gens_[g].degree * e;
        return d;
    }
    int word_weight(const SuperWord& w) const {
        int s = 0;
        for (auto& [g, e] : w.factors()) s += gens_[g].weight * static_cast<int>(e);
        return s;
    }
    // parity = number of odd generator instances mod 2
    bool word_odd(const SuperWord& w) const {
        std::uint32_t k = 0;
        for (auto& [g, e] : w.factors())
            if (gens_[g].odd) k += e;
        return k % 2 == 1;
    }

    std::string word_str(const SuperWord& w) const {
        if (w.is_one()) return "1";
        std::ostringstream os;
        bool first = true;
        for (auto& [g, e] : w.factors()) {
            if (!first) os << "*";
            first = false;
            os << gens_[g].name;
            if (e > 1) os << "**" << e;
        }
        return os.str();
    }

    // All words of the given total degree surviving the truncation ideal, in
    // canonical order. Optionally restricted to a fixed weight.
    std::vector<SuperWord> basis(std::uint32_t degree,
                                 std::optional<int> weight = std::nullopt) const {
        std::vector<SuperWord> out;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> current;
        enumerate(0, degree, 0, weight, current, out);
        return out;
    }

private:
    SuperAlgebra(std::vector<GeneratorSpec> gens, KilledPredicate killed)
        : gens_(std::move(gens)), killed_(std::move(killed)) {
        for (auto& g : gens_)
            if (g.degree == 0) throw std::invalid_argument("SuperAlgebra: degree-0 generator");
        by_rank_.resize(gens_.size());
        for (std::uint32_t i = 0; i < gens_.size(); ++i) by_rank_[i] = i;
        std::sort(by_rank_.begin(), by_rank_.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (gens_[a].degree != gens_[b].degree) return gens_[a].degree < gens_[b].degree;
            return gens_[a].name < gens_[b].name;
        });
        rank_.resize(gens_.size());
        for (std::uint32_t r = 0; r < by_rank_.size(); ++r) rank_[by_rank_[r]] = r;
        // per-degree-unit weight bounds, for pruning weighted enumeration
        have_weights_ = false;
        for (auto& g : gens_)
            if (g.weight != 0) have_weights_ = true;
        if (have_weights_) {
            min_unit_w_ = max_unit_w_ = Rational(gens_[0].weight, gens_[0].degree);
            for (auto& g : gens_) {
                Rational u(g.weight, g.degree);
                if (u < min_unit_w_) min_unit_w_ = u;
                if (u > max_unit_w_) max_unit_w_ = u;
            }
        }
    }

    void enumerate(std::uint32_t rank_pos, std::uint32_t degree_left, int weight_acc,
                   std::optional<int> target_weight,
                   std::vector<std::pair<std::uint32_t, std::uint32_t>>& current,
                   std::vector<SuperWord>& out) const {
        if (degree_left == 0) {
            if (target_weight && weight_acc != *target_weight) return;
            SuperWord w(current);
            if (!killed(w)) out.push_back(std::move(w));
            return;
        }
        if (rank_pos >= gens_.size()) return;
        if (target_weight && have_weights_) {
            Rational lo = Rational(weight_acc) + Rational(static_cast<long>(degree_left)) * min_unit_w_;
            Rational hi = Rational(weight_acc) + Rational(static_cast<long>(degree_left)) * max_unit_w_;
            if (Rational(*target_weight) < lo || Rational(*target_weight) > hi) return;
        }
        const std::uint32_t g = by_rank_[rank_pos];
        const auto& spec = gens_[g];
        std::uint32_t max_exp = spec.odd ? 1 : degree_left / spec.degree;
        for (std::uint32_t e = 0; e <= max_exp; ++e) {
            if (e * spec.degree > degree_left) break;
            if (e > 0) current.emplace_back(g, e);
            enumerate(rank_pos + 1, degree_left - e * spec.degree,
                      weight_acc + static_cast<int>(e) * spec.weight, target_weight, current, out);
            if (e > 0) current.pop_back();
        }
    }

    std::vector<GeneratorSpec> gens_;
    KilledPredicate killed_;
    std::vector<std::uint32_t> rank_, by_rank_;
    bool have_weights_ = false;
    Rational min_unit_w_, max_unit_w_;
};

// Element of a SuperAlgebra: finite Rational combination of words.
class SuperElement {
public:
    SuperElement() = default;
    explicit SuperElement(SuperAlgebraPtr alg) : alg_(std::move(alg)) {}
    SuperElement(SuperAlgebraPtr alg, const SuperWord& w, const Rational& c = Rational(1))
        : alg_(std::move(alg)) {
        if (!c.is_zero() && !alg_->killed(w)) terms_.emplace(w, c);
    }

    static SuperElement unit(SuperAlgebraPtr alg, const Rational& c = Rational(1)) {
        return SuperElement(std::move(alg), SuperWord::one(), c);
    }
    static SuperElement generator(SuperAlgebraPtr alg, std::uint32_t g) {
        return SuperElement(std::move(alg), SuperWord({{g, 1}}));
    }

    const SuperAlgebraPtr& algebra() const { return alg_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<SuperWord, Rational>& terms() const { return terms_; }

    void add_term(const SuperWord& w, const Rational& c) {
        if (c.is_zero() || (alg_ && alg_->killed(w))) return;
        auto [it, inserted] = terms_.emplace(w, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    SuperElement operator-() const {
        SuperElement r(alg_);
        for (auto& [w, c] : terms_) r.terms_.emplace(w, -c);
        return r;
    }

    SuperElement& operator+=(const SuperElement& o) {
        merge_algebra(o);
        for (auto& [w, c] : o.terms_) add_term(w, c);
        return *this;
    }
    SuperElement& operator-=(const SuperElement& o) {
        merge_algebra(o);
        for (auto& [w, c] : o.terms_) add_term(w, -c);
        return *this;
    }
    friend SuperElement operator+(SuperElement a, const SuperElement& b) { return a += b; }
    friend SuperElement operator-(SuperElement a, const SuperElement& b) { return a -= b; }

    SuperElement& operator*=(const Rational& c) {
        if (c.is_zero()) terms_.clear();
        else
            for (auto& [w, v] : terms_) v *= c;
        return *this;
    }
    friend SuperElement operator*(SuperElement a, const Rational& c) { return a *= c; }
    friend SuperElement operator*(const Rational& c, SuperElement a) { return a *= c; }

    friend SuperElement operator*(const SuperElement& a, const SuperElement& b) {
        if (a.is_zero()) return a;
        if (b.is_zero()) return b;
        if (a.alg_ != b.alg_)
            throw std::invalid_argument("SuperElement: operands from different algebras");
        SuperElement r(a.alg_);
        for (auto& [wa, ca] : a.terms_)
            for (auto& [wb, cb] : b.terms_) {
                auto [w, sign] = multiply_words(*a.alg_, wa, wb);
                if (sign == 0) continue;
                r.add_term(w, ca * cb * Rational(sign));
            }
        return r;
    }
    SuperElement& operator*=(const SuperElement& o) { return *this = *this * o; }

    bool operator==(const SuperElement& o) const {
        if (is_zero()) return o.is_zero();
        if (o.is_zero()) return false;
        return alg_ == o.alg_ && terms_ == o.terms_;
    }
    bool operator!=(const SuperElement& o) const { return !(*this == o); }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        auto d = alg_->word_degree(terms_.begin()->first);
        for (auto& [w, c] : terms_)
            if (alg_->word_degree(w) != d) return false;
        return true;
    }
    std::uint32_t degree() const {
        if (terms_.empty() || !is_homogeneous())
            throw std::logic_error("SuperElement: degree of non-homogeneous element");
        return alg_->word_degree(terms_.begin()->first);
    }

    SuperElement homogeneous_part(std::uint32_t degree) const {
        SuperElement r(alg_);
        for (auto& [w, c] : terms_)
            if (alg_->word_degree(w) == degree) r.terms_.emplace(w, c);
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [w, c] : terms_) {
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
            if (w.is_one())
                os << a.str();
            else if (a.is_one())
                os << alg_->word_str(w);
            else
                os << a.str() << "*" << alg_->word_str(w);
        }
        return os.str();
    }

    // Koszul-signed product of canonical words; sign 0 means an odd square.
    static std::pair<SuperWord, int> multiply_words(const SuperAlgebra& alg, const SuperWord& a,
                                                    const SuperWord& b) {
        const auto& fa = a.factors();
        const auto& fb = b.factors();
        std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
        out.reserve(fa.size() + fb.size());
        // odd instance count in the unmerged suffix of a
        std::vector<std::uint32_t> odd_suffix(fa.size() + 1, 0);
        for (std::size_t i = fa.size(); i-- > 0;)
            odd_suffix[i] = odd_suffix[i + 1] + (alg.generator(fa[i].first).odd ? fa[i].second : 0);
        std::size_t ia = 0, ib = 0;
        int sign = 1;
        while (ia < fa.size() || ib < fb.size()) {
            bool take_b;
            if (ia == fa.size())
                take_b = true;
            else if (ib == fb.size())
                take_b = false;
            else {
                auto ra = alg.rank(fa[ia].first), rb = alg.rank(fb[ib].first);
                take_b = rb <= ra;
            }
            if (!take_b) {
                out.push_back(fa[ia]);
                ++ia;
                continue;
            }
            const auto [gb, eb] = fb[ib];
            if (ia < fa.size() && fa[ia].first == gb) {
                if (alg.generator(gb).odd) return {SuperWord(), 0};
                // even generator crossing carries no sign
                out.emplace_back(gb, fa[ia].second + eb);
                ++ia;
                ++ib;
                continue;
            }
            if (alg.generator(gb).odd && (eb % 2) && (odd_suffix[ia] % 2)) sign = -sign;
            out.emplace_back(gb, eb);
            ++ib;
        }
        return {SuperWord(std::move(out)), sign};
    }

private:
    void merge_algebra(const SuperElement& o) {
        if (!alg_) alg_ = o.alg_;
        else if (o.alg_ && o.alg_ != alg_)
            throw std::invalid_argument("SuperElement: operands from different algebras");
    }

    SuperAlgebraPtr alg_;
    std::map<SuperWord, Rational> terms_;
};

// Graded derivation given by its action on generators, extended by the
// graded Leibniz rule.
class Derivation {
public:
    Derivation() = default;
    Derivation(SuperAlgebraPtr alg, bool odd, std::vector<SuperElement> action)
        : alg_(std::move(alg)), odd_(odd), action_(std::move(action)) {
        if (action_.size() != alg_->generator_count())
            throw std::invalid_argument("Derivation: action table size mismatch");
    }

    bool odd() const { return odd_; }
    const SuperAlgebraPtr& algebra() const { return alg_; }
    const SuperElement& action_on(std::uint32_t g) const { return action_.at(g); }

    SuperElement apply(const SuperElement& x) const {
        SuperElement out(alg_);
        if (x.is_zero()) return out;
        if (x.algebra() != alg_)
            throw std::invalid_argument("Derivation: element from another algebra");
        for (auto& [w, c] : x.terms()) {
            const auto& f = w.factors();
            for (std::size_t i = 0; i < f.size(); ++i) {
                const auto [g, e] = f[i];
                const SuperElement& dg = action_[g];
                if (dg.is_zero()) continue;
                int sign = 1;
                if (odd_) {
                    std::uint32_t odd_prefix = 0;
                    for (std::size_t j = 0; j < i; ++j)
                        if (alg_->generator(f[j].first).odd) odd_prefix += f[j].second;
                    if (odd_prefix % 2) sign = -1;
                }
                std::vector<std::pair<std::uint32_t, std::uint32_t>> left(f.begin(),
                                                                          f.begin() + i);
                std::vector<std::pair<std::uint32_t, std::uint32_t>> right(f.begin() + i + 1,
                                                                           f.end());
                if (e > 1) left.emplace_back(g, e - 1);
                SuperElement piece = SuperElement(alg_, SuperWord(std::move(left)),
                                                  c * Rational(sign) * Rational(static_cast<long>(e)));
                piece = piece * dg;
                piece = piece * SuperElement(alg_, SuperWord(std::move(right)));
                out += piece;
            }
        }
        return out;
    }

    // composition table of d2 after d1 as a derivation is not a derivation;
    // this materializes (d2∘d1 + d1∘d2)-style operators on generators instead
    static Derivation anticommutator(const Derivation& a, const Derivation& b) {
        if (a.alg_ != b.alg_) throw std::invalid_argument("Derivation: algebra mismatch");
        if (!(a.odd_ && b.odd_))
            throw std::invalid_argument("Derivation: anticommutator expects odd operands");
        std::vector<SuperElement> act;
        act.reserve(a.alg_->generator_count());
        for (std::uint32_t g = 0; g < a.alg_->generator_count(); ++g) {
            SuperElement eg = SuperElement::generator(a.alg_, g);
            act.push_back(a.apply(b.apply(eg)) + b.apply(a.apply(eg)));
        }
        return Derivation(a.alg_, false, std::move(act));
    }

    // d∘d = 0 on all generators
    bool squares_to_zero() const {
        for (std::uint32_t g = 0; g < alg_->generator_count(); ++g) {
            if (!apply(action_[g]).is_zero()) return false;
        }
        return true;
    }

private:
    SuperAlgebraPtr alg_;
    bool odd_ = true;
    std::vector<SuperElement> action_;
};

// Expand an element on an ordered word basis; words outside the basis are an
// error (signals a filter that is not closed under the operation at hand).
inline SparseVec expand_on_basis(const SuperElement& x, const std::vector<SuperWord>& basis,
                                 const std::string& what = "expand_on_basis") {
    std::map<SuperWord, std::uint32_t> index;
    for (std::uint32_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);
    SparseVec v;
    for (auto& [w, c] : x.terms()) {
        auto it = index.find(w);
        if (it == index.end())
            throw std::domain_error(what + ": word " +
                                    (x.algebra() ? x.algebra()->word_str(w) : std::string("?")) +
                                    " outside the target basis");
        v.emplace(it->second, c);
    }
    return v;
}

struct SliceOptions {
    std::function<bool(const SuperWord&, const SuperAlgebra&)> word_filter;  // optional
};

// Matrices of a differential entering and leaving a fixed degree, restricted
// to an optional word-level filter. The filter must be d-stable; a violating
// word is reported.
inline ComplexSlice complex_slice(const Derivation& d, std::uint32_t degree,
                                  const SliceOptions& opt = {},
                                  std::optional<int> weight = std::nullopt) {
    const auto& alg = d.algebra();
    auto filter_basis = [&](std::uint32_t deg) {
        std::vector<SuperWord> b = alg->basis(deg, weight);
        if (opt.word_filter) {
            std::vector<SuperWord> kept;
            for (auto& w : b)
                if (opt.word_filter(w, *alg)) kept.push_back(w);
            return kept;
        }
        return b;
    };
    auto below = degree > 0 ? filter_basis(degree - 1) : std::vector<SuperWord>{};
    auto here = filter_basis(degree);
    auto above = filter_basis(degree + 1);

    auto matrix_of_d = [&](const std::vector<SuperWord>& src, const std::vector<SuperWord>& dst) {
        SparseMatrix m(static_cast<std::uint32_t>(dst.size()),
                       static_cast<std::uint32_t>(src.size()));
        std::map<SuperWord, std::uint32_t> index;
        for (std::uint32_t i = 0; i < dst.size(); ++i) index.emplace(dst[i], i);
        for (std::uint32_t j = 0; j < src.size(); ++j) {
            SuperElement img = d.apply(SuperElement(alg, src[j]));
            for (auto& [w, c] : img.terms()) {
                if (opt.word_filter && !opt.word_filter(w, *alg))
                    throw std::domain_error("complex_slice: filter not d-stable, violating word " +
                                            alg->word_str(w));
                auto it = index.find(w);
                if (it == index.end())
                    throw std::domain_error("complex_slice: image word " + alg->word_str(w) +
                                            " missing from target basis");
                m.set(it->second, j, c);
            }
        }
        return m;
    };

    SparseMatrix d_in = matrix_of_d(below, here);
    SparseMatrix d_out = matrix_of_d(here, above);
    std::vector<std::string> labels;
    labels.reserve(here.size());
    for (auto& w : here) labels.push_back(alg->word_str(w));
    return ComplexSlice(std::move(d_in), std::move(d_out), std::move(labels));
}

}  // namespace jetvar
