#pragma once

#include "jetvar/linalg.hpp"
#include "jetvar/rational.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace jetvar {

// Finite-dimensional real Lie algebra in a chosen basis. Antisymmetry and the
// Jacobi identity are verified exactly at construction.
class LieAlgebra {
public:
    LieAlgebra() = default;
    LieAlgebra(std::string name, std::vector<std::string> basis,
               std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, Rational> c)
        : name_(std::move(name)), basis_(std::move(basis)), c_(std::move(c)) {
        validate();
    }

    const std::string& name() const { return name_; }
    std::uint32_t dim() const { return static_cast<std::uint32_t>(basis_.size()); }
    const std::string& basis_name(std::uint32_t i) const { return basis_.at(i); }

    // coefficient of e_i in [e_j, e_k]
    Rational c(std::uint32_t i, std::uint32_t j, std::uint32_t k) const {
        auto it = c_.find({i, j, k});
        return it == c_.end() ? Rational(0) : it->second;
    }

    bool is_abelian() const { return c_.empty(); }

    // [x, y] in basis coordinates
    std::vector<Rational> bracket(const std::vector<Rational>& x,
                                  const std::vector<Rational>& y) const {
        std::vector<Rational> out(dim(), Rational(0));
        for (auto& [ijk, v] : c_) {
            auto [i, j, k] = ijk;
            out[i] += v * x[j] * y[k];
        }
        return out;
    }

    static LieAlgebra abelian(std::uint32_t d, const std::string& name = "abelian") {
        std::vector<std::string> b;
        for (std::uint32_t i = 1; i <= d; ++i) b.push_back("e" + std::to_string(i));
        return LieAlgebra(name, std::move(b), {});
    }

    // so(3) with [e_i, e_j] = eps_{ijk} e_k
    static LieAlgebra so3() {
        std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, Rational> c;
        auto eps = [&](int i, int j, int k, long s) { c[{static_cast<std::uint32_t>(k),
                                                        static_cast<std::uint32_t>(i),
                                                        static_cast<std::uint32_t>(j)}] = Rational(s); };
        eps(0, 1, 2, 1);
        eps(1, 0, 2, -1);
        eps(1, 2, 0, 1);
        eps(2, 1, 0, -1);
        eps(2, 0, 1, 1);
        eps(0, 2, 1, -1);
        return LieAlgebra("so3", {"e1", "e2", "e3"}, std::move(c));
    }

    // gl(n) in the elementary-matrix basis E^i_j (row i, column j), ordered
    // (i,j) lexicographically; [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb.
    static LieAlgebra gl(std::uint32_t n) {
        std::vector<std::string> basis;
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j)
                basis.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
        auto idx = [n](std::uint32_t i, std::uint32_t j) { return i * n + j; };
        std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, Rational> c;
        auto add = [&](std::uint32_t t, std::uint32_t x, std::uint32_t y, long s) {
            auto key = std::make_tuple(t, x, y);
            auto it = c.find(key);
            if (it == c.end()) c[key] = Rational(s);
            else {
                it->second += Rational(s);
                if (it->second.is_zero()) c.erase(key);
            }
        };
        for (std::uint32_t a = 0; a < n; ++a)
            for (std::uint32_t b = 0; b < n; ++b)
                for (std::uint32_t cc = 0; cc < n; ++cc)
                    for (std::uint32_t d = 0; d < n; ++d) {
                        std::uint32_t x = idx(a, b), y = idx(cc, d);
                        if (b == cc) add(idx(a, d), x, y, 1);
                        if (d == a) add(idx(cc, b), x, y, -1);
                    }
        return LieAlgebra("gl" + std::to_string(n), std::move(basis), std::move(c));
    }

    // so(n) in the basis A_ij = E_ij - E_ji for i < j, ordered lexicographically
    static LieAlgebra so(std::uint32_t n) {
        if (n == 3) return so3();
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        std::vector<std::string> basis;
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = i + 1; j < n; ++j) {
                pairs.emplace_back(i, j);
                basis.push_back("A" + std::to_string(i + 1) + std::to_string(j + 1));
            }
        auto find = [&](std::uint32_t i, std::uint32_t j) -> std::pair<std::uint32_t, long> {
            for (std::uint32_t p = 0; p < pairs.size(); ++p) {
                if (pairs[p] == std::make_pair(i, j)) return {p, 1};
                if (pairs[p] == std::make_pair(j, i)) return {p, -1};
            }
            throw std::logic_error("so(n): bad index pair");
        };
        std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, Rational> c;
        auto add = [&](std::uint32_t i, std::uint32_t j, std::uint32_t x, std::uint32_t y, long s) {
            if (i == j) return;
            auto [t, sg] = find(i, j);
            auto key = std::make_tuple(t, x, y);
            auto it = c.find(key);
            Rational v(s * sg);
            if (it == c.end()) {
                if (!v.is_zero()) c[key] = v;
            } else {
                it->second += v;
                if (it->second.is_zero()) c.erase(key);
            }
        };
        // [A_ij, A_kl] = delta_jk A_il - delta_ik A_jl - delta_jl A_ik + delta_il A_jk
        for (std::uint32_t x = 0; x < pairs.size(); ++x)
            for (std::uint32_t y = 0; y < pairs.size(); ++y) {
                auto [i, j] = pairs[x];
                auto [k, l] = pairs[y];
                if (j == k) add(i, l, x, y, 1);
                if (i == k) add(j, l, x, y, -1);
                if (j == l) add(i, k, x, y, -1);
                if (i == l) add(j, k, x, y, 1);
            }
        return LieAlgebra("so" + std::to_string(n), std::move(basis), std::move(c));
    }

    // direct product, a-block first
    static LieAlgebra product(const LieAlgebra& a, const LieAlgebra& b) {
        std::vector<std::string> basis;
        for (std::uint32_t i = 0; i < a.dim(); ++i) basis.push_back(a.basis_name(i));
        for (std::uint32_t i = 0; i < b.dim(); ++i) basis.push_back(b.basis_name(i) + "'");
        std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, Rational> c = a.c_;
        for (auto& [ijk, v] : b.c_) {
            auto [i, j, k] = ijk;
            c[{i + a.dim(), j + a.dim(), k + a.dim()}] = v;
        }
        return LieAlgebra(a.name() + "x" + b.name(), std::move(basis), std::move(c));
    }

private:
    void validate() const {
        const std::uint32_t n = dim();
        for (auto& [ijk, v] : c_) {
            auto [i, j, k] = ijk;
            if (i >= n || j >= n || k >= n) throw std::invalid_argument("LieAlgebra: index out of range");
            if (c(i, j, k) != -c(i, k, j))
                throw std::invalid_argument("LieAlgebra: structure constants not antisymmetric");
        }
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j)
                for (std::uint32_t k = 0; k < n; ++k)
                    for (std::uint32_t l = 0; l < n; ++l) {
                        Rational s(0);
                        for (std::uint32_t m = 0; m < n; ++m)
                            s += c(m, j, k) * c(l, i, m) + c(m, k, i) * c(l, j, m) +
                                 c(m, i, j) * c(l, k, m);
                        if (!s.is_zero())
                            throw std::invalid_argument("LieAlgebra: Jacobi identity fails");
                    }
    }

    std::string name_;
    std::vector<std::string> basis_;
    std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, Rational> c_;
};

// Inclusion of a subalgebra, columns = images of the sub basis in ambient
// coordinates. Bracket compatibility is verified exactly.
struct SubalgebraEmbedding {
    LieAlgebra ambient;
    LieAlgebra sub;
    std::vector<std::vector<Rational>> inclusion;  // inclusion[s] = ambient coords of sub e_s

    SubalgebraEmbedding(LieAlgebra amb, LieAlgebra s, std::vector<std::vector<Rational>> inc)
        : ambient(std::move(amb)), sub(std::move(s)), inclusion(std::move(inc)) {
        if (inclusion.size() != sub.dim())
            throw std::invalid_argument("SubalgebraEmbedding: wrong number of columns");
        for (auto& col : inclusion)
            if (col.size() != ambient.dim())
                throw std::invalid_argument("SubalgebraEmbedding: wrong column height");
        for (std::uint32_t a = 0; a < sub.dim(); ++a)
            for (std::uint32_t b = 0; b < sub.dim(); ++b) {
                auto lhs = ambient.bracket(inclusion[a], inclusion[b]);
                std::vector<Rational> rhs(ambient.dim(), Rational(0));
                for (std::uint32_t s = 0; s < sub.dim(); ++s) {
                    Rational coeff = sub.c(s, a, b);
                    if (coeff.is_zero()) continue;
                    for (std::uint32_t i = 0; i < ambient.dim(); ++i)
                        rhs[i] += coeff * inclusion[s][i];
                }
                if (lhs != rhs)
                    throw std::invalid_argument("SubalgebraEmbedding: not a Lie homomorphism");
            }
    }

    static SubalgebraEmbedding zero_into(const LieAlgebra& ambient) {
        return SubalgebraEmbedding(ambient, LieAlgebra::abelian(0, "0"), {});
    }

    static SubalgebraEmbedding full(const LieAlgebra& g) {
        std::vector<std::vector<Rational>> inc(g.dim(), std::vector<Rational>(g.dim(), Rational(0)));
        for (std::uint32_t i = 0; i < g.dim(); ++i) inc[i][i] = Rational(1);
        return SubalgebraEmbedding(g, g, std::move(inc));
    }

    // so(n) inside gl(n): A_ij -> E_ij - E_ji
    static SubalgebraEmbedding so_in_gl(std::uint32_t n) {
        LieAlgebra amb = LieAlgebra::gl(n);
        LieAlgebra s = LieAlgebra::so(n);
        std::vector<std::vector<Rational>> inc;
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = i + 1; j < n; ++j) {
                std::vector<Rational> col(n * n, Rational(0));
                col[i * n + j] = Rational(1);
                col[j * n + i] = Rational(-1);
                inc.push_back(std::move(col));
            }
        return SubalgebraEmbedding(std::move(amb), std::move(s), std::move(inc));
    }

    // (so(n) x g) inside (gl(n) x g)
    static SubalgebraEmbedding so_times_g_in_gl_times_g(std::uint32_t n, const LieAlgebra& g) {
        LieAlgebra amb = LieAlgebra::product(LieAlgebra::gl(n), g);
        LieAlgebra s = LieAlgebra::product(LieAlgebra::so(n), g);
        auto so_inc = so_in_gl(n).inclusion;
        std::vector<std::vector<Rational>> inc;
        for (auto& col : so_inc) {
            std::vector<Rational> v(amb.dim(), Rational(0));
            for (std::uint32_t i = 0; i < col.size(); ++i) v[i] = col[i];
            inc.push_back(std::move(v));
        }
        for (std::uint32_t a = 0; a < g.dim(); ++a) {
            std::vector<Rational> v(amb.dim(), Rational(0));
            v[n * n + a] = Rational(1);
            inc.push_back(std::move(v));
        }
        return SubalgebraEmbedding(std::move(amb), std::move(s), std::move(inc));
    }
};

}  // namespace jetvar
