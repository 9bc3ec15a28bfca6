#pragma once

#include "jetvar/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetvar {

// Sparse column vector, index -> nonzero value.
using SparseVec = std::map<std::uint32_t, Rational>;

inline SparseVec vec_scale(const SparseVec& v, const Rational& c) {
    SparseVec r;
    if (c.is_zero()) return r;
    for (auto& [i, x] : v) r.emplace(i, x * c);
    return r;
}

inline void vec_axpy(SparseVec& dst, const Rational& c, const SparseVec& src) {
    if (c.is_zero()) return;
    for (auto& [i, x] : src) {
        auto [it, inserted] = dst.emplace(i, x * c);
        if (!inserted) {
            it->second += x * c;
            if (it->second.is_zero()) dst.erase(it);
        }
    }
}

class SparseMatrix {
public:
    SparseMatrix() : rows_(0), cols_(0) {}
    SparseMatrix(std::uint32_t rows, std::uint32_t cols) : rows_(rows), cols_(cols), row_(rows) {}

    static SparseMatrix identity(std::uint32_t n) {
        SparseMatrix m(n, n);
        for (std::uint32_t i = 0; i < n; ++i) m.set(i, i, Rational(1));
        return m;
    }

    std::uint32_t rows() const { return rows_; }
    std::uint32_t cols() const { return cols_; }

    void set(std::uint32_t r, std::uint32_t c, const Rational& v) {
        check(r, c);
        if (v.is_zero())
            row_[r].erase(c);
        else
            row_[r][c] = v;
    }

    void add_at(std::uint32_t r, std::uint32_t c, const Rational& v) {
        check(r, c);
        auto [it, inserted] = row_[r].emplace(c, v);
        if (!inserted) {
            it->second += v;
            if (it->second.is_zero()) row_[r].erase(it);
        } else if (v.is_zero()) {
            row_[r].erase(c);
        }
    }

    Rational at(std::uint32_t r, std::uint32_t c) const {
        check(r, c);
        auto it = row_[r].find(c);
        return it == row_[r].end() ? Rational(0) : it->second;
    }

    const std::map<std::uint32_t, Rational>& row(std::uint32_t r) const { return row_[r]; }

    bool is_zero() const {
        for (auto& r : row_)
            if (!r.empty()) return false;
        return true;
    }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (auto& r : row_) n += r.size();
        return n;
    }

    SparseVec column(std::uint32_t c) const {
        SparseVec v;
        for (std::uint32_t r = 0; r < rows_; ++r) {
            auto it = row_[r].find(c);
            if (it != row_[r].end()) v.emplace(r, it->second);
        }
        return v;
    }

    SparseVec apply(const SparseVec& v) const {
        SparseVec out;
        for (std::uint32_t r = 0; r < rows_; ++r) {
            Rational s(0);
            for (auto& [c, x] : row_[r]) {
                auto it = v.find(c);
                if (it != v.end()) s += x * it->second;
            }
            if (!s.is_zero()) out.emplace(r, s);
        }
        return out;
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("SparseMatrix: size mismatch in product");
        SparseMatrix r(a.rows_, b.cols_);
        for (std::uint32_t i = 0; i < a.rows_; ++i)
            for (auto& [k, av] : a.row_[i])
                for (auto& [j, bv] : b.row_[k]) r.add_at(i, j, av * bv);
        return r;
    }

    // Exact rank by fraction-free (Bareiss) elimination. Rows are first
    // cleared to integers; the pivot row is chosen among candidates as the
    // sparsest one.
    std::uint32_t rank() const {
        std::vector<std::map<std::uint32_t, mpz_class>> w(rows_);
        for (std::uint32_t r = 0; r < rows_; ++r) {
            if (row_[r].empty()) continue;
            mpz_class lcm = 1;
            for (auto& [c, v] : row_[r]) {
                mpz_class l;
                mpz_lcm(l.get_mpz_t(), lcm.get_mpz_t(), v.denominator().get_mpz_t());
                lcm = l;
            }
            for (auto& [c, v] : row_[r]) w[r][c] = v.numerator() * (lcm / v.denominator());
        }
        mpz_class prev = 1;
        std::uint32_t rank = 0;
        std::vector<bool> used(rows_, false);
        for (std::uint32_t col = 0; col < cols_; ++col) {
            std::int64_t pivot = -1;
            std::size_t best = 0;
            for (std::uint32_t r = 0; r < rows_; ++r) {
                if (used[r]) continue;
                auto it = w[r].find(col);
                if (it == w[r].end() || it->second == 0) continue;
                if (pivot < 0 || w[r].size() < best) {
                    pivot = r;
                    best = w[r].size();
                }
            }
            if (pivot < 0) continue;
            used[pivot] = true;
            ++rank;
            const mpz_class p = w[pivot][col];
            for (std::uint32_t r = 0; r < rows_; ++r) {
                if (used[r] || r == static_cast<std::uint32_t>(pivot)) continue;
                auto it = w[r].find(col);
                if (it == w[r].end()) {
                    // entries still need the Bareiss rescale p/prev
                    std::map<std::uint32_t, mpz_class> nr;
                    for (auto& [c, v] : w[r]) {
                        mpz_class t = v * p / prev;
                        if (t != 0) nr[c] = t;
                    }
                    w[r] = std::move(nr);
                    continue;
                }
                mpz_class f = it->second;
                std::map<std::uint32_t, mpz_class> nr;
                for (auto& [c, v] : w[r]) {
                    if (c == col) continue;
                    auto pit = w[pivot].find(c);
                    mpz_class t = v * p - (pit != w[pivot].end() ? f * pit->second : mpz_class(0));
                    t /= prev;
                    if (t != 0) nr[c] = t;
                }
                for (auto& [c, v] : w[pivot]) {
                    if (c == col || w[r].count(c)) continue;
                    mpz_class t = -f * v;
                    t /= prev;
                    if (t != 0) nr[c] = t;
                }
                w[r] = std::move(nr);
            }
            prev = p;
        }
        return rank;
    }

    // Basis of the exact null space; size is cols() - rank().
    std::vector<SparseVec> kernel_basis() const {
        // rational Gauss-Jordan; pivot columns tracked to read off the kernel
        std::vector<std::map<std::uint32_t, Rational>> w;
        for (auto& r : row_)
            if (!r.empty()) w.push_back(r);
        std::vector<std::int64_t> pivot_of_col(cols_, -1);
        std::size_t next_row = 0;
        for (std::uint32_t col = 0; col < cols_ && next_row < w.size(); ++col) {
            std::int64_t pr = -1;
            std::size_t best = 0;
            for (std::size_t r = next_row; r < w.size(); ++r) {
                auto it = w[r].find(col);
                if (it == w[r].end()) continue;
                if (pr < 0 || w[r].size() < best) {
                    pr = static_cast<std::int64_t>(r);
                    best = w[r].size();
                }
            }
            if (pr < 0) continue;
            std::swap(w[next_row], w[static_cast<std::size_t>(pr)]);
            Rational inv = w[next_row][col].inverse();
            for (auto& [c, v] : w[next_row]) v *= inv;
            for (std::size_t r = 0; r < w.size(); ++r) {
                if (r == next_row) continue;
                auto it = w[r].find(col);
                if (it == w[r].end()) continue;
                Rational f = it->second;
                vec_axpy(w[r], -f, w[next_row]);
            }
            pivot_of_col[col] = static_cast<std::int64_t>(next_row);
            ++next_row;
        }
        std::vector<SparseVec> basis;
        for (std::uint32_t free = 0; free < cols_; ++free) {
            if (pivot_of_col[free] >= 0) continue;
            SparseVec v;
            v[free] = Rational(1);
            for (std::uint32_t c = 0; c < cols_; ++c) {
                if (pivot_of_col[c] < 0) continue;
                auto& prow = w[static_cast<std::size_t>(pivot_of_col[c])];
                auto it = prow.find(free);
                if (it != prow.end()) v[c] = -it->second;
            }
            basis.push_back(std::move(v));
        }
        return basis;
    }

private:
    void check(std::uint32_t r, std::uint32_t c) const {
        if (r >= rows_ || c >= cols_) throw std::out_of_range("SparseMatrix: index out of bounds");
    }

    std::uint32_t rows_, cols_;
    std::vector<std::map<std::uint32_t, Rational>> row_;
};

// Incremental echelon basis for span membership / independence tests.
class EchelonStore {
public:
    // Reduces v against the store; returns the residue.
    SparseVec reduce(SparseVec v) const {
        for (auto& [piv, row] : rows_) {
            auto it = v.find(piv);
            if (it == v.end()) continue;
            vec_axpy(v, -it->second, row);
        }
        return v;
    }

    // Inserts v if independent of the current span. Returns true if inserted.
    bool insert(const SparseVec& v) {
        SparseVec r = reduce(v);
        if (r.empty()) return false;
        auto piv = r.begin()->first;
        Rational inv = r.begin()->second.inverse();
        rows_.emplace_back(piv, vec_scale(r, inv));
        return true;
    }

    bool contains(const SparseVec& v) const { return reduce(v).empty(); }
    std::size_t dimension() const { return rows_.size(); }

private:
    std::vector<std::pair<std::uint32_t, SparseVec>> rows_;
};

// Solves A x = b exactly. Returns nullopt when inconsistent.
inline std::optional<SparseVec> solve(const SparseMatrix& a, const SparseVec& b) {
    const std::uint32_t n = a.cols();
    std::vector<SparseVec> rows(a.rows());
    for (std::uint32_t r = 0; r < a.rows(); ++r) {
        rows[r] = SparseVec(a.row(r).begin(), a.row(r).end());
        auto it = b.find(r);
        if (it != b.end()) rows[r][n] = it->second;
    }
    std::vector<std::int64_t> pivot_of_col(n, -1);
    std::size_t next = 0;
    for (std::uint32_t col = 0; col < n && next < rows.size(); ++col) {
        std::int64_t pr = -1;
        for (std::size_t r = next; r < rows.size(); ++r) {
            auto it = rows[r].find(col);
            if (it != rows[r].end()) {
                pr = static_cast<std::int64_t>(r);
                break;
            }
        }
        if (pr < 0) continue;
        std::swap(rows[next], rows[static_cast<std::size_t>(pr)]);
        Rational inv = rows[next][col].inverse();
        for (auto& [c, v] : rows[next]) v *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == next) continue;
            auto it = rows[r].find(col);
            if (it == rows[r].end()) continue;
            vec_axpy(rows[r], -it->second, rows[next]);
        }
        pivot_of_col[col] = static_cast<std::int64_t>(next);
        ++next;
    }
    for (auto& r : rows) {
        if (r.size() == 1 && r.count(n)) return std::nullopt;  // 0 = nonzero
    }
    SparseVec x;
    for (std::uint32_t c = 0; c < n; ++c) {
        if (pivot_of_col[c] < 0) continue;
        auto& prow = rows[static_cast<std::size_t>(pivot_of_col[c])];
        auto it = prow.find(n);
        if (it != prow.end()) x[c] = it->second;
    }
    return x;
}

// One graded slice of a cochain complex: the differential entering and the
// differential leaving a fixed degree, in a fixed ordered basis.
struct ComplexSlice {
    SparseMatrix d_in;   // previous degree -> this degree
    SparseMatrix d_out;  // this degree -> next degree
    std::vector<std::string> labels;

    ComplexSlice(SparseMatrix in, SparseMatrix out, std::vector<std::string> basis_labels)
        : d_in(std::move(in)), d_out(std::move(out)), labels(std::move(basis_labels)) {
        if (d_in.rows() != d_out.cols() || d_in.rows() != labels.size())
            throw std::invalid_argument("ComplexSlice: basis size mismatch");
        if (!(d_out * d_in).is_zero())
            throw std::invalid_argument("ComplexSlice: composite differential is nonzero");
    }
};

struct CohomologyResult {
    std::uint32_t dimension = 0;
    std::vector<SparseVec> representatives;  // kernel vectors completing the image to the kernel
};

inline CohomologyResult cohomology(const ComplexSlice& slice) {
    auto kernel = slice.d_out.kernel_basis();
    EchelonStore span;
    for (std::uint32_t c = 0; c < slice.d_in.cols(); ++c) span.insert(slice.d_in.column(c));
    CohomologyResult res;
    for (auto& v : kernel) {
        if (span.insert(v)) {
            res.representatives.push_back(v);
            ++res.dimension;
        }
    }
    return res;
}

}  // namespace jetvar
