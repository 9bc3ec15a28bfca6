#pragma once

#include "jetvar/superalgebra.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace jetvar {

// A differential graded complex presented through callables, together with
// the interior products and Lie derivatives of an embedded subalgebra. The
// basic subcomplex (joint kernel of every iota_h and L_h) is computed per
// degree by exact linear algebra; word-level filters cannot express it for
// nonabelian actions.
struct DgComplexOps {
    SuperAlgebraPtr alg;
    std::function<SuperElement(const SuperElement&)> d;
    std::vector<std::function<SuperElement(const SuperElement&)>> iota;
    std::vector<std::function<SuperElement(const SuperElement&)>> lie;
    std::function<std::vector<SuperWord>(std::uint32_t)> degree_basis;
};

struct BasicSlice {
    std::vector<SuperWord> word_basis;
    std::vector<SparseVec> basic_basis;  // columns in the word basis
};

namespace relative_detail {

inline SparseMatrix operator_matrix(const DgComplexOps& ops,
                                    const std::function<SuperElement(const SuperElement&)>& op,
                                    const std::vector<SuperWord>& src,
                                    const std::vector<SuperWord>& dst, const std::string& what) {
    SparseMatrix m(static_cast<std::uint32_t>(dst.size()), static_cast<std::uint32_t>(src.size()));
    std::map<SuperWord, std::uint32_t> index;
    for (std::uint32_t i = 0; i < dst.size(); ++i) index.emplace(dst[i], i);
    for (std::uint32_t j = 0; j < src.size(); ++j) {
        SuperElement img = op(SuperElement(ops.alg, src[j]));
        for (auto& [w, c] : img.terms()) {
            auto it = index.find(w);
            if (it == index.end())
                throw std::domain_error(what + ": image word " + ops.alg->word_str(w) +
                                        " outside the target basis");
            m.set(it->second, j, c);
        }
    }
    return m;
}

}  // namespace relative_detail

inline BasicSlice basic_slice(const DgComplexOps& ops, std::uint32_t degree) {
    BasicSlice out;
    out.word_basis = ops.degree_basis(degree);
    const auto sz = static_cast<std::uint32_t>(out.word_basis.size());
    if (ops.iota.empty()) {
        for (std::uint32_t i = 0; i < sz; ++i) out.basic_basis.push_back({{i, Rational(1)}});
        return out;
    }
    auto below = degree > 0 ? ops.degree_basis(degree - 1) : std::vector<SuperWord>{};
    std::vector<SparseMatrix> blocks;
    for (std::size_t s = 0; s < ops.iota.size(); ++s) {
        blocks.push_back(relative_detail::operator_matrix(ops, ops.iota[s], out.word_basis, below,
                                                          "basic_slice iota"));
        blocks.push_back(relative_detail::operator_matrix(ops, ops.lie[s], out.word_basis,
                                                          out.word_basis, "basic_slice lie"));
    }
    std::uint32_t rows = 0;
    for (auto& b : blocks) rows += b.rows();
    SparseMatrix stacked(rows, sz);
    std::uint32_t off = 0;
    for (auto& b : blocks) {
        for (std::uint32_t r = 0; r < b.rows(); ++r)
            for (auto& [c, v] : b.row(r)) stacked.set(off + r, c, v);
        off += b.rows();
    }
    out.basic_basis = stacked.kernel_basis();
    return out;
}

// Matrix of d from one basic slice to the next, in the basic bases.
inline SparseMatrix restrict_d(const DgComplexOps& ops, const BasicSlice& src,
                               const BasicSlice& dst, std::uint32_t dst_degree) {
    SparseMatrix full = relative_detail::operator_matrix(ops, ops.d, src.word_basis,
                                                         dst.word_basis, "restrict_d");
    SparseMatrix basis(static_cast<std::uint32_t>(dst.word_basis.size()),
                       static_cast<std::uint32_t>(dst.basic_basis.size()));
    for (std::uint32_t j = 0; j < dst.basic_basis.size(); ++j)
        for (auto& [i, v] : dst.basic_basis[j]) basis.set(i, j, v);
    SparseMatrix restricted(static_cast<std::uint32_t>(dst.basic_basis.size()),
                            static_cast<std::uint32_t>(src.basic_basis.size()));
    for (std::uint32_t j = 0; j < src.basic_basis.size(); ++j) {
        SparseVec img = full.apply(src.basic_basis[j]);
        auto x = solve(basis, img);
        if (!x)
            throw std::logic_error("restrict_d: differential leaves the basic subspace at degree " +
                                   std::to_string(dst_degree));
        for (auto& [i, v] : *x) restricted.set(i, j, v);
    }
    return restricted;
}

struct BasicCohomologyRow {
    std::uint32_t degree = 0;
    std::uint32_t dimension = 0;
    std::vector<SuperElement> representatives;
};

inline SuperElement element_of(const DgComplexOps& ops, const BasicSlice& slice,
                               const SparseVec& coords) {
    SuperElement out(ops.alg);
    for (auto& [j, cj] : coords)
        for (auto& [i, v] : slice.basic_basis[j]) out.add_term(slice.word_basis[i], cj * v);
    return out;
}

inline std::vector<BasicCohomologyRow> basic_cohomology(const DgComplexOps& ops,
                                                        std::uint32_t deg_lo,
                                                        std::uint32_t deg_hi) {
    std::vector<BasicCohomologyRow> table;
    std::map<std::uint32_t, BasicSlice> cache;
    auto slice_at = [&](std::uint32_t deg) -> BasicSlice& {
        auto it = cache.find(deg);
        if (it == cache.end()) it = cache.emplace(deg, basic_slice(ops, deg)).first;
        return it->second;
    };
    for (std::uint32_t deg = deg_lo; deg <= deg_hi; ++deg) {
        auto& here = slice_at(deg);
        SparseMatrix d_in(static_cast<std::uint32_t>(here.basic_basis.size()), 0);
        if (deg > 0) d_in = restrict_d(ops, slice_at(deg - 1), here, deg);
        SparseMatrix d_out = restrict_d(ops, here, slice_at(deg + 1), deg + 1);
        std::vector<std::string> labels(here.basic_basis.size());
        ComplexSlice cs(std::move(d_in), std::move(d_out), labels);
        auto res = cohomology(cs);
        BasicCohomologyRow row;
        row.degree = deg;
        row.dimension = res.dimension;
        for (auto& v : res.representatives) row.representatives.push_back(element_of(ops, here, v));
        table.push_back(std::move(row));
    }
    return table;
}

}  // namespace jetvar
