#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "jetvar/weil.hpp"

using namespace jetvar;

TEST_CASE("truncation k=0 kills every capital generator word") {
    auto w = build_weil(LieAlgebra::abelian(1, "gl1"), 0);
    CHECK(w.gen_capital(0).is_zero());
    CHECK_FALSE(w.gen_lambda(0).is_zero());
    // the algebra reduces to the exterior algebra on lambda
    CHECK(w.algebra->basis(2).empty());
}

TEST_CASE("H(W_(1)(gl(1)), 0) is (1,0,0,1) in degrees 0..3") {
    auto w = build_weil(LieAlgebra::abelian(1, "gl1"), 1);
    auto table = relative_cohomology(w, SubalgebraEmbedding::zero_into(w.g), 0, 3);
    REQUIRE(table.size() == 4);
    CHECK(table[0].dimension == 1);
    CHECK(table[1].dimension == 0);
    CHECK(table[2].dimension == 0);
    CHECK(table[3].dimension == 1);
    // the degree-3 class is l*L
    REQUIRE(table[3].representatives.size() == 1);
    CHECK(table[3].representatives[0].terms().size() == 1);
    CHECK(w.algebra->word_str(table[3].representatives[0].terms().begin()->first) ==
          "l.e1*L.e1");
}

TEST_CASE("W(g) acyclicity window for gl(1), gl(2), so(3)") {
    for (auto g : {LieAlgebra::abelian(1, "gl1"), LieAlgebra::gl(2), LieAlgebra::so3()}) {
        auto w = build_weil(g, 4);  // window degrees <= 6 unaffected by the truncation
        auto table = relative_cohomology(w, SubalgebraEmbedding::zero_into(g), 1, 6);
        for (auto& row : table) {
            INFO(g.name(), " degree ", row.degree);
            CHECK(row.dimension == 0);
        }
    }
}

TEST_CASE("H(W(g), g) matches invariant polynomials for so(2) and so(3)") {
    // so(2) = abelian dim 1: dims 1 at degree 2 and 4 (powers of the invariant L)
    auto w2 = build_weil(LieAlgebra::so(2), 3);
    auto t2 = relative_cohomology(w2, SubalgebraEmbedding::full(w2.g), 0, 4);
    CHECK(t2[0].dimension == 1);
    CHECK(t2[1].dimension == 0);
    CHECK(t2[2].dimension == 1);  // [L]
    CHECK(t2[3].dimension == 0);
    CHECK(t2[4].dimension == 1);  // [L^2]

    // so(3): no invariant linear form, one quadratic Casimir
    auto w3 = build_weil(LieAlgebra::so3(), 3);
    auto t3 = relative_cohomology(w3, SubalgebraEmbedding::full(w3.g), 0, 4);
    CHECK(t3[0].dimension == 1);
    CHECK(t3[1].dimension == 0);
    CHECK(t3[2].dimension == 0);
    CHECK(t3[3].dimension == 0);
    CHECK(t3[4].dimension == 1);  // Casimir sum L.e_i^2
}

TEST_CASE("relative cohomology is stable when the truncation is raised") {
    for (std::uint32_t k : {2u, 3u, 4u}) {
        auto w = build_weil(LieAlgebra::so(2), k);
        auto t = relative_cohomology(w, SubalgebraEmbedding::full(w.g), 0, 4);
        CHECK(t[2].dimension == 1);
        CHECK(t[4].dimension == 1);
    }
}

TEST_CASE("WO_1: generators, differential, Godbillon-Vey") {
    auto wo = build_wo(1);
    // d U1 = C1
    CHECK(wo.d.apply(SuperElement::generator(wo.algebra, wo.u_gen[0])) ==
          SuperElement::generator(wo.algebra, wo.c_gen[0]));
    // degree-3 basis is {U1*C1}
    auto b3 = wo.algebra->basis(3);
    REQUIRE(b3.size() == 1);
    CHECK(wo.algebra->word_str(b3[0]) == "U1*C1");
    // d(U1*C1) = C1*C1 = 0 after truncation; without truncation it is C1^2
    auto u1c1 = SuperElement(wo.algebra, b3[0]);
    CHECK(wo.d.apply(u1c1).is_zero());
    auto free_alg = SuperAlgebra::create({{"U1", true, 1, 0}, {"C1", false, 2, 0}});
    Derivation dfree(free_alg, true,
                     {SuperElement::generator(free_alg, 1), SuperElement(free_alg)});
    auto img = dfree.apply(SuperElement::generator(free_alg, 0) *
                           SuperElement::generator(free_alg, 1));
    CHECK(img == SuperElement::generator(free_alg, 1) * SuperElement::generator(free_alg, 1));

    auto table = wo_cohomology(1, 0, 3);
    CHECK(table[0].dimension == 1);
    CHECK(table[1].dimension == 0);
    CHECK(table[2].dimension == 0);
    CHECK(table[3].dimension == 1);
    REQUIRE(table[3].representatives.size() == 1);
    CHECK(wo.algebra->word_str(table[3].representatives[0].terms().begin()->first) == "U1*C1");
}

TEST_CASE("Godbillon-Vey classes match under l -> U1, L -> C1") {
    auto w = build_weil(LieAlgebra::abelian(1, "gl1"), 1);
    auto wt = relative_cohomology(w, SubalgebraEmbedding::zero_into(w.g), 3, 3);
    REQUIRE(wt[0].dimension == 1);
    auto rep = wt[0].representatives[0];

    auto wo = build_wo(1);
    // transport the representative along l -> U1, L -> C1
    SuperElement image(wo.algebra);
    for (auto& [word, c] : rep.terms()) {
        SuperElement term = SuperElement::unit(wo.algebra, c);
        for (auto& [g, e] : word.factors()) {
            std::uint32_t target = g == w.lambda(0) ? wo.u_gen[0] : wo.c_gen[0];
            for (std::uint32_t r = 0; r < e; ++r)
                term = term * SuperElement::generator(wo.algebra, target);
        }
        image += term;
    }
    // the image is a nonzero class generating H^3(WO_1)
    CHECK(wo.d.apply(image).is_zero());
    CHECK_FALSE(is_exact(wo.algebra, wo.d, image));
}

TEST_CASE("WO_2 generators and cohomology (1,0,0,0,1)") {
    auto wo = build_wo(2);
    // only U1 (2k-1 <= 2 forces k = 1), plus C1, C2
    CHECK(wo.u_gen.size() == 1);
    CHECK(wo.c_gen.size() == 2);
    auto table = dga_cohomology(wo.algebra, wo.d, 0, 4);
    CHECK(table[0].dimension == 1);
    CHECK(table[1].dimension == 0);
    CHECK(table[2].dimension == 0);
    CHECK(table[3].dimension == 0);
    CHECK(table[4].dimension == 1);
    // degree-4 representative is the class of C2 (P_1)
    REQUIRE(table[4].representatives.size() == 1);
    auto rep = table[4].representatives[0];
    auto c2 = SuperElement::generator(wo.algebra, wo.c_gen[1]);
    bool is_c2_class = false;
    for (long num = -3; num <= 3 && !is_c2_class; ++num) {
        if (num == 0) continue;
        if (is_exact(wo.algebra, wo.d, rep - Rational(num) * c2)) is_c2_class = true;
    }
    CHECK(is_c2_class);
}

TEST_CASE("H^r(WO_n) vanishes for odd r <= 2n") {
    for (std::uint32_t n : {1u, 2u, 3u}) {
        auto table = wo_cohomology(n, 0, 2 * n);
        for (auto& row : table)
            if (row.degree % 2 == 1) {
                INFO("n = ", n, " degree ", row.degree);
                CHECK(row.dimension == 0);
            }
    }
}

TEST_CASE("even Euler extension at n = 2") {
    auto rep = check_even_euler_extension(2, 0, 4);
    CHECK(rep.dims_match);
    CHECK(rep.w_dims == std::vector<std::uint32_t>{1, 0, 1, 0, 1});
    CHECK(rep.wo_dims == std::vector<std::uint32_t>{1, 0, 0, 0, 1});
    CHECK(rep.has_degree_n_class);
    CHECK(rep.square_is_cn_class);
}

TEST_CASE("degree-n basic class at n = 2 is so(2)-basic by construction") {
    auto w = build_weil(LieAlgebra::gl(2), 2);
    auto emb = SubalgebraEmbedding::so_in_gl(2);
    auto rows = relative_cohomology(w, emb, 2, 2);
    REQUIRE(rows[0].dimension == 1);
    auto t = rows[0].representatives[0];
    for (std::uint32_t s = 0; s < emb.sub.dim(); ++s) {
        CHECK(w.apply_iota(emb.inclusion[s], t).is_zero());
        CHECK(w.apply_lie(emb.inclusion[s], t).is_zero());
    }
}
