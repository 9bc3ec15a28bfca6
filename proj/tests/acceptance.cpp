// Acceptance suite: every criterion prints a single pass/fail line; the
// process exits nonzero if any criterion fails. All arithmetic is exact, so
// every check is an equality check, never a tolerance.

#include "jetvar/cli.hpp"
#include "jetvar/equivariant.hpp"
#include "jetvar/formal_vf.hpp"
#include "jetvar/weil.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

using namespace jetvar;

namespace {

int failures = 0;

void criterion(int num, const std::string& what, const std::function<bool()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
        ok = fn();
    } catch (const std::exception& e) {
        note = std::string(" (") + e.what() + ")";
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::printf("[%s] criterion %2d: %s%s  [%lld ms]\n", ok ? "PASS" : "FAIL", num, what.c_str(),
                note.c_str(), static_cast<long long>(ms));
    std::fflush(stdout);
    if (!ok) ++failures;
}

RationalFunction jv(const JetContextPtr& ctx, std::uint32_t a, MultiIndex j = {}) {
    return RationalFunction::variable(ctx->jet_symbol(a, std::move(j)));
}

int run_cli(const std::vector<std::string>& args, std::string* text = nullptr) {
    std::vector<const char*> argv{"jetvar"};
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    if (text) *text = out.str();
    return code;
}

}  // namespace

int main() {
    criterion(1, "Euler-Lagrange equals the classical oracle on 60 random lagrangians", [] {
        std::mt19937 rng(90210);
        int count = 0;
        for (std::uint32_t n : {1u, 2u})
            for (std::uint32_t m : {1u, 2u}) {
                auto ctx = JetContext::trivial_bundle(n, m);
                for (int t = 0; t < 15; ++t) {
                    auto lam =
                        JetForm::volume(ctx) * oracles::random_jet_polynomial(ctx, 2, 2, rng);
                    if (euler_lagrange(lam) != oracles::classical_euler_lagrange(lam))
                        return false;
                    ++count;
                }
            }
        // the global sign is frozen by the 1/2 u_x^2 case
        auto ctx = JetContext::trivial_bundle(1, 1);
        auto lam = JetForm::volume(ctx) *
                   (RationalFunction(Rational(1, 2)) * jv(ctx, 0, {0}) * jv(ctx, 0, {0}));
        auto expect =
            wedge(JetForm::theta(ctx, 0), JetForm::volume(ctx) * (-jv(ctx, 0, {0, 0})));
        return count >= 50 && euler_lagrange(lam) == expect;
    });

    criterion(2, "bicomplex identities and interior Euler projector, exact", [] {
        std::mt19937 rng(777);
        for (std::uint32_t n : {1u, 2u})
            for (std::uint32_t m : {1u, 2u}) {
                auto ctx = JetContext::trivial_bundle(n, m);
                for (int t = 0; t < 8; ++t) {
                    std::uniform_int_distribution<std::uint32_t> pd(0, n), qd(0, 2);
                    auto a = oracles::random_form(ctx, pd(rng), qd(rng), 2, rng);
                    if (!a.d_h().d_h().is_zero()) return false;
                    if (!a.d_v().d_v().is_zero()) return false;
                    if (!(a.d_h().d_v() + a.d_v().d_h()).is_zero()) return false;
                    auto w = oracles::random_form(ctx, n, 1, 1, rng);
                    auto iw = interior_euler(w, 1);
                    if (interior_euler(iw, 1) != iw) return false;
                    auto eta = oracles::random_form(ctx, n - 1, 1, 1, rng);
                    if (!eta.d_h().is_zero() && !interior_euler(eta.d_h(), 1).is_zero())
                        return false;
                    auto lam = JetForm::volume(ctx) * oracles::random_jet_polynomial(ctx, 1, 2, rng);
                    if (!interior_euler(euler_lagrange(lam).d_v(), 2).is_zero()) return false;
                }
            }
        return true;
    });

    criterion(3, "prolongation is a bracket morphism on 20 random projectable pairs", [] {
        std::mt19937 rng(31415);
        int pairs = 0;
        for (std::uint32_t n : {1u, 2u}) {
            auto ctx = JetContext::trivial_bundle(n, 1);
            for (int t = 0; t < 10; ++t) {
                auto x = oracles::random_projectable(ctx, rng);
                auto y = oracles::random_projectable(ctx, rng);
                auto prx = prolong(x), pry = prolong(y);
                auto prb = prolong(field_bracket(x, y));
                for (std::uint32_t o = 0; o <= 3; ++o)
                    for (auto& J : mi_all(n, o)) {
                        auto coord = jv(ctx, 0, J);
                        if (prx.apply(pry.apply(coord)) - pry.apply(prx.apply(coord)) !=
                            prb.apply(coord))
                            return false;
                    }
                ++pairs;
            }
        }
        return pairs == 20;
    });

    criterion(4, "Weil acyclicity H^k(W(g)) = 0 for k = 1..6, g in {gl(1), gl(2), so(3)}", [] {
        for (auto g : {LieAlgebra::abelian(1, "gl1"), LieAlgebra::gl(2), LieAlgebra::so3()}) {
            auto w = build_weil(g, 4);
            auto table = relative_cohomology(w, SubalgebraEmbedding::zero_into(g), 1, 6);
            for (auto& row : table)
                if (row.dimension != 0) return false;
        }
        return true;
    });

    criterion(5, "Godbillon-Vey: W_(1)(gl(1)) and WO_1 both (1,0,0,1) with matched classes", [] {
        auto w = build_weil(LieAlgebra::abelian(1, "gl1"), 1);
        auto wt = relative_cohomology(w, SubalgebraEmbedding::zero_into(w.g), 0, 3);
        std::vector<std::uint32_t> wd;
        for (auto& r : wt) wd.push_back(r.dimension);
        if (wd != std::vector<std::uint32_t>{1, 0, 0, 1}) return false;
        auto wo = build_wo(1);
        auto wot = dga_cohomology(wo.algebra, wo.d, 0, 3);
        std::vector<std::uint32_t> wod;
        for (auto& r : wot) wod.push_back(r.dimension);
        if (wod != std::vector<std::uint32_t>{1, 0, 0, 1}) return false;
        // transport the degree-3 representative along l -> U1, L -> C1
        SuperElement image(wo.algebra);
        for (auto& [word, c] : wt[3].representatives[0].terms()) {
            SuperElement term = SuperElement::unit(wo.algebra, c);
            for (auto& [g, e] : word.factors()) {
                std::uint32_t target = g == w.lambda(0) ? wo.u_gen[0] : wo.c_gen[0];
                for (std::uint32_t r = 0; r < e; ++r)
                    term = term * SuperElement::generator(wo.algebra, target);
            }
            image += term;
        }
        return wo.d.apply(image).is_zero() && !is_exact(wo.algebra, wo.d, image);
    });

    criterion(6, "WO_2 dims (1,0,0,0,1); W_(2)(gl(2)) rel so(2) dims (1,0,1,0,1); T^2 = C_2", [] {
        auto rep = check_even_euler_extension(2, 0, 4);
        return rep.dims_match && rep.wo_dims == std::vector<std::uint32_t>{1, 0, 0, 0, 1} &&
               rep.w_dims == std::vector<std::uint32_t>{1, 0, 1, 0, 1} &&
               rep.has_degree_n_class && rep.square_is_cn_class;
    });

    criterion(7, "Gelfand-Fuks relations and beta cochain maps (n <= 2, abelian and so(3))", [] {
        for (std::uint32_t n : {1u, 2u}) {
            FormalVfModel m(n, std::nullopt, 4);
            for (std::uint32_t i = 0; i < n; ++i)
                for (std::uint32_t j = 0; j < n; ++j) {
                    SuperElement expect(m.algebra());
                    for (std::uint32_t k = 0; k < n; ++k)
                        expect += m.theta(k) * m.theta(i, mi_plus({j}, k));
                    if (m.curvature_R(i, j) != expect) return false;
                    SuperElement b = m.d(m.curvature_R(i, j));
                    for (std::uint32_t k = 0; k < n; ++k)
                        b += m.theta(i, {k}) * m.curvature_R(k, j) -
                             m.curvature_R(i, k) * m.theta(k, {j});
                    if (!b.is_zero()) return false;
                }
        }
        for (auto g : {LieAlgebra::abelian(1, "u1"), LieAlgebra::so3()}) {
            FormalVfModel m(2, g, 4);
            for (std::uint32_t a = 0; a < g.dim(); ++a) {
                SuperElement expect(m.algebra());
                for (std::uint32_t i = 0; i < 2; ++i) expect += m.theta(i) * m.sigma(a, {i});
                if (m.curvature_S(a) != expect) return false;
            }
            auto w = build_weil(LieAlgebra::product(LieAlgebra::gl(2), g), 2);
            FormalVfModel target(2, g, 5);
            if (!BetaMap(w, target).is_cochain_map()) return false;
        }
        {
            auto w = build_weil(LieAlgebra::product(LieAlgebra::gl(1), LieAlgebra::abelian(1, "u1")), 1);
            FormalVfModel target(1, LieAlgebra::abelian(1, "u1"), 4);
            if (!BetaMap(w, target).is_cochain_map()) return false;
        }
        return true;
    });

    criterion(8, "Lemma 15 (metrics, n = 2) and Lemma 20 (n = 2, abelian and so(3))", [] {
        return verify_lemma15(2).ok && verify_lemma20(2, LieAlgebra::abelian(1, "u1")).ok &&
               verify_lemma20(2, LieAlgebra::so3()).ok;
    });

    criterion(9, "psi_sigma(q(omega_hor^S, Omega_hor)) = q(theta^S, R) at n = 2", [] {
        return verify_prop14(2).ok;
    });

    criterion(10, "equivariant closedness: d_c f(F_G) = 0 (abelian) and d_c p1(Omega_G) = 0", [] {
        return verify_cartan(2, 3).ok;
    });

    criterion(11, "Pfaffian identity Pf(M)^2 = det(M) for symbolic antisymmetric M, sizes 2, 4", [] {
        auto ctx = JetContext::trivial_bundle(1, 1);
        for (std::uint32_t n : {2u, 4u}) {
            MatrixOfForms m(ctx, n);
            for (std::uint32_t i = 0; i < n; ++i)
                for (std::uint32_t j = i + 1; j < n; ++j) {
                    auto v = RationalFunction::variable(sym(
                        "acc" + std::to_string(n) + "_" + std::to_string(i) + std::to_string(j)));
                    m.e[i][j] = JetForm(ctx, v);
                    m.e[j][i] = JetForm(ctx, -v);
                }
            auto pf = form_pfaffian(m);
            if (wedge(pf, pf) != form_det(m)) return false;
        }
        return true;
    });

    criterion(12, "anomaly verdicts with series-oracle validation to form degree 12", [] {
        auto so2 = RingPresentation::so(2);
        for (long r : {1L, 2L, 5L}) {
            auto res = anomaly_P(2, RepDescriptor::trivial(r));
            auto expect = MultiPoly::variable(so2.gens[0]) * Rational(-r, 24);
            if (res.polynomial.value != expect || res.cancels) return false;
        }
        if (!anomaly_P(2, RepDescriptor::trivial(0)).cancels) return false;
        // additivity
        auto pa = anomaly_P(6, RepDescriptor::sum({RepDescriptor::vector_rep(),
                                                   RepDescriptor::dirac_spinor()}));
        auto pb = anomaly_P(6, RepDescriptor::vector_rep());
        auto pc = anomaly_P(6, RepDescriptor::dirac_spinor());
        if (pa.polynomial.value != pb.polynomial.value + pc.polynomial.value) return false;
        // bidegree decomposition: the pure gravitational block obstructs
        // regardless of the gauge representation
        auto u1 = RingPresentation::u(1);
        auto q = anomaly_Q(2, RepDescriptor::trivial(1), u1, RepDescriptor::line(7));
        bool grav_nonzero = false;
        for (auto& b : q.bidegrees)
            if (b.grav == 2 && b.gauge == 0 && !b.vanishes) grav_nonzero = true;
        if (!grav_nonzero || q.cancels) return false;
        // the (0,2) block must also be present for a charged line
        if (q.polynomial.bidegree_component(0, 2).value.is_zero()) return false;
        // series-oracle validation to form degree 12 (grade 6)
        for (std::uint32_t n : {6u, 8u}) {
            auto pres = RingPresentation::so(n);
            auto mine = a_hat(pres, 6);
            auto series = oracles::charring::a_hat_z_series(7);
            auto prod = oracles::charring::product_over_roots(series, pres.roots(), 6);
            auto symm = oracles::charring::symmetrize(prod, pres.roots(), pres.gens);
            MultiPoly expected;
            for (auto& [mo, c] : symm.terms())
                if (pres.monomial_grade(mo) <= 6) expected.add_term(mo, c);
            if (mine.value != expected) return false;
        }

        auto so6 = RingPresentation::so(6);
        auto vec = chern_character(so6, RepDescriptor::vector_rep(), 6);
        auto vsum = oracles::charring::sum_over_roots(oracles::charring::two_cosh_z_series(7), 3, 6);
        auto vsym = oracles::charring::symmetrize(vsum, 3, so6.gens);
        MultiPoly vexp;
        for (auto& [mo, c] : vsym.terms())
            if (so6.monomial_grade(mo) <= 6) vexp.add_term(mo, c);
        if (vec.value != vexp) return false;
        auto dir = chern_character(so6, RepDescriptor::dirac_spinor(), 6);
        auto dprod = oracles::charring::product_over_roots(
            oracles::charring::two_cosh_half_z_series(7), 3, 6);
        auto dsym = oracles::charring::symmetrize(dprod, 3, so6.gens);
        MultiPoly dexp;
        for (auto& [mo, c] : dsym.terms())
            if (so6.monomial_grade(mo) <= 6) dexp.add_term(mo, c);
        return dir.value == dexp;
    });

    criterion(13, "transgression d Tp(omega, omega_hor) = p(Omega) - p(Omega_hor), p = tr^2", [] {
        MetricJetModel m(2);
        auto w_hor = m.omega_hor();
        auto w_ful = m.omega();
        for (std::vector<std::uint32_t> p : {std::vector<std::uint32_t>{2}, {1, 1}}) {
            auto tp = transgression(p, w_hor, w_ful);
            if (tp.d() != char_form_traces(p, w_ful.curvature()) -
                              char_form_traces(p, w_hor.curvature()))
                return false;
        }
        return true;
    });

    criterion(14, "parser round trip on a 50-file corpus; exit codes 0/2/3/4 exercised", [] {
        std::mt19937 rng(5150);
        int corpus = 0;
        for (std::uint32_t n : {1u, 2u})
            for (std::uint32_t m : {1u, 2u}) {
                auto ctx = JetContext::trivial_bundle(n, m);
                for (int t = 0; t < 13; ++t) {
                    std::uniform_int_distribution<std::uint32_t> pd(0, n), qd(0, 2);
                    auto f = oracles::random_form(ctx, pd(rng), qd(rng), 2, rng);
                    std::string path = "acceptance_expr_" + std::to_string(corpus) + ".txt";
                    {
                        std::ofstream out(path);
                        out << print_form(f);
                    }
                    std::ifstream in(path);
                    std::stringstream ss;
                    ss << in.rdbuf();
                    if (parse_form(ss.str(), ctx) != f) return false;
                    ++corpus;
                }
            }
        if (corpus < 50) return false;
        // exit codes through the dispatch layer
        std::ofstream("acceptance_lag.txt") << "1/2 * u1_1**2 * d(x1)";
        std::ofstream("acceptance_bad.txt") << "1/2 * (";
        std::ofstream("acceptance_other.txt") << "u1_1 * th(u1) ^ d(x1)";
        std::string out;
        if (run_cli({"el", "acceptance_lag.txt"}, &out) != cli::exit_ok) return false;
        if (out != "-u1_11 th(u1) ^ d(x1)\n") return false;
        if (run_cli({"el", "acceptance_bad.txt"}) != cli::exit_parse_error) return false;
        if (run_cli({"el", "acceptance_missing.txt"}) != cli::exit_precondition) return false;
        if (run_cli({"equiv", "acceptance_lag.txt", "acceptance_lag.txt", "--k", "0"}) !=
            cli::exit_precondition)
            return false;
        std::ofstream("acceptance_src2.txt") << "-u1_11 th(u1) ^ d(x1)";
        if (run_cli({"equiv", "acceptance_other.txt", "acceptance_src2.txt", "--k", "1"}) !=
            cli::exit_verification)
            return false;
        return true;
    });

    if (failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return 1;
}
