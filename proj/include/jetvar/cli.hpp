#pragma once

#include "jetvar/char_ring.hpp"
#include "jetvar/dsl.hpp"
#include "jetvar/equivariant.hpp"
#include "jetvar/formal_vf.hpp"
#include "jetvar/weil.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace jetvar::cli {

// exit codes
constexpr int exit_ok = 0;
constexpr int exit_parse_error = 2;
constexpr int exit_precondition = 3;
constexpr int exit_verification = 4;

using nlohmann::json;

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open input file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::pair<std::uint32_t, std::uint32_t> parse_range(const std::string& spec) {
    auto dots = spec.find("..");
    if (dots == std::string::npos) {
        unsigned long v = std::stoul(spec);
        return {static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(v)};
    }
    return {static_cast<std::uint32_t>(std::stoul(spec.substr(0, dots))),
            static_cast<std::uint32_t>(std::stoul(spec.substr(dots + 2)))};
}

inline std::pair<int, int> parse_signed_range(const std::string& spec) {
    auto dots = spec.find("..", spec.empty() || spec[0] != '-' ? 0 : 1);
    if (dots == std::string::npos) {
        int v = std::stoi(spec);
        return {v, v};
    }
    return {std::stoi(spec.substr(0, dots)), std::stoi(spec.substr(dots + 2))};
}

inline LieAlgebra algebra_by_name(const std::string& name) {
    if (name == "gl1") return LieAlgebra::abelian(1, "gl1");
    if (name == "gl2") return LieAlgebra::gl(2);
    if (name == "gl3") return LieAlgebra::gl(3);
    if (name == "so2") return LieAlgebra::so(2);
    if (name == "so3") return LieAlgebra::so3();
    if (name.rfind("ab", 0) == 0)
        return LieAlgebra::abelian(static_cast<std::uint32_t>(std::stoul(name.substr(2))), name);
    throw PreconditionError("unknown algebra '" + name + "'");
}

inline RepDescriptor parse_rep(const std::string& spec) {
    std::vector<RepDescriptor> parts;
    std::stringstream ss(spec);
    std::string atom;
    while (std::getline(ss, atom, ',')) {
        auto colon = atom.find(':');
        std::string head = atom.substr(0, colon);
        if (head == "trivial")
            parts.push_back(RepDescriptor::trivial(std::stol(atom.substr(colon + 1))));
        else if (head == "vector")
            parts.push_back(RepDescriptor::vector_rep());
        else if (head == "dirac")
            parts.push_back(RepDescriptor::dirac_spinor());
        else if (head == "line")
            parts.push_back(RepDescriptor::line(std::stol(atom.substr(colon + 1))));
        else
            throw PreconditionError("unknown representation '" + atom + "'");
    }
    if (parts.empty()) throw PreconditionError("empty representation spec");
    if (parts.size() == 1) return parts[0];
    return RepDescriptor::sum(std::move(parts));
}

// strip ring tags for human-readable invariant polynomials
inline std::string pretty_invariant(const MultiPoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : p.terms()) {
        Rational a = c;
        bool neg = a.sign() < 0;
        if (neg) a = -a;
        os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
        first = false;
        std::string mono;
        for (auto& [v, e] : m.factors()) {
            std::string nm = sym_name(v);
            auto dot = nm.find('.');
            if (dot != std::string::npos) nm = nm.substr(dot + 1);
            if (!mono.empty()) mono += "*";
            mono += nm;
            if (e > 1) mono += "**" + std::to_string(e);
        }
        if (mono.empty())
            os << a.str();
        else if (a.is_one())
            os << mono;
        else
            os << a.str() << " " << mono;
    }
    return os.str();
}

// append-only cohomology cache: one JSON record per line
class ResultCache {
public:
    explicit ResultCache(std::string path) : path_(std::move(path)) {
        if (path_.empty()) return;
        std::ifstream in(path_);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                json rec = json::parse(line);
                records_[rec.at("key").get<std::string>()] = rec.at("dim").get<std::uint32_t>();
            } catch (...) {
                // ignore malformed lines; the cache is advisory
            }
        }
    }

    std::optional<std::uint32_t> lookup(const std::string& key) const {
        auto it = records_.find(key);
        if (it == records_.end()) return std::nullopt;
        return it->second;
    }

    void store(const std::string& key, std::uint32_t dim) {
        if (path_.empty() || records_.count(key)) return;
        records_[key] = dim;
        std::ofstream out(path_, std::ios::app);
        json rec{{"key", key}, {"dim", dim}};
        out << rec.dump() << "\n";
    }

private:
    std::string path_;
    std::map<std::string, std::uint32_t> records_;
};

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact symbolic workbench for variational bicomplex and anomaly computations"};
    app.require_subcommand(1);
    bool machine = false;
    std::string cache_path;
    if (const char* env = std::getenv("JETVAR_CACHE")) cache_path = env;
    app.add_flag("--json", machine, "machine-readable JSON output");
    app.add_option("--cache", cache_path, "cohomology cache file (default: $JETVAR_CACHE)");

    std::string file_a, file_b, degrees = "0..4", weights = "0..0";
    std::uint32_t n = 1, m = 1, k = 1, trunc = 4;
    std::string algebra = "gl1", rel = "none", gauge = "", suite, rep_spec = "trivial:1",
                gauge_group = "u1", gauge_rep = "trivial:1";

    auto* el = app.add_subcommand("el", "Euler-Lagrange source form of a lagrangian");
    el->add_option("file", file_a)->required();
    el->add_option("--n", n);
    el->add_option("--m", m);

    auto* hh = app.add_subcommand("helmholtz", "Helmholtz obstruction and variationality verdict");
    hh->add_option("file", file_a)->required();
    hh->add_option("--n", n);
    hh->add_option("--m", m);

    auto* eq = app.add_subcommand("equiv", "functional equivalence of two forms");
    eq->add_option("a", file_a)->required();
    eq->add_option("b", file_b)->required();
    eq->add_option("--k", k)->required();
    eq->add_option("--n", n);
    eq->add_option("--m", m);

    auto* weil = app.add_subcommand("weil", "relative Weil algebra cohomology table");
    weil->add_option("--algebra", algebra);
    weil->add_option("--rel", rel, "none | full | so (so(n) inside gl(n))");
    weil->add_option("--trunc", trunc);
    weil->add_option("--degrees", degrees);

    auto* wo = app.add_subcommand("wo", "cohomology of the truncated WO_n algebra");
    wo->add_option("--n", n)->required();
    wo->add_option("--degrees", degrees);

    auto* gf = app.add_subcommand("gf", "relative Gelfand-Fuks cohomology per degree and weight");
    gf->add_option("--n", n)->required();
    gf->add_option("--gauge", gauge);
    gf->add_option("--rel", rel, "none | so | sog");
    gf->add_option("--degrees", degrees);
    gf->add_option("--weights", weights);

    auto* verify = app.add_subcommand("verify", "geometric identity suites");
    verify->add_option("--suite", suite, "lemma15 | lemma20 | prop14 | cartan | bianchi")
        ->required();
    verify->add_option("--n", n);
    verify->add_option("--gauge", gauge);

    auto* anomaly = app.add_subcommand("anomaly", "gravitational anomaly polynomial P");
    anomaly->add_option("--n", n)->required();
    anomaly->add_option("--rep", rep_spec);

    auto* mixed = app.add_subcommand("mixed", "mixed anomaly polynomial Q");
    mixed->add_option("--n", n)->required();
    mixed->add_option("--rep", rep_spec);
    mixed->add_option("--gauge-group", gauge_group, "u1 | u2 | ...");
    mixed->add_option("--gauge-rep", gauge_rep);

    for (auto* sc : app.get_subcommands({})) sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help
            out << app.help();
            return exit_ok;
        }
        err << e.what() << "\n";
        return exit_precondition;
    }

    try {
        if (*el) {
            auto ctx = JetContext::trivial_bundle(n, m);
            JetForm lam = parse_form(read_file(file_a), ctx);
            JetForm src = euler_lagrange(lam);
            if (machine)
                out << json{{"command", "el"},
                            {"params", {{"n", n}, {"m", m}}},
                            {"result", {{"source_form", src.str()}}}}
                           .dump()
                    << "\n";
            else
                out << src.str() << "\n";
            return exit_ok;
        }
        if (*hh) {
            auto ctx = JetContext::trivial_bundle(n, m);
            JetForm src = parse_form(read_file(file_a), ctx);
            JetForm obstruction = helmholtz(src);
            bool variational = obstruction.is_zero();
            if (machine)
                out << json{{"command", "helmholtz"},
                            {"params", {{"n", n}, {"m", m}}},
                            {"result",
                             {{"obstruction", obstruction.str()}, {"variational", variational}}}}
                           .dump()
                    << "\n";
            else
                out << obstruction.str() << "\n"
                    << (variational ? "VARIATIONAL" : "NOT VARIATIONAL") << "\n";
            return exit_ok;
        }
        if (*eq) {
            auto ctx = JetContext::trivial_bundle(n, m);
            JetForm a = parse_form(read_file(file_a), ctx);
            JetForm b = parse_form(read_file(file_b), ctx);
            bool same = functional_equiv(a, b, k);
            if (machine)
                out << json{{"command", "equiv"},
                            {"params", {{"n", n}, {"m", m}, {"k", k}}},
                            {"result", {{"equivalent", same}}}}
                           .dump()
                    << "\n";
            else
                out << (same ? "EQUIVALENT" : "DISTINCT") << "\n";
            return same ? exit_ok : exit_verification;
        }
        if (*weil) {
            auto [lo, hi] = parse_range(degrees);
            LieAlgebra g = algebra_by_name(algebra);
            auto w = build_weil(g, trunc);
            SubalgebraEmbedding emb = SubalgebraEmbedding::zero_into(g);
            if (rel == "full") emb = SubalgebraEmbedding::full(g);
            else if (rel == "so") {
                std::uint32_t gn = static_cast<std::uint32_t>(std::sqrt(double(g.dim())));
                if (gn * gn != g.dim() || algebra.rfind("gl", 0) != 0)
                    throw PreconditionError("--rel so needs a gl(n) algebra");
                emb = SubalgebraEmbedding::so_in_gl(gn);
            } else if (rel != "none")
                throw PreconditionError("unknown --rel value '" + rel + "'");
            ResultCache cache(cache_path);
            std::vector<std::uint32_t> dims;
            json jrows = json::array();
            for (std::uint32_t deg = lo; deg <= hi; ++deg) {
                std::string key = "weil|" + algebra + "|" + rel + "|" + std::to_string(trunc) +
                                  "|" + std::to_string(deg);
                std::uint32_t dim;
                if (auto hit = cache.lookup(key)) {
                    dim = *hit;
                } else {
                    dim = relative_cohomology(w, emb, deg, deg)[0].dimension;
                    cache.store(key, dim);
                }
                dims.push_back(dim);
                jrows.push_back({{"degree", deg}, {"dim", dim}});
            }
            if (machine)
                out << json{{"command", "weil"},
                            {"params",
                             {{"algebra", algebra}, {"rel", rel}, {"trunc", trunc},
                              {"degrees", degrees}}},
                            {"result", jrows}}
                           .dump()
                    << "\n";
            else {
                for (std::size_t i = 0; i < dims.size(); ++i) out << (i ? " " : "") << dims[i];
                out << "\n";
            }
            return exit_ok;
        }
        if (*wo) {
            auto [lo, hi] = parse_range(degrees);
            auto table = wo_cohomology(n, lo, hi);
            json jrows = json::array();
            for (std::size_t i = 0; i < table.size(); ++i) {
                jrows.push_back({{"degree", table[i].degree}, {"dim", table[i].dimension}});
                if (!machine) out << (i ? " " : "") << table[i].dimension;
            }
            if (machine)
                out << json{{"command", "wo"},
                            {"params", {{"n", n}, {"degrees", degrees}}},
                            {"result", jrows}}
                           .dump()
                    << "\n";
            else
                out << "\n";
            return exit_ok;
        }
        if (*gf) {
            auto [dlo, dhi] = parse_range(degrees);
            auto [wlo, whi] = parse_signed_range(weights);
            std::optional<LieAlgebra> g;
            if (!gauge.empty()) g = algebra_by_name(gauge);
            RelSubalgebra r = RelSubalgebra::none;
            if (rel == "so") r = RelSubalgebra::so_n;
            else if (rel == "sog") r = RelSubalgebra::so_n_times_g;
            else if (rel != "none")
                throw PreconditionError("unknown --rel value '" + rel + "'");
            std::uint32_t order = static_cast<std::uint32_t>(
                std::max<int>(2, whi + static_cast<int>(dhi) + 2));
            FormalVfModel model(n, g, order);
            ResultCache cache(cache_path);
            json jrows = json::array();
            for (int w = wlo; w <= whi; ++w) {
                std::vector<std::uint32_t> dims;
                for (std::uint32_t deg = dlo; deg <= dhi; ++deg) {
                    std::string key = "gf|" + std::to_string(n) + "|" + gauge + "|" + rel + "|" +
                                      std::to_string(deg) + "|" + std::to_string(w);
                    std::uint32_t dim;
                    if (auto hit = cache.lookup(key)) {
                        dim = *hit;
                    } else {
                        auto rows = relative_ce_cohomology(model, r, deg, deg, w, w);
                        dim = rows[0].dimension;
                        cache.store(key, dim);
                    }
                    dims.push_back(dim);
                    jrows.push_back({{"degree", deg}, {"weight", w}, {"dim", dim}});
                }
                if (!machine) {
                    out << "w=" << w << ":";
                    for (auto d : dims) out << " " << d;
                    out << "\n";
                }
            }
            if (machine)
                out << json{{"command", "gf"},
                            {"params",
                             {{"n", n}, {"gauge", gauge}, {"rel", rel}, {"degrees", degrees},
                              {"weights", weights}}},
                            {"result", jrows}}
                           .dump()
                    << "\n";
            return exit_ok;
        }
        if (*verify) {
            IdentityReport rep;
            std::uint32_t nn = (n == 1) ? 2 : n;  // geometry suites default to n = 2
            LieAlgebra g = gauge.empty() ? LieAlgebra::so3() : algebra_by_name(gauge);
            if (suite == "lemma15") rep = verify_lemma15(nn);
            else if (suite == "lemma20") rep = verify_lemma20(nn, g);
            else if (suite == "prop14") rep = verify_prop14(nn);
            else if (suite == "cartan") rep = verify_cartan(nn);
            else if (suite == "bianchi") rep = verify_bianchi(nn, g);
            else
                throw PreconditionError("unknown suite '" + suite + "'");
            if (machine)
                out << json{{"command", "verify"},
                            {"params", {{"suite", suite}, {"n", nn}}},
                            {"result", {{"ok", rep.ok}, {"failure", rep.failure}}}}
                           .dump()
                    << "\n";
            else
                out << (rep.ok ? "[PASS] " : "[FAIL] ") << suite
                    << (rep.ok ? "" : ": " + rep.failure) << "\n";
            return rep.ok ? exit_ok : exit_verification;
        }
        if (*anomaly) {
            auto res = anomaly_P(n, parse_rep(rep_spec));
            if (machine)
                out << json{{"command", "anomaly"},
                            {"params", {{"n", n}, {"rep", rep_spec}}},
                            {"result",
                             {{"P", pretty_invariant(res.polynomial.value)},
                              {"cancels", res.cancels}}}}
                           .dump()
                    << "\n";
            else
                out << "P = " << pretty_invariant(res.polynomial.value) << " ; "
                    << (res.cancels ? "CANCELS" : "OBSTRUCTED") << "\n";
            return exit_ok;
        }
        if (*mixed) {
            RingPresentation gp = [&] {
                if (gauge_group.rfind("u", 0) == 0)
                    return RingPresentation::u(
                        static_cast<std::uint32_t>(std::stoul(gauge_group.substr(1))));
                throw PreconditionError("unknown gauge group '" + gauge_group + "'");
            }();
            auto res = anomaly_Q(n, parse_rep(rep_spec), gp, parse_rep(gauge_rep));
            json jb = json::array();
            for (auto& b : res.bidegrees)
                jb.push_back({{"grav", b.grav}, {"gauge", b.gauge}, {"vanishes", b.vanishes}});
            if (machine)
                out << json{{"command", "mixed"},
                            {"params",
                             {{"n", n}, {"rep", rep_spec}, {"gauge_group", gauge_group},
                              {"gauge_rep", gauge_rep}}},
                            {"result",
                             {{"Q", pretty_invariant(res.polynomial.value)},
                              {"cancels", res.cancels},
                              {"bidegrees", jb}}}}
                           .dump()
                    << "\n";
            else {
                out << "Q = " << pretty_invariant(res.polynomial.value) << " ; "
                    << (res.cancels ? "CANCELS" : "OBSTRUCTED") << "\n";
                for (auto& b : res.bidegrees)
                    out << "  bidegree (" << b.grav << "," << b.gauge << "): "
                        << (b.vanishes ? "0" : "nonzero") << "\n";
            }
            return exit_ok;
        }
    } catch (const DslError& e) {
        err << e.what() << "\n";
        return exit_parse_error;
    } catch (const PreconditionError& e) {
        err << e.what() << "\n";
        return exit_precondition;
    } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return exit_precondition;
    } catch (const std::domain_error& e) {
        err << e.what() << "\n";
        return exit_precondition;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_verification;
    }
    return exit_precondition;
}

}  // namespace jetvar::cli
