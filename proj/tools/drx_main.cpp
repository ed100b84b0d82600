#include "drx/drx.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using drx::json;
using drx::Rational;
using drx::TautClass;

struct CommonOpts {
    std::string target_spec = "point";
    std::string format = "json";
    std::string cache_dir;
    bool no_cache = false;
    unsigned jobs = 0;
    long long r_min = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--target", o.target_spec,
                    "target model: 'point', a JSON file path, or inline JSON");
    cmd->add_option("--format", o.format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--cache-dir", o.cache_dir, "cache directory (default: $DRX_CACHE_DIR)");
    cmd->add_flag("--no-cache", o.no_cache, "disable the result cache");
    cmd->add_option("--jobs", o.jobs, "parallel width (default: available cores)");
    cmd->add_option("--rmin", o.r_min, "override the sampling threshold r_min");
}

std::vector<long long> parse_ll_list(const std::string& s) {
    std::vector<long long> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    return out;
}

drx::TargetModel parse_target(const std::string& spec) {
    if (spec == "point") return drx::TargetModel::point();
    if (!spec.empty() && spec.front() == '{')
        return drx::target_from_json(json::parse(spec));
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("cannot open target file: " + spec);
    json j;
    in >> j;
    return drx::target_from_json(j);
}

drx::EngineOptions engine_options(const CommonOpts& o) {
    drx::EngineOptions e;
    e.jobs = o.jobs ? o.jobs : std::max(1u, std::thread::hardware_concurrency());
    e.r_min_override = o.r_min;
    return e;
}

void warn_to_stderr(const std::string& m) { std::cerr << "[drx] " << m << "\n"; }

std::string render_graph_text(const drx::StableGraph& g) {
    std::ostringstream os;
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (v) os << " ";
        os << "v" << v << "(g=" << g.vertices[v].genus;
        if (!g.vertices[v].charge.empty()) {
            os << ",b=[";
            for (size_t i = 0; i < g.vertices[v].charge.size(); ++i)
                os << (i ? "," : "") << g.vertices[v].charge[i];
            os << "]";
        }
        os << ")";
    }
    if (!g.legs.empty()) {
        os << " legs:";
        for (const auto& l : g.legs) os << " " << l.marking << "@v" << l.vertex;
    }
    if (!g.edges.empty()) {
        os << " edges:";
        for (const auto& e : g.edges)
            os << " v" << e.first.vertex << "-v" << e.second.vertex;
    }
    return os.str();
}

std::string render_decor_text(const drx::StableGraph& g, const drx::Decoration& d) {
    std::ostringstream os;
    for (size_t li = 0; li < d.legs.size(); ++li) {
        if (d.legs[li].psi) os << " psi_" << g.legs[li].marking << "^" << d.legs[li].psi;
        if (d.legs[li].xi) os << " xi_" << g.legs[li].marking << "^" << d.legs[li].xi;
    }
    for (size_t ei = 0; ei < d.hpsi.size(); ++ei) {
        if (d.hpsi[ei][0]) os << " psi_e" << ei << "h^" << d.hpsi[ei][0];
        if (d.hpsi[ei][1]) os << " psi_e" << ei << "h'^" << d.hpsi[ei][1];
        if (d.exi[ei]) os << " xi_e" << ei << "^" << d.exi[ei];
    }
    for (size_t v = 0; v < d.eta.size(); ++v)
        for (const auto& f : d.eta[v])
            os << " eta_{" << f.a << "," << f.b << "}(v" << v << ")^" << f.exp;
    return os.str();
}

std::string render_class_text(const TautClass& cls) {
    std::ostringstream os;
    os << "# " << cls.size() << " term(s)\n";
    for (const auto& [key, t] : cls.terms()) {
        os << drx::rational_to_string(t.coeff) << " * [" << render_graph_text(t.graph) << " |"
           << render_decor_text(t.graph, t.decor) << " ]\n";
    }
    return os.str();
}

// Compute-or-reuse wrapper around the class-producing commands. The cache
// stores the canonical JSON payload; a hit is emitted byte-identically.
int emit_class_result(const json& request, const CommonOpts& opts,
                      const std::function<TautClass()>& compute) {
    drx::DiskCache cache = drx::DiskCache::resolve(opts.cache_dir, opts.no_cache);
    std::string request_key = request.dump();
    std::string payload;
    if (auto hit = cache.get(request_key, warn_to_stderr)) {
        payload = *hit;
    } else {
        payload = drx::taut_class_to_json(compute()).dump(1);
        cache.put(request_key, payload);
    }
    if (opts.format == "text")
        std::cout << render_class_text(drx::taut_class_from_json(json::parse(payload)));
    else
        std::cout << payload << "\n";
    return 0;
}

json base_request(const char* op, int g, const std::vector<long long>& A,
                  const drx::CurveClass& beta, const drx::TargetModel& target) {
    json j;
    j["op"] = op;
    j["g"] = g;
    j["A"] = A;
    j["beta"] = beta;
    j["target"] = drx::target_to_json(target);
    return j;
}

int run_selftest(bool quick);

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact graph-sum calculator for double ramification cycles"};
    app.require_subcommand(1);

    CommonOpts dr_opts, pclass_opts, pfixed_opts, chiodo_opts, graphs_opts;
    int arg_g = 0, arg_n = 0, arg_degree = 0, arg_k = 0, arg_max_edges = -1;
    long long arg_r = 0, arg_d = 1;
    unsigned arg_ell = 1;
    std::string arg_A, arg_beta, arg_omega;

    auto* dr = app.add_subcommand("dr", "double ramification cycle as a formal class");
    dr->add_option("--g", arg_g, "genus")->required();
    dr->add_option("--A", arg_A, "ramification vector, comma separated")->required();
    dr->add_option("--beta", arg_beta, "total curve class (default 0)");
    add_common(dr, dr_opts);

    auto* pclass = app.add_subcommand("pclass", "constant term of the graph sum at any degree");
    pclass->add_option("--g", arg_g, "genus")->required();
    pclass->add_option("--A", arg_A, "ramification vector")->required();
    pclass->add_option("--degree", arg_degree, "working degree")->required();
    pclass->add_option("--beta", arg_beta, "total curve class (default 0)");
    add_common(pclass, pclass_opts);

    auto* pfixed = app.add_subcommand("pfixed", "graph sum at a fixed modulus r");
    pfixed->add_option("--g", arg_g, "genus")->required();
    pfixed->add_option("--A", arg_A, "ramification vector")->required();
    pfixed->add_option("--degree", arg_degree, "working degree")->required();
    pfixed->add_option("--r", arg_r, "modulus, at least 2")->required();
    pfixed->add_option("--beta", arg_beta, "total curve class (default 0)");
    add_common(pfixed, pfixed_opts);

    auto* chiodo = app.add_subcommand(
        "chiodo", "constant term of the twisted kernel on prestable graphs");
    chiodo->add_option("--g", arg_g, "genus")->required();
    chiodo->add_option("--A", arg_A, "ramification vector fixing the degree context")
        ->required();
    chiodo->add_option("--k", arg_k, "working degree")->required();
    chiodo->add_option("--beta", arg_beta, "total curve class (default 0)");
    add_common(chiodo, chiodo_opts);

    auto* aell = app.add_subcommand("aell", "reduced rubber invariants over the A_ell surface");
    bool aell_check = false, aell_graphsum = false, aell_closed = false;
    aell->add_flag("--check", aell_check, "run both evaluations and compare");
    aell->add_flag("--graphsum", aell_graphsum, "loop-sum evaluation only");
    aell->add_flag("--closed", aell_closed, "closed-form evaluation only");
    aell->add_option("--ell", arg_ell, "rank of the A_ell lattice")->required();
    aell->add_option("--g", arg_g, "genus")->required();
    aell->add_option("--d", arg_d, "curve class multiple of the root")->required();
    aell->add_option("--A", arg_A, "ramification vector")->required();
    aell->add_option("--omega", arg_omega,
                     "divisor insertions as 1-based dual indices (default: all 1)");

    auto* graphs = app.add_subcommand("graphs", "enumerate stable graphs");
    graphs->add_option("--g", arg_g, "genus")->required();
    graphs->add_option("--n", arg_n, "number of markings")->required();
    graphs->add_option("--beta", arg_beta, "total curve class (default 0)");
    graphs->add_option("--max-edges", arg_max_edges, "edge bound (default: g)");
    add_common(graphs, graphs_opts);

    auto* selftest = app.add_subcommand("selftest", "run the invariant suite");
    bool quick = false;
    selftest->add_flag("--quick", quick, "reduced sample counts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (dr->parsed() || pclass->parsed() || pfixed->parsed()) {
            const CommonOpts& opts = dr->parsed()       ? dr_opts
                                     : pclass->parsed() ? pclass_opts
                                                        : pfixed_opts;
            auto target = parse_target(opts.target_spec);
            auto A = parse_ll_list(arg_A);
            drx::CurveClass beta =
                arg_beta.empty() ? drx::zero_class(target.rank()) : parse_ll_list(arg_beta);
            int degree = dr->parsed() ? arg_g : arg_degree;
            drx::DRRequest req(arg_g, A, beta, target, degree);
            auto eopts = engine_options(opts);

            json key = base_request(dr->parsed()       ? "dr"
                                    : pclass->parsed() ? "pclass"
                                                       : "pfixed",
                                    arg_g, A, beta, target);
            key["degree"] = degree;
            key["rmin"] = opts.r_min;
            if (pfixed->parsed()) {
                key["r"] = arg_r;
                return emit_class_result(
                    key, opts, [&] { return compute_P_fixed_r(req, arg_r, eopts); });
            }
            return emit_class_result(key, opts,
                                     [&] { return compute_P_constant(req, eopts); });
        }

        if (chiodo->parsed()) {
            auto target = parse_target(chiodo_opts.target_spec);
            auto A = parse_ll_list(arg_A);
            drx::CurveClass beta =
                arg_beta.empty() ? drx::zero_class(target.rank()) : parse_ll_list(arg_beta);
            long long asum = 0;
            for (long long a : A) asum += a;
            if (asum != target.pair_c1S(beta))
                throw std::invalid_argument("sum of A must equal pairing");
            auto eopts = engine_options(chiodo_opts);
            json key = base_request("chiodo", arg_g, A, beta, target);
            key["k"] = arg_k;
            key["rmin"] = chiodo_opts.r_min;
            return emit_class_result(key, chiodo_opts, [&] {
                auto pre = drx::enumerate_prestable_graphs(arg_g, static_cast<int>(A.size()), A,
                                                           beta, target, arg_k);
                long long r_min = chiodo_opts.r_min > 0 ? chiodo_opts.r_min
                                                        : drx::default_r_min(A, beta, target);
                return drx::chiodo_constant_class(arg_g, static_cast<int>(A.size()), pre, arg_k,
                                                  r_min, eopts);
            });
        }

        if (aell->parsed()) {
            if (!aell_check && !aell_graphsum && !aell_closed) aell_check = true;
            auto A = parse_ll_list(arg_A);
            auto data = drx::AellData::with_root(arg_ell, 1, arg_ell);
            std::vector<std::vector<Rational>> omegas;
            std::vector<long long> idx(A.size(), 1);
            if (!arg_omega.empty()) idx = parse_ll_list(arg_omega);
            if (idx.size() != A.size())
                throw std::invalid_argument("need one omega index per marking");
            for (long long i : idx) {
                if (i < 1 || static_cast<unsigned>(i) > arg_ell)
                    throw std::invalid_argument("omega index out of range");
                std::vector<Rational> v(arg_ell, Rational(0));
                v[static_cast<size_t>(i - 1)] = 1;
                omegas.push_back(std::move(v));
            }
            json out;
            if (aell_graphsum || aell_check)
                out["graphsum"] = drx::rational_to_string(
                    drx::reduced_dr_invariant_graphsum(data, arg_g, arg_d, A, omegas));
            if (aell_closed || aell_check)
                out["closed"] = drx::rational_to_string(
                    drx::reduced_dr_invariant_closed(data, arg_g, arg_d, A, omegas));
            if (aell_check) {
                bool match = out["graphsum"] == out["closed"];
                out["match"] = match;
                std::cout << (match ? "MATCH " : "MISMATCH ")
                          << out["closed"].get<std::string>() << "\n";
                if (!match) {
                    std::cerr << out.dump() << "\n";
                    return 1;
                }
            } else {
                std::cout << out.dump() << "\n";
            }
            return 0;
        }

        if (graphs->parsed()) {
            auto target = parse_target(graphs_opts.target_spec);
            drx::CurveClass beta =
                arg_beta.empty() ? drx::zero_class(target.rank()) : parse_ll_list(arg_beta);
            int max_edges = arg_max_edges >= 0 ? arg_max_edges : arg_g;
            auto list = drx::enumerate_stable_graphs(arg_g, arg_n, beta, target, max_edges);
            if (graphs_opts.format == "text") {
                std::cout << "# " << list.size() << " graph(s)\n";
                for (const auto& g : list)
                    std::cout << render_graph_text(g)
                              << "  |Aut|=" << drx::canonicalize(g).aut_order << "\n";
            } else {
                json out;
                out["count"] = list.size();
                out["graphs"] = json::array();
                for (const auto& g : list) out["graphs"].push_back(drx::graph_to_json(g));
                std::cout << out.dump(1) << "\n";
            }
            return 0;
        }

        if (selftest->parsed()) return run_selftest(quick);
    } catch (const drx::PolynomialityError& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 2;
}

namespace {

int run_selftest(bool quick) {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };
    drx::EngineOptions eopts;
    eopts.jobs = std::max(1u, std::thread::hardware_concurrency());

    {
        bool ok = drx::series_exp(drx::series_G(40)) == drx::series_S(40);
        for (unsigned n = 0; ok && n <= 50; ++n) {
            Rational lhs = 0;
            for (unsigned i = 0; i <= n; ++i)
                lhs += Rational(1) / Rational(drx::factorial(2 * i + 1) *
                                              drx::factorial(2 * (n - i) + 1));
            ok = lhs ==
                 Rational(drx::int_pow(2, 2 * n + 1)) / Rational(drx::factorial(2 * n + 2));
        }
        report("series identities", ok);
    }
    {
        bool ok = true;
        auto point = drx::TargetModel::point();
        for (int g = 1; g <= 2 && ok; ++g)
            for (const auto& gr : drx::enumerate_stable_graphs(g, 2, {}, point, 2)) {
                for (long long r : {2, 5}) {
                    long long expect = 1;
                    for (int i = 0; i < drx::first_betti(gr); ++i) expect *= r;
                    auto ws = drx::enumerate_weightings(gr, {1, -1}, point, r);
                    ok = ok && static_cast<long long>(ws.size()) == expect;
                }
            }
        report("weighting cardinality r^h1", ok);
    }
    {
        bool ok = true;
        auto point = drx::TargetModel::point();
        std::mt19937 rng(11);
        auto pool = drx::enumerate_stable_graphs(2, 2, {}, point, 2);
        int trials = quick ? 10 : 40;
        for (int t = 0; t < trials && ok; ++t) {
            const auto& gr = pool[rng() % pool.size()];
            long long r = 2 + rng() % 7;
            drx::WeightIntegrand f = drx::WeightIntegrand::edge_monomial(
                std::vector<int>(gr.num_edges(), 1 + static_cast<int>(rng() % 2)), 1);
            ok = drx::sum_over_weightings_enum(gr, {1, -1}, point, f, r) ==
                 drx::sum_over_weightings_tree(gr, {1, -1}, point, f, r);
        }
        report("dual weighting-sum algorithms", ok);
    }
    {
        bool ok = true;
        auto point = drx::TargetModel::point();
        {
            drx::DRRequest req(1, {1, -1}, {}, point, 1);
            ok = drx::compute_P_constant(req, eopts) == drx::naive::P_constant(req);
        }
        if (ok && !quick) {
            auto t = drx::TargetModel::free_monoid(1, {0});
            drx::DRRequest req(1, {1, -1}, {1}, t, 1);
            ok = drx::compute_P_constant(req, eopts) == drx::naive::P_constant(req);
        }
        report("constant class vs interpolation oracle", ok);
    }
    {
        bool ok = true;
        auto point = drx::TargetModel::point();
        for (int d = 0; d <= 1 && ok; ++d) {
            drx::DRRequest req(1, {1, -1}, {}, point, d);
            ok = drx::compute_P_via_twisted_kernel(req, eopts) ==
                 drx::compute_P_constant(req, eopts);
        }
        report("twisted kernel + pullback chain", ok);
    }
    {
        auto rep = drx::verify_grr_exponentiation(quick ? 4 : 8, 8);
        auto neg = drx::verify_grr_exponentiation(4, 6, true);
        report("chern character exponentiation", rep.pass && !neg.pass);
    }
    {
        bool ok = true;
        for (unsigned ell : {1u, 2u}) {
            auto data = drx::AellData::with_root(ell, 1, ell);
            for (int g = 0; g <= (quick ? 1 : 2) && ok; ++g)
                for (long long a = -2; a <= 2 && ok; ++a) {
                    std::vector<std::vector<Rational>> om(2, std::vector<Rational>(ell, 0));
                    om[0][0] = 1;
                    om[1][ell - 1] = 1;
                    ok = drx::reduced_dr_invariant_graphsum(data, g, 1, {a, -a}, om) ==
                         drx::reduced_dr_invariant_closed(data, g, 1, {a, -a}, om);
                }
        }
        report("loop sum vs closed evaluation", ok);
    }
    {
        auto amb = drx::Ambient{2, 0, {}, drx::TargetModel::point(), drx::GraphKind::XValued};
        auto fund = drx::TautClass::fundamental(amb);
        drx::StableGraph sep;
        sep.vertices.push_back({1, {}});
        sep.vertices.push_back({1, {}});
        sep.edges.push_back({{0, 0}, {1, 0}});
        auto delta = drx::normalize(amb, {{sep, drx::Decoration::empty_for(sep), 1}});
        bool ok = drx::product(fund, delta, 2) == delta;
        auto sq = drx::product(delta, delta, 2);
        ok = ok && sq == drx::product(delta, delta, 2);
        ok = ok && sq.size() == 1 && sq.terms().begin()->second.coeff == Rational(-4);
        report("strata product laws", ok);
    }
    {
        auto point = drx::TargetModel::point();
        drx::DRRequest req(1, {2, -2}, {}, point, 1);
        auto cls = drx::compute_P_constant(req, eopts);
        auto j = drx::taut_class_to_json(cls);
        bool ok = drx::taut_class_from_json(j) == cls &&
                  drx::taut_class_to_json(drx::taut_class_from_json(j)).dump() == j.dump();
        report("serialization round trip", ok);
    }

    std::cout << (failures == 0 ? "selftest: all checks passed\n"
                                : "selftest: FAILURES present\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace
