#include <dgk/checks.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#ifndef DGK_DEFAULT_GOLDEN_DIR
#define DGK_DEFAULT_GOLDEN_DIR "golden"
#endif

using namespace dgk;

namespace {

void emit(const Json& j, bool json)
{
    if (json) std::cout << dump(j);
    else render_human(j, std::cout);
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

void emit_csv(const SearchOutput& out)
{
    std::cout << "case,b,T1,T2,T3,E,eps,d_D,delta,e,e_tilde,failed\n";
    for (const Hit& h : out.hits) {
        std::string failed;
        for (const auto& r : h.report)
            if (!r.pass) failed += (failed.empty() ? "" : ";") + r.name;
        std::vector<std::string> row{h.case_name, std::to_string(h.b), print_chain(h.twigs[0]), print_chain(h.twigs[1]),
                                     print_chain(h.twigs[2]), h.E.text(), std::to_string(h.eps), str(h.D.d),
                                     str(h.D.delta), str(h.D.e), str(h.D.e_tilde), failed};
        for (size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << csv_field(row[i]);
        std::cout << "\n";
    }
}

Json compute(const std::string& what, const std::string& graph)
{
    auto g = parse_graph(graph);
    Json j;
    j["graph"] = graph;
    if (auto* c = std::get_if<Chain>(&g)) {
        if (what == "d") {
            j["d"] = str(disc(*c));
        } else if (what == "dprime") {
            j["dprime"] = str(d_prime(*c));
        } else if (what == "bark") {
            BarkCoefficients b = bark_chain(*c);
            Json co = Json::array();
            for (const Rat& x : b.coefficients) co.push_back(str(x));
            j["coefficients"] = co;
            j["bk2"] = str(b.bk_square);
        } else {
            ChainInvariants inv = invariants(*c);
            j[what] = str(what == "e" ? inv.e : what == "etilde" ? inv.e_tilde : inv.delta);
        }
        return j;
    }
    const Fork& f = std::get<Fork>(g);
    if (what == "dprime") throw DomainError("dprime is defined for chains only");
    if (what == "d") {
        j["d"] = str(fork_invariants(f).d);
    } else if (what == "bark") {
        BarkCoefficients b = bark_fork(f);
        Json co = Json::array();
        for (const Rat& x : b.coefficients) co.push_back(str(x));
        j["coefficients"] = co;
        j["bk2"] = str(b.bk_square);
        j["group_order"] = str(group_order(f));
    } else {
        for (const Chain& t : f.twigs)
            if (t.empty() || !is_admissible(t)) throw DomainError("fork twigs must be nonempty admissible chains");
        ForkInvariants s = fork_sums(f);
        j[what] = str(what == "e" ? s.e : what == "etilde" ? s.e_tilde : s.delta);
    }
    return j;
}

Json solve_twofiber(const std::string& t1, const std::string& t2, const std::vector<std::string>& es, int alpha_max, int cp_max)
{
    SearchConfig cfg = default_config("fiber-pairs");
    std::vector<EOption> opts;
    for (const std::string& e : es) {
        Chain shape = parse_chain(e);
        auto it = std::find_if(cfg.e_options.begin(), cfg.e_options.end(), [&](const EOption& o) { return o.shape == shape; });
        if (it == cfg.e_options.end()) throw DomainError("no two-fiber data for E = " + e + "; use one of [2,3], [3], [4], [5]");
        opts.push_back(*it);
    }
    if (opts.empty()) opts = cfg.e_options;
    std::vector<Hit> hits;
    for (const auto& fc : fiber_pair_candidates({parse_chain(t1)}, {parse_chain(t2)}, opts, alpha_max, cp_max))
        hits.push_back(fiber_pair_hit(fc, cfg));
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.fibers->key() < b.fibers->key(); });
    Json j;
    j["t1"] = t1;
    j["t2"] = t2;
    j["solutions_count"] = hits.size();
    Json a = Json::array();
    for (const Hit& h : hits) {
        Json s = solution_json(*h.fibers);
        s["d_D"] = str(h.D.d);
        s["gcd_check"] = h.gcd_check;
        s["passes_search_predicates"] = passes(h.report, cfg.predicates);
        a.push_back(s);
    }
    j["solutions"] = a;
    return j;
}

std::filesystem::path golden_dir()
{
    if (const char* g = std::getenv("DGK_GOLDEN_DIR")) return g;
    return DGK_DEFAULT_GOLDEN_DIR;
}

int verify(bool write, int jobs)
{
    bool props_ok = true, golden_ok = true;
    for (const CheckResult& r : property_checks()) {
        std::cout << (r.ok ? "ok   " : "FAIL ") << r.name << (r.detail.empty() ? "" : "  " + r.detail) << "\n";
        props_ok = props_ok && r.ok;
    }
    for (const std::string& name : search_names()) {
        Json got = search_json(name, run_search(default_config(name), jobs));
        auto path = golden_dir() / (name + ".json");
        if (write) {
            std::ofstream(path) << dump(got);
            std::cout << "wrote " << path.string() << "\n";
            continue;
        }
        if (!std::filesystem::exists(path)) {
            std::cout << "FAIL golden " << name << "  missing " << path.string() << "\n";
            golden_ok = false;
            continue;
        }
        Json want = read_json_file(path.string());
        bool same = want == got;
        std::cout << (same ? "ok   " : "FAIL ") << "golden " << name << "  " << got["candidates_count"] << " candidates\n";
        golden_ok = golden_ok && same;
    }
    if (!golden_ok) return 3;
    return props_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"dgk: weighted dual graphs, barks, characteristic pairs and boundary searches"};
    app.require_subcommand(1);
    bool json = false;

    auto* compute_cmd = app.add_subcommand("compute", "invariants of a chain \"[3,2]\" or fork {\"b\":2,\"twigs\":[...]}");
    std::string what, graph;
    compute_cmd->add_option("quantity", what)->required()->check(CLI::IsMember({"d", "dprime", "e", "etilde", "delta", "bark"}));
    compute_cmd->add_option("graph", graph)->required();
    compute_cmd->add_flag("--json", json);

    auto* enumerate_cmd = app.add_subcommand("enumerate", "list chains or exceptional shapes");
    enumerate_cmd->require_subcommand(1);
    auto* chains_cmd = enumerate_cmd->add_subcommand("chains", "canonical admissible chains of a given discriminant");
    i64 dval = 0;
    chains_cmd->add_option("--d", dval)->required();
    chains_cmd->add_flag("--json", json);
    auto* eshapes_cmd = enumerate_cmd->add_subcommand("eshapes", "catalog of exceptional divisors");
    std::string eshape_bounds;
    eshapes_cmd->add_option("--bounds", eshape_bounds, "JSON with max_param, max_length, four_eps2");
    eshapes_cmd->add_flag("--json", json);

    auto* pairs_cmd = app.add_subcommand("pairs", "characteristic pairs and fibers");
    pairs_cmd->require_subcommand(1);
    auto* recon_cmd = pairs_cmd->add_subcommand("reconstruct", "fiber from pairs c1 p1 [c2 p2 ...]");
    std::vector<i64> pair_args;
    recon_cmd->add_option("pairs", pair_args)->required();
    recon_cmd->add_flag("--json", json);
    auto* extract_cmd = pairs_cmd->add_subcommand("extract", "pairs from a fiber");
    std::string fiber_text;
    extract_cmd->add_option("fiber", fiber_text)->required();
    extract_cmd->add_flag("--json", json);

    auto* solve_cmd = app.add_subcommand("solve", "ruling equations");
    solve_cmd->require_subcommand(1);
    auto* twofiber_cmd = solve_cmd->add_subcommand("twofiber", "second fiber completing a first fiber with twigs T1, T2");
    std::string t1, t2;
    std::vector<std::string> es;
    int alpha_max = 3, cp_max = 12;
    twofiber_cmd->add_option("--t1", t1)->required();
    twofiber_cmd->add_option("--t2", t2)->required();
    twofiber_cmd->add_option("--e", "exceptional divisor, repeatable; default all")
        ->each([&](const std::string& v) { es.push_back(v); })
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    twofiber_cmd->add_option("--alpha-max", alpha_max);
    twofiber_cmd->add_option("--cp-max", cp_max);
    twofiber_cmd->add_flag("--json", json);

    auto* search_cmd = app.add_subcommand("search", "exhaustive boundary searches");
    std::string search_name, bounds;
    bool csv = false, dump_bounds = false;
    int jobs = 1;
    search_cmd->add_option("name", search_name)->required()->check(CLI::IsMember({"final-bounds", "final-bounds-relaxed", "xy", "knonpos", "fiber-pairs"}));
    search_cmd->add_option("--bounds", bounds);
    auto* json_flag = search_cmd->add_flag("--json", json);
    search_cmd->add_flag("--csv", csv)->excludes(json_flag);
    search_cmd->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
    search_cmd->add_flag("--dump-bounds", dump_bounds, "print the built-in bounds as JSON");

    auto* verify_cmd = app.add_subcommand("verify", "property checks and golden comparison");
    std::string suite;
    bool write_golden = false;
    verify_cmd->add_option("--suite", suite)->required()->check(CLI::IsMember({"paper"}));
    verify_cmd->add_flag("--write-golden", write_golden);
    verify_cmd->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*compute_cmd) {
            Json j = compute(what, graph);
            if (json) std::cout << dump(j);
            else if (what == "bark") render_human(j, std::cout);
            else std::cout << scalar(j[what]) << "\n";
        } else if (*chains_cmd) {
            auto cs = enumerate_admissible_chains(dval);
            if (json) std::cout << dump(Json{{"d", dval}, {"chains", chains_json(cs)}});
            else
                for (const Chain& c : cs) std::cout << print_chain(c) << "\n";
        } else if (*eshapes_cmd) {
            ShapeBounds sb;
            if (!eshape_bounds.empty()) {
                Json b = read_json_file(eshape_bounds);
                sb.max_param = b.value("max_param", sb.max_param);
                sb.max_length = b.value("max_length", sb.max_length);
                sb.four_eps2 = b.value("four_eps2", sb.four_eps2);
            }
            Json a = Json::array();
            for (const auto& E : enumerate_exceptional_shapes(sb)) a.push_back(shape_json(E));
            emit(Json{{"count", a.size()}, {"shapes", a}}, json);
        } else if (*recon_cmd) {
            if (pair_args.size() % 2) throw DomainError("pairs come as c p");
            CharPairSeq seq;
            for (size_t i = 0; i < pair_args.size(); i += 2) seq.push_back({pair_args[i], pair_args[i + 1]});
            Fiber F = reconstruct_fiber(seq);
            auto ch = fiber_chain(F);
            Json j{{"pairs", pairs_json(seq)}, {"fiber", format_fiber(F)}};
            if (ch) j["chain"] = print_chain(*ch);
            j["C_multiplicity"] = F.C >= 0 ? F.m[F.C] : 1;
            emit(j, json);
        } else if (*extract_cmd) {
            CharPairSeq seq = pairs_from_fiber(parse_fiber(fiber_text));
            emit(Json{{"fiber", fiber_text}, {"pairs", pairs_json(seq)}}, json);
        } else if (*twofiber_cmd) {
            emit(solve_twofiber(t1, t2, es, alpha_max, cp_max), json);
        } else if (*search_cmd) {
            SearchConfig cfg = bounds.empty() ? default_config(search_name) : load_config(bounds);
            if (!bounds.empty() && cfg.name != search_name && !(search_name.rfind("final-bounds", 0) == 0 && cfg.name.rfind("final-bounds", 0) == 0))
                throw DomainError("bounds file is for search " + cfg.name);
            if (dump_bounds) {
                std::cout << dump(config_json(cfg));
                return 0;
            }
            SearchOutput out = run_search(cfg, jobs);
            if (csv) emit_csv(out);
            else emit(search_json(cfg.name, out), json);
        } else if (*verify_cmd) {
            return verify(write_golden, jobs);
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
