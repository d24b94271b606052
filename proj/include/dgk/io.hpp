#pragma once

#include "search.hpp"

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>
#include <variant>

namespace dgk {

using Json = nlohmann::ordered_json;

inline Json chain_json(const Chain& c) { return print_chain(c); }

inline Json chains_json(const std::vector<Chain>& cs)
{
    Json a = Json::array();
    for (const Chain& c : cs) a.push_back(print_chain(c));
    return a;
}

inline std::string print_pairs(const CharPairSeq& s)
{
    std::string out;
    for (auto [c, p] : s) out += (out.empty() ? "" : " ") + ("(" + std::to_string(c) + "," + std::to_string(p) + ")");
    return out;
}

inline Json pairs_json(const CharPairSeq& s)
{
    Json a = Json::array();
    for (auto [c, p] : s) a.push_back(Json::array({c, p}));
    return a;
}

/// "[3,2]" or {"b":2,"twigs":["[2]","[2]","[3]"]}
inline std::variant<Chain, Fork> parse_graph(const std::string& s)
{
    size_t i = s.find_first_not_of(" \t\n");
    if (i != std::string::npos && s[i] == '{') {
        Json j;
        try {
            j = Json::parse(s);
        } catch (const Json::exception& e) {
            throw DomainError(std::string("bad fork JSON: ") + e.what());
        }
        if (!j.contains("b") || !j.contains("twigs") || !j["twigs"].is_array() || j["twigs"].size() != 3)
            throw DomainError("fork JSON needs \"b\" and three \"twigs\"");
        Fork f;
        f.b = j["b"].get<int>();
        for (int k = 0; k < 3; ++k) f.twigs[k] = parse_chain(j["twigs"][k].get<std::string>());
        return f;
    }
    return parse_chain(s);
}

inline Json shape_json(const ExceptionalShape& E)
{
    Json j;
    j["E"] = E.text();
    j["family"] = E.family;
    j["eps"] = E.eps;
    j["length"] = E.length;
    j["KE"] = E.KE;
    j["gamma"] = E.gamma;
    j["d"] = str(E.d);
    j["group_order"] = str(E.group_order);
    j["bk2"] = str(E.bk2);
    j["delta"] = chains_json(E.delta);
    return j;
}

inline Json solution_json(const TwoFiberSolution& s)
{
    Json j;
    j["n"] = s.n;
    j["gamma"] = s.gamma;
    j["kappa"] = s.kappa;
    j["kappa_tilde"] = s.kappa_t;
    j["c"] = s.c;
    j["p"] = s.p;
    j["c_prime"] = s.cp;
    j["p_prime"] = s.pp;
    j["c_tilde"] = s.ct;
    j["p_tilde"] = s.pt;
    j["rho"] = s.rho;
    j["rho_tilde"] = s.rho_t;
    j["alpha"] = s.alpha;
    j["delta_position"] = s.delta_pos == 0 ? "none" : s.delta_pos == 1 ? "F" : "F~";
    j["E"] = print_chain(s.E.shape);
    j["F"] = pairs_json(s.F);
    j["F_tilde"] = pairs_json(s.Ft);
    j["b"] = s.b;
    j["twigs"] = chains_json({s.twigs.begin(), s.twigs.end()});
    return j;
}

inline Json hit_json(const Hit& h)
{
    Json j;
    j["case"] = h.case_name;
    j["b"] = h.b;
    j["twigs"] = chains_json({h.twigs.begin(), h.twigs.end()});
    j["E"] = h.E.text();
    j["eps"] = h.eps;
    j["KE"] = h.E.KE;
    j["bk2_E"] = str(h.E.bk2);
    j["d_E"] = str(h.E.d);
    j["d_D"] = str(h.D.d);
    j["delta"] = str(h.D.delta);
    j["e"] = str(h.D.e);
    j["e_tilde"] = str(h.D.e_tilde);
    if (h.D.delta < 1 && h.D.e_tilde != h.b) {
        LambdaP2 lp = lambda_and_P2(h.b, h.D);
        j["lambda"] = str(lp.lambda);
        j["P2"] = str(lp.P2);
    }
    if (h.fibers) {
        j["solution"] = solution_json(*h.fibers);
        j["gcd_check"] = h.gcd_check;
    }
    Json rep = Json::array();
    for (const auto& r : h.report) rep.push_back({{"predicate", r.name}, {"pass", r.pass}, {"witness", r.witness}});
    j["report"] = rep;
    return j;
}

inline Json search_json(const std::string& name, const SearchOutput& out)
{
    Json j;
    j["search"] = name;
    j["candidates_count"] = out.hits.size();
    j["shapes"] = hit_shapes(out.hits);
    Json a = Json::array();
    for (const Hit& h : out.hits) a.push_back(hit_json(h));
    j["candidates"] = a;
    return j;
}

/// Pretty dump with a trailing newline; parse then dump gives the same bytes.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline std::string scalar(const Json& v)
{
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

/// Every key of the JSON result on its own line; nested objects indent.
inline void render_human(const Json& j, std::ostream& os, const std::string& indent = {})
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        const Json& v = it.value();
        if (v.is_array() && !v.empty() && v.front().is_object()) {
            os << indent << it.key() << ":\n";
            for (const Json& x : v) {
                os << indent << "  -\n";
                render_human(x, os, indent + "    ");
            }
        } else if (v.is_array()) {
            os << indent << it.key() << ":";
            for (const Json& x : v) os << " " << (x.is_array() ? x.dump() : scalar(x));
            os << "\n";
        } else if (v.is_object()) {
            os << indent << it.key() << ":\n";
            render_human(v, os, indent + "  ");
        } else {
            os << indent << it.key() << ": " << scalar(v) << "\n";
        }
    }
}

// ---- search configuration files ----

inline Json twig_spec_json(const SearchConfig::TwigSpec& s)
{
    Json j = Json::object();
    if (!s.chains.empty()) j["chains"] = chains_json(s.chains);
    if (s.d.first) j["d"] = {s.d.first, s.d.second};
    if (!s.families.empty()) {
        Json f = Json::array();
        for (const Chain& c : s.families) {
            std::string t = "[";
            for (size_t i = 0; i < c.size(); ++i) t += (i ? "," : "") + (c[i] == 0 ? std::string("(k)") : std::to_string(c[i]));
            f.push_back(t + "]");
        }
        j["families"] = f;
        j["k"] = {s.k.first, s.k.second};
        if (s.d_max) j["d_max"] = s.d_max;
    }
    return j;
}

inline Json config_json(const SearchConfig& c)
{
    Json j;
    j["search"] = c.name;
    j["predicates"] = std::vector<std::string>(c.predicates.begin(), c.predicates.end());
    j["eps2_scope"] = c.eps2_scope;
    j["group_order"] = c.group_order_mode;
    if (c.name == "fiber-pairs") {
        Json opts = Json::array();
        for (const EOption& e : c.e_options)
            opts.push_back({{"shape", print_chain(e.shape)}, {"gamma", e.gamma}, {"eps", e.eps}, {"KE", e.KE}, {"delta_two", e.delta_two}});
        j["e_options"] = opts;
        j["twig_list"] = chains_json(c.twig_list);
        j["alpha_max"] = c.alpha_max;
        j["c_prime_max"] = c.cp_max;
        return j;
    }
    j["b_values"] = c.b_values;
    j["four_eps2"] = c.four_eps2;
    j["catalog_length"] = c.catalog_length;
    Json cases = Json::array();
    for (const auto& cs : c.cases) {
        Json t = Json::array();
        for (const auto& s : cs.twigs) t.push_back(twig_spec_json(s));
        cases.push_back({{"name", cs.name}, {"twigs", t}, {"ordered", cs.ordered}});
    }
    j["cases"] = cases;
    return j;
}

inline SearchConfig::TwigSpec parse_twig_spec(const Json& j)
{
    SearchConfig::TwigSpec s;
    if (j.contains("chains"))
        for (const auto& c : j["chains"]) s.chains.push_back(parse_chain(c.get<std::string>()));
    if (j.contains("d")) s.d = {j["d"][0].get<i64>(), j["d"][1].get<i64>()};
    if (j.contains("families"))
        for (const auto& f : j["families"]) s.families.push_back(parse_family(f.get<std::string>()));
    if (j.contains("k")) s.k = {j["k"][0].get<int>(), j["k"][1].get<int>()};
    s.d_max = j.value("d_max", i64(0));
    return s;
}

inline SearchConfig parse_config(const Json& j)
{
    SearchConfig c;
    try {
        c.name = j.at("search").get<std::string>();
        for (const auto& p : j.at("predicates")) {
            std::string n = p.get<std::string>();
            const auto& all = predicate_names();
            if (std::find(all.begin(), all.end(), n) == all.end()) throw DomainError("unknown predicate " + n);
            c.predicates.insert(n);
        }
        c.eps2_scope = j.value("eps2_scope", std::string("below2"));
        c.group_order_mode = j.value("group_order", std::string("seifert"));
        if (c.eps2_scope != "below2" && c.eps2_scope != "all") throw DomainError("eps2_scope must be below2 or all");
        if (c.group_order_mode != "seifert" && c.group_order_mode != "h1") throw DomainError("group_order must be seifert or h1");
        if (j.contains("b_values")) c.b_values = j["b_values"].get<std::vector<int>>();
        c.four_eps2 = j.value("four_eps2", false);
        c.catalog_length = j.value("catalog_length", 0);
        if (j.contains("cases"))
            for (const auto& cs : j["cases"]) {
                SearchConfig::Case k;
                k.name = cs.at("name").get<std::string>();
                if (cs.at("twigs").size() != 3) throw DomainError("a case needs three twig specs");
                for (int i = 0; i < 3; ++i) k.twigs[i] = parse_twig_spec(cs["twigs"][i]);
                k.ordered = cs.value("ordered", std::vector<int>{});
                c.cases.push_back(std::move(k));
            }
        if (j.contains("e_options"))
            for (const auto& e : j["e_options"])
                c.e_options.push_back({parse_chain(e.at("shape").get<std::string>()), e.at("gamma").get<int>(), e.at("eps").get<int>(),
                                       e.at("KE").get<int>(), e.value("delta_two", false)});
        if (j.contains("twig_list"))
            for (const auto& t : j["twig_list"]) c.twig_list.push_back(parse_chain(t.get<std::string>()));
        c.alpha_max = j.value("alpha_max", 3);
        c.cp_max = j.value("c_prime_max", 12);
    } catch (const Json::exception& e) {
        throw DomainError(std::string("bad bounds file: ") + e.what());
    }
    return c;
}

inline Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw DomainError(path + ": " + e.what());
    }
}

inline SearchConfig load_config(const std::string& path) { return parse_config(read_json_file(path)); }

// ---- built-in bounds, identical to the files under bounds/ ----

inline SearchConfig::TwigSpec d_range(i64 lo, i64 hi)
{
    SearchConfig::TwigSpec s;
    s.d = {lo, hi};
    return s;
}

inline SearchConfig::TwigSpec fixed(std::initializer_list<Chain> cs)
{
    SearchConfig::TwigSpec s;
    s.chains = cs;
    return s;
}

inline std::vector<std::string> search_names() { return {"final-bounds", "xy", "knonpos", "fiber-pairs"}; }

inline SearchConfig default_config(const std::string& name)
{
    SearchConfig c;
    c.name = name;
    c.eps2_scope = "all";
    if (name == "final-bounds") {
        c.predicates = {"noether", "zar", "square", "w2", "eps2"};
        c.cases.push_back({"d1>=3", {d_range(3, 3), d_range(3, 3), d_range(3, 5)}, {0, 1, 2}});
        c.cases.push_back({"d1=2", {d_range(2, 2), d_range(3, 5), d_range(3, 41)}, {0, 1, 2}});
    } else if (name == "final-bounds-relaxed") {
        c = default_config("final-bounds");
        c.name = name;
        c.cases = {{"wide", {d_range(2, 4), d_range(2, 11), d_range(2, 41)}, {0, 1, 2}}};
    } else if (name == "xy") {
        c.predicates = {"square", "noether", "bmy", "eps2", "zar", "w2"};
        c.cases.push_back({"xy", {d_range(2, 4), d_range(2, 11), d_range(2, 41)}, {0, 1, 2}});
    } else if (name == "knonpos") {
        c.predicates = {"noether", "zar", "square", "bmy", "eps2", "kle0"};
        c.b_values = {1};
        c.cases.push_back({"case1", {fixed({{3}}), d_range(3, 11), d_range(3, 42)}, {1, 2}});
        SearchConfig::TwigSpec fam;
        for (const char* f : {"[(k),3,2]", "[3,(k),3,2]", "[4,(k),3,2]", "[2,3,(k),3,2]"}) fam.families.push_back(parse_family(f));
        fam.k = {0, 9};
        fam.d_max = 102;
        c.cases.push_back({"case2", {fixed({{3}}), fixed({{3}}), fam}, {}});
    } else if (name == "fiber-pairs") {
        c.predicates = {"wdelta", "noether", "bmy", "zar", "square", "eps2"};
        c.group_order_mode = "h1";
        c.e_options = {{{2, 3}, 3, 2, 1, true}, {{3}, 3, 2, 1, false}, {{4}, 4, 1, 2, false}, {{5}, 5, 1, 3, false}};
        for (const char* t : {"[2]", "[2,2]", "[2,2,2]", "[2,2,2,2]", "[2,2,2,2,2]", "[3]", "[4]", "[5]", "[6]", "[2,3]", "[3,2]"})
            c.twig_list.push_back(parse_chain(t));
    } else {
        throw DomainError("unknown search " + name);
    }
    return c;
}

inline SearchOutput run_search(const SearchConfig& c, int jobs = 1)
{
    if (c.name == "fiber-pairs") return search_fiber_pairs(c);
    return run_boundary_search(c, jobs);
}

} // namespace dgk
