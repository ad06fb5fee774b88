#include "fdisk_suite/suite.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fdisk::suite {

using nlohmann::json;

PointSetPtr RunConfig::point_set() const {
    if (points.empty()) return PointSet::symbolic(n);
    if (static_cast<int>(points.size()) != n)
        throw UsageError("--points gives " + std::to_string(points.size()) + " values but --n is " + std::to_string(n));
    return PointSet::rational(points);
}

json RunConfig::to_json() const {
    json pts = "symbolic";
    if (!points.empty()) {
        pts = json::array();
        for (const auto& q : points) pts.push_back(q_to_string(q));
    }
    return json{{"n", n}, {"points", pts}, {"N", N}, {"window", {kmin, kmax}}, {"order", order},
                {"level", q_to_string(level)}, {"lie", lie}, {"seed", seed}};
}

std::vector<Q> parse_points(const std::string& text) {
    if (text.empty() || text == "symbolic") return {};
    std::vector<Q> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(q_from_string(item));
        } catch (const std::exception&) {
            throw UsageError("--points expects 'symbolic' or comma-separated rationals, got '" + item + "'");
        }
    }
    std::set<Q> distinct(out.begin(), out.end());
    if (distinct.size() != out.size()) throw UsageError("--points values must be pairwise distinct");
    return out;
}

std::pair<int, int> parse_window(const std::string& text) {
    auto pos = text.find_first_of(":,");
    if (pos == std::string::npos) throw UsageError("--window expects kmin:kmax");
    try {
        int a = std::stoi(text.substr(0, pos)), b = std::stoi(text.substr(pos + 1));
        if (a > b) throw UsageError("--window needs kmin <= kmax");
        return {a, b};
    } catch (const std::invalid_argument&) {
        throw UsageError("--window expects kmin:kmax");
    }
}

json read_json_argument(const std::string& text) {
    if (auto j = json::parse(text, nullptr, false); !j.is_discarded()) return j;
    std::ifstream in(text);
    if (!in) throw UsageError("input is neither JSON nor a readable file: " + text);
    auto j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw UsageError("file does not contain valid JSON: " + text);
    return j;
}

namespace {

json base(const std::string& command, const RunConfig& cfg) {
    return json{{"schema", kSchema}, {"command", command}, {"config", cfg.to_json()}};
}

Report finish(json body, const Check& c) {
    body["pass"] = c.pass;
    body["checked"] = c.checked;
    body["counterexamples"] = c.counterexamples;
    if (!c.info.empty()) body["info"] = c.info;
    return Report{std::move(body), c.pass};
}

const json& need_input(const CommandOptions& opt, const std::string& command, const char* schema) {
    if (!opt.input) throw UsageError(command + " needs an input; expected " + schema);
    return *opt.input;
}

constexpr const char* kDiskFunSchema = R"({"num": [[coeff, zdeg], ...], "den": {"<point label>": mult}})";

DiskFun disk_input(const PointSetPtr& ps, const json& j, const char* schema) {
    try {
        return DiskFun::from_json(ps, j);
    } catch (const std::exception& e) {
        throw UsageError(std::string("malformed disk function (") + e.what() + "); expected " + schema);
    }
}

int lie_index(const LieData& g, const std::string& label) {
    try {
        return g.index(label);
    } catch (const std::exception&) {
        throw UsageError("unknown Lie basis label '" + label + "' for " + g.name());
    }
}

Report cmd_residue(const CommandOptions& opt) {
    const auto& cfg = opt.config;
    auto ps = cfg.point_set();
    DiskFun f = disk_input(ps, need_input(opt, "residue", kDiskFunSchema), kDiskFunSchema);
    ACoeff r = f.residue();
    json body = base("residue", cfg);
    body["input"] = f.to_json();
    body["value"] = r.to_string();
    body["value_json"] = r.to_json(ps->nvars());
    Check c;
    c.record(f.deriv().residue().is_zero(), "residue of the derivative vanishes");
    return finish(std::move(body), c);
}

Report cmd_pair(const CommandOptions& opt) {
    const auto& cfg = opt.config;
    auto ps = cfg.point_set();
    json body = base("pair", cfg);
    Check c;
    if (opt.input) {
        constexpr const char* schema = R"({"f": DiskFun, "g": DiskFun})";
        const json& in = *opt.input;
        if (!in.contains("f") || !in.contains("g")) throw UsageError(std::string("pair expects ") + schema);
        DiskFun f = disk_input(ps, in.at("f"), kDiskFunSchema), g = disk_input(ps, in.at("g"), kDiskFunSchema);
        ACoeff v = (f * g).residue();
        body["value"] = v.to_string();
        body["value_json"] = v.to_json(ps->nvars());
        c.record(v == (g * f).residue(), "symmetry");
        c.record((f.deriv() * g).residue() == -(f * g.deriv()).residue(), "derivative is skew");
        return finish(std::move(body), c);
    }
    // without input: the pairing matrix of eps against e on the window
    json rows = json::array();
    for (int j = 1; j <= ps->size(); ++j)
        for (int k = cfg.kmin; k <= cfg.kmax; ++k)
            for (int i = 1; i <= ps->size(); ++i)
                for (int l = -cfg.kmax - 1; l <= -cfg.kmin - 1; ++l) {
                    ACoeff r = (DiskFun::dual_basis(ps, {j, k}) * DiskFun::basis(ps, {i, l})).residue();
                    ACoeff expect((k == -l - 1 && i == j) ? 1 : 0);
                    if (!r.is_zero()) rows.push_back(json{{"eps", {j, k}}, {"e", {i, l}}, {"value", r.to_string()}});
                    c.record(r == expect, [&] {
                        return json{{"eps", {j, k}}, {"e", {i, l}}, {"residue", r.to_string()}};
                    });
                }
    body["nonzero"] = rows;
    return finish(std::move(body), c);
}

Report cmd_dualbasis(const CommandOptions& opt) {
    const auto& cfg = opt.config;
    auto ps = cfg.point_set();
    json body = base("dualbasis", cfg);
    int n = ps->size();
    json S = json::array(), L = json::array();
    for (int i = 1; i <= n; ++i) {
        json rs = json::array(), rl = json::array();
        for (int j = 1; j <= n; ++j) {
            rs.push_back(ps->S(i, j).to_string());
            rl.push_back(ps->lambda(i, j).to_string());
        }
        S.push_back(rs);
        L.push_back(rl);
    }
    body["S"] = S;
    body["lambda"] = L;
    json elems = json::array();
    Check c;
    for (int i = 1; i <= n; ++i)
        for (int k = cfg.kmin; k <= cfg.kmax; ++k) {
            DiskFun eps = DiskFun::dual_basis(ps, {i, k});
            elems.push_back(json{{"index", {i, k}}, {"eps", eps.to_json()}, {"e", DiskFun::basis(ps, {i, k}).to_json()}});
            for (int j = 1; j <= n; ++j)
                for (int l = cfg.kmin; l <= cfg.kmax; ++l) {
                    ACoeff r = (eps * DiskFun::basis(ps, {j, -l - 1})).residue();
                    c.record(r == ACoeff((i == j && k == l) ? 1 : 0), [&] {
                        return json{{"eps", {i, k}}, {"e", {j, -l - 1}}, {"residue", r.to_string()}};
                    });
                }
        }
    body["elements"] = elems;
    return finish(std::move(body), c);
}

Report cmd_nprod(const CommandOptions& opt) {
    const auto& cfg = opt.config;
    auto ps = cfg.point_set();
    const auto& g = LieData::get(cfg.lie);
    int a = lie_index(g, opt.x), b = lie_index(g, opt.y);
    auto r = PlainRealization::make(g, cfg.level, ps);
    auto X = Field::generator(r, a), Y = Field::generator(r, b);
    auto P = Field::nprod(X, Y, opt.m);
    json body = base("nprod", cfg);
    body["x"] = opt.x;
    body["y"] = opt.y;
    body["m"] = opt.m;
    body["field"] = P->describe();
    json values = json::array();
    Check c;
    GVec br = g.bracket(g.basis_vector(a), g.basis_vector(b));
    for (const auto& f : basis_window(ps, cfg.kmin, cfg.kmax)) {
        UElem v = P->evaluate(f, cfg.N);
        values.push_back(json{{"f", f.to_json()}, {"value", v.to_json()}});
        if (opt.m >= 0) {
            // the Kac-Moody products: bracket, level times the form, then zero
            UElem expect(r->target(), cfg.N);
            if (opt.m == 0)
                for (std::size_t t = 0; t < br.size(); ++t)
                    if (br[t] != 0) expect += r->generator(static_cast<int>(t), f, cfg.N) * ACoeff(br[t]);
            if (opt.m == 1) expect = UElem::scalar(r->target(), cfg.N, f.residue() * ACoeff(cfg.level * g.form(a, b)));
            c.record(v == expect, [&] { return json{{"f", f.to_string()}, {"value", v.to_string()}}; });
        } else {
            c.record(P->evaluate(f, cfg.N + 1).reduce(cfg.N) == v,
                     [&] { return json{{"f", f.to_string()}, {"check", "truncation consistency"}}; });
        }
    }
    body["values"] = values;
    return finish(std::move(body), c);
}

Report cmd_locality(const CommandOptions& opt) {
    const auto& cfg = opt.config;
    auto ps = cfg.point_set();
    const auto& g = LieData::get(cfg.lie);
    int a = lie_index(g, opt.x), b = lie_index(g, opt.y);
    auto r = PlainRealization::make(g, cfg.level, ps);
    auto cert = locality_order(*Field::generator(r, a), *Field::generator(r, b), cfg.order, cfg.kmin, cfg.kmax, cfg.N);
    GVec br = g.bracket(g.basis_vector(a), g.basis_vector(b));
    bool commuting = std::all_of(br.begin(), br.end(), [](const Q& q) { return q == 0; });
    int expect = (cfg.level != 0 && g.form(a, b) != 0) ? 2 : (commuting ? 0 : 1);
    json body = base("locality", cfg);
    body["x"] = opt.x;
    body["y"] = opt.y;
    body["found"] = cert.found;
    body["order"] = cert.order;
    body["max_checked"] = cert.max_checked;
    body["expected"] = expect;
    Check c;
    c.record(cert.found && cert.order == expect,
             [&] { return json{{"order", cert.order}, {"expected", expect}, {"found", cert.found}}; });
    return finish(std::move(body), c);
}

Report cmd_sugawara(const CommandOptions& opt) {
    const auto& cfg = opt.config;
    auto ps = cfg.point_set();
    const auto& g = LieData::get(cfg.lie);
    auto S = sugawara(PlainRealization::make(g, cfg.level, ps));
    auto rep = centrality_check(S, cfg.N, cfg.kmin, cfg.kmax);
    auto L = sugawara_l_data(g, cfg.level);
    json body = base("sugawara-check", cfg);
    body["critical_level"] = q_to_string(g.critical_level());
    body["nonzero_commutators"] = rep.nonzero;
    body["L_data"] = json{{"L_-1_is_translation", L.l_minus1_is_translation},
                          {"L_0_weight_2", L.l0_is_weight2},
                          {"L_1_vanishes", L.l1_vanishes},
                          {"L_2_scalar", q_to_string(L.l2_scalar)}};
    Check c;
    c.merge("centrality", rep.pass, rep.checked, rep.counterexamples);
    c.counterexamples = rep.counterexamples;
    return finish(std::move(body), c);
}

Report cmd_vertex(const CommandOptions& opt) {
    const auto& cfg = opt.config;
    auto ps = cfg.point_set();
    const auto& g = LieData::get(cfg.lie);
    auto r = PlainRealization::make(g, cfg.level, ps);
    std::vector<FieldPtr> gens;
    for (int a = 0; a < g.dim(); ++a) gens.push_back(Field::generator(r, a));
    auto rep = vertex_axiom_check(gens, opt.depth, cfg.N, cfg.kmin, cfg.kmax);
    json body = base("vertex-check", cfg);
    body["depth"] = opt.depth;
    Check c;
    json sections = json::object();
    for (const auto& [name, sec] : rep.sections) {
        sections[name] = json{{"pass", sec.pass}, {"checked", sec.checked}};
        c.merge(name, sec.pass, sec.checked, sec.counterexamples);
    }
    body["sections"] = sections;
    return finish(std::move(body), c);
}

Report cmd_jet(const CommandOptions& opt) {
    const auto& cfg = opt.config;
    auto ps = cfg.point_set();
    Poly p;
    try {
        p = parse_base_poly(opt.poly, opt.vars);
    } catch (const std::exception& e) {
        throw UsageError(std::string("cannot parse polynomial: ") + e.what());
    }
    JetEngine eng(ps);
    std::vector<std::string> names;
    for (const auto& v : opt.vars)
        for (int i = 1; i <= ps->size(); ++i) names.push_back(v);
    int kmin = std::min(cfg.kmin, -1);
    auto pres = jet_presentation(eng, opt.vars, {p}, kmin);
    json body = base("jet", cfg);
    body["polynomial"] = opt.poly;
    body["variables"] = opt.vars;
    body["presentation"] = pres.to_json(ps->nvars());
    json lifts = json::array();
    for (int j = 1; j <= ps->size(); ++j)
        for (int k = cfg.kmin; k <= cfg.kmax; ++k)
            lifts.push_back(json{{"index", {j, k}}, {"lift", eng.lift(p, BasisIndex{j, k}, cfg.N).to_json(opt.vars, ps->nvars())}});
    body["lifts"] = lifts;
    std::mt19937 rng(static_cast<std::uint32_t>(cfg.seed));
    auto rep = verify_functoriality(eng, p, static_cast<int>(opt.vars.size()), 10, kmin, rng);
    Check c;
    c.merge("functoriality", rep.pass, rep.checked, rep.counterexamples);
    return finish(std::move(body), c);
}

constexpr const char* kConnectionSchema =
    R"({"coeff": {"<lie label>": DiskFun, ...}} or {"canonical": [DiskFun, ...]} with optional "psi"/"v" parts)";

Report cmd_oper_reduce(const CommandOptions& opt) {
    const auto& cfg = opt.config;
    auto ps = cfg.point_set();
    const auto& g = LieData::get(cfg.lie);
    Connection<DiskFun> A;
    json body = base("oper-reduce", cfg);
    if (opt.input) {
        try {
            A = connection_from_json(g, ps, *opt.input);
        } catch (const std::exception& e) {
            throw UsageError(std::string("malformed connection (") + e.what() + "); expected " + kConnectionSchema);
        }
    } else {
        std::mt19937 rng(static_cast<std::uint32_t>(cfg.seed));
        auto c0 = random_canonical(g, ps, rng, 2);
        A = gauge(random_gauge(g, ps, rng, 2), canonical_connection(c0));
        body["generated_from"] = canonical_to_json(c0, ps->nvars());
    }
    body["connection"] = connection_to_json(A, ps->nvars());
    Check c;
    try {
        auto [can, b] = canonical_form(A);
        body["canonical"] = canonical_to_json(can, ps->nvars());
        json factors = json::array();
        for (const auto& f : b.factors) {
            if (f.torus) {
                json d = json::array();
                for (const auto& x : f.diag) d.push_back(x.to_json());
                factors.push_back(json{{"torus", d}});
            } else {
                factors.push_back(json{{"exp", g.label(f.a)}, {"u", f.u.to_json()}});
            }
        }
        body["gauge"] = factors;
        auto B = gauge(b, A), C = canonical_connection(can);
        bool ok = true;
        for (int a = 0; a < g.dim(); ++a) ok = ok && B.coeff[a] == C.coeff[a];
        c.record(ok, "gauge transform of the input equals the canonical connection");
        if (body.contains("generated_from")) {
            std::mt19937 rng(static_cast<std::uint32_t>(cfg.seed));
            auto c0 = random_canonical(g, ps, rng, 2);
            bool same = true;
            for (std::size_t i = 0; i < c0.c.size(); ++i) same = same && c0.c[i] == can.c[i];
            c.record(same, "round trip recovers the generating canonical data");
        }
    } catch (const OperError& e) {
        c.record(false, [&] { return json{{"error", e.what()}}; });
    }
    return finish(std::move(body), c);
}

Report cmd_oper_coordchange(const CommandOptions& opt) {
    const auto& cfg = opt.config;
    auto ps = cfg.point_set();
    const auto& g = LieData::get(cfg.lie);
    json body = base("oper-coordchange", cfg);
    DiskFun psi;
    CanonicalOper<DiskFun> can{&g, std::vector<DiskFun>(g.vcan().size(), DiskFun(ps))};
    if (opt.input) {
        constexpr const char* schema = R"({"psi": DiskFun, "canonical": [DiskFun, ...]})";
        const json& in = *opt.input;
        if (!in.contains("psi")) throw UsageError(std::string("oper-coordchange expects ") + schema);
        psi = disk_input(ps, in.at("psi"), kDiskFunSchema);
        if (in.contains("canonical"))
            for (std::size_t i = 0; i < in.at("canonical").size() && i < can.c.size(); ++i)
                can.c[i] = disk_input(ps, in.at("canonical")[i], kDiskFunSchema);
    } else {
        std::mt19937 rng(static_cast<std::uint32_t>(cfg.seed));
        psi = random_coordinate_change(ps, rng);
        can = random_canonical(g, ps, rng, 2);
    }
    body["psi"] = psi.to_json();
    body["canonical"] = canonical_to_json(can, ps->nvars());
    int prec = std::max(cfg.order, 1);
    Check c;
    try {
        auto out = coord_change(psi, can, prec);
        body["result"] = trunc_to_json(out, g);
        auto oracle = pullback_reduce(psi, can, prec);
        for (std::size_t i = 0; i < out.size(); ++i)
            c.record(out[i] == oracle[i], [&] {
                return json{{"v", i + 1}, {"formula", out[i].value().to_string()}, {"pullback", oracle[i].value().to_string()}};
            });
    } catch (const OperError& e) {
        throw UsageError(std::string("invalid coordinate change: ") + e.what());
    }
    return finish(std::move(body), c);
}

Report cmd_factorize(const CommandOptions& opt) {
    const auto& cfg = opt.config;
    constexpr const char* schema =
        R"({"op": {"merge": {"<source label>": "<target label>", ...}} | {"split": [[labels], [labels]]}, "value": DiskFun, "order": M})";
    const json& in = need_input(opt, "factorize", schema);
    if (!in.contains("op") || !in.contains("value")) throw UsageError(std::string("factorize expects ") + schema);
    // restriction and expansion need the symbolic source ring
    auto ps = PointSet::symbolic(cfg.n);
    DiskFun f = disk_input(ps, in.at("value"), kDiskFunSchema);
    int M = in.value("order", cfg.order);
    json body = base("factorize", cfg);
    body["value"] = f.to_json();
    Check c;
    const json& op = in.at("op");
    try {
        if (op.contains("merge")) {
            std::vector<int> map(ps->size(), -1);
            std::map<std::string, int> target_index;
            std::vector<std::string> order;
            for (int i = 0; i < ps->size(); ++i) {
                if (!op.at("merge").contains(ps->label(i))) throw UsageError("merge must map every point label");
                std::string t = op.at("merge").at(ps->label(i)).get<std::string>();
                if (!target_index.count(t)) {
                    int idx = static_cast<int>(target_index.size());
                    target_index[t] = idx;
                }
                map[i] = target_index[t];
            }
            auto s = Surjection::make(ps, map);
            DiskFun r = restrict(s, f);
            body["op"] = s.to_json();
            body["result"] = r.to_json();
            c.record(restrict(s, f.residue()) == r.residue(), "residue");
            c.record(restrict(s, f.deriv()) == r.deriv(), "derivative");
        } else if (op.contains("split")) {
            std::vector<std::vector<int>> parts;
            for (const auto& p : op.at("split")) {
                std::vector<int> part;
                for (const auto& l : p) part.push_back(ps->index_of(l.is_string() ? l.get<std::string>() : l.dump()));
                parts.push_back(part);
            }
            auto d = Decomposition::make(ps, parts);
            auto e = expand(d, f, M);
            body["op"] = d.to_json();
            body["result"] = e.to_json();
            ACoeff total;
            for (const auto& part : e.parts) total += part.value().residue();
            c.record(total == f.residue(), "residue is the sum of component residues");
            auto ed = expand(d, f.deriv(), M);
            for (std::size_t l = 0; l < e.parts.size(); ++l)
                c.record(ed.parts[l] == e.parts[l].deriv(), "derivative");
        } else {
            throw UsageError(std::string("factorize expects ") + schema);
        }
    } catch (const FactorError& e) {
        throw UsageError(std::string("factorize: ") + e.what());
    }
    return finish(std::move(body), c);
}

Report cmd_acceptance(const CommandOptions& opt) {
    std::vector<CriterionResult> results;
    for (const auto& cr : criteria())
        if (opt.criteria.empty() || std::count(opt.criteria.begin(), opt.criteria.end(), cr.id))
            results.push_back(run_criterion(cr, opt.config.seed));
    json body = acceptance_report(results, opt.config.seed);
    return Report{body, body.at("pass").get<bool>()};
}

using Handler = Report (*)(const CommandOptions&);

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h = {
        {"residue", cmd_residue},
        {"pair", cmd_pair},
        {"dualbasis", cmd_dualbasis},
        {"nprod", cmd_nprod},
        {"locality", cmd_locality},
        {"sugawara-check", cmd_sugawara},
        {"vertex-check", cmd_vertex},
        {"jet", cmd_jet},
        {"oper-reduce", cmd_oper_reduce},
        {"oper-coordchange", cmd_oper_coordchange},
        {"factorize", cmd_factorize},
        {"acceptance", cmd_acceptance},
    };
    return h;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"residue",        "pair",         "dualbasis",  "nprod",
                                                   "locality",       "sugawara-check", "vertex-check", "jet",
                                                   "oper-reduce",    "oper-coordchange", "factorize", "acceptance"};
    return names;
}

Report run_command(const std::string& name, const CommandOptions& opt) {
    auto it = handlers().find(name);
    if (it == handlers().end()) throw UsageError("unknown subcommand: " + name);
    try {
        LieData::get(opt.config.lie);
    } catch (const std::exception&) {
        throw UsageError("unknown Lie type '" + opt.config.lie + "' (shipped: sl2, sl3)");
    }
    if (opt.config.n < 1 || opt.config.n > kMaxPoints) throw UsageError("--n must be between 1 and 6");
    return it->second(opt);
}

}  // namespace fdisk::suite
