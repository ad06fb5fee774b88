#include "fdisk_suite/suite.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace fdisk;
using nlohmann::json;

int main(int argc, char** argv) {
    CLI::App app{"Exact verification of vertex algebras and opers on the formal n-disk"};
    app.require_subcommand(1);

    int n = 2, N = 2, order = 4;
    std::string points = "symbolic", window = "-2:0", level = "-2", lie = "sl2", json_out;
    std::uint64_t seed = 7;
    suite::CommandOptions opt;
    std::string input;
    std::string vars = "x,y";
    bool all = false;

    app.add_option("--n", n, "number of points")->check(CLI::Range(1, kMaxPoints));
    app.add_option("--points", points, "'symbolic' or comma-separated distinct rationals");
    app.add_option("--N", N, "truncation U / U_N")->check(CLI::NonNegativeNumber);
    app.add_option("--window", window, "basis window kmin:kmax");
    app.add_option("--order", order, "expansion order / precision / locality bound");
    app.add_option("--level", level, "level k (multiple of the normalized form)");
    app.add_option("--lie", lie, "sl2 or sl3");
    app.add_option("--seed", seed, "seed for randomized checks");
    app.add_option("--json-out", json_out, "write the report to this path");

    std::map<std::string, CLI::App*> subs;
    auto sub = [&](const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        s->fallthrough();
        subs[name] = s;
        return s;
    };
    sub("residue", "residue of a disk function")->add_option("input", input, "DiskFun JSON text or file");
    sub("pair", "residue pairing of {f, g}; without input, the eps/e pairing on the window")
        ->add_option("input", input, "JSON text or file");
    sub("dualbasis", "dual basis on the window with its S and lambda matrices");
    for (const char* name : {"nprod", "locality"}) {
        auto* s = sub(name, std::string(name) == "nprod" ? "n-product of two generator fields on the basis window"
                                                          : "locality order of two generator fields");
        s->add_option("--x", opt.x, "left Lie basis label");
        s->add_option("--y", opt.y, "right Lie basis label");
        if (std::string(name) == "nprod") s->add_option("--m", opt.m, "product index");
    }
    sub("sugawara-check", "centrality of the Sugawara field on the window");
    sub("vertex-check", "vertex axioms on the generator fields")->add_option("--depth", opt.depth, "closure depth");
    {
        auto* s = sub("jet", "jet presentation and lifted functions of a polynomial");
        s->add_option("--poly", opt.poly, "polynomial in the base variables");
        s->add_option("--vars", vars, "comma-separated base variable names");
    }
    sub("oper-reduce", "canonical form of an oper connection (random instance without input)")
        ->add_option("input", input, "connection JSON text or file");
    sub("oper-coordchange", "coordinate change of a canonical oper, checked against pullback")
        ->add_option("input", input, "{psi, canonical} JSON text or file");
    sub("factorize", "restriction or expansion of a disk function")->add_option("input", input, "JSON text or file");
    {
        auto* s = sub("acceptance", "run the acceptance criteria");
        s->add_flag("--all", all, "run every criterion");
        s->add_option("--criterion", opt.criteria, "run only these criteria");
    }

    CLI11_PARSE(app, argc, argv);

    std::string command;
    for (const auto& [name, s] : subs)
        if (s->parsed()) command = name;

    try {
        auto& cfg = opt.config;
        cfg.n = n;
        cfg.points = suite::parse_points(points);
        if (!cfg.points.empty() && app.count("--n") == 0) cfg.n = static_cast<int>(cfg.points.size());
        cfg.N = N;
        std::tie(cfg.kmin, cfg.kmax) = suite::parse_window(window);
        cfg.order = order;
        try {
            cfg.level = q_from_string(level);
        } catch (const std::exception&) {
            throw suite::UsageError("--level expects a rational number");
        }
        cfg.lie = lie;
        cfg.seed = seed;
        if (!input.empty()) opt.input = suite::read_json_argument(input);
        std::vector<std::string> names;
        std::stringstream ss(vars);
        for (std::string v; std::getline(ss, v, ',');) names.push_back(v);
        opt.vars = names;
        if (command == "acceptance" && !all && opt.criteria.empty())
            throw suite::UsageError("acceptance needs --all or --criterion");

        auto report = suite::run_command(command, opt);
        std::string text = report.body.dump(2) + "\n";
        if (!json_out.empty()) {
            std::ofstream out(json_out);
            if (!out) throw suite::UsageError("cannot write " + json_out);
            out << text;
        }
        std::cout << text;
        return report.pass ? 0 : 1;
    } catch (const suite::UsageError& e) {
        json err = {{"schema", suite::kSchema}, {"command", command}, {"pass", false},
                    {"error", e.what()}, {"counterexamples", json::array()}};
        std::cerr << err.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        json err = {{"schema", suite::kSchema}, {"command", command}, {"pass", false},
                    {"error", std::string("internal: ") + e.what()}, {"counterexamples", json::array()}};
        std::cerr << err.dump(2) << "\n";
        return 3;
    }
}
