#pragma once

#include "fdisk/factor.hpp"
#include "fdisk/jets.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdisk::suite {

inline constexpr const char* kSchema = "fdisk-report/1";
inline constexpr std::size_t kMaxCounterexamples = 20;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int n = 2;
    std::vector<Q> points;  // empty: symbolic a_1..a_n
    int N = 2;
    int kmin = -2, kmax = 0;
    int order = 4;
    Q level = Q(-2);
    std::string lie = "sl2";
    std::uint64_t seed = 7;

    PointSetPtr point_set() const;
    nlohmann::json to_json() const;
};

// Parses "symbolic" or a comma-separated list of rationals; values must be distinct.
std::vector<Q> parse_points(const std::string& text);
// "kmin:kmax" or "kmin,kmax".
std::pair<int, int> parse_window(const std::string& text);

// Accumulates one verification: each checked item either passes or becomes a counterexample.
struct Check {
    bool pass = true;
    long checked = 0;
    long failed = 0;
    nlohmann::json counterexamples = nlohmann::json::array();
    nlohmann::json info = nlohmann::json::object();

    void record(bool ok, const std::function<nlohmann::json()>& where);
    void record(bool ok, const char* what) {
        record(ok, [what] { return nlohmann::json{{"check", what}}; });
    }
    // Fold in a sub-report carrying pass / checked / counterexamples.
    void merge(const std::string& label, bool ok, long count, const nlohmann::json& cex);
};

struct Criterion {
    int id;
    std::string title;
    std::function<Check(std::uint64_t seed)> run;
};

const std::vector<Criterion>& criteria();

struct CriterionResult {
    int id;
    std::string title;
    Check check;
    double seconds = 0;  // not part of the JSON report
};

CriterionResult run_criterion(const Criterion& c, std::uint64_t seed);
nlohmann::json acceptance_report(const std::vector<CriterionResult>& results, std::uint64_t seed);

// Full report for one CLI subcommand; input may be null when the subcommand has a default.
struct Report {
    nlohmann::json body;
    bool pass = true;
};

struct CommandOptions {
    RunConfig config;
    std::optional<nlohmann::json> input;
    std::string x = "e", y = "f";
    int m = -1;
    int depth = 2;
    std::string poly = "x^2";
    std::vector<std::string> vars = {"x", "y"};
    std::vector<int> criteria;  // acceptance: empty means all
};

Report run_command(const std::string& name, const CommandOptions& opt);
const std::vector<std::string>& command_names();

// Reads JSON from inline text or, failing that, from a file path.
nlohmann::json read_json_argument(const std::string& text);

}  // namespace fdisk::suite
