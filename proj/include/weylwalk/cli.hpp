#pragma once

#include "weylwalk/hypergroup.hpp"
#include "weylwalk/params.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace weylwalk::cli {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumericDomain = 3;
inline constexpr int kExitTestFailure = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fully validated run configuration for one subcommand.
struct RunConfig {
    std::string subcommand;
    Chamber cs = Chamber::B;
    int q = 2;
    Field field = Field::real();
    double p = 4.0;
    std::optional<DiscreteMeasure> nu;
    std::optional<ChamberPoint> t;
    std::optional<ChamberPoint> s;
    std::vector<double> lambda;
    int k = 100;
    int R = 200;
    int n_mc = 100000;
    int N = 20000;
    int n_draws = 1000;
    double alpha = 0.001;
    uint64_t seed = 0;
    int workers = 1;
    std::string out_path;    // empty: derive from subcommand + timestamp
    std::string format = "json";
    std::string oracle_which = "bc";
    std::string accumulation = "exact";

    CaseParams case_params() const;
    nlohmann::json echo() const;
};

/// Parse "(t1,...,tq):w;(t1,...,tq):w;..." into a measure on the chamber.
DiscreteMeasure parse_measure(const std::string& text, Chamber cs);

/// Parse "(v1,...,vq)" into a chamber point.
ChamberPoint parse_point(const std::string& text, Chamber cs);

/// Parse argv into a validated RunConfig. Throws ConfigError with a
/// diagnostic naming the offending field.
RunConfig parse_config(const std::vector<std::string>& args);

/// Execute a parsed configuration; writes artifacts and returns the exit code.
int run(const RunConfig& config);

/// UTF-8 CSV with a header row and 17 significant digits per value.
void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows, const std::string& path);

/// Entry point used by the binary: full argv handling including exit codes.
int main_entry(int argc, char** argv);

} // namespace weylwalk::cli
