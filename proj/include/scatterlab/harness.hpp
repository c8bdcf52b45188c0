#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace scatterlab {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` text; dotted keys build nested objects, values are JSON
/// literals, bare words are taken as strings, `#` starts a comment.
nlohmann::json parse_config_text(const std::string& text);
nlohmann::json load_config_file(const std::filesystem::path& path);

struct ExperimentConfig {
    std::string experiment;
    int dim = 2;
    std::vector<std::vector<double>> scatterers;  // empty: the north pole
    double sigma = 0.5;
    int rho = 1;
    std::vector<double> beta;                     // re, im pairs; empty: (1, 0)
    bool has_weights = false;
    double m_plus = 1.0;
    double m_minus = 1.0;
    std::vector<double> h_inv;
    std::vector<int> upsilon;
    std::vector<int> ell;
    int random_draws = 0;
    int random_points = 0;
    double rel_tol = 0.05;
    double abs_tol = 0.02;
    double slope_tol = 0.15;
    std::uint64_t seed = 1;
    std::string output_path;
    std::string output_format = "csv";
    nlohmann::json raw;

    /// Field-level validation; throws ConfigError.
    static ExperimentConfig from_json(const nlohmann::json& j);
};

struct VerdictRow {
    std::string experiment;
    int d = 2;
    double h_inv = 0.0;
    int upsilon = 0;
    double sigma = 0.0;
    int rho = 1;
    nlohmann::json params = nlohmann::json::object();
    double measured = 0.0;
    double reference = 0.0;
    std::string ref_provenance;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double slope = 0.0;  // NaN when no fit applies
    bool pass = false;
    std::string error;   // downstream failure surfaced on this row
};

struct Report {
    std::string experiment;
    std::string anchor;
    std::uint64_t seed = 0;
    nlohmann::json config;
    std::vector<VerdictRow> rows;

    bool all_pass() const;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// OLS of log y on log x; needs >= 3 positive samples.
RateFit fit_rate(const std::vector<double>& x, const std::vector<double>& y);

/// Deterministic stream: draw k of stream `seed` is independent of evaluation order.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
    double uniform(std::uint64_t counter) const;  // [0, 1)
    double normal(std::uint64_t counter) const;
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

std::vector<std::string> experiment_names();
std::string experiment_anchor(const std::string& name);

Report run(const ExperimentConfig& cfg);

/// Worker count: hardware concurrency capped by SCATTERLAB_THREADS.
unsigned worker_count();

std::string format_double(double x);
std::string report_csv(const Report& r);
std::string report_json(const Report& r);
Report report_from_json(const std::string& text);
/// Writes `<base>.csv` or `<base>.json`; throws std::runtime_error naming the path on failure.
void emit(const Report& r, const std::filesystem::path& base, const std::string& format);

extern const char* const kCsvHeader;

/// Built-in configurations exercised by `verify-all`.
std::vector<nlohmann::json> verify_all_configs(int dim);

}  // namespace scatterlab
