#pragma once

// Command-line front end: parameter maps, grids, figure recipes and the
// CSV/JSON writers. `run` is the single entry point used by the executable.

#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbs/numerics.hpp"

namespace qbs::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Format { Csv, Json };

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitConvergence = 3;

/// Inclusive grid "lo:hi:n" with n >= 1 points (n = 1 requires lo == hi).
struct Grid {
    double lo = 0.0;
    double hi = 0.0;
    int n = 1;

    std::vector<double> values() const;
    nlohmann::ordered_json to_json() const;
};

Grid parse_grid(const std::string& text);

/// Typed access to string-valued parameters; every getter validates.
class Params {
public:
    Params() = default;
    explicit Params(std::map<std::string, std::string> values) : values_(std::move(values)) {}

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& def) const;
    std::string choice(const std::string& key, const std::string& def,
                       const std::set<std::string>& allowed) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double def) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int def) const;
    Grid get_grid(const std::string& key, const std::string& def) const;
    std::vector<double> get_list(const std::string& key, const std::string& def) const;

    const std::map<std::string, std::string>& raw() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

struct Column {
    std::string name;
    std::string unit;
};

/// One command's output: a numeric table plus provenance.
struct Result {
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    nlohmann::ordered_json grid = nlohmann::ordered_json::object();
    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> equations;
    std::string normalization;
    std::vector<std::string> warnings;

    void add_row(std::vector<double> row);
};

std::string format_number(double v);
void write_csv(const Result& r, std::ostream& os);
void write_json(const Result& r, const numerics::QuadratureOptions& opts, std::ostream& os);

struct Recipe {
    std::string name;
    std::string figure;       // the figure panel it reproduces
    std::string operation;    // module operation that produces the data
    std::string parameters;   // parameter set used
    std::function<Result(const Params&, const numerics::QuadratureOptions&)> build;
};

const std::vector<Recipe>& figure_recipes();

struct RunConfig {
    std::string command;
    Params params;
    std::string output_path;  // empty: standard output
    Format format = Format::Csv;
};

/// Runs one command; returns the process exit status. Diagnostics go to `err`,
/// data to `output_path` (written atomically at the end) or to `out`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (including --config files) and runs.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Flat key=value config file to a parameter map. '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Command implementations, exposed for tests.
Result run_command(const std::string& command, const Params& p,
                   const numerics::QuadratureOptions& opts);

}  // namespace qbs::cli
