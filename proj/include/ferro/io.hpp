#pragma once

// Run configuration, field/history CSV files and JSON reports.

#include "ferro/diagnostics.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ferro {

using json = nlohmann::json;

struct DomainSpec {
    std::string shape = "disk"; // disk | rectangle | polygon
    Point center = Point::Zero();
    double radius = 1.0;
    Point lo = Point::Zero(), hi = Point(1, 1);
    std::vector<Point> vertices;

    Domain build() const;
};

struct InitConfig {
    std::string type = "random"; // random | seeded | file
    double amplitude = 0.1;
    std::vector<Point> points;
    std::vector<double> degrees;
    double q_scale = 0;
    std::string path; // run directory holding q.csv and M.csv
};

struct RunConfig {
    std::string command = "relax";
    DomainSpec domain;
    double h = 0.02;
    double h_ratio = 0; // sweep: h = h_ratio * eps when positive
    double beta = 1.0;
    double eps = 0.08;
    std::vector<double> eps_ladder; // sweep
    std::string mode = "mixed";
    int degree = 1;
    InitConfig init;
    std::string dt_policy = "adaptive";
    double dt = 0;
    double safety = 1.0;
    double tol = 1e-5;
    long max_steps = 400000;
    bool allow_unstable = false;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    // analysis commands
    std::vector<Point> points;
    std::vector<double> degrees;
    std::vector<double> sigma_ladder;
    int multistart = 8;
    std::string relax_dir, optimize_dir;
};

// Strict parse: unknown keys and wrong types raise ConfigError.
RunConfig parse_config(const json& j);
RunConfig load_config(const std::string& path);
// Every field with defaults expanded.
json to_json(const RunConfig& c);

// FNV-1a of the canonical dump of the resolved config, as 16 hex digits.
std::string config_hash(const RunConfig& c);

SolverConfig solver_config(const RunConfig& c);
InitSpec init_spec(const RunConfig& c, const DomainGrid& grid);

// Node fields as CSV: i,j,x,y,<names...>, active nodes in lattice order.
void write_field_csv(const std::string& path, const Field& u, const DomainGrid& grid,
                     const std::vector<std::string>& names);
Field read_field_csv(const std::string& path, const DomainGrid& grid, const std::vector<std::string>& names);

void write_history_csv(const std::string& path, const std::vector<HistoryRow>& rows);
std::vector<HistoryRow> read_history_csv(const std::string& path);

void write_json(const std::string& path, const json& j);
json read_json(const std::string& path);

// Canonical number formatting shared by CSV writers (shortest round-trip).
std::string format_double(double v);

json to_json(const PotentialConstants& c);
json to_json(const EnergyReport& e);
json to_json(const std::vector<Defect>& d);
json to_json(const JumpSet& js);
json point_json(const Point& p);
Point point_from_json(const json& j);

// One numeric check: value compared against a tolerance.
json check_json(const std::string& name, double value, double tol, bool pass);

} // namespace ferro
