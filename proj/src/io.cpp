#include "ferro/io.hpp"

#include "ferro/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace ferro {

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where)
{
    if (!j.is_object())
        throw ConfigError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

template <typename T>
void get(const json& j, const char* key, T& out)
{
    if (!j.contains(key))
        return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

void get_points(const json& j, const char* key, std::vector<Point>& out)
{
    if (!j.contains(key))
        return;
    out.clear();
    try {
        for (const json& p : j.at(key))
            out.push_back(point_from_json(p));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

json points_json(const std::vector<Point>& pts)
{
    json a = json::array();
    for (const Point& p : pts)
        a.push_back(point_json(p));
    return a;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    return out;
}

double parse_double(const std::string& s)
{
    double v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw ConfigError("bad number '" + s + "' in csv");
    return v;
}

long parse_long(const std::string& s)
{
    long v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw ConfigError("bad integer '" + s + "' in csv");
    return v;
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot write " + path);
    return f;
}

std::ifstream open_in(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot read " + path);
    return f;
}

} // namespace

Domain DomainSpec::build() const
{
    if (shape == "disk")
        return Domain::disk(center, radius);
    if (shape == "rectangle")
        return Domain::rectangle(lo, hi);
    if (shape == "polygon")
        return Domain::polygon(vertices);
    throw ConfigError("unknown domain shape '" + shape + "'");
}

json point_json(const Point& p) { return json::array({p.x(), p.y()}); }

Point point_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError("a point is a pair of numbers");
    return Point(j[0].get<double>(), j[1].get<double>());
}

RunConfig parse_config(const json& j)
{
    reject_unknown(j,
                   {"command", "domain", "h", "h_ratio", "beta", "eps", "eps_ladder", "mode", "degree", "init",
                    "dt_policy", "dt", "safety", "tol", "max_steps", "allow_unstable", "seed", "out_dir", "points",
                    "degrees", "sigma_ladder", "multistart", "relax_dir", "optimize_dir"},
                   "config");
    RunConfig c;
    get(j, "command", c.command);
    if (j.contains("domain")) {
        const json& d = j.at("domain");
        reject_unknown(d, {"shape", "center", "radius", "lo", "hi", "vertices"}, "domain");
        get(d, "shape", c.domain.shape);
        if (d.contains("center"))
            c.domain.center = point_from_json(d.at("center"));
        get(d, "radius", c.domain.radius);
        if (d.contains("lo"))
            c.domain.lo = point_from_json(d.at("lo"));
        if (d.contains("hi"))
            c.domain.hi = point_from_json(d.at("hi"));
        get_points(d, "vertices", c.domain.vertices);
        if (c.domain.shape != "disk" && c.domain.shape != "rectangle" && c.domain.shape != "polygon")
            throw ConfigError("unknown domain shape '" + c.domain.shape + "'");
    }
    get(j, "h", c.h);
    get(j, "h_ratio", c.h_ratio);
    get(j, "beta", c.beta);
    get(j, "eps", c.eps);
    get(j, "eps_ladder", c.eps_ladder);
    get(j, "mode", c.mode);
    get(j, "degree", c.degree);
    if (j.contains("init")) {
        const json& d = j.at("init");
        reject_unknown(d, {"type", "amplitude", "points", "degrees", "q_scale", "path"}, "init");
        get(d, "type", c.init.type);
        get(d, "amplitude", c.init.amplitude);
        get_points(d, "points", c.init.points);
        get(d, "degrees", c.init.degrees);
        get(d, "q_scale", c.init.q_scale);
        get(d, "path", c.init.path);
        if (c.init.type != "random" && c.init.type != "seeded" && c.init.type != "file")
            throw ConfigError("unknown init type '" + c.init.type + "'");
    }
    get(j, "dt_policy", c.dt_policy);
    get(j, "dt", c.dt);
    get(j, "safety", c.safety);
    get(j, "tol", c.tol);
    get(j, "max_steps", c.max_steps);
    get(j, "allow_unstable", c.allow_unstable);
    get(j, "seed", c.seed);
    get(j, "out_dir", c.out_dir);
    get_points(j, "points", c.points);
    get(j, "degrees", c.degrees);
    get(j, "sigma_ladder", c.sigma_ladder);
    get(j, "multistart", c.multistart);
    get(j, "relax_dir", c.relax_dir);
    get(j, "optimize_dir", c.optimize_dir);

    if (!(c.h > 0))
        throw ConfigError("h must be positive");
    if (!(c.eps > 0))
        throw ConfigError("eps must be positive");
    for (double e : c.eps_ladder)
        if (!(e > 0))
            throw ConfigError("eps_ladder entries must be positive");
    if (!(c.beta > 0))
        throw ConfigError("beta must be positive");
    if (c.h_ratio < 0)
        throw ConfigError("h_ratio must be non-negative");
    parse_bc_mode(c.mode);
    if (c.dt_policy != "adaptive" && c.dt_policy != "fixed")
        throw ConfigError("dt_policy must be 'adaptive' or 'fixed'");
    if (!(c.tol > 0))
        throw ConfigError("tol must be positive");
    if (c.max_steps < 0)
        throw ConfigError("max_steps must be non-negative");
    if (c.multistart < 1)
        throw ConfigError("multistart must be at least 1");
    if (c.init.type == "file" && c.init.path.empty())
        throw ConfigError("file init needs a path");
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream f = open_in(path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_config(j);
}

json to_json(const RunConfig& c)
{
    json d;
    d["shape"] = c.domain.shape;
    d["center"] = point_json(c.domain.center);
    d["radius"] = c.domain.radius;
    d["lo"] = point_json(c.domain.lo);
    d["hi"] = point_json(c.domain.hi);
    d["vertices"] = points_json(c.domain.vertices);
    json in;
    in["type"] = c.init.type;
    in["amplitude"] = c.init.amplitude;
    in["points"] = points_json(c.init.points);
    in["degrees"] = c.init.degrees;
    in["q_scale"] = c.init.q_scale;
    in["path"] = c.init.path;
    json j;
    j["command"] = c.command;
    j["domain"] = d;
    j["h"] = c.h;
    j["h_ratio"] = c.h_ratio;
    j["beta"] = c.beta;
    j["eps"] = c.eps;
    j["eps_ladder"] = c.eps_ladder;
    j["mode"] = c.mode;
    j["degree"] = c.degree;
    j["init"] = in;
    j["dt_policy"] = c.dt_policy;
    j["dt"] = c.dt;
    j["safety"] = c.safety;
    j["tol"] = c.tol;
    j["max_steps"] = c.max_steps;
    j["allow_unstable"] = c.allow_unstable;
    j["seed"] = c.seed;
    j["out_dir"] = c.out_dir;
    j["points"] = points_json(c.points);
    j["degrees"] = c.degrees;
    j["sigma_ladder"] = c.sigma_ladder;
    j["multistart"] = c.multistart;
    j["relax_dir"] = c.relax_dir;
    j["optimize_dir"] = c.optimize_dir;
    return j;
}

std::string config_hash(const RunConfig& c)
{
    json j = to_json(c);
    // Where the outputs go does not change them.
    j.erase("out_dir");
    const std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

SolverConfig solver_config(const RunConfig& c)
{
    SolverConfig s;
    s.dt_policy = c.dt_policy == "fixed" ? SolverConfig::DtPolicy::Fixed : SolverConfig::DtPolicy::Adaptive;
    s.dt = c.dt;
    s.safety = c.safety;
    s.tol = c.tol;
    s.max_steps = c.max_steps;
    s.allow_unstable = c.allow_unstable;
    return s;
}

InitSpec init_spec(const RunConfig& c, const DomainGrid& grid)
{
    InitSpec s;
    s.amplitude = c.init.amplitude;
    s.q_scale = c.init.q_scale;
    if (c.init.type == "random") {
        s.type = InitSpec::Type::Random;
    } else if (c.init.type == "seeded") {
        s.type = InitSpec::Type::Seeded;
        s.points = c.init.points;
        s.degrees = c.init.degrees;
    } else {
        s.type = InitSpec::Type::File;
        s.q0 = read_field_csv(c.init.path + "/q.csv", grid, {"q1", "q2"});
        s.M0 = read_field_csv(c.init.path + "/M.csv", grid, {"M1", "M2"});
    }
    return s;
}

std::string format_double(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void write_field_csv(const std::string& path, const Field& u, const DomainGrid& grid,
                     const std::vector<std::string>& names)
{
    if (static_cast<int>(names.size()) != u.cols())
        throw InvalidInput("write_field_csv: column names do not match the field");
    std::ofstream f = open_out(path);
    f << "i,j,x,y";
    for (const std::string& n : names)
        f << ',' << n;
    f << '\n';
    for (int a : grid.active_nodes()) {
        const Point x = grid.pos(a);
        f << a % grid.nx() << ',' << a / grid.nx() << ',' << format_double(x.x()) << ',' << format_double(x.y());
        for (int k = 0; k < u.cols(); ++k)
            f << ',' << format_double(u(a, k));
        f << '\n';
    }
}

Field read_field_csv(const std::string& path, const DomainGrid& grid, const std::vector<std::string>& names)
{
    std::ifstream f = open_in(path);
    std::string line;
    std::getline(f, line);
    std::vector<std::string> head = split(line);
    std::vector<std::string> want = {"i", "j", "x", "y"};
    want.insert(want.end(), names.begin(), names.end());
    if (head != want)
        throw ConfigError(path + ": unexpected header");
    Field u = grid.zeros(static_cast<int>(names.size()));
    std::size_t rows = 0;
    while (std::getline(f, line)) {
        if (line.empty())
            continue;
        const std::vector<std::string> c = split(line);
        if (c.size() != want.size())
            throw ConfigError(path + ": wrong number of columns");
        const long i = parse_long(c[0]), j = parse_long(c[1]);
        if (i < 0 || j < 0 || i >= grid.nx() || j >= grid.ny())
            throw ConfigError(path + ": node outside the lattice");
        const int id = static_cast<int>(j * grid.nx() + i);
        if (!grid.active(id))
            throw ConfigError(path + ": row for an exterior node");
        for (std::size_t k = 0; k < names.size(); ++k)
            u(id, k) = parse_double(c[4 + k]);
        ++rows;
    }
    if (rows != grid.active_nodes().size())
        throw ConfigError(path + ": field does not cover the grid");
    return u;
}

void write_history_csv(const std::string& path, const std::vector<HistoryRow>& rows)
{
    std::ofstream f = open_out(path);
    f << "step,time,F,residual,dt\n";
    for (const HistoryRow& r : rows)
        f << r.step << ',' << format_double(r.time) << ',' << format_double(r.F) << ',' << format_double(r.residual)
          << ',' << format_double(r.dt) << '\n';
}

std::vector<HistoryRow> read_history_csv(const std::string& path)
{
    std::ifstream f = open_in(path);
    std::string line;
    std::getline(f, line);
    if (line != "step,time,F,residual,dt")
        throw ConfigError(path + ": unexpected header");
    std::vector<HistoryRow> out;
    while (std::getline(f, line)) {
        if (line.empty())
            continue;
        const std::vector<std::string> c = split(line);
        if (c.size() != 5)
            throw ConfigError(path + ": wrong number of columns");
        out.push_back({parse_long(c[0]), parse_double(c[1]), parse_double(c[2]), parse_double(c[3]),
                       parse_double(c[4])});
    }
    return out;
}

void write_json(const std::string& path, const json& j)
{
    std::ofstream f = open_out(path);
    f << j.dump(2) << '\n';
}

json read_json(const std::string& path)
{
    std::ifstream f = open_in(path);
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

json to_json(const PotentialConstants& c)
{
    return {{"kappa_star", c.kappa_star}, {"kappa_eps", c.kappa_eps}, {"chi_eps", c.chi_eps},
            {"s_star", c.s_star},         {"c_beta", c.c_beta},       {"s_pot", c.s_pot},
            {"lambda_pot", c.lambda_pot}};
}

json to_json(const EnergyReport& e)
{
    json j = {{"F", e.F}, {"grad_Q", e.grad_Q}, {"grad_M", e.grad_M}, {"potential", e.potential}, {"E_M", e.E_M}};
    if (e.ac_available) {
        j["Q_part"] = e.Q_part;
        j["AC"] = e.AC;
        j["remainder"] = e.remainder;
    }
    return j;
}

json to_json(const std::vector<Defect>& d)
{
    json a = json::array();
    for (const Defect& x : d)
        a.push_back({{"center", point_json(x.center)},
                     {"degree", x.degree},
                     {"resolved", x.resolved},
                     {"touches_boundary", x.touches_boundary},
                     {"core_radius", x.core_radius},
                     {"local_energy", x.local_energy},
                     {"node_count", x.node_count}});
    return a;
}

json to_json(const JumpSet& js)
{
    auto end_name = [](Chain::End e) {
        return e == Chain::End::Defect ? "defect" : e == Chain::End::Boundary ? "boundary" : "open";
    };
    json chains = json::array();
    for (const Chain& c : js.chains)
        chains.push_back({{"points", points_json(c.points)},
                          {"closed", c.closed},
                          {"length", c.length},
                          {"end_a", end_name(c.end_a)},
                          {"end_b", end_name(c.end_b)}});
    return {{"total_length", js.total_length}, {"edge_count", js.edge_count}, {"chains", chains}};
}

json check_json(const std::string& name, double value, double tol, bool pass)
{
    return {{"name", name}, {"value", value}, {"tolerance", tol}, {"pass", pass}};
}

} // namespace ferro
