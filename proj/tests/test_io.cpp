#include "ferro/runs.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace ferro;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("ferro_test_io_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json tiny_relax(const fs::path& out)
{
    return {{"command", "relax"},
            {"domain", {{"shape", "disk"}, {"center", {0, 0}}, {"radius", 1}}},
            {"h", 0.1},
            {"eps", 0.2},
            {"tol", 1e-3},
            {"seed", 3},
            {"out_dir", out.string()}};
}

} // namespace

TEST_CASE("strict config parsing")
{
    const RunConfig c = parse_config(json::object());
    CHECK(c.h == 0.02);
    CHECK(c.domain.shape == "disk");
    CHECK_THROWS_AS(parse_config({{"hh", 0.1}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"h", "small"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"h", -1}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"domain", {{"shape", "torus"}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"domain", {{"radius", 1}, {"color", 1}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"init", {{"type", "magic"}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"dt_policy", "sometimes"}}), ConfigError);
    CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
}

TEST_CASE("config round trip and hash")
{
    const RunConfig c = parse_config({{"eps", 0.05}, {"points", {{0.1, 0.2}, {-0.3, 0}}}, {"beta", 2}});
    const json j = to_json(c);
    const RunConfig back = parse_config(j);
    CHECK(to_json(back) == j);
    CHECK(config_hash(back) == config_hash(c));
    CHECK(config_hash(c).size() == 16);
    RunConfig moved = c;
    moved.out_dir = "elsewhere";
    CHECK(config_hash(moved) == config_hash(c));
    RunConfig other = c;
    other.eps = 0.051;
    CHECK(config_hash(other) != config_hash(c));
}

TEST_CASE("number formatting round-trips exactly")
{
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 10000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(30 * u(rng)));
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("field and history CSV round trips are byte identical")
{
    const fs::path dir = scratch("csv");
    fs::create_directories(dir);
    const DomainGrid g(Domain::disk(Point::Zero(), 1.0), 0.1);
    std::mt19937_64 rng(52);
    std::normal_distribution<double> n;
    Field u = g.zeros(2);
    for (int a : g.active_nodes())
        u.row(a) << n(rng), n(rng);
    write_field_csv((dir / "q.csv").string(), u, g, {"q1", "q2"});
    const Field back = read_field_csv((dir / "q.csv").string(), g, {"q1", "q2"});
    CHECK((back - u).cwiseAbs().maxCoeff() == 0.0);
    write_field_csv((dir / "q2.csv").string(), back, g, {"q1", "q2"});
    CHECK(slurp(dir / "q.csv") == slurp(dir / "q2.csv"));
    CHECK_THROWS_AS(read_field_csv((dir / "q.csv").string(), g, {"M1", "M2"}), ConfigError);
    const DomainGrid other(Domain::disk(Point::Zero(), 1.0), 0.05);
    CHECK_THROWS_AS(read_field_csv((dir / "q.csv").string(), other, {"q1", "q2"}), ConfigError);

    std::vector<HistoryRow> rows;
    for (int k = 0; k < 50; ++k)
        rows.push_back({10L * k, 0.001 * k, n(rng), std::exp(n(rng)), 1e-3});
    write_history_csv((dir / "h.csv").string(), rows);
    const auto hr = read_history_csv((dir / "h.csv").string());
    REQUIRE(hr.size() == rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(hr[k].step == rows[k].step);
        CHECK(hr[k].F == rows[k].F);
        CHECK(hr[k].residual == rows[k].residual);
    }
    write_history_csv((dir / "h2.csv").string(), hr);
    CHECK(slurp(dir / "h.csv") == slurp(dir / "h2.csv"));
    fs::remove_all(dir);
}

TEST_CASE("relax runs are deterministic and write their artifacts")
{
    const fs::path a = scratch("relax_a"), b = scratch("relax_b");
    const json ra = run_relax(parse_config(tiny_relax(a)));
    const json rb = run_relax(parse_config(tiny_relax(b)));
    for (const char* f : {"config.json", "report.json", "q.csv", "M.csv", "history.csv"})
        CHECK(fs::exists(a / f));
    CHECK(slurp(a / "q.csv") == slurp(b / "q.csv"));
    CHECK(slurp(a / "M.csv") == slurp(b / "M.csv"));
    CHECK(ra["energies"] == rb["energies"]);
    CHECK(ra["provenance"]["config_hash"] == rb["provenance"]["config_hash"]);

    // File init resumes from the saved fields.
    json resume = tiny_relax(scratch("relax_c"));
    resume["init"] = {{"type", "file"}, {"path", a.string()}};
    const json rc = run_relax(parse_config(resume));
    CHECK(rc["energies"]["F"].get<double>() <= ra["energies"]["F"].get<double>() + 1e-9);
    fs::remove_all(a);
    fs::remove_all(b);
    fs::remove_all(scratch("relax_c"));
}

TEST_CASE("invalid runs fail before creating the output directory")
{
    const fs::path out = scratch("bad");
    json j = tiny_relax(out);
    j["h"] = 0.9;
    CHECK_THROWS_AS(run_relax(parse_config(j)), Error);
    CHECK_FALSE(fs::exists(out));
    j = tiny_relax(out);
    j["dt_policy"] = "fixed";
    j["dt"] = 1.0;
    CHECK_THROWS_AS(run_relax(parse_config(j)), ConfigError);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("analysis commands")
{
    const fs::path out = scratch("connect");
    json j = {{"command", "connect"}, {"points", {{-0.9, 0}, {0.9, 0}}}, {"out_dir", out.string()}};
    const json r = run_connect(parse_config(j));
    CHECK(r["total_length"].get<double>() == doctest::Approx(0.2));
    CHECK(fs::exists(out / "report.json"));
    fs::remove_all(out);

    // Degree zero: no defects on either route, so the cross-check passes trivially.
    const fs::path rel = scratch("cc_relax"), opt = scratch("cc_opt");
    json rj = tiny_relax(rel);
    rj["degree"] = 0;
    run_relax(parse_config(rj));
    json oj = {{"command", "optimize"}, {"degree", 0}, {"h", 0.1}, {"out_dir", opt.string()}};
    const json orep = run_optimize(parse_config(oj));
    CHECK(orep["points"].empty());
    j = {{"command", "crosscheck"},
         {"relax_dir", rel.string()},
         {"optimize_dir", opt.string()},
         {"out_dir", out.string()}};
    const json cc = run_crosscheck(parse_config(j));
    for (const json& ch : cc["checks"])
        CHECK(ch["pass"].get<bool>());
    j["optimize_dir"] = (opt / "missing").string();
    CHECK_THROWS_AS(run_crosscheck(parse_config(j)), ConfigError);
    for (const fs::path& p : {out, rel, opt})
        fs::remove_all(p);
}

TEST_CASE("error kinds map to exit codes")
{
    CHECK(exit_code(ErrorKind::Numeric) == 1);
    CHECK(exit_code(ErrorKind::Degenerate) == 1);
    CHECK(exit_code(ErrorKind::Config) == 2);
    CHECK(exit_code(ErrorKind::InvalidInput) == 2);
    CHECK(exit_code(ErrorKind::Infeasible) == 3);
}

TEST_CASE("selftest passes")
{
    const json r = run_selftest(7);
    CHECK(r["pass"].get<bool>());
}
