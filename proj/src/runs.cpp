#include "ferro/runs.hpp"

#include "ferro/connection.hpp"
#include "ferro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>
#include <random>

namespace ferro {

namespace fs = std::filesystem;

namespace {

json provenance(const RunConfig& c)
{
    return {{"config_hash", config_hash(c)}, {"seed", c.seed}, {"version", kVersion}};
}

void prepare_out(const RunConfig& c)
{
    std::error_code ec;
    fs::create_directories(c.out_dir, ec);
    if (ec)
        throw ConfigError("cannot create " + c.out_dir + ": " + ec.message());
    write_json(c.out_dir + "/config.json", to_json(c));
}

std::vector<double> point_degrees(const RunConfig& c)
{
    if (!c.degrees.empty()) {
        if (c.degrees.size() != c.points.size())
            throw ConfigError("degrees and points differ in length");
        return c.degrees;
    }
    return std::vector<double>(c.points.size(), c.degree >= 0 ? 0.5 : -0.5);
}

json points_json(const std::vector<Point>& pts)
{
    json a = json::array();
    for (const Point& p : pts)
        a.push_back(point_json(p));
    return a;
}

std::vector<Point> defect_centers(const std::vector<Defect>& d)
{
    std::vector<Point> out;
    for (const Defect& x : d)
        out.push_back(x.center);
    return out;
}

Point rotate(const Point& p, const Point& c, double a)
{
    const double cs = std::cos(a), sn = std::sin(a);
    const Point d = p - c;
    return c + Point(cs * d.x() - sn * d.y(), sn * d.x() + cs * d.y());
}

double perm_distance(const std::vector<Point>& a, const std::vector<Point>& b)
{
    std::vector<int> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            worst = std::max(worst, (a[perm[i]] - b[i]).norm());
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

json nu_json(const NuMass& n)
{
    return {{"nu_mass", n.nu_outside_cores}, {"length", n.length}, {"c_beta_length", n.tension_times_length},
            {"ratio", n.ratio}};
}

json analysis_json(const Analysis& a, const Problem& pb)
{
    const PotentialConstants& k = pb.constants;
    const double s = k.s_star;
    const double mq_tol = s + 0.05, mm_tol = 1 + std::numbers::sqrt2 * pb.params.beta * s + 0.05;
    json checks = json::array();
    checks.push_back(check_json("max_abs_Q", a.max_q, mq_tol, a.max_q <= mq_tol));
    checks.push_back(check_json("max_abs_M_squared", a.max_M2, mm_tol, a.max_M2 <= mm_tol));
    double total = 0;
    for (const Defect& d : a.defects)
        total += d.degree;
    const double bdeg = boundary_degree(pb.grid, pb.bd);
    checks.push_back(check_json("defect_degree_sum", std::abs(total - bdeg), 1e-9, std::abs(total - bdeg) < 1e-9));
    return {{"energies", to_json(a.energies)},
            {"defects", to_json(a.defects)},
            {"jump_set", to_json(a.jumps)},
            {"line_tension", nu_json(a.nu)},
            {"max_abs_Q", a.max_q},
            {"max_abs_M_squared", a.max_M2},
            {"checks", checks}};
}

// Rebuild a relax run from its directory.
struct LoadedRun {
    RunConfig config;
    std::unique_ptr<Setup> setup;
    Field q, M;
};

LoadedRun load_run(const std::string& dir)
{
    if (dir.empty())
        throw ConfigError("missing run directory");
    if (!fs::exists(dir + "/config.json"))
        throw ConfigError("no run found in " + dir);
    LoadedRun r;
    r.config = load_config(dir + "/config.json");
    r.setup = std::make_unique<Setup>(r.config, r.config.eps, r.config.h);
    r.q = read_field_csv(dir + "/q.csv", r.setup->grid(), {"q1", "q2"});
    r.M = read_field_csv(dir + "/M.csv", r.setup->grid(), {"M1", "M2"});
    return r;
}

} // namespace

Setup::Setup(const RunConfig& c, double eps, double h)
{
    grid_ = std::make_unique<DomainGrid>(c.domain.build(), h);
    bd_ = make_boundary_data(*grid_, c.beta, c.degree, parse_bc_mode(c.mode));
    const CouplingParams p{c.beta, eps};
    pb_ = std::make_unique<Problem>(Problem{*grid_, bd_, p, make_constants(p)});
}

Analysis analyse(const Field& q, const Field& M, const Problem& pb)
{
    Analysis a;
    a.energies = energy(q, M, pb);
    a.defects = detect_defects(q, pb);
    fill_local_energy(a.defects, q, M, pb);
    a.jumps = jump_set(M, q, pb, a.defects);
    a.nu = nu_mass_vs_length(q, M, pb, a.defects, a.jumps);
    for (int id : pb.grid.active_nodes()) {
        a.max_q = std::max(a.max_q, q.row(id).norm());
        a.max_M2 = std::max(a.max_M2, M.row(id).squaredNorm());
    }
    return a;
}

Point jump_anchor(const JumpSet& js, const Domain& domain)
{
    for (const Chain& c : js.chains) {
        if (c.points.empty())
            continue;
        if (c.end_a == Chain::End::Defect)
            return c.points.front();
        if (c.end_b == Chain::End::Defect)
            return c.points.back();
    }
    for (const Chain& c : js.chains)
        if (!c.points.empty())
            return c.points[c.points.size() / 2];
    return domain.centroid();
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw InvalidInput("lsq_slope: need at least two matching samples");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (!(sxx > 0))
        throw InvalidInput("lsq_slope: degenerate abscissae");
    return sxy / sxx;
}

double matched_distance(const std::vector<Point>& a, const std::vector<Point>& b, bool rotate_ok,
                        const Point& center, double* angle)
{
    if (a.size() != b.size())
        throw InvalidInput("matched_distance: point sets differ in size");
    if (angle)
        *angle = 0;
    if (a.empty())
        return 0;
    if (!rotate_ok)
        return perm_distance(a, b);
    auto at = [&](double t) {
        std::vector<Point> r;
        for (const Point& p : a)
            r.push_back(rotate(p, center, t));
        return perm_distance(r, b);
    };
    const int n = 720;
    double best = std::numeric_limits<double>::infinity(), bt = 0;
    for (int k = 0; k < n; ++k) {
        const double t = 2 * std::numbers::pi * k / n;
        const double v = at(t);
        if (v < best) {
            best = v;
            bt = t;
        }
    }
    // Golden-section refinement inside the bracketing bins.
    double lo = bt - 2 * std::numbers::pi / n, hi = bt + 2 * std::numbers::pi / n;
    const double gr = 0.5 * (std::sqrt(5.0) - 1);
    for (int it = 0; it < 60; ++it) {
        const double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
        if (at(m1) < at(m2))
            hi = m2;
        else
            lo = m1;
    }
    const double t = 0.5 * (lo + hi);
    const double v = at(t);
    if (v < best) {
        best = v;
        bt = t;
    }
    if (angle)
        *angle = std::remainder(bt, 2 * std::numbers::pi);
    return best;
}

bool rotation_zero_mode(const RunConfig& c) { return c.domain.shape == "disk" && c.degree == 1; }

json run_relax(const RunConfig& c)
{
    Setup s(c, c.eps, c.h);
    const Problem& pb = s.problem();
    const SolverConfig sc = solver_config(c);
    resolve_dt(sc, s.grid(), pb.params);
    const InitSpec init = init_spec(c, s.grid());
    prepare_out(c);

    json report;
    report["command"] = "relax";
    report["provenance"] = provenance(c);
    report["constants"] = to_json(pb.constants);
    report["beta"] = c.beta;
    report["eps"] = c.eps;
    report["h"] = c.h;
    SolveState st = initial_state(pb, init, c.seed);
    try {
        st = relax(pb, sc, std::move(st));
    } catch (const Error& e) {
        report["error"] = e.what();
        write_json(c.out_dir + "/report.json", report);
        throw;
    }
    write_field_csv(c.out_dir + "/q.csv", st.q, s.grid(), {"q1", "q2"});
    write_field_csv(c.out_dir + "/M.csv", st.M, s.grid(), {"M1", "M2"});
    write_history_csv(c.out_dir + "/history.csv", st.history);

    const Analysis a = analyse(st.q, st.M, pb);
    json body = analysis_json(a, pb);
    for (auto it = body.begin(); it != body.end(); ++it)
        report[it.key()] = it.value();
    report["solver"] = {{"steps", st.step},        {"time", st.time},           {"converged", st.converged},
                        {"residual", st.residual}, {"residual0", st.residual0}, {"dt", st.dt},
                        {"dt_halvings", st.dt_halvings}};
    report["checks"].push_back(check_json("converged", st.residual / std::max(st.residual0, 1e-300), c.tol,
                                          st.converged));
    write_json(c.out_dir + "/report.json", report);
    return report;
}

json run_diagnose(const RunConfig& c)
{
    LoadedRun r = load_run(c.relax_dir);
    const Problem& pb = r.setup->problem();
    prepare_out(c);
    const Analysis a = analyse(r.q, r.M, pb);
    json report = analysis_json(a, pb);
    report["command"] = "diagnose";
    report["provenance"] = provenance(r.config);
    report["constants"] = to_json(pb.constants);

    const Domain& dom = pb.grid.domain();
    const double eps = pb.params.eps;
    const Point x0 = jump_anchor(a.jumps, dom);
    const double rmax = std::min(0.3, -dom.signed_distance(x0));
    std::vector<double> radii;
    for (int k = 0; k <= 8 && rmax > 4 * eps; ++k)
        radii.push_back(4 * eps + (rmax - 4 * eps) * k / 8.0);
    if (!radii.empty()) {
        const MeasureProfile mp = zeta_profile(r.q, r.M, pb, x0, radii);
        report["zeta_profile"] = {{"center", point_json(x0)}, {"radii", mp.radii}, {"values", mp.values},
                                  {"normalized", mp.normalized}};
    }
    const double R = 0.4 * dom.feature_size();
    const PohozaevTerms pz = pohozaev_residual(r.q, r.M, pb, dom.centroid(), R);
    report["pohozaev"] = {{"center", point_json(dom.centroid())}, {"radius", R}, {"lhs", pz.lhs},
                          {"rhs", pz.rhs},                        {"relative", pz.relative}};
    report["checks"].push_back(check_json("pohozaev_relative", pz.relative, 0.1, pz.relative < 0.1));
    write_json(c.out_dir + "/report.json", report);
    return report;
}

json run_connect(const RunConfig& c)
{
    const Domain dom = c.domain.build();
    const Connection conn = minimal_connection(c.points, dom);
    const ConnectionReport v = validate_connection(conn, c.points, dom);
    prepare_out(c);
    json segs = json::array();
    for (const Segment& s : conn.segments) {
        auto ep = [](const Endpoint& e) {
            json j = {{"pos", point_json(e.pos)}, {"kind", e.kind == Endpoint::Kind::Point ? "point" : "boundary"}};
            if (e.kind == Endpoint::Kind::Point)
                j["index"] = e.index;
            return j;
        };
        segs.push_back({{"a", ep(s.a)}, {"b", ep(s.b)}, {"length", s.length()}});
    }
    json checks = json::array();
    checks.push_back(check_json("valid", static_cast<double>(v.violations.size()), 0, v.ok()));
    if (!v.orthogonality_skipped)
        checks.push_back(check_json("max_leg_angle_deg", v.max_leg_angle_deg, 2.0, v.orthogonal));
    json report = {{"command", "connect"},
                   {"provenance", provenance(c)},
                   {"points", points_json(c.points)},
                   {"segments", segs},
                   {"total_length", conn.total_length},
                   {"blocked_pairs", conn.blocked_pairs},
                   {"violations", v.violations},
                   {"checks", checks}};
    write_json(c.out_dir + "/report.json", report);
    return report;
}

json run_renorm(const RunConfig& c)
{
    Setup s(c, c.eps, c.h);
    const std::vector<double> deg = point_degrees(c);
    RenormalizedEnergy R(s.grid(), s.bd());
    const RenormResult w = R.energy(c.points, deg, c.sigma_ladder);
    prepare_out(c);
    json grads = json::array();
    for (std::size_t j = 0; j < c.points.size(); ++j) {
        try {
            grads.push_back(point_json(R.gradient(c.points, deg, static_cast<int>(j))));
        } catch (const Error&) {
            grads.push_back(nullptr);
        }
    }
    const double L = minimal_connection_length(c.points, s.grid().domain());
    json report = {{"command", "renorm"},
                   {"provenance", provenance(c)},
                   {"points", points_json(c.points)},
                   {"degrees", deg},
                   {"W", w.W},
                   {"sigma_ladder", w.sigma_ladder},
                   {"W_sigma", w.W_sigma},
                   {"sigma2_coefficient", w.slope},
                   {"extrapolation_error", w.extrapolation_error},
                   {"fit_residual", w.fit_residual},
                   {"flagged", w.flagged},
                   {"gradients", grads},
                   {"connection_length", L},
                   {"c_beta", c_beta(c.beta)},
                   {"W_beta", w.W + c_beta(c.beta) * L},
                   {"checks", json::array({check_json("fit_residual", w.fit_residual, 0.02, !w.flagged)})}};
    write_json(c.out_dir + "/report.json", report);
    return report;
}

json run_optimize(const RunConfig& c)
{
    Setup s(c, c.eps, c.h);
    RenormalizedEnergy R(s.grid(), s.bd());
    const OptimizeResult o = optimize_positions(R, c.degree, c.beta, c.multistart, c.seed);
    prepare_out(c);
    json starts = json::array();
    for (const StartResult& st : o.starts)
        starts.push_back({{"initial", points_json(st.initial)},
                          {"points", points_json(st.points)},
                          {"value", st.value},
                          {"evals", st.evals},
                          {"converged", st.converged}});
    json minima = json::array();
    for (const StartResult& st : o.local_minima)
        minima.push_back({{"points", points_json(st.points)}, {"value", st.value}});
    json report = {{"command", "optimize"},
                   {"provenance", provenance(c)},
                   {"points", points_json(o.points)},
                   {"degrees", half_degrees(c.degree)},
                   {"value", o.value},
                   {"connection_length", minimal_connection_length(o.points, s.grid().domain())},
                   {"starts", starts},
                   {"local_minima", minima}};
    write_json(c.out_dir + "/report.json", report);
    return report;
}

json run_sweep(const RunConfig& c)
{
    if (c.eps_ladder.size() < 2)
        throw ConfigError("sweep needs an eps_ladder with at least two values");
    std::vector<RunConfig> runs;
    for (std::size_t k = 0; k < c.eps_ladder.size(); ++k) {
        RunConfig r = c;
        r.command = "relax";
        r.eps = c.eps_ladder[k];
        r.h = c.h_ratio > 0 ? c.h_ratio * r.eps : c.h;
        r.eps_ladder.clear();
        r.out_dir = c.out_dir + "/eps_" + std::to_string(k);
        runs.push_back(r);
    }
    // Validate every run before any is started.
    for (const RunConfig& r : runs) {
        Setup s(r, r.eps, r.h);
        resolve_dt(solver_config(r), s.grid(), s.problem().params);
    }
    prepare_out(c);
    json per = json::array();
    std::vector<double> x, F;
    for (const RunConfig& r : runs) {
        const json rep = run_relax(r);
        x.push_back(std::abs(std::log(r.eps)));
        F.push_back(rep["energies"]["F"].get<double>());
        per.push_back({{"eps", r.eps},
                       {"h", r.h},
                       {"out_dir", r.out_dir},
                       {"F", F.back()},
                       {"defect_count", rep["defects"].size()},
                       {"line_tension_ratio", rep["line_tension"]["ratio"]},
                       {"converged", rep["solver"]["converged"]}});
    }
    const double slope = lsq_slope(x, F);
    const double target = 2 * std::numbers::pi * std::abs(c.degree);
    json checks = json::array();
    if (target > 0)
        checks.push_back(check_json("log_slope_relative_error", std::abs(slope - target) / target, 0.15,
                                    std::abs(slope - target) <= 0.15 * target));
    // Linear extrapolation of the tension ratio to eps = 0 from the two smallest eps.
    std::vector<std::pair<double, double>> tr;
    for (const json& p : per)
        if (p["line_tension_ratio"].get<double>() > 0)
            tr.emplace_back(p["eps"].get<double>(), p["line_tension_ratio"].get<double>());
    std::sort(tr.begin(), tr.end());
    json report = {{"command", "sweep"}, {"provenance", provenance(c)}, {"runs", per},
                   {"log_slope", slope}, {"log_slope_target", target}};
    if (tr.size() >= 2) {
        const auto [e0, r0] = tr[0];
        const auto [e1, r1] = tr[1];
        report["line_tension_ratio_extrapolated"] = r0 - e0 * (r1 - r0) / (e1 - e0);
        checks.push_back(check_json("line_tension_ratio_finest", std::abs(r0 - 1), 0.25, std::abs(r0 - 1) <= 0.25));
    }
    report["checks"] = checks;
    write_json(c.out_dir + "/report.json", report);
    return report;
}

json run_crosscheck(const RunConfig& c)
{
    LoadedRun r = load_run(c.relax_dir);
    if (c.optimize_dir.empty() || !fs::exists(c.optimize_dir + "/report.json"))
        throw ConfigError("crosscheck needs a completed optimize run in optimize_dir");
    const json opt = read_json(c.optimize_dir + "/report.json");
    const Problem& pb = r.setup->problem();
    const Domain& dom = pb.grid.domain();
    const double h = pb.grid.h(), eps = pb.params.eps;
    const double tol = 4 * h + 6 * eps;
    prepare_out(c);

    const Analysis a = analyse(r.q, r.M, pb);
    std::vector<Point> opt_pts;
    for (const json& p : opt.at("points"))
        opt_pts.push_back(point_from_json(p));
    const std::vector<Point> pde = defect_centers(a.defects);

    json report = {{"command", "crosscheck"}, {"provenance", provenance(r.config)}, {"tolerance", tol}};
    json checks = json::array();
    if (pde.empty() && opt_pts.empty()) {
        report["note"] = "no defects on either route";
        checks.push_back(check_json("positions", 0, tol, true));
        report["checks"] = checks;
        write_json(c.out_dir + "/report.json", report);
        return report;
    }
    if (pde.size() != opt_pts.size()) {
        checks.push_back(check_json("defect_count_match", std::abs(double(pde.size()) - double(opt_pts.size())), 0,
                                    false));
    } else {
        double angle = 0;
        const bool rot = rotation_zero_mode(r.config);
        const double dpos = matched_distance(opt_pts, pde, rot, dom.centroid(), &angle);
        report["rotation_applied"] = rot;
        report["rotation_angle"] = angle;
        report["position_distance"] = dpos;
        checks.push_back(check_json("positions", dpos, tol, dpos <= tol));
    }
    if (!pde.empty()) {
        const Connection conn = minimal_connection(pde, dom);
        std::vector<Point> seg_samples, chain_samples;
        for (const Segment& s : conn.segments) {
            const auto ss = sample_polyline({s.a.pos, s.b.pos}, 0.25 * h);
            seg_samples.insert(seg_samples.end(), ss.begin(), ss.end());
        }
        for (const Chain& ch : a.jumps.chains) {
            std::vector<Point> p = ch.points;
            if (ch.closed && !p.empty())
                p.push_back(p.front());
            const auto ss = sample_polyline(p, 0.25 * h);
            chain_samples.insert(chain_samples.end(), ss.begin(), ss.end());
        }
        const double dh = chain_samples.empty() ? std::numeric_limits<double>::infinity()
                                                : hausdorff(chain_samples, seg_samples);
        report["hausdorff_jump_vs_connection"] = dh;
        report["connection_length"] = conn.total_length;
        checks.push_back(check_json("hausdorff", dh, tol, dh <= tol));
        // Connection length outside the same defect balls that the nu mass excludes.
        double L_out = 0;
        for (const Segment& s : conn.segments) {
            const auto ss = sample_polyline({s.a.pos, s.b.pos}, 0.1 * h);
            for (std::size_t i = 0; i + 1 < ss.size(); ++i) {
                const Point mid = 0.5 * (ss[i] + ss[i + 1]);
                bool out = true;
                for (const Point& d : pde)
                    out = out && (mid - d).norm() > 2 * eps;
                if (out)
                    L_out += (ss[i + 1] - ss[i]).norm();
            }
        }
        const double ratio = L_out > 0 ? a.nu.nu_outside_cores / (pb.constants.c_beta * L_out) : 0.0;
        report["nu_mass_over_c_beta_connection_length"] = ratio;
        checks.push_back(check_json("nu_mass_ratio", std::abs(ratio - 1), 0.25, std::abs(ratio - 1) <= 0.25));
    }
    report["checks"] = checks;
    write_json(c.out_dir + "/report.json", report);
    return report;
}

json run_selftest(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    json checks = json::array();
    bool all = true;
    auto add = [&](const std::string& n, double v, double tol) {
        const bool ok = v <= tol;
        all = all && ok;
        checks.push_back(check_json(n, v, tol, ok));
    };

    const CouplingParams p{1.0, 0.05};
    const PotentialConstants k = make_constants(p);
    double r_fell = 0, r_fgh = 0, r_well = 0, r_prod = 0, r_emb = 0;
    for (int i = 0; i < 2000; ++i) {
        const QTensor q(1.5 * u(rng), 1.5 * u(rng));
        const Vec2<double> M(2.0 * u(rng), 2.0 * u(rng));
        if (q.norm() < 1e-3)
            continue;
        const DecomposeResiduals d = decompose_check(q, M, p, k);
        r_fell = std::max(r_fell, d.f_ell);
        if (d.fgh_evaluated)
            r_fgh = std::max(r_fgh, d.fgh);
        r_well = std::max(r_well, std::abs(V_potential(q, M, p.beta) - V_factored(q, M, p.beta))
                                      / std::max(1.0, std::abs(V_potential(q, M, p.beta))));
        const double t = M.dot(perp(polar_decompose(q).n));
        r_prod = std::max(r_prod, std::abs(V_potential(q, M, p.beta) - well_product(q, M, p.beta) + t * t)
                                      / std::max(1.0, std::abs(V_potential(q, M, p.beta))));
        r_emb = std::max(r_emb, (q_embed<double>(to_matrix(q)) - q).norm());
    }
    add("f_ell_decomposition", r_fell, 1e-9);
    add("fgh_decomposition", r_fgh, 1e-9);
    add("well_factorisation", r_well, 1e-9);
    add("well_product_form", r_prod, 1e-9);
    add("embedding_round_trip", r_emb, 1e-12);
    add("kappa_eps_nonnegative_min", std::max(0.0, -k.kappa_eps), 0.0);

    const Domain disk = Domain::disk(Point::Zero(), 1.0);
    double worst_angle = 0;
    int invalid = 0;
    for (int i = 0; i < 50; ++i) {
        std::vector<Point> pts;
        const int n = 1 + static_cast<int>(rng() % 6);
        while (static_cast<int>(pts.size()) < n) {
            const Point x(0.9 * u(rng), 0.9 * u(rng));
            if (x.norm() < 0.9)
                pts.push_back(x);
        }
        const Connection conn = minimal_connection(pts, disk);
        const ConnectionReport v = validate_connection(conn, pts, disk);
        invalid += v.ok() ? 0 : 1;
        worst_angle = std::max(worst_angle, v.max_leg_angle_deg);
    }
    add("connection_validity_failures", invalid, 0);
    add("disk_leg_angle_deg", worst_angle, 2.0);

    double fmt = 0;
    for (int i = 0; i < 1000; ++i) {
        const double v = std::ldexp(u(rng), static_cast<int>(rng() % 40) - 20);
        const std::string s = format_double(v);
        fmt = std::max(fmt, std::abs(std::stod(s) - v));
    }
    add("number_round_trip", fmt, 0);
    return {{"command", "selftest"}, {"version", kVersion}, {"checks", checks}, {"pass", all}};
}

} // namespace ferro
