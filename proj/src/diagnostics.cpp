#include "ferro/diagnostics.hpp"

#include "ferro/fields.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

namespace ferro {

ScalarField grad_sq_density(const Field& u, const DomainGrid& grid)
{
    ScalarField d = ScalarField::Zero(u.rows());
    const double c = 1.0 / (2.0 * grid.h() * grid.h());
    for (int a : grid.active_nodes()) {
        double s = 0;
        for (int b : grid.neighbours(a))
            if (b >= 0)
                s += (u.row(b) - u.row(a)).squaredNorm();
        d(a) = c * s;
    }
    return d;
}

Densities energy_densities(const Field& q, const Field& M, const Problem& pb)
{
    const DomainGrid& g = pb.grid;
    const double eps = pb.params.eps, beta = pb.params.beta;
    const ScalarField gq = grad_sq_density(q, g), gm = grad_sq_density(M, g);
    Densities d;
    d.mu = ScalarField::Zero(q.rows());
    d.nu = ScalarField::Zero(q.rows());
    d.zeta = ScalarField::Zero(q.rows());
    d.zeta_mask.assign(q.rows(), 0);
    const double ilog = 1.0 / std::abs(std::log(eps));
    for (int a : g.active_nodes()) {
        const QTensor qa = q.row(a).transpose();
        const Vec2<double> Ma = M.row(a).transpose();
        const double pot = f_eps(qa, Ma, pb.params, pb.constants) / (eps * eps);
        d.nu(a) = 0.5 * eps * gm(a) + pot;
        d.mu(a) = ilog * (0.5 * gq(a) + d.nu(a));
        if (qa.norm() >= 0.5) {
            d.zeta(a) = V_potential(qa, Ma, beta) / eps;
            d.zeta_mask[a] = 1;
        }
    }
    return d;
}

namespace {

std::vector<std::vector<int>> components(const DomainGrid& g, const std::vector<char>& in)
{
    std::vector<std::vector<int>> comps;
    std::vector<char> seen(in.size(), 0);
    const int nx = g.nx();
    for (int s : g.active_nodes()) {
        if (!in[s] || seen[s])
            continue;
        std::vector<int> comp;
        std::deque<int> queue{s};
        seen[s] = 1;
        while (!queue.empty()) {
            const int a = queue.front();
            queue.pop_front();
            comp.push_back(a);
            const int i = a % nx, j = a / nx;
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    const int ii = i + di, jj = j + dj;
                    if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii >= nx || jj >= g.ny())
                        continue;
                    const int b = jj * nx + ii;
                    if (in[b] && !seen[b]) {
                        seen[b] = 1;
                        queue.push_back(b);
                    }
                }
        }
        comps.push_back(std::move(comp));
    }
    return comps;
}

double qnorm(const Field& q, int id) { return std::hypot(q(id, 0), q(id, 1)); }

// Sub-node refinement of the minimum of |q|^2 by separable parabolic fits.
Point refine_center(const Field& q, const DomainGrid& g, int id)
{
    const auto& nb = g.neighbours(id);
    Point x = g.pos(id);
    auto fit = [&](int plus, int minus) {
        if (plus < 0 || minus < 0)
            return 0.0;
        const double fp = q.row(plus).squaredNorm(), fm = q.row(minus).squaredNorm(), f0 = q.row(id).squaredNorm();
        const double den = fp - 2 * f0 + fm;
        if (den <= 1e-300)
            return 0.0;
        return std::clamp(0.5 * (fm - fp) / den, -0.5, 0.5);
    };
    x.x() += g.h() * fit(nb[0], nb[1]);
    x.y() += g.h() * fit(nb[2], nb[3]);
    return x;
}

} // namespace

std::vector<Defect> detect_defects(const Field& q, const Problem& pb)
{
    const DomainGrid& g = pb.grid;
    const double h = g.h();
    std::vector<char> low(q.rows(), 0);
    for (int a : g.active_nodes())
        low[a] = qnorm(q, a) < 0.5;
    auto comps = components(g, low);

    // Merge components closer than 4h.
    const std::size_t n = comps.size();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double best = std::numeric_limits<double>::infinity();
            for (int a : comps[i])
                for (int b : comps[j])
                    best = std::min(best, (g.pos(a) - g.pos(b)).norm());
            if (best <= 4 * h + 1e-12)
                parent[find(static_cast<int>(j))] = find(static_cast<int>(i));
        }
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < n; ++i) {
        auto& grp = groups[find(static_cast<int>(i))];
        grp.insert(grp.end(), comps[i].begin(), comps[i].end());
    }

    std::vector<Defect> out;
    for (auto& [root, nodes] : groups) {
        (void)root;
        Defect d;
        d.node_count = static_cast<int>(nodes.size());
        int best = nodes.front();
        for (int a : nodes) {
            if (qnorm(q, a) < qnorm(q, best))
                best = a;
            if (g.kind(a) == NodeKind::Boundary)
                d.touches_boundary = true;
        }
        d.center = refine_center(q, g, best);
        for (int a : nodes)
            d.core_radius = std::max(d.core_radius, (g.pos(a) - d.center).norm());
        d.core_radius += 0.5 * h;
        const double r = d.core_radius + 3 * h;
        try {
            const LoopSample loop = circle_loop(d.center, r, circle_samples(g, r));
            d.degree = loop_degree(q, g, loop);
        } catch (const Error&) {
            d.resolved = false;
            d.degree = 0;
        }
        out.push_back(d);
    }
    std::sort(out.begin(), out.end(), [](const Defect& a, const Defect& b) {
        return std::make_pair(a.center.x(), a.center.y()) < std::make_pair(b.center.x(), b.center.y());
    });
    return out;
}

void fill_local_energy(std::vector<Defect>& defects, const Field& q, const Field& M, const Problem& pb)
{
    const Densities d = energy_densities(q, M, pb);
    for (Defect& df : defects)
        df.local_energy = ball_integral_clipped(d.mu, pb.grid, df.center, 6 * pb.params.eps);
}

namespace {

std::vector<Point> smooth(const std::vector<Point>& p, bool closed, int passes)
{
    std::vector<Point> a = p;
    const std::size_t n = a.size();
    if (n < 3)
        return a;
    for (int it = 0; it < passes; ++it) {
        std::vector<Point> b = a;
        for (std::size_t i = 0; i < n; ++i) {
            if (!closed && (i == 0 || i + 1 == n))
                continue;
            const Point& l = a[(i + n - 1) % n];
            const Point& r = a[(i + 1) % n];
            b[i] = 0.25 * l + 0.5 * a[i] + 0.25 * r;
        }
        a = std::move(b);
    }
    return a;
}

double polyline_length(const std::vector<Point>& p, bool closed)
{
    double L = 0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        L += (p[i + 1] - p[i]).norm();
    if (closed && p.size() > 2)
        L += (p.front() - p.back()).norm();
    return L;
}

} // namespace

JumpSet jump_set(const Field& M, const Field& q, const Problem& pb, const std::vector<Defect>& defects)
{
    const DomainGrid& g = pb.grid;
    const int nx = g.nx();
    const double h = g.h(), eps = pb.params.eps;
    // Edge key: 2*id for the edge (id, id+1), 2*id+1 for (id, id+nx).
    std::vector<int> vertex_of(2 * g.size(), -1);
    JumpSet js;
    // Sign flip of M relative to the director. A resolved interface rotates M
    // over several nodes, so comparing M(a).M(b) alone misses it.
    auto is_jump = [&](int a, int b) {
        if (q.row(a).dot(q.row(b)) <= 0)
            return false;
        if (q.row(a).norm() < 0.5 || q.row(b).norm() < 0.5)
            return M.row(a).dot(M.row(b)) < 0;
        const Vec2<double> na = polar_decompose(QTensor(q(a, 0), q(a, 1))).n;
        Vec2<double> nb = polar_decompose(QTensor(q(b, 0), q(b, 1))).n;
        if (na.dot(nb) < 0)
            nb = -nb;
        // A node with M.n = 0 counts as positive, so a flip through zero is kept.
        return (M.row(a).dot(na.transpose()) >= 0) != (M.row(b).dot(nb.transpose()) >= 0);
    };
    for (int a : g.active_nodes()) {
        const auto& nb = g.neighbours(a);
        if (nb[0] >= 0 && is_jump(a, nb[0])) {
            vertex_of[2 * a] = static_cast<int>(js.edge_midpoints.size());
            js.edge_midpoints.push_back(g.pos(a) + Point(0.5 * h, 0));
        }
        if (nb[2] >= 0 && is_jump(a, nb[2])) {
            vertex_of[2 * a + 1] = static_cast<int>(js.edge_midpoints.size());
            js.edge_midpoints.push_back(g.pos(a) + Point(0, 0.5 * h));
        }
    }
    js.edge_count = static_cast<int>(js.edge_midpoints.size());
    const int nv = js.edge_count;
    std::vector<std::vector<int>> adj(nv);
    for (int c = 0; c < g.size(); ++c) {
        const int i = c % nx, j = c / nx;
        if (i + 1 >= nx || j + 1 >= g.ny())
            continue;
        const int e[4] = {vertex_of[2 * c], vertex_of[2 * c + 1], vertex_of[2 * (c + nx)], vertex_of[2 * (c + 1) + 1]};
        // bottom, left, top, right
        std::vector<int> present;
        for (int k = 0; k < 4; ++k)
            if (e[k] >= 0)
                present.push_back(e[k]);
        auto link = [&](int u, int v) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        };
        if (present.size() == 2 || present.size() == 3) {
            for (std::size_t k = 0; k + 1 < present.size(); ++k)
                link(present[k], present[k + 1]);
        } else if (present.size() == 4) {
            link(e[0], e[1]);
            link(e[2], e[3]);
        }
    }

    // Decompose the graph into maximal paths between non-degree-2 vertices, then cycles.
    std::map<std::pair<int, int>, char> used;
    auto key = [](int u, int v) { return std::make_pair(std::min(u, v), std::max(u, v)); };
    auto classify = [&](const Point& p) {
        const double wall = -g.domain().signed_distance(p);
        for (const Defect& d : defects)
            if ((p - d.center).norm() <= 3 * eps && (p - d.center).norm() < wall)
                return Chain::End::Defect;
        if (wall <= 2 * h)
            return Chain::End::Boundary;
        return Chain::End::Open;
    };
    auto finish = [&](std::vector<int>& verts, bool closed) {
        Chain ch;
        for (int v : verts)
            ch.points.push_back(js.edge_midpoints[v]);
        ch.closed = closed;
        if (!closed) {
            ch.end_a = classify(ch.points.front());
            ch.end_b = classify(ch.points.back());
            // The chain stops at the core boundary; close the gap to the centre.
            auto nearest = [&](const Point& p) {
                const Defect* best = nullptr;
                for (const Defect& d : defects)
                    if (!best || (p - d.center).norm() < (p - best->center).norm())
                        best = &d;
                return best->center;
            };
            if (ch.end_a == Chain::End::Defect)
                ch.points.insert(ch.points.begin(), nearest(ch.points.front()));
            if (ch.end_b == Chain::End::Defect)
                ch.points.push_back(nearest(ch.points.back()));
            if (ch.end_a == Chain::End::Boundary)
                ch.points.insert(ch.points.begin(), g.domain().foot_point(ch.points.front()));
            if (ch.end_b == Chain::End::Boundary)
                ch.points.push_back(g.domain().foot_point(ch.points.back()));
        }
        ch.length = polyline_length(smooth(ch.points, closed, 2), closed);
        js.total_length += ch.length;
        js.chains.push_back(std::move(ch));
    };
    for (int s = 0; s < nv; ++s) {
        if (adj[s].size() == 2)
            continue;
        if (adj[s].empty()) {
            std::vector<int> single{s};
            finish(single, false);
            continue;
        }
        for (int t : adj[s]) {
            if (used[key(s, t)])
                continue;
            std::vector<int> path{s};
            int prev = s, cur = t;
            used[key(s, t)] = 1;
            while (true) {
                path.push_back(cur);
                if (adj[cur].size() != 2)
                    break;
                const int nxt = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
                if (used[key(cur, nxt)])
                    break;
                used[key(cur, nxt)] = 1;
                prev = cur;
                cur = nxt;
            }
            finish(path, false);
        }
    }
    for (int s = 0; s < nv; ++s) {
        if (adj[s].size() != 2)
            continue;
        const int t = adj[s][0];
        if (used[key(s, t)])
            continue;
        std::vector<int> loop{s};
        int prev = s, cur = t;
        used[key(s, t)] = 1;
        while (cur != s) {
            loop.push_back(cur);
            const int nxt = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
            if (used[key(cur, nxt)])
                break;
            used[key(cur, nxt)] = 1;
            prev = cur;
            cur = nxt;
        }
        finish(loop, true);
    }
    return js;
}

PohozaevTerms pohozaev_residual(const Field& q, const Field& M, const Problem& pb, const Point& x0, double R)
{
    const DomainGrid& g = pb.grid;
    if (g.domain().signed_distance(x0) > -R)
        throw InvalidInput("pohozaev: ball exits the domain");
    const double eps = pb.params.eps;
    ScalarField pot = ScalarField::Zero(q.rows());
    for (int a : g.active_nodes())
        pot(a) = f_eps(QTensor(q.row(a).transpose()), Vec2<double>(M.row(a).transpose()), pb.params, pb.constants)
            / (eps * eps);
    const auto [qx, qy] = gradient(q, g);
    const auto [mx, my] = gradient(M, g);
    const int n = circle_samples(g, R);
    std::vector<double> nterm(n), tterm(n);
    for (int k = 0; k < n; ++k) {
        const double a = 2.0 * std::numbers::pi * k / n;
        const Point nu(std::cos(a), std::sin(a));
        const Point tau = perp(nu);
        const Point x = x0 + R * nu;
        const Eigen::RowVectorXd gqx = interpolate(qx, g, x), gqy = interpolate(qy, g, x);
        const Eigen::RowVectorXd gmx = interpolate(mx, g, x), gmy = interpolate(my, g, x);
        const Eigen::RowVectorXd dnq = nu.x() * gqx + nu.y() * gqy, dtq = tau.x() * gqx + tau.y() * gqy;
        const Eigen::RowVectorXd dnm = nu.x() * gmx + nu.y() * gmy, dtm = tau.x() * gmx + tau.y() * gmy;
        const double f = interpolate(pot, g, x);
        nterm[k] = dnq.squaredNorm() + eps * dnm.squaredNorm();
        tterm[k] = dtq.squaredNorm() + eps * dtm.squaredNorm() + 2.0 * f;
    }
    const double ds = 2.0 * std::numbers::pi * R / n;
    PohozaevTerms t;
    t.lhs = 2.0 * ball_integral(pot, g, x0, R) + 0.5 * R * blocked_sum(nterm) * ds;
    t.rhs = 0.5 * R * blocked_sum(tterm) * ds;
    t.residual = std::abs(t.lhs - t.rhs);
    t.relative = t.residual / std::max(std::abs(t.rhs), 1e-300);
    return t;
}

MeasureProfile zeta_profile(const Field& q, const Field& M, const Problem& pb, const Point& x0,
                            const std::vector<double>& radii)
{
    const Densities d = energy_densities(q, M, pb);
    MeasureProfile p;
    p.center = x0;
    for (double r : radii) {
        if (pb.grid.domain().signed_distance(x0) > -r)
            break;
        const double v = ball_integral(d.zeta, pb.grid, x0, r);
        p.radii.push_back(r);
        p.values.push_back(v);
        p.normalized.push_back(v / r);
    }
    return p;
}

std::pair<double, double> jacobian_concentration(const Field& q, const DomainGrid& grid,
                                                 const std::vector<Defect>& defects, const ScalarField& test)
{
    const ScalarField J = jacobian(q, grid);
    const ScalarField prod = J.cwiseProduct(test);
    const double lhs = integrate(prod, grid);
    double rhs = 0;
    for (const Defect& d : defects)
        rhs += std::numbers::pi * d.degree * interpolate(test, grid, d.center);
    return {lhs, rhs};
}

HopfFields hopf_fields(const Field& q, const Field& M, const Problem& pb, const std::vector<Point>& exclude,
                       double exclude_radius)
{
    const DomainGrid& g = pb.grid;
    const double eps = pb.params.eps;
    const auto [qx, qy] = gradient(q, g);
    const auto [mx, my] = gradient(M, g);
    HopfFields hf;
    hf.omega_Q.assign(q.rows(), {0, 0});
    hf.omega_M.assign(q.rows(), {0, 0});
    for (int a : g.active_nodes()) {
        hf.omega_Q[a] = {qx.row(a).squaredNorm() - qy.row(a).squaredNorm(), -2.0 * qx.row(a).dot(qy.row(a))};
        hf.omega_M[a] = {eps * (mx.row(a).squaredNorm() - my.row(a).squaredNorm()),
                         -2.0 * eps * mx.row(a).dot(my.row(a))};
    }
    std::vector<double> dbar, dz;
    const double h = g.h();
    for (int a : g.interior_nodes()) {
        const auto& nb = g.neighbours(a);
        bool ok = true;
        for (int b : nb)
            ok = ok && g.kind(b) == NodeKind::Interior;
        for (const Point& p : exclude)
            ok = ok && (g.pos(a) - p).norm() > exclude_radius;
        if (!ok)
            continue;
        const std::complex<double> d1 = (hf.omega_Q[nb[0]] - hf.omega_Q[nb[1]]) / (2 * h);
        const std::complex<double> d2 = (hf.omega_Q[nb[2]] - hf.omega_Q[nb[3]]) / (2 * h);
        const std::complex<double> I(0, 1);
        dbar.push_back(std::abs(0.5 * (d1 + I * d2)));
        dz.push_back(std::abs(0.5 * (d1 - I * d2)));
    }
    const double den = blocked_sum(dz);
    hf.dbar_relative = den > 0 ? blocked_sum(dbar) / den : 0.0;
    return hf;
}

double discrepancy(const Field& q, const Field& M, const Problem& pb, const Point& x0, double r)
{
    const DomainGrid& g = pb.grid;
    const double eps = pb.params.eps;
    const ScalarField gm = grad_sq_density(M, g);
    ScalarField v = ScalarField::Zero(q.rows());
    for (int a : g.active_nodes())
        v(a) = f_eps(QTensor(q.row(a).transpose()), Vec2<double>(M.row(a).transpose()), pb.params, pb.constants)
                / (eps * eps)
            - 0.5 * eps * gm(a);
    return ball_integral(v, g, x0, r);
}

std::vector<Point> sample_polyline(const std::vector<Point>& pts, double spacing)
{
    std::vector<Point> out;
    if (pts.empty())
        return out;
    out.push_back(pts.front());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Point d = pts[i + 1] - pts[i];
        const int n = std::max(1, static_cast<int>(std::ceil(d.norm() / spacing)));
        for (int k = 1; k <= n; ++k)
            out.push_back(pts[i] + d * (static_cast<double>(k) / n));
    }
    return out;
}

double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b)
{
    if (a.empty() || b.empty())
        return a.empty() && b.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    auto directed = [](const std::vector<Point>& x, const std::vector<Point>& y) {
        double worst = 0;
        for (const Point& p : x) {
            double best = std::numeric_limits<double>::infinity();
            for (const Point& r : y)
                best = std::min(best, (p - r).squaredNorm());
            worst = std::max(worst, best);
        }
        return std::sqrt(worst);
    };
    return std::max(directed(a, b), directed(b, a));
}

NuMass nu_mass_vs_length(const Field& q, const Field& M, const Problem& pb, const std::vector<Defect>& defects,
                         const JumpSet& js, double tube, double exclude)
{
    const DomainGrid& g = pb.grid;
    const double eps = pb.params.eps;
    const double rt = tube * eps, rc = exclude * eps;
    const Densities d = energy_densities(q, M, pb);
    auto outside = [&](const Point& x) {
        for (const Defect& df : defects)
            if ((x - df.center).norm() <= rc)
                return false;
        return true;
    };
    auto near_chain = [&](const Point& x) {
        for (const Chain& ch : js.chains) {
            const auto& p = ch.points;
            const std::size_t n = p.size();
            const std::size_t m = ch.closed ? n : (n ? n - 1 : 0);
            if (n == 1 && (x - p[0]).norm() <= rt)
                return true;
            for (std::size_t i = 0; i < m; ++i) {
                const Point a = p[i], e = p[(i + 1) % n] - a;
                const double t = e.squaredNorm() > 0 ? std::clamp((x - a).dot(e) / e.squaredNorm(), 0.0, 1.0) : 0.0;
                if ((x - a - t * e).norm() <= rt)
                    return true;
            }
        }
        return false;
    };
    std::vector<double> v;
    for (int a : g.active_nodes()) {
        const Point x = g.pos(a);
        if (outside(x) && near_chain(x))
            v.push_back(d.nu(a));
    }
    NuMass r;
    r.nu_outside_cores = blocked_sum(v) * g.h() * g.h();
    double L = 0;
    for (const Chain& ch : js.chains) {
        std::vector<Point> pts = ch.points;
        if (ch.closed && !pts.empty())
            pts.push_back(pts.front());
        const std::vector<Point> s = sample_polyline(pts, 0.1 * g.h());
        for (std::size_t i = 0; i + 1 < s.size(); ++i)
            if (outside(0.5 * (s[i] + s[i + 1])))
                L += (s[i + 1] - s[i]).norm();
    }
    r.length = L;
    r.tension_times_length = pb.constants.c_beta * L;
    r.ratio = r.tension_times_length > 0 ? r.nu_outside_cores / r.tension_times_length : 0.0;
    return r;
}

} // namespace ferro
