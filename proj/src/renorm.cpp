#include "ferro/renorm.hpp"

#include "ferro/connection.hpp"
#include "ferro/errors.hpp"
#include "ferro/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ferro {

namespace {

constexpr double kPi = std::numbers::pi;

void check_points(const std::vector<Point>& pts, const std::vector<double>& deg, const DomainGrid& grid,
                  const BoundaryData& bd)
{
    if (pts.size() != deg.size())
        throw InvalidInput("canonical_map: points and degrees differ in length");
    double total = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (std::abs(2 * deg[i] - std::round(2 * deg[i])) > 1e-12)
            throw InvalidInput("canonical_map: degrees must be half-integers");
        if (!(grid.domain().signed_distance(pts[i]) < 0))
            throw InvalidInput("canonical_map: point outside the domain");
        for (std::size_t j = 0; j < i; ++j)
            if ((pts[i] - pts[j]).norm() <= 1e-9)
                throw InvalidInput("canonical_map: coincident points");
        total += deg[i];
    }
    if (std::abs(total - boundary_degree(grid, bd)) > 1e-9)
        throw InvalidInput("canonical_map: degrees do not add up to the boundary degree");
}

double singular_angle(const std::vector<Point>& pts, const std::vector<double>& deg, const Point& x)
{
    double s = 0;
    for (std::size_t j = 0; j < pts.size(); ++j)
        s += deg[j] * std::atan2(x.y() - pts[j].y(), x.x() - pts[j].x());
    return s;
}

std::vector<std::pair<double, double>> gauss_legendre(int n)
{
    std::vector<std::pair<double, double>> out;
    for (int i = 1; i <= n; ++i) {
        double x = std::cos(kPi * (i - 0.25) / (n + 0.5)), dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        out.emplace_back(x, 2 / ((1 - x * x) * dp * dp));
    }
    return out;
}

} // namespace

std::vector<double> half_degrees(int d)
{
    return std::vector<double>(2 * std::abs(d), d > 0 ? 0.5 : -0.5);
}

RenormalizedEnergy::RenormalizedEnergy(const DomainGrid& grid, const BoundaryData& bd, LaplaceSolver::Method method)
    : grid_(grid), bd_(bd), solver_(std::make_unique<LaplaceSolver>(grid, method))
{
}

RenormalizedEnergy::~RenormalizedEnergy() = default;

CanonicalMap RenormalizedEnergy::canonical_map(const std::vector<Point>& pts, const std::vector<double>& deg) const
{
    check_points(pts, deg, grid_, bd_);
    const auto& bnodes = grid_.boundary();
    const auto& order = grid_.boundary_order();
    const int nb = static_cast<int>(bnodes.size());

    // Lift the boundary director angle and each singular angle continuously
    // along the boundary; their difference is single valued.
    Field g(nb, 1);
    double psi = 0;
    std::vector<double> arg(pts.size(), 0.0);
    for (int k = 0; k < nb; ++k) {
        const int b = order[k];
        // H is smooth, so its foot-point value is a better nodal value than the
        // singular part evaluated at the node.
        const Point x = bnodes[b].foot;
        const double raw = 0.5 * std::atan2(bd_.q_bd(b, 1), bd_.q_bd(b, 0));
        psi = k == 0 ? raw : psi + std::remainder(raw - psi, kPi);
        double s = 0;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            const double a = std::atan2(x.y() - pts[j].y(), x.x() - pts[j].x());
            arg[j] = k == 0 ? a : arg[j] + std::remainder(a - arg[j], 2 * kPi);
            s += deg[j] * arg[j];
        }
        g(b, 0) = psi - s;
    }
    CanonicalMap m;
    m.points = pts;
    m.degrees = deg;
    // Boundary nodes sit up to h inside the boundary curve; move their values
    // from the foot point to the node with the current gradient estimate.
    Field Hf = solver_->solve(g);
    for (int pass = 0; pass < 3; ++pass) {
        const auto [hx, hy] = ferro::gradient(Hf, grid_);
        Field gc = g;
        for (int b = 0; b < nb; ++b) {
            const int id = bnodes[b].id;
            const Point d = grid_.pos(id) - bnodes[b].foot;
            gc(b, 0) += d.x() * hx(id, 0) + d.y() * hy(id, 0);
        }
        Hf = solver_->solve(gc);
    }
    m.H = Hf.col(0);
    const auto [hx, hy] = ferro::gradient(Hf, grid_);
    m.grad_H = Field::Zero(grid_.size(), 2);
    m.grad_H.col(0) = hx.col(0);
    m.grad_H.col(1) = hy.col(0);
    m.phi = ScalarField::Zero(grid_.size());
    m.q = Field::Zero(grid_.size(), 2);
    for (int id : grid_.active_nodes()) {
        m.phi(id) = singular_angle(pts, deg, grid_.pos(id)) + m.H(id);
        m.q(id, 0) = std::cos(2 * m.phi(id));
        m.q(id, 1) = std::sin(2 * m.phi(id));
    }
    return m;
}

Point RenormalizedEnergy::grad_phi(const CanonicalMap& m, const Point& x) const
{
    Point g = Point::Zero();
    for (std::size_t j = 0; j < m.points.size(); ++j) {
        const Point r = x - m.points[j];
        g += m.degrees[j] * Point(-r.y(), r.x()) / r.squaredNorm();
    }
    const Eigen::RowVectorXd gh = interpolate(m.grad_H, grid_, x);
    return g + Point(gh(0), gh(1));
}

double RenormalizedEnergy::cutoff_radius(const std::vector<Point>& pts) const
{
    double R1 = 0.5 * grid_.domain().feature_size();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        R1 = std::min(R1, 0.95 * -grid_.domain().signed_distance(pts[i]));
        for (std::size_t j = 0; j < i; ++j)
            R1 = std::min(R1, 0.49 * (pts[i] - pts[j]).norm());
    }
    return R1;
}

std::vector<double> RenormalizedEnergy::default_ladder(const std::vector<Point>& pts) const
{
    const double h = grid_.h();
    const double top = std::min(16 * h, 0.5 * cutoff_radius(pts));
    if (top < 4 * h * (1 - 1e-9))
        throw InvalidInput("renormalized_energy: points too close to each other or the boundary for sigma >= 4h");
    std::vector<double> ladder;
    const int n = 5;
    for (int k = 0; k < n; ++k)
        ladder.push_back(top * std::pow(4 * h / top, static_cast<double>(k) / (n - 1)));
    return ladder;
}

RenormResult RenormalizedEnergy::energy(const std::vector<Point>& pts, const std::vector<double>& deg,
                                        std::vector<double> ladder, double fit_tol) const
{
    const double h = grid_.h();
    const double R1 = cutoff_radius(pts);
    // Without points the Dirichlet energy is finite and no ladder is needed.
    if (pts.empty())
        ladder.clear();
    else {
        if (ladder.empty())
            ladder = default_ladder(pts);
        std::sort(ladder.begin(), ladder.end(), std::greater<>());
        if (ladder.back() < 4 * h - 1e-12)
            throw InvalidInput("renormalized_energy: sigma below 4h");
        if (ladder.front() > 0.5 * R1 + 1e-12)
            throw InvalidInput("renormalized_energy: sigma too large for the point separation");
    }
    const CanonicalMap m = canonical_map(pts, deg);
    const int ns = static_cast<int>(ladder.size());
    const Domain& dom = grid_.domain();
    const int nx = grid_.nx(), ny = grid_.ny();

    // The energy density is split with a smooth cutoff chi around each point:
    // (1 - sum chi) e goes to the lattice, chi e to polar quadrature, so no
    // quadrature cell is cut by a circle.
    auto chi = [&](double r) {
        const double t = (r - 0.5 * R1) / (0.5 * R1);
        if (t <= 0)
            return 1.0;
        if (t >= 1)
            return 0.0;
        return 1 - t * t * t * (10 - 15 * t + 6 * t * t);
    };

    double lattice = 0;
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const int c = j * nx + i;
            const int corners[4] = {c, c + 1, c + nx, c + nx + 1};
            int nact = 0;
            for (int k : corners)
                nact += grid_.active(k);
            if (nact == 0)
                continue;
            const Point centre = grid_.pos(c) + Point(0.5 * h, 0.5 * h);
            double rmin = 1e300;
            for (const Point& a : pts)
                rmin = std::min(rmin, (centre - a).norm());
            if (rmin + 0.75 * h < 0.5 * R1)
                continue; // cutoff is 1 on the whole cell
            const bool near_wall = nact < 4 || dom.signed_distance(centre) > -h;
            const int sub = near_wall ? 6 : (rmin < R1 + h ? 4 : 2);
            double gh[4][2], act[4];
            for (int k = 0; k < 4; ++k) {
                act[k] = grid_.active(corners[k]) ? 1.0 : 0.0;
                gh[k][0] = m.grad_H(corners[k], 0);
                gh[k][1] = m.grad_H(corners[k], 1);
            }
            const double w = (h / sub) * (h / sub);
            for (int b = 0; b < sub; ++b)
                for (int a = 0; a < sub; ++a) {
                    const double fx = (a + 0.5) / sub, fy = (b + 0.5) / sub;
                    const Point x = grid_.pos(c) + h * Point(fx, fy);
                    if (near_wall && !(dom.signed_distance(x) < 0))
                        continue;
                    const double wk[4] = {(1 - fx) * (1 - fy) * act[0], fx * (1 - fy) * act[1],
                                          (1 - fx) * fy * act[2], fx * fy * act[3]};
                    const double ws = wk[0] + wk[1] + wk[2] + wk[3];
                    if (ws <= 1e-14)
                        continue;
                    Point g((wk[0] * gh[0][0] + wk[1] * gh[1][0] + wk[2] * gh[2][0] + wk[3] * gh[3][0]) / ws,
                            (wk[0] * gh[0][1] + wk[1] * gh[1][1] + wk[2] * gh[2][1] + wk[3] * gh[3][1]) / ws);
                    double cut = 1;
                    for (std::size_t jj = 0; jj < pts.size(); ++jj) {
                        const Point d = x - pts[jj];
                        g += deg[jj] * Point(-d.y(), d.x()) / d.squaredNorm();
                        cut -= chi(d.norm());
                    }
                    lattice += 2.0 * g.squaredNorm() * cut * w;
                }
        }
    }

    // Polar part: Gauss-Legendre in log r on each ladder interval, trapezoid in angle.
    static const std::vector<std::pair<double, double>> gl = gauss_legendre(16);
    const int ntheta = std::max(256, circle_samples(grid_, R1));
    std::vector<double> edges = ladder;
    edges.insert(edges.begin(), R1);
    std::vector<double> piece(ns, 0.0); // integral over [edges[k+1], edges[k]]
    for (std::size_t jp = 0; jp < pts.size(); ++jp) {
        for (int k = 0; k < ns; ++k) {
            const double s0 = std::log(edges[k + 1]), s1 = std::log(edges[k]);
            double sum = 0;
            for (const auto& [node, weight] : gl) {
                const double sv = 0.5 * (s0 + s1) + 0.5 * (s1 - s0) * node;
                const double r = std::exp(sv);
                double ring = 0;
                for (int t = 0; t < ntheta; ++t) {
                    const double th = 2 * kPi * t / ntheta;
                    const Point x = pts[jp] + r * Point(std::cos(th), std::sin(th));
                    ring += 2.0 * grad_phi(m, x).squaredNorm();
                }
                ring *= 2 * kPi / ntheta;
                sum += 0.5 * (s1 - s0) * weight * ring * chi(r) * r * r;
            }
            piece[k] += sum;
        }
    }
    std::vector<double> acc(ns);
    double outer = lattice;
    for (int k = 0; k < ns; ++k) {
        outer += piece[k];
        acc[k] = outer;
    }

    double log_weight = 0;
    for (double d : deg)
        log_weight += 4 * kPi * d * d;
    RenormResult res;
    res.sigma_ladder = ladder;
    if (pts.empty()) {
        res.W = lattice;
        return res;
    }
    for (int k = 0; k < ns; ++k)
        res.W_sigma.push_back(acc[k] - log_weight * std::abs(std::log(ladder[k])));

    // Least squares W_sigma = W + a sigma^2.
    double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
    for (int k = 0; k < ns; ++k) {
        const double x = ladder[k] * ladder[k];
        s0 += 1;
        s1 += x;
        s2 += x * x;
        t0 += res.W_sigma[k];
        t1 += x * res.W_sigma[k];
    }
    const double det = s0 * s2 - s1 * s1;
    if (ns >= 2 && std::abs(det) > 1e-300) {
        res.slope = (s0 * t1 - s1 * t0) / det;
        res.W = (t0 - res.slope * s1) / s0;
    } else {
        res.slope = 0;
        res.W = res.W_sigma.back();
    }
    double worst = 0;
    for (int k = 0; k < ns; ++k)
        worst = std::max(worst, std::abs(res.W_sigma[k] - res.W - res.slope * ladder[k] * ladder[k]));
    res.fit_residual = worst / std::max(std::abs(res.W), 1.0);
    res.extrapolation_error = std::abs(res.W - res.W_sigma.back());
    res.flagged = res.fit_residual > fit_tol;
    return res;
}

Point RenormalizedEnergy::gradient(const std::vector<Point>& pts, const std::vector<double>& deg, int j,
                                   double radius) const
{
    if (j < 0 || j >= static_cast<int>(pts.size()))
        throw InvalidInput("renorm_gradient: bad point index");
    const double h = grid_.h();
    const double rho = radius > 0 ? radius : 6 * h;
    const Point a = pts[j];
    if (-grid_.domain().signed_distance(a) <= rho + h)
        throw InvalidInput("renorm_gradient: circle leaves the domain");
    for (std::size_t k = 0; k < pts.size(); ++k)
        if (static_cast<int>(k) != j && (pts[k] - a).norm() <= rho + 6 * h)
            throw InvalidInput("renorm_gradient: circle meets another point's 6h ball");
    const CanonicalMap m = canonical_map(pts, deg);
    const int n = std::max(256, circle_samples(grid_, rho));
    std::vector<double> gx(n), gy(n);
    for (int k = 0; k < n; ++k) {
        const double t = 2 * kPi * (k + 0.5) / n;
        const Point nu(std::cos(t), std::sin(t));
        const Point g = grad_phi(m, a + rho * nu);
        const double dn = g.dot(nu), g2 = g.squaredNorm();
        // |grad Q|^2 = 4 |grad phi|^2 for unit-norm tensors.
        gx[k] = 4 * g.x() * dn - 2 * nu.x() * g2;
        gy[k] = 4 * g.y() * dn - 2 * nu.y() * g2;
    }
    const double ds = 2 * kPi * rho / n;
    return Point(blocked_sum(gx) * ds, blocked_sum(gy) * ds);
}

double RenormalizedEnergy::w_beta(const std::vector<Point>& pts, const std::vector<double>& deg, double beta) const
{
    const double L = minimal_connection_length(pts, grid_.domain());
    return energy(pts, deg).W + c_beta(beta) * L;
}

CanonicalMap canonical_map(const std::vector<Point>& points, const std::vector<double>& degrees,
                           const BoundaryData& bd, const DomainGrid& grid)
{
    return RenormalizedEnergy(grid, bd, LaplaceSolver::Method::ConjugateGradient).canonical_map(points, degrees);
}

RenormResult renormalized_energy(const std::vector<Point>& points, const std::vector<double>& degrees,
                                 const BoundaryData& bd, const DomainGrid& grid, const std::vector<double>& ladder)
{
    return RenormalizedEnergy(grid, bd).energy(points, degrees, ladder);
}

Point renorm_gradient(const std::vector<Point>& points, const std::vector<double>& degrees, const BoundaryData& bd,
                      const DomainGrid& grid, int j)
{
    return RenormalizedEnergy(grid, bd).gradient(points, degrees, j);
}

double w_beta_omega(const std::vector<Point>& points, const std::vector<double>& degrees, const BoundaryData& bd,
                    const DomainGrid& grid, double beta)
{
    return RenormalizedEnergy(grid, bd).w_beta(points, degrees, beta);
}

} // namespace ferro
