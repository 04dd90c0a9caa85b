#include "ferro/optimize.hpp"

#include "ferro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ferro {

namespace {

constexpr double kBarrier = 1e6;

bool lex_less(const std::vector<Point>& a, const std::vector<Point>& b)
{
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a[i].x() != b[i].x())
            return a[i].x() < b[i].x();
        if (a[i].y() != b[i].y())
            return a[i].y() < b[i].y();
    }
    return a.size() < b.size();
}

std::vector<Point> canonical_order(std::vector<Point> p)
{
    std::sort(p.begin(), p.end(), [](const Point& a, const Point& b) {
        return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
    });
    return p;
}

// Max distance between two point sets under the best relabelling (small sets only).
double set_distance(std::vector<Point> a, const std::vector<Point>& b)
{
    std::vector<int> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
        double worst = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            worst = std::max(worst, (a[perm[i]] - b[i]).norm());
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const NelderMeadOptions& opt)
{
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> s(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i)
        s[i + 1][i] += opt.initial_step;
    std::vector<double> fv(n + 1);
    NelderMeadResult res;
    for (std::size_t i = 0; i <= n; ++i)
        fv[i] = f(s[i]);
    res.evals = static_cast<int>(n + 1);
    std::vector<std::size_t> idx(n + 1);
    auto along = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
        std::vector<double> out(n);
        for (std::size_t k = 0; k < n; ++k)
            out[k] = c[k] + t * (w[k] - c[k]);
        return out;
    };
    while (res.evals < opt.max_evals) {
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        {
            std::vector<std::vector<double>> s2;
            std::vector<double> f2;
            for (std::size_t i : idx) {
                s2.push_back(s[i]);
                f2.push_back(fv[i]);
            }
            s = std::move(s2);
            fv = std::move(f2);
        }
        double size = 0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                size = std::max(size, std::abs(s[i][k] - s[0][k]));
        if (std::abs(fv[n] - fv[0]) <= opt.f_tol * (1 + std::abs(fv[0])) && size <= opt.x_tol) {
            res.converged = true;
            break;
        }
        std::vector<double> c(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                c[k] += s[i][k] / n;
        const std::vector<double> xr = along(c, s[n], -1.0);
        const double fr = f(xr);
        ++res.evals;
        if (fr < fv[0]) {
            const std::vector<double> xe = along(c, s[n], -2.0);
            const double fe = f(xe);
            ++res.evals;
            if (fe < fr) {
                s[n] = xe;
                fv[n] = fe;
            } else {
                s[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            s[n] = xr;
            fv[n] = fr;
        } else {
            const bool outside = fr < fv[n];
            const std::vector<double> xc = outside ? along(c, s[n], -0.5) : along(c, s[n], 0.5);
            const double fc = f(xc);
            ++res.evals;
            if (fc < std::min(fr, fv[n])) {
                s[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    s[i] = along(s[0], s[i], 0.5);
                    fv[i] = f(s[i]);
                }
                res.evals += static_cast<int>(n);
            }
        }
    }
    const std::size_t best = std::min_element(fv.begin(), fv.end()) - fv.begin();
    res.x = s[best];
    res.value = fv[best];
    return res;
}

double penalised_w_beta(const RenormalizedEnergy& R, const std::vector<Point>& pts, const std::vector<double>& deg,
                        double beta, double barrier)
{
    const Domain& dom = R.grid().domain();
    double violation = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        violation += std::max(0.0, barrier + dom.signed_distance(pts[i]));
        for (std::size_t j = 0; j < i; ++j)
            violation += std::max(0.0, barrier - (pts[i] - pts[j]).norm());
    }
    if (violation > 0)
        return kBarrier * (1 + violation);
    try {
        return R.w_beta(pts, deg, beta);
    } catch (const InvalidInput&) {
        return kBarrier;
    } catch (const InfeasibleGeometry&) {
        return kBarrier;
    }
}

OptimizeResult optimize_positions(const RenormalizedEnergy& R, int d, double beta, int multistart,
                                  std::uint64_t seed, const NelderMeadOptions& opt)
{
    if (multistart < 1)
        throw InvalidInput("optimize_positions: need at least one start");
    if (d == 0) {
        // Nothing to place: the energy of the defect-free canonical map.
        OptimizeResult r;
        r.value = R.energy({}, {}).W;
        return r;
    }
    const DomainGrid& g = R.grid();
    const Domain& dom = g.domain();
    const std::vector<double> deg = half_degrees(d);
    const int p = static_cast<int>(deg.size());
    const double barrier = 4 * g.h();
    const double scale = dom.feature_size();
    NelderMeadOptions o = opt;
    o.initial_step = opt.initial_step * scale;

    std::vector<StartResult> starts(multistart);
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < multistart; ++s) {
        std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(s + 1));
        std::uniform_real_distribution<double> ux(dom.bbox_lo().x(), dom.bbox_hi().x());
        std::uniform_real_distribution<double> uy(dom.bbox_lo().y(), dom.bbox_hi().y());
        std::vector<Point> init;
        for (int tries = 0; static_cast<int>(init.size()) < p && tries < 100000; ++tries) {
            const Point x(ux(rng), uy(rng));
            if (dom.signed_distance(x) > -0.15 * scale)
                continue;
            bool ok = true;
            for (const Point& y : init)
                ok = ok && (x - y).norm() > 0.2 * scale;
            if (ok)
                init.push_back(x);
        }
        StartResult sr;
        sr.initial = init;
        if (static_cast<int>(init.size()) == p) {
            std::vector<double> x0;
            for (const Point& a : init) {
                x0.push_back(a.x());
                x0.push_back(a.y());
            }
            auto f = [&](const std::vector<double>& x) {
                std::vector<Point> pts(p);
                for (int i = 0; i < p; ++i)
                    pts[i] = Point(x[2 * i], x[2 * i + 1]);
                return penalised_w_beta(R, pts, deg, beta, barrier);
            };
            const NelderMeadResult nm = nelder_mead(f, x0, o);
            for (int i = 0; i < p; ++i)
                sr.points.emplace_back(nm.x[2 * i], nm.x[2 * i + 1]);
            sr.points = canonical_order(sr.points);
            sr.value = nm.value;
            sr.evals = nm.evals;
            sr.converged = nm.converged;
        } else {
            sr.value = kBarrier;
        }
        starts[s] = sr;
    }
    std::sort(starts.begin(), starts.end(), [](const StartResult& a, const StartResult& b) {
        return a.value != b.value ? a.value < b.value : lex_less(a.points, b.points);
    });
    if (starts.empty() || !(starts.front().value < kBarrier))
        throw InfeasibleGeometry("optimize_positions: every start is infeasible");
    OptimizeResult res;
    res.starts = starts;
    res.points = starts.front().points;
    res.value = starts.front().value;
    for (const StartResult& s : starts) {
        if (!(s.value < kBarrier))
            continue;
        bool seen = false;
        for (const StartResult& m : res.local_minima)
            seen = seen || (std::abs(m.value - s.value) < 1e-3 && set_distance(s.points, m.points) < 0.05 * scale);
        if (!seen)
            res.local_minima.push_back(s);
    }
    return res;
}

} // namespace ferro
