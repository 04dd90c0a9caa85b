#include "ferro/core_energy.hpp"
#include "ferro/fields.hpp"
#include "ferro/optimize.hpp"
#include "ferro/potential.hpp"

#include <doctest.h>

using namespace ferro;

namespace {

const double kPi = std::numbers::pi;

// Unit disk, degree-one datum, pair of half-defects at (-t, 0) and (t, 0).
double disk_pair_W(double t)
{
    return -2 * kPi * std::log(2 * t) - kPi * (2 * std::log(1 - t * t) + 2 * std::log(1 + t * t));
}

// Derivative with respect to the x coordinate of (t, 0).
double disk_pair_dW(double t)
{
    return -kPi / t + 2 * kPi * t / (1 - t * t) - 2 * kPi * t / (1 + t * t);
}

struct Disk {
    DomainGrid grid;
    BoundaryData bd;
    RenormalizedEnergy R;
    explicit Disk(double h, int degree = 1)
        : grid(Domain::disk(Point::Zero(), 1.0), h), bd(make_boundary_data(grid, 1.0, degree, BcMode::Mixed)),
          R(grid, bd)
    {
    }
};

std::vector<Point> pair(double t) { return {Point(-t, 0), Point(t, 0)}; }

} // namespace

TEST_CASE("disk pair energy matches the closed form")
{
    Disk d(0.01);
    for (double t : {0.2, 0.3, 0.5}) {
        const RenormResult r = d.R.energy(pair(t), {0.5, 0.5});
        CHECK(r.W == doctest::Approx(disk_pair_W(t)).epsilon(0.005));
        CHECK_FALSE(r.flagged);
    }
}

TEST_CASE("energy is decreasing in the separation on the disk")
{
    Disk d(0.01);
    double prev = std::numeric_limits<double>::infinity();
    for (double t = 0.1; t <= 0.5 + 1e-9; t += 0.05) {
        const double W = d.R.energy(pair(t), {0.5, 0.5}).W;
        CHECK(W < prev);
        prev = W;
    }
}

TEST_CASE("stress-tensor gradient matches the closed form and finite differences")
{
    Disk d(0.01);
    for (double t : {0.2, 0.4}) {
        const Point g = d.R.gradient(pair(t), {0.5, 0.5}, 1);
        CHECK(g.x() == doctest::Approx(disk_pair_dW(t)).epsilon(0.05));
        CHECK(std::abs(g.y()) <= 0.05 * std::abs(g.x()));
        const double s = 0.02;
        std::vector<Point> p = pair(t), m = pair(t);
        p[1].x() += s;
        m[1].x() -= s;
        const double fd = (d.R.energy(p, {0.5, 0.5}).W - d.R.energy(m, {0.5, 0.5}).W) / (2 * s);
        CHECK(g.x() == doctest::Approx(fd).epsilon(0.10));
    }
}

TEST_CASE("canonical map has the boundary datum and the prescribed degrees")
{
    Disk d(0.02);
    const CanonicalMap m = d.R.canonical_map({Point(-0.3, 0.1), Point(0.4, -0.2)}, {0.5, 0.5});
    for (std::size_t k = 0; k < d.grid.boundary().size(); ++k) {
        const int id = d.grid.boundary()[k].id;
        CHECK((m.q.row(id) - d.bd.q_bd.row(k)).norm() <= 0.05);
    }
    for (const Point& c : m.points) {
        const LoopSample loop = circle_loop(c, 0.1, 256);
        CHECK(loop_degree(m.q, d.grid, loop) == 0.5);
    }
    for (int a : d.grid.active_nodes())
        CHECK(m.q.row(a).norm() == doctest::Approx(1.0));
}

TEST_CASE("invalid point sets are rejected")
{
    Disk d(0.02);
    CHECK_THROWS_AS(d.R.canonical_map(pair(0.3), {0.5}), InvalidInput);
    CHECK_THROWS_AS(d.R.canonical_map(pair(0.3), {0.5, 0.3}), InvalidInput);
    CHECK_THROWS_AS(d.R.canonical_map(pair(0.3), {0.5, -0.5}), InvalidInput);
    CHECK_THROWS_AS(d.R.canonical_map({Point(1.5, 0)}, {1.0}), InvalidInput);
    CHECK_THROWS_AS(d.R.canonical_map({Point(0.2, 0), Point(0.2, 0)}, {0.5, 0.5}), InvalidInput);
    CHECK_THROWS_AS(d.R.energy(pair(0.3), {0.5, 0.5}, {0.01}), InvalidInput);
    CHECK_THROWS_AS(d.R.energy({Point(-0.02, 0), Point(0.02, 0)}, {0.5, 0.5}), InvalidInput);
    CHECK(half_degrees(1) == std::vector<double>{0.5, 0.5});
    CHECK(half_degrees(-2).size() == 4);
}

TEST_CASE("reduced energy adds the line tension times the connection length")
{
    Disk d(0.02);
    const auto p = pair(0.3);
    const double W = d.R.energy(p, {0.5, 0.5}).W;
    CHECK(d.R.w_beta(p, {0.5, 0.5}, 2.0) == doctest::Approx(W + c_beta(2.0) * 0.6).epsilon(1e-12));
}

TEST_CASE("radial vortex energy and core constant")
{
    const RadialProfile p = radial_vortex(0.05);
    CHECK(p.energy == doctest::Approx(10.610062).epsilon(1e-5));
    for (std::size_t i = 1; i < p.f.size(); ++i)
        CHECK(p.f[i] >= p.f[i - 1] - 1e-12);
    CHECK(p.f.front() == doctest::Approx(0.0));
    CHECK(p.f.back() == doctest::Approx(1.0));
    const CoreEnergyResult c = core_energy({0.1, 0.05, 0.025});
    CHECK(c.gamma_star > 0);
    CHECK(c.spread < 0.01);
    CHECK(c.gamma_star == doctest::Approx(1.19654).epsilon(1e-3));
}

TEST_CASE("Nelder-Mead minimises the Rosenbrock function")
{
    auto f = [](const std::vector<double>& x) {
        return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
    };
    NelderMeadOptions o;
    o.max_evals = 5000;
    o.f_tol = 1e-14;
    o.x_tol = 1e-9;
    o.initial_step = 0.5;
    const NelderMeadResult r = nelder_mead(f, {-1.2, 1.0}, o);
    CHECK(r.value <= 1e-8);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-3));
}
