#include <doctest.h>

#include "bml/grid.hpp"
#include "bml/rng.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <filesystem>

using namespace bml;

namespace {

SampledFunction indicator_interval(const Grid& g, double lo, double hi)
{
    std::vector<complex> vals(g.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        double x = g.point(i)[0];
        if (x >= lo && x < hi) vals[i] = 1;
    }
    return SampledFunction(g, std::move(vals), std::max(std::abs(lo), std::abs(hi)) + g.dx);
}

SampledFunction open_ball_one(const Grid& g, double r)
{
    std::vector<complex> vals(g.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (norm2(g.point(i), g.dim) < r) vals[i] = 1;
    return SampledFunction(g, std::move(vals), r);
}

SampledFunction smooth_bump(const Grid& g, double width, double amp = 1.0)
{
    std::vector<complex> vals(g.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        double rho = norm2(g.point(i), g.dim);
        if (rho < width) {
            double t = rho / width;
            vals[i] = amp * std::exp(1.0 - 1.0 / (1.0 - t * t));
        }
    }
    return SampledFunction(g, std::move(vals), width);
}

} // namespace

TEST_CASE("make_grid accepts the documented shapes")
{
    Grid g1 = make_grid(1, 8.0, 1024);
    CHECK(g1.dx == doctest::Approx(1.0 / 64).epsilon(1e-15));
    CHECK(g1.size() == 1024);

    Grid g2 = make_grid(2, 4.0, 256);
    CHECK(g2.size() == 256 * 256);
    CHECK(g2.dx == doctest::Approx(1.0 / 32).epsilon(1e-15));

    CHECK_THROWS_AS(make_grid(3, 1.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 1.0, 100), std::invalid_argument);  // not a power of two
    CHECK_THROWS_AS(make_grid(1, 1.0, 8), std::invalid_argument);    // too small
    CHECK_THROWS_AS(make_grid(1, -1.0, 64), std::invalid_argument);
}

TEST_CASE("sampled function invariants are enforced")
{
    Grid g = make_grid(1, 8.0, 64);
    std::vector<complex> vals(g.size(), complex{0});
    CHECK_THROWS_AS(SampledFunction(g, std::vector<complex>(10), 1.0), std::invalid_argument);
    // nonzero sample beyond the declared support
    auto bad = vals;
    bad[0] = 1;  // x = -8
    CHECK_THROWS_AS(SampledFunction(g, bad, 1.0), std::invalid_argument);
    // margin violation
    CHECK_THROWS_AS(SampledFunction(g, vals, 6.0), std::invalid_argument);
    CHECK_NOTHROW(SampledFunction(g, vals, 6.0, SampledFunction::Margin::waived));
}

TEST_CASE("ball integral: zero, indicator, and the x^2 oracle")
{
    Grid g = make_grid(1, 8.0, 1024);
    SampledFunction zero(g, std::vector<complex>(g.size()), 1.0);
    CHECK(ball_lp_integral(zero, {0, 0}, 1.0, 1.0) == 0.0);

    SampledFunction one = open_ball_one(g, 1.0);
    double m = ball_lp_integral(one, {0, 0}, 1.0, 1.0);
    CHECK(std::abs(m - 2.0) <= 2 * g.dx);

    // f(x) = x on [-1,1]: int x^2 dx = 2/3 exactly
    std::vector<complex> vals(g.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        double x = g.point(i)[0];
        if (std::abs(x) <= 1) vals[i] = x;
    }
    SampledFunction fx(g, std::move(vals), 1.0 + g.dx);
    double v = ball_lp_integral(fx, {0, 0}, 1.0, 2.0);
    CHECK(std::abs(v - std::sqrt(2.0 / 3.0)) <= 2 * g.dx);

    CHECK_THROWS_AS(ball_lp_integral(one, {0, 0}, -1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(ball_lp_integral(one, {0, 0}, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("planar ball integral approximates the disk area")
{
    Grid g = make_grid(2, 4.0, 256);
    std::vector<complex> vals(g.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (norm2(g.point(i), 2) < 1.2) vals[i] = 1;
    SampledFunction f(g, std::move(vals), 1.2);
    double v = ball_lp_integral(f, {0, 0}, 1.2, 1.0);
    double area = std::numbers::pi * 1.2 * 1.2;
    CHECK(std::abs(v - area) <= 8 * g.dx);
}

TEST_CASE("translate relocates samples exactly")
{
    Grid g = make_grid(1, 8.0, 1024);
    SampledFunction f = indicator_interval(g, 0.0, 1.0);

    SampledFunction same = translate(f, {0, 0});
    CHECK(same.values() == f.values());

    SampledFunction shifted = translate(f, {g.dx, 0});
    SampledFunction expected = indicator_interval(g, g.dx, 1.0 + g.dx);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(shifted.value(i) == expected.value(i));

    CHECK_THROWS_AS(translate(f, {g.dx / 2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(translate(f, {3.5, 0}), std::invalid_argument);  // support would leave B(0,R/2)
}

TEST_CASE("p=1 ball integral is additive for nonnegative samples")
{
    Grid g = make_grid(1, 8.0, 512);
    SampledFunction f = smooth_bump(g, 1.5);
    SampledFunction h = open_ball_one(g, 1.0);
    std::vector<complex> sum(g.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = f.value(i) + h.value(i);
    SampledFunction fh(g, std::move(sum), 1.5);
    double lhs = ball_lp_integral(fh, {0.25, 0}, 2.0, 1.0);
    double rhs = ball_lp_integral(f, {0.25, 0}, 2.0, 1.0) +
                 ball_lp_integral(h, {0.25, 0}, 2.0, 1.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
}

TEST_CASE("translation isometry of the ball integral is exact")
{
    Grid g = make_grid(1, 8.0, 1024);
    SampledFunction f = smooth_bump(g, 1.25);
    Point tau = {16 * g.dx, 0};
    SampledFunction ft = translate(f, tau);
    for (double r : {0.5, 1.0, 2.0})
        CHECK(ball_lp_integral(ft, {0.5 + tau[0], 0}, r, 1.5) ==
              ball_lp_integral(f, {0.5, 0}, r, 1.5));
}

TEST_CASE("quadrature error shrinks at first order under grid doubling")
{
    // smooth bump strictly inside the ball, three resolutions
    double vals[3];
    int idx = 0;
    for (int n : {256, 512, 1024}) {
        Grid g = make_grid(1, 8.0, n);
        SampledFunction f = smooth_bump(g, 1.0);
        vals[idx++] = ball_lp_integral(f, {0, 0}, 1.5, 1.0);
    }
    double e1 = std::abs(vals[1] - vals[0]);
    double e2 = std::abs(vals[2] - vals[1]);
    CHECK(e2 <= 0.75 * e1);
}

TEST_CASE("binary serialization round-trips bit for bit")
{
    Grid g = make_grid(2, 4.0, 16);
    Rng rng(7);
    std::vector<complex> vals(g.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (norm2(g.point(i), g.dim) <= 1.5)
            vals[i] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
    SampledFunction f(g, std::move(vals), 1.5 + g.dx);
    auto path = std::filesystem::temp_directory_path() / "bml_roundtrip.bin";
    save_function(f, path.string());
    SampledFunction back = load_function(path.string());
    CHECK(back.grid().dim == g.dim);
    CHECK(back.grid().R == g.R);
    CHECK(back.grid().n == g.n);
    CHECK(back.support_radius() == f.support_radius());
    CHECK(back.values() == f.values());
    std::filesystem::remove(path);
}

TEST_CASE("serialization failure paths")
{
    CHECK_THROWS_AS(load_function("/nonexistent/path/fn.bin"), std::runtime_error);
}
