#include <doctest.h>

#include "classify_table.hpp"

#include <cmath>
#include <stdexcept>

using namespace bml;

TEST_CASE("sigma thresholds")
{
    SpaceParams P{1, 1.0, 2.0, 0.5, 0.5, 1.0, INFINITY, 1};
    CHECK(P.sigma_p() == doctest::Approx(1.0));
    CHECK(P.sigma_pq() == doctest::Approx(1.0));
    P.p = 2;
    CHECK(P.sigma_p() == 0.0);
    P.q = 0.25;
    CHECK(P.sigma_pq() == doctest::Approx(3.0));
}

TEST_CASE("invalid parameter tuples are rejected")
{
    SpaceParams P;
    P.p = 3;
    P.u = 2;  // p > u
    CHECK_THROWS_AS(classify_parameters(P), std::invalid_argument);
    P = SpaceParams{};
    P.a = 0.5;
    CHECK_THROWS_AS(classify_parameters(P), std::invalid_argument);
    P = SpaceParams{};
    P.N = 0;
    CHECK_THROWS_AS(classify_parameters(P), std::invalid_argument);
}

TEST_CASE("hand-tabulated verdicts are reproduced exactly")
{
    for (const auto& c : testing::classify_table()) {
        RegionVerdict v = classify_parameters(c.params);
        INFO("s=", c.params.s, " u=", c.params.u, " p=", c.params.p, " q=", c.params.q,
             " v=", c.params.v, " a=", c.params.a, " N=", c.params.N);
        CHECK(v.kind == c.kind);
        CHECK(v.tag == c.tag);
        CHECK(!v.matches.empty());
        CHECK(v.matches.front() == c.tag);
    }
}

TEST_CASE("precedence lists every matching failure row")
{
    // s <= 0 and N <= s can both apply; the first row wins, both are listed
    SpaceParams P{1, 0.0, 2.0, 2.0, 2.0, 2.0, INFINITY, 1};
    RegionVerdict v = classify_parameters(P);
    CHECK(v.tag == CaseTag::s_zero_unbounded_tail);

    SpaceParams Q{1, 0.2, 2.0, 0.5, 2.0, 1.0, INFINITY, 1};
    RegionVerdict w = classify_parameters(Q);
    CHECK(w.tag == CaseTag::subcritical_p);
    bool lists_v_row = false;
    for (auto t : w.matches)
        if (t == CaseTag::subcritical_v) lists_v_row = true;
    CHECK(lists_v_row);  // s also sits below the v-critical line here
}

TEST_CASE("verdict regions are disjoint and total on a parameter sweep")
{
    // determinism and totality over a sizable scripted sweep
    const double inf = INFINITY;
    for (double s : {-0.5, 0.0, 0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0})
        for (double p : {0.5, 1.0, 1.5, 2.0})
            for (double u : {2.0, 4.0})
                for (double q : {0.5, 1.0, 2.0, inf})
                    for (double v : {0.5, 1.0, 2.0, inf})
                        for (double a : {1.0, inf})
                            for (int N : {1, 2, 3}) {
                                SpaceParams P{1, s, u, p, q, v, a, N};
                                RegionVerdict v1 = classify_parameters(P);
                                RegionVerdict v2 = classify_parameters(P);
                                CHECK(v1.kind == v2.kind);
                                CHECK(v1.tag == v2.tag);
                                if (v1.kind == RegionVerdict::Kind::equivalent)
                                    CHECK(v1.tag == CaseTag::equivalent);
                            }
}

TEST_CASE("boundary structure of the fixed-u slice matches the region map")
{
    // along v = 1, u = 2, p = 0.5 (so the two critical lines sit at
    // s = 0.25 and s = 1): verdicts may change only at s = 0 and at the
    // two lines
    const double u = 2.0, p = 0.5, v = 1.0;
    auto kind_at = [&](double s) {
        return classify_parameters({1, s, u, p, 0.5, v, INFINITY, 3}).kind;
    };
    CHECK(kind_at(-0.1) == RegionVerdict::Kind::not_equivalent);
    CHECK(kind_at(0.1) == RegionVerdict::Kind::not_equivalent);   // below d(p/u)(1/p-1)
    CHECK(kind_at(0.2) == RegionVerdict::Kind::not_equivalent);
    CHECK(kind_at(0.3) == RegionVerdict::Kind::open);             // the v = 1 gap
    CHECK(kind_at(0.9) == RegionVerdict::Kind::open);
    CHECK(kind_at(1.1) == RegionVerdict::Kind::equivalent);       // above sigma_p
    CHECK(kind_at(2.0) == RegionVerdict::Kind::equivalent);
}

TEST_CASE("the fixed-u slice changes verdict only on the drawn lines")
{
    // u = 2, p = 0.5, v = 1, q = 0.5, N = 3: the drawn lines sit at s = 0,
    // s = (d p/u)(1/p - 1) = 0.25 and s = sigma_p = 1
    auto verdict_at = [&](double s) {
        RegionVerdict v = classify_parameters({1, s, 2.0, 0.5, 0.5, 1.0, INFINITY, 3});
        return int(v.kind) * 100 + int(v.tag);
    };
    std::vector<double> transitions;
    double prev = verdict_at(-0.5);
    for (double s = -0.5 + 0.01; s <= 2.0; s += 0.01) {
        double cur = verdict_at(s);
        if (cur != prev) transitions.push_back(s);
        prev = cur;
    }
    REQUIRE(transitions.size() == 3);
    CHECK(std::abs(transitions[0] - 0.0) <= 0.0101);
    CHECK(std::abs(transitions[1] - 0.25) <= 0.0101);
    CHECK(std::abs(transitions[2] - 1.0) <= 0.0101);
}
