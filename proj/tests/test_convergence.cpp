#include <doctest.h>

#include <cmath>

#include "fixiter/convergence.hpp"

using namespace fixiter;

namespace {

const double kDelta = std::pow(18.0, -1.0 / 3.0);

ControlSequences halves() { return ControlSequences::constant(0.5, 0.5, 0.5); }

} // namespace

TEST_CASE("stop rule validation") {
    StopRule bad;
    bad.max_iters = 0;
    CHECK_THROWS_AS(bad.validate(), config_error);
    bad = StopRule{};
    bad.abs_tol = -1.0;
    CHECK_THROWS_AS(bad.validate(), config_error);
}

TEST_CASE("hybrid scheme reaches 5e-10 accuracy by iteration six") {
    StopRule stop;
    stop.max_iters = 50;
    stop.target_tol = 5e-10;
    auto traj = iterate(SchemeId::PicardS, sahu_map(), 1000.0, halves(), stop);
    CHECK(traj.final_index() == 6);
    CHECK(traj.errors.back() <= 5e-10);
    for (std::size_t i = 1; i < traj.errors.size(); ++i)
        CHECK(traj.errors[i] < traj.errors[i - 1]);
}

TEST_CASE("decimal Mann run first prints the fixed point at row 47") {
    ContractionMap<Decimal> map{
        [](const Decimal& x) { return cbrt(Decimal(3) * x + Decimal(18)); },
        kDelta, Decimal(3)};
    StopRule stop;
    stop.max_iters = 100;
    stop.target_tol = 4.9e-10;  // below this the 9-decimal display shows 3.000000000
    auto traj = iterate(SchemeId::Mann, map, Decimal(1000), halves(), stop);
    CHECK(traj.final_index() == 47);
    CHECK(traj.iterates[46].to_fixed(9) == "3.000000001");
    CHECK(traj.iterates[47].to_fixed(9) == "3.000000000");
}

TEST_CASE("iterate counts map evaluations") {
    StopRule stop;
    stop.max_iters = 10;
    stop.abs_tol = 0.0;
    auto traj = iterate(SchemeId::Picard, sahu_map(), 1000.0, halves(), stop);
    CHECK(traj.final_index() == 10);
    CHECK(traj.map_eval_count == 10);
    auto traj2 = iterate(SchemeId::PicardS, sahu_map(), 1000.0, halves(), stop);
    CHECK(traj2.map_eval_count == 30);
}

TEST_CASE("PicardS requires the divergence flag") {
    auto stalled = ControlSequences::constant(0.5, 0.0, 0.5);
    CHECK_THROWS_AS((void)iterate(SchemeId::PicardS, sahu_map(), 10.0, stalled, StopRule{}),
                    config_error);
}

TEST_CASE("hybrid bound at n=0 matches a frozen oracle") {
    // 997 * delta^2 * (1 - 0.25 (1 - delta)) with delta = 18^(-1/3)
    double b = picard_s_error_bound(0, kDelta, halves(), 997.0);
    CHECK(b == doctest::Approx(122.71718763998348).epsilon(1e-14));
}

TEST_CASE("three-stage bound at n=0 is exactly 21/64 for delta one half") {
    double b = cr_error_bound(0, 0.5, halves(), 1.0);
    CHECK(b == doctest::Approx(21.0 / 64.0).epsilon(1e-15));
}

TEST_CASE("bounds dominate the observed errors along trajectories") {
    StopRule stop;
    stop.max_iters = 60;
    stop.abs_tol = 1e-13;
    auto ps = iterate(SchemeId::PicardS, sahu_map(), 1000.0, halves(), stop);
    for (std::size_t n = 0; n + 1 < ps.errors.size(); ++n)
        CHECK(ps.errors[n + 1] <= picard_s_error_bound(n, kDelta, halves(), ps.errors[0]));
    auto cr = iterate(SchemeId::CR, sahu_map(), 1000.0, halves(), stop);
    for (std::size_t n = 0; n + 1 < cr.errors.size(); ++n)
        CHECK(cr.errors[n + 1] <= cr_error_bound(n, kDelta, halves(), cr.errors[0]));
}

TEST_CASE("product bound never exceeds its exponential relaxation") {
    for (std::size_t n = 0; n < 40; ++n) {
        double prod = picard_s_error_bound(n, kDelta, halves(), 1.0);
        double expo = std::pow(kDelta, 2.0 * (n + 1.0)) *
                      std::exp(-(1.0 - kDelta) * 0.25 * (n + 1.0));
        CHECK(prod <= expo * (1.0 + 1e-12));
    }
}

TEST_CASE("theta ratio decays geometrically and matches the brute force") {
    double prev = 1.0;
    std::size_t below = 1000;
    for (std::size_t n = 0; n < 60; ++n) {
        double theta = theta_ratio(n, kDelta, 0.5);
        CHECK(theta < prev);
        prev = theta;
        if (below == 1000 && theta < 1e-6) below = n;
        // independent product form of the two bound sequences
        double a = std::pow(kDelta, 2.0 * (n + 1.0)) *
                   std::pow(1.0 - 0.25 * (1.0 - kDelta), n + 1.0);
        double b = std::pow(kDelta, n + 1.0) * std::pow(1.0 - 0.5 * (1.0 - kDelta), n + 1.0) *
                   std::pow(1.0 - 0.25 * (1.0 - kDelta), n + 1.0);
        CHECK(theta == doctest::Approx(a / b).epsilon(1e-12));
    }
    CHECK(below <= 55);
    CHECK_THROWS_AS((void)theta_ratio(1, 1.5, 0.5), domain_error);
    CHECK_THROWS_AS((void)theta_ratio(1, 0.5, 0.0), domain_error);
}

TEST_CASE("rate comparison classifies the obvious cases") {
    StopRule stop;
    stop.max_iters = 12;
    stop.abs_tol = 0.0;
    auto fast = iterate(SchemeId::PicardS, sahu_map(), 1000.0, halves(), stop);
    auto slow = iterate(SchemeId::Mann, sahu_map(), 1000.0, halves(), stop);
    auto v = compare_rates(fast, slow, 3.0, 8);
    CHECK(v.classification == RateClass::FasterA);
    auto w = compare_rates(slow, fast, 3.0, 8);
    CHECK(w.classification == RateClass::FasterB);
    auto same = compare_rates(slow, slow, 3.0, 8);
    CHECK(same.classification == RateClass::SameRate);
    CHECK(same.limit_estimate == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)compare_rates(fast, slow, 3.0, 0), config_error);
    CHECK_THROWS_AS((void)compare_rates(fast, slow, 3.0, 1000), config_error);
}

TEST_CASE("rate comparison handles errors that reach exactly zero") {
    Trajectory<double> a, b;
    a.iterates = {1.0, 0.5, 3.0, 3.0};  // hits the fixed point
    b.iterates = {1.0, 0.5, 0.25, 0.125};
    auto v = compare_rates(a, b, 3.0, 2);
    CHECK(v.classification == RateClass::FasterA);
    CHECK(v.limit_estimate <= 0.1);
}
