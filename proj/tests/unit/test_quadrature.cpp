#include <doctest.h>

#include "wolffkit/errors.hpp"
#include "wolffkit/quadrature.hpp"

#include <cmath>
#include <vector>

using namespace wolffkit;

TEST_CASE("gauss_kronrod15 integrates polynomials up to degree 22 exactly") {
    auto e = quad::gauss_kronrod15([](double x) { return std::pow(x, 21) + 3 * x * x; }, 0.0, 1.0);
    CHECK(e.value == doctest::Approx(1.0 / 22 + 1.0).epsilon(1e-14));
}

TEST_CASE("composite and adaptive agree on a smooth integrand") {
    auto f = [](double x) { return std::exp(-x) * std::sin(3 * x); };
    const double exact = (3.0 - std::exp(-2.0) * (std::sin(6.0) + 3 * std::cos(6.0))) / 10.0;
    CHECK(quad::composite_gk15(f, 0, 2, 8).value == doctest::Approx(exact).epsilon(1e-13));
    auto a = quad::adaptive(f, 0, 2, 1e-13, 1e-13);
    CHECK(a.converged);
    CHECK(a.value == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("adaptive handles an integrable endpoint singularity") {
    auto a = quad::adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10, 1e-10, 400);
    CHECK(a.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("adaptive_pieces splits at jumps") {
    auto step = [](double x) { return x < 0.3 ? 1.0 : 2.0; };
    const std::vector<double> cuts = {0.0, 0.3, 1.0};
    auto a = quad::adaptive_pieces(step, cuts, 1e-14, 1e-14);
    CHECK(a.value == doctest::Approx(0.3 + 1.4).epsilon(1e-14));
}

TEST_CASE("dyadic series: geometric decay converges to the closed form") {
    // sum_{k>=1} 2^{-k} = 1
    auto r = quad::sum_dyadic_panels([](int k) { return quad::PanelValue{std::ldexp(1.0, -k), 0.0, false}; });
    CHECK(r.status == Status::converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("dyadic series: geometric growth diverges") {
    auto r = quad::sum_dyadic_panels([](int k) { return quad::PanelValue{std::ldexp(1.0, k), 0.0, false}; });
    CHECK(r.status == Status::diverges);
    CHECK(std::isinf(r.value));
}

TEST_CASE("dyadic series: constant contributions diverge at the panel cap") {
    auto r = quad::sum_dyadic_panels([](int) { return quad::PanelValue{0.5, 0.0, false}; });
    CHECK(r.status == Status::diverges);
}

TEST_CASE("dyadic series: overflow after a non-decreasing run means divergence") {
    auto r = quad::sum_dyadic_panels([](int k) {
        if (k > 100) throw OverflowError("range");
        return quad::PanelValue{1.0, 0.0, false};
    });
    CHECK(r.status == Status::diverges);
}

TEST_CASE("dyadic series: rest_vanishes stops early") {
    auto r = quad::sum_dyadic_panels([](int k) { return quad::PanelValue{k < 3 ? 1.0 : 0.0, 0.0, k >= 3}; });
    CHECK(r.status == Status::converged);
    CHECK(r.value == 2.0);
    CHECK(r.panels == 3);
}

TEST_CASE("tail classifier separates power, borderline and log-summable tails") {
    CHECK(quad::classify_dyadic_tail([](int k) { return std::ldexp(1.0, -k / 2); }).verdict ==
          quad::TailVerdict::converges);
    CHECK(quad::classify_dyadic_tail([](int k) { return std::pow(2.0, 0.5 * k); }).verdict ==
          quad::TailVerdict::diverges);
    CHECK(quad::classify_dyadic_tail([](int) { return 1.0; }).verdict == quad::TailVerdict::diverges);
    // harmonic tail sits exactly on the 1/k boundary
    CHECK(quad::classify_dyadic_tail([](int k) { return 1.0 / (k + 1.0); }).verdict ==
          quad::TailVerdict::undecided);
    CHECK(quad::classify_dyadic_tail([](int k) { return std::pow(k + 1.0, -0.5); }).verdict ==
          quad::TailVerdict::diverges);
    CHECK(quad::classify_dyadic_tail([](int k) { return std::pow(k + 1.0, -2.0); }).verdict ==
          quad::TailVerdict::converges);
    CHECK(quad::classify_dyadic_tail([](int) { return 0.0; }).verdict == quad::TailVerdict::converges);
}
