#include <cmath>

#include <doctest.h>

#include "cpsim/numerics.hpp"

using namespace cpsim;

TEST_CASE("erfcx matches exp(z^2) erfc(z) at moderate z and is smooth at the "
          "switch") {
    for (double z : {0.0, 0.5, 1.0, 3.0, 10.0, 24.9}) {
        double direct = std::exp(z * z) * std::erfc(z);
        CHECK(num::erfcx(z) == doctest::Approx(direct).epsilon(1e-13));
    }
    // asymptotic branch continuity
    CHECK(num::erfcx(25.0 + 1e-9) ==
          doctest::Approx(num::erfcx(25.0 - 1e-9)).epsilon(1e-10));
    // large-z leading behavior 1/(z sqrt(pi))
    double z = 1e6;
    CHECK(num::erfcx(z) * z * std::sqrt(M_PI) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("adaptive quadrature on known integrals") {
    CHECK(num::integrate([](double x) { return std::exp(-x); }, 0.0, 40.0) ==
          doctest::Approx(1.0).epsilon(1e-11));
    CHECK(num::integrate([](double x) { return x * x; }, 0.0, 3.0) ==
          doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("monotone solve finds bracketed roots") {
    auto f = [](double x) { return x * x * x - 2.0; };
    auto df = [](double x) { return 3.0 * x * x; };
    double r = num::solve_monotone(f, df, 0.0, 2.0, 1e-14);
    CHECK(r == doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));
}

TEST_CASE("golden-section minimizes a convex function") {
    auto f = [](double x) { return (x - 0.7) * (x - 0.7) + 1.0; };
    CHECK(num::golden_min(f, -3.0, 4.0, 1e-12) ==
          doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("pchip preserves monotone data and integrates exactly per segment") {
    std::vector<double> x{0.0, 1.0, 2.0, 3.5, 5.0};
    std::vector<double> y{1.0, 1.0, 2.0, 6.0, 7.0};
    num::Pchip p(x, y);
    // monotonicity between nodes
    double prev = p(0.0);
    for (double xx = 0.0; xx <= 5.0; xx += 0.01) {
        double cur = p(xx);
        CHECK(cur >= prev - 1e-12);
        prev = cur;
    }
    // antiderivative consistency with quadrature
    double q = num::integrate([&](double t) { return p(t); }, 0.0, 5.0, 1e-12);
    CHECK(p.antiderivative(5.0) == doctest::Approx(q).epsilon(1e-9));
}

TEST_CASE("hermite interpolant reproduces quadratics exactly") {
    std::vector<double> x, y;
    for (int i = 0; i <= 20; ++i) {
        double xi = -1.0 + 0.35 * i;
        x.push_back(xi);
        y.push_back(2.0 + 0.5 * xi + 3.0 * xi * xi);
    }
    num::Hermite h(x, y);
    for (double xx : {-0.9, 0.123, 1.7, 4.3, 5.9}) {
        CHECK(h(xx) == doctest::Approx(2.0 + 0.5 * xx + 3.0 * xx * xx)
                           .epsilon(1e-12));
        CHECK(h.derivative(xx) ==
              doctest::Approx(0.5 + 6.0 * xx).epsilon(1e-11));
        CHECK(h.second_derivative(xx) == doctest::Approx(6.0).epsilon(1e-10));
    }
}

TEST_CASE("quadratic fit recovers coefficients") {
    std::vector<double> x, y;
    for (int i = 0; i < 40; ++i) {
        double xi = 0.1 * i;
        x.push_back(xi);
        y.push_back(-1.0 + 2.0 * xi - 0.25 * xi * xi);
    }
    double resid = 1.0;
    auto c = num::fit_quadratic(x, y, &resid);
    CHECK(c[0] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(c[1] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(c[2] == doctest::Approx(-0.25).epsilon(1e-10));
    CHECK(resid < 1e-10);
}
