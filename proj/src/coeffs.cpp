#include "cpsim/coeffs.hpp"

#include <cmath>

#include "cpsim/errors.hpp"

namespace cpsim {

namespace {

// (exp(a dt) - 1)/a with the a -> 0 limit handled.
double growth_integral(double a, double dt) {
    if (a == 0.0) return dt;
    return std::expm1(a * dt) / a;
}

}  // namespace

Coeffs advance(const Coeffs& c, double a_now, double dt) {
    if (dt < 0.0) throw validation_error("advance: dt must be positive");
    if (a_now < 0.0) throw validation_error("advance: A must be nonnegative");
    double g1 = std::exp(a_now * dt);
    double g2 = g1 * g1;
    Coeffs out;
    out.t = c.t + dt;
    out.m1 = c.m1 * g1;
    out.m2 = c.m2 * g1 + growth_integral(a_now, dt);
    out.sigma2 = c.sigma2 * g2 + growth_integral(2.0 * a_now, dt);
    return out;
}

Coeffs const_a_closed_form(double a, double t) {
    Coeffs out;
    out.t = t;
    out.m1 = std::exp(a * t);
    out.m2 = growth_integral(a, t);
    out.sigma2 = growth_integral(2.0 * a, t);
    return out;
}

double characteristic_map(const Coeffs& c, double x) {
    return (x + c.m2) / c.m1;
}

TwoTime between(const Coeffs& at_s, const Coeffs& at_t) {
    TwoTime out;
    out.m1 = at_t.m1 / at_s.m1;
    out.m2 = at_t.m2 - at_s.m2 * out.m1;
    out.sigma2 = at_t.sigma2 - at_s.sigma2 * out.m1 * out.m1;
    return out;
}

}  // namespace cpsim
