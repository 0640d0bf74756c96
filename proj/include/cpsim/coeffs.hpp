#pragma once

namespace cpsim {

// Time-accumulated coefficients of the linear drift b(y,s) = A(s) y - 1:
//   m1 = exp(int_0^t A),  m2 = int_0^t exp(int_s^t A) ds,
//   sigma2 = int_0^t exp(2 int_s^t A) ds.
// They define the characteristic map F_A(x,t) = (x + m2)/m1 and the Gaussian
// transition density of the associated SDE.
struct Coeffs {
    double t = 0.0;
    double m1 = 1.0;
    double m2 = 0.0;
    double sigma2 = 0.0;
};

// One update step, exact when A is constant over the step.
Coeffs advance(const Coeffs& c, double a_now, double dt);

// Closed forms for constant A on [0, t]; the oracle for advance().
Coeffs const_a_closed_form(double a, double t);

double characteristic_map(const Coeffs& c, double x);

// Two-time quantities derived from accumulated one-time coefficients:
// m1(s,t) = m1(t)/m1(s), m2(s,t) = m2(t) - m2(s) m1(s,t),
// sigma2(s,t) = sigma2(t) - sigma2(s) m1(s,t)^2.
struct TwoTime {
    double m1 = 1.0;
    double m2 = 0.0;
    double sigma2 = 0.0;
};
TwoTime between(const Coeffs& at_s, const Coeffs& at_t);

}  // namespace cpsim
