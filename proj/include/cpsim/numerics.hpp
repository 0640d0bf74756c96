#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace cpsim::num {

// Scaled complementary error function exp(z^2) erfc(z), z >= 0.
double erfcx(double z);

// Standard normal density and upper tail P(Z > z).
double normal_pdf(double z);
double normal_tail(double z);

// Root of f on [lo, hi] with f(lo) <= 0 <= f(hi). Newton steps from the
// caller-supplied derivative, falling back to bisection whenever an iterate
// leaves the bracket. abs_tol applies to the residual |f|.
double solve_monotone(const std::function<double(double)>& f,
                      const std::function<double(double)>& df, double lo,
                      double hi, double abs_tol, int max_iter = 200);

// Bisection-only variant for functions without a usable derivative.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol, int max_iter = 400);

// Adaptive Simpson quadrature of f on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, int max_depth = 40);

// Golden-section minimizer of a unimodal f on [a, b]; returns argmin with the
// bracket narrowed to x_tol.
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double x_tol, int max_iter = 200);

// Monotone piecewise-cubic (Fritsch-Carlson) interpolant. Preserves
// monotonicity of the data; exposes value, derivative and antiderivative.
class Pchip {
  public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;
    // Integral of the interpolant from x.front() to x.
    double antiderivative(double x) const;

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }
    const std::vector<double>& nodes() const { return x_; }
    const std::vector<double>& values() const { return y_; }
    const std::vector<double>& slopes() const { return d_; }

  private:
    std::size_t segment(double x) const;
    std::vector<double> x_, y_, d_;
    std::vector<double> cum_;  // antiderivative at nodes
};

// C1 cubic Hermite interpolant with three-point slopes (reproduces
// quadratics exactly; no monotonicity filtering). Used where derivative
// fidelity matters more than shape preservation.
class Hermite {
  public:
    Hermite() = default;
    Hermite(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

  private:
    std::size_t segment(double x) const;
    std::vector<double> x_, y_, d_;
};

// Least-squares fit y = c * u (one parameter, no intercept).
double fit_proportional(const std::vector<double>& u,
                        const std::vector<double>& y);

// Least-squares quadratic fit y = c0 + c1 x + c2 x^2; returns {c0, c1, c2}
// and writes the max absolute residual if requested.
std::vector<double> fit_quadratic(const std::vector<double>& x,
                                  const std::vector<double>& y,
                                  double* max_residual = nullptr);

}  // namespace cpsim::num
