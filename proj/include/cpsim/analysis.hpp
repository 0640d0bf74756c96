#pragma once

#include <optional>
#include <vector>

#include "cpsim/coeffs.hpp"
#include "cpsim/numerics.hpp"
#include "cpsim/profiles.hpp"
#include "cpsim/trajectory.hpp"

namespace cpsim::analysis {

// Beta function c h / w^2 computed from a density grid (c[i] at x = (i+1)dx,
// c(0) = 0). w and h accumulate right-to-left by trapezoid; beta is reported
// only where w >= w_floor.
struct BetaProfileReport {
    std::vector<double> x;
    std::vector<double> beta;
    double sup_beta = 0.0;
    double masked_from = 0.0;  // first x with w below the floor
};
BetaProfileReport beta_profile_from_grid(const std::vector<double>& c,
                                         double dx, double w_floor = 1e-12);

struct LogConcavityReport {
    bool pass = true;
    double min_slope = 0.0;  // min of u = dv/dx (>= 0 iff h log-concave)
    std::vector<std::size_t> violations;
};
LogConcavityReport log_concavity_from_v(const std::vector<double>& v,
                                        double dx, double tol = 1e-9);
LogConcavityReport log_concavity_from_c(const std::vector<double>& c,
                                        double dx, double tol = 1e-9);

// Beta of the Gaussian-tail variable by adaptive quadrature:
// beta_L(z) = int x e^{-x-d x^2/2} / (int e^{-x-d x^2/2})^2,
// d = 1/(L (1+z/L)^2). Independent of the closed forms in profiles.
double gaussian_beta(double length_scale, double z);

// First time Lambda reaches 2 Lambda(0), by linear interpolation between
// trajectory rows; absent when not reached.
std::optional<double> doubling_time(const Trajectory& t);

// Evolve Gaussian(L) data to its doubling time by exact affine transport,
// refit the (still Gaussian) rescaled density, and return the new length
// scale A(L).
struct GaussianRecursion {
    double a_of_l = 0.0;     // refitted length scale
    double delta = 0.0;      // A(L) - L
    double t_double = 0.0;
    double refit_residual = 0.0;  // max log-density deviation from quadratic
    double mu = 0.0;              // affine shift F(0, T_double)
};
GaussianRecursion gaussian_l_recursion(double length_scale);

// Least-squares fit of 1 - dLambda/dt against C / log t on geometric samples.
struct RateFit {
    double t_lo = 0.0, t_hi = 0.0;
    double c = 0.0;
    bool within_band = false;  // every sample inside [C/3, 3C] after scaling
    bool skipped = false;
    std::string reason;
    std::vector<double> sample_t, sample_y;  // y = 1 - dLambda/dt
};
RateFit rate_fit_log(const Trajectory& traj, double t_lo, double t_hi,
                     std::size_t n_samples = 16);

// Semiclassical propagation of q (h = e^{-q}) by the quadratic-cost
// minimization; returns the propagated value and the beta function at x.
struct HopfLaxResult {
    double q = 0.0;
    double beta = 0.0;
    double y_min = 0.0;
};
HopfLaxResult hopf_lax_propagate(const num::Hermite& q0, const Coeffs& coeffs,
                                 double epsilon, double x);

// Builds the Hermite grid for a convex q0 sampled on [y_lo, y_hi]; rejects
// non-convex data.
num::Hermite make_convex_q0(const std::vector<double>& y,
                            const std::vector<double>& q);

// Diffusive-vs-transport convergence study at fixed T over decreasing eps.
struct StudyRow {
    double epsilon = 0.0;
    double sup_lambda_err = 0.0;
    double sup_w_err = 0.0;
    double rate_gap = 0.0;
};
std::vector<StudyRow> eps_convergence_study(const Profile& profile,
                                            const std::vector<double>& eps_list,
                                            double T, double dx,
                                            double x_max);

}  // namespace cpsim::analysis
