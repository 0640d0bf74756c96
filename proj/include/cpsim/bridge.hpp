#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cpsim/coeffs.hpp"

namespace cpsim {

// Drift coefficient A(s) >= 0 of b(y,s) = A(s) y - 1: either a constant or
// 1/Lambda(s) with Lambda linearly interpolated from a solver trajectory.
class DriftSpec {
  public:
    static DriftSpec constant(double a);
    static DriftSpec lambda_path(std::vector<double> t,
                                 std::vector<double> lambda);
    double a_at(double s) const;

  private:
    bool constant_ = true;
    double a_ = 0.0;
    std::vector<double> t_, lambda_;
};

// Endpoint-conditioned diffusion: dY = (A(s) Y - 1) ds + sqrt(eps) dB on
// [0,T], conditioned on Y(0) = y, Y(T) = x.
struct BridgeSpec {
    DriftSpec drift = DriftSpec::constant(0.0);
    double T = 1.0;
    double epsilon = 1.0;
    double y = 1.0;
    double x = 1.0;
    std::size_t n_steps = 1000;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 1;
    bool crossing_correction = true;
    std::vector<double> monitor_fractions = {0.1, 0.3, 0.5, 0.7, 0.9};
    int threads = 1;
};

struct PathBatch {
    std::size_t n_paths = 0;
    double p_hat = 0.0;  // survival fraction, crossing-corrected
    double se = 0.0;
    std::vector<double> monitor_times;
    std::vector<double> sample_mean, sample_var;
    std::vector<double> expected_mean, expected_var;  // minimizer / covariance
    bool step_warning = false;  // n_steps below the requested floor
};

enum class BridgeMethod { markov_drift, kernel_factor };

// Full-space Gaussian transition density of Y(T) | Y(0) = y.
double green_full(const Coeffs& at_T, double epsilon, double x, double y);

// Action q = (x + m2 - m1 y)^2 / (2 sigma2); G = e^{-q/eps}/sqrt(2 pi eps s2).
double action_q(const Coeffs& at_T, double x, double y);

// Conditioned-process mean at s (the minimizing trajectory) and covariance.
double bridge_mean(const Coeffs& at_s, const Coeffs& at_T, double x, double y);
double bridge_cov(const Coeffs& at_s1, const Coeffs& at_s2,
                  const Coeffs& at_T);

PathBatch sample_bridge(const BridgeSpec& spec, BridgeMethod method);

// Survival probability P(inf Y > 0) of the conditioned process, which equals
// the Dirichlet/full Green's ratio. Returns (p_hat, se).
std::pair<double, double> survival_probability_mc(
    const BridgeSpec& spec, BridgeMethod method = BridgeMethod::kernel_factor);

// Limit value 1 - exp(-2 lambda [1 - m2/sigma2 + m1 y / sigma2]).
double prop51_rhs(const Coeffs& at_T, double lambda_factor, double y);

// Driftless (A = 0) half-line Green's function by the method of images.
double green_dirichlet_driftless(double x, double y, double epsilon, double T);

// P(drifted BM from lambda' eps exits [0, Lambda' eps] on the right):
// (1 - e^{-2 mu lambda'}) / (1 - e^{-2 mu Lambda'}).
double exit_prob_drifted_bm(double lambda_prime, double lambda_cap, double mu);

// Euler-Maruyama cross-check of the exit probability with two-sided
// crossing corrections.
std::pair<double, double> exit_prob_drifted_bm_mc(double lambda_prime,
                                                  double lambda_cap, double mu,
                                                  double epsilon,
                                                  std::size_t n_paths,
                                                  std::size_t n_steps,
                                                  std::uint64_t seed);

// Kolmogorov-Smirnov distance of a sample to the standard normal CDF.
double ks_statistic_standard_normal(std::vector<double> sample);

// Two-proportion z statistic for equal success probabilities.
double two_proportion_z(double p1, std::size_t n1, double p2, std::size_t n2);

}  // namespace cpsim
