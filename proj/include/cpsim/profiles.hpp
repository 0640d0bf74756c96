#pragma once

#include <limits>
#include <string>
#include <vector>

#include "cpsim/numerics.hpp"

namespace cpsim {

enum class ProfileKind { SelfSimilar, Gaussian, Tabulated };

// Pointwise view of a profile: survival w(x) = P(X > x), integrated survival
// h(x) = int_x^inf w, v = w/h = 1/E[X - x | X > x], and the beta function
// beta = c h / w^2 = 1 + d/dx (h/w).
struct ProfileEval {
    double w = 0.0;
    double h = 0.0;
    double v = 0.0;
    double beta = 0.0;
    bool out_of_support = false;
};

struct ValidationReport {
    bool v_increasing = false;        // v0 nondecreasing, v0(0) > 0
    bool growth_bound = false;        // v0(x2)-v0(x1) <= int v0^2 on the grid
    bool epsilon_below_mean = false;  // eps < mean
    bool contraction_margin = false;  // (1+delta0) v0(0) < 1/eps
    bool pole_extrapolation = false;  // finite-support tail extended by pole form
    std::vector<std::size_t> offending;
    bool pass() const {
        return v_increasing && growth_bound && epsilon_below_mean &&
               contraction_margin;
    }
    std::string summary() const;
};

// Immutable initial-data profile. Construction normalizes nothing; call
// normalized() to rescale to mean 1 (solvers do this on ingestion).
class Profile {
  public:
    // Survival P(X>x) = [1-(1-beta) x]^{beta/(1-beta)} (exp(-x) at beta=1).
    static Profile self_similar(double beta);
    // Density K(L) exp[-a(L) x - (a(L) x)^2 / 2L] with unit mass and mean.
    static Profile gaussian(double length_scale);
    // v0 given on a strictly increasing grid starting at 0; monotone cubic
    // interpolation (linear if use_linear), pole/slope extrapolation past the
    // last node depending on whether x_inf is finite.
    static Profile tabulated(std::vector<double> x_nodes,
                             std::vector<double> v_values,
                             double x_inf = std::numeric_limits<double>::infinity(),
                             bool use_linear = false);

    ProfileKind kind() const { return kind_; }
    double mean() const;
    double support_end() const;  // ||X||_inf (possibly infinity)
    double scale() const { return scale_; }

    ProfileEval evaluate(double x) const;
    double w(double x) const;
    double h(double x) const;
    double v(double x) const;
    double v_prime(double x) const;  // interpolant/closed-form derivative
    double density(double x) const;
    double beta(double x) const;

    // Profile of lambda * X; used to exercise affine invariance.
    Profile scaled_by(double lambda) const;
    // Rescaled to mean 1; the factor divided out accumulates in scale().
    Profile normalized() const;

    ValidationReport validate_inviscid_data(double epsilon,
                                            double delta0 = 0.1) const;

    // Parameters (valid for the matching kind).
    double param_beta() const { return beta_; }
    double param_length() const { return length_; }
    double param_a() const { return a_; }
    double param_k() const { return k_; }

  private:
    Profile() = default;
    double zeta(double xb) const;  // Gaussian standardized coordinate
    double v_base(double xb) const;
    double v_prime_base(double xb) const;
    double w_base(double xb) const;
    double h_base(double xb) const;
    double density_base(double xb) const;
    double beta_base(double xb) const;
    double lerp_v(double xb) const;
    double lerp_v_slope(double xb) const;
    double lerp_v_cum(double xb) const;

    ProfileKind kind_ = ProfileKind::SelfSimilar;
    double stretch_ = 1.0;  // X = stretch * X_base
    double scale_ = 1.0;    // normalization factor divided out so far

    // self-similar
    double beta_ = 1.0;
    // gaussian
    double length_ = 0.0, a_ = 1.0, k_ = 1.0;
    // tabulated
    num::Pchip interp_;
    std::vector<double> nodes_, values_;
    bool linear_ = false;
    double x_inf_ = std::numeric_limits<double>::infinity();
    double tail_slope_ = 0.0;
    double tail_cum_ = 0.0;  // int_0^{last node} v
};

}  // namespace cpsim
