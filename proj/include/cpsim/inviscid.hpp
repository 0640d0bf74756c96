#pragma once

#include <vector>

#include "cpsim/coeffs.hpp"
#include "cpsim/profiles.hpp"
#include "cpsim/trajectory.hpp"

namespace cpsim {

// State of the inviscid model solved by characteristics. z is the foot of
// the x = 0 characteristic: the root of
//   z + eps (sigma2/m1^2) v0(z) = (x + m2)/m1   at x = 0,
// and the mean constraint gives Lambda = m1 / v0(z).
struct InviscidState {
    double t = 0.0;
    Coeffs coeffs;
    double z = 0.0;
    double lambda = 1.0;
    double epsilon = 0.0;
};

struct InviscidRun {
    Trajectory trajectory;  // t,z,m1,m2,sigma2,lambda,dlambda_dt,eps_v0
    std::vector<InviscidState> states;
};

// Foot of the characteristic through (x, t); unique by monotonicity of the
// left side in z. Residual tolerance 1e-12 (1 + |F_A(x,t)|).
double solve_z(const Profile& profile, const Coeffs& coeffs, double epsilon,
               double x);

// v_eps(x,t) = v0(solve_z(x)) / m1.
double v_at(const Profile& profile, const InviscidState& state, double x);

// dLambda/dt = 1 - [1 - eps v(0,t)] v_x(0,t) / v(0,t)^2 with v_x(0,t)
// evaluated through the characteristic chain rule.
double coarsening_rate_inviscid(const Profile& profile,
                                const InviscidState& state);

// RK4 on (m1, m2, sigma2); each stage solves the scalar z-equation. Fixed
// step dt up to t = 1, then steps grow in proportion to t.
InviscidRun evolve_inviscid(const Profile& profile, double epsilon,
                            double t_end, double dt,
                            const std::vector<double>& output_times = {});

struct FixedPointResult {
    std::vector<double> times;
    std::vector<double> lambda;       // 1 / V at the fixed point
    double contraction_factor = 0.0;  // worst observed successive-ratio
    int iterations = 0;
};

// Iterates B: V -> v_eps(0,.)|_{A=V} on [0,T] to its fixed point
// (contraction for T <= delta1 / v0(0)).
FixedPointResult fixed_point_bootstrap(const Profile& profile, double epsilon,
                                       double T, double delta0 = 0.1,
                                       double delta1 = 0.1,
                                       double grid_dt = 1e-4,
                                       double tol = 1e-12, int max_iter = 200);

}  // namespace cpsim
