#pragma once

#include <functional>
#include <vector>

#include "cpsim/coeffs.hpp"
#include "cpsim/profiles.hpp"
#include "cpsim/trajectory.hpp"

namespace cpsim {

// Explicit finite-difference state for the diffusive model in c-form.
// c[i] lives at x = (i+1) dx; the Dirichlet value c(0) = 0 is implicit.
// Integrals use the grid sum (rectangle rule), which the scheme conserves.
struct DiffusiveState {
    double t = 0.0;
    double dx = 0.0;
    double epsilon = 0.0;
    std::vector<double> c;
    std::size_t active = 0;  // cells beyond are exactly zero
    double lambda = 1.0;
    double mass_x = 1.0;  // sum x c dx  (diagnostic, conserved)
    double mass_0 = 1.0;  // sum c dx
    double min_c = 0.0;
    bool predictor_corrector = false;

    double x_max() const { return dx * double(c.size()); }
    // Stability bound 0.4 min(dx^2/eps, dx / max|x/Lambda - 1|).
    double cfl_dt() const;
};

// Grid sampling of the profile density, rescaled so mass_x = 1 exactly.
DiffusiveState init_grid(const Profile& profile, double epsilon, double dx,
                         double x_max);

// Point datum c(dx, 0) = 1/dx^2: initial data of the explicitly solvable
// eps = 2 dx discretization.
DiffusiveState delta_datum(double dx, double epsilon, double x_max);

// One explicit step; dt must satisfy the CFL bound.
void step_diffusive(DiffusiveState& s, double dt);

// (eps/2) c_x(0) / (integral c)^2 with the one-sided second-order stencil
// (-3 c0 + 4 c1 - c2) / (2 dx), c0 = 0.
double coarsening_rate_diffusive(const DiffusiveState& s);

// Same rate with the forward difference c1/dx. This is the exact discrete
// identity dLambda/dt of the scheme (the grid sums obey it identically), and
// the right reading when the boundary layer is only a few cells wide.
double coarsening_rate_discrete(const DiffusiveState& s);

struct SmerekaSolution {
    double u = 1.0;
    double v = 0.0;
    double lambda = 0.0;
    // c(n dx) for n = 1.., length chosen by caller
    std::vector<double> c;
};

// Closed-form solution of the eps = 2 dx scheme from the point datum:
// u = 1/(1 + t/dx), v = dx log(1 + t/dx), Lambda = dx + t,
// c(n dx) = u (1-u)^{n-1} exp(-v/dx) / dx^2.
SmerekaSolution smereka_explicit(double dx, double t, std::size_t n_cells);

struct DiffusiveRunResult {
    Trajectory trajectory;  // t,lambda,dlambda_dt,mass_x,min_c
    DiffusiveState state;   // final state
};

// Repeated stepping to t_end with grid growth (capacity doubles when tail
// mass exceeds 1e-10) and far-tail trimming that keeps the per-event Lambda
// perturbation below 1e-12. on_output runs at every output time.
DiffusiveRunResult run_to(
    DiffusiveState state, double t_end, std::vector<double> output_times = {},
    const std::function<void(const DiffusiveState&)>& on_output = nullptr);

// v-form state for the viscous family with viscosity nu in (0, 1].
// v[j] lives at x = j dx (the constraint node x = 0 included).
struct ViscousState {
    double t = 0.0;
    double dx = 0.0;
    double epsilon = 0.0;
    double nu = 1.0;
    std::vector<double> v;
    double lambda = 1.0;  // 1 / v(0)
    std::vector<double> gamma;  // v^2 - v_x, recomputed per step
    bool lambda_monotone_guaranteed = true;  // v(0,0) <= 1/(eps(1-nu))
    bool compact_support = false;
    double initial_tail_slope = 0.0;
    Coeffs coeffs;  // accumulated with A = 1/Lambda, for the far-field slope

    double cfl_dt() const;
};

ViscousState init_viscous(const Profile& profile, double epsilon, double nu,
                          double dx, double x_max);

// One explicit step of the v-form equation with the boundary condition
// v_x(0) = v(0)^2 enforced by a ghost node, then Lambda = 1/v(0) re-imposed.
void step_viscous_v(ViscousState& s, double dt);

struct ViscousRunResult {
    Trajectory trajectory;  // t,lambda,dlambda_dt,min_gamma
};

ViscousRunResult run_viscous_to(ViscousState& state, double t_end,
                                std::vector<double> output_times = {});

}  // namespace cpsim
