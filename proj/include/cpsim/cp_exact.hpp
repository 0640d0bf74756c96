#pragma once

#include <optional>
#include <vector>

#include "cpsim/profiles.hpp"
#include "cpsim/trajectory.hpp"

namespace cpsim {

// State of the 2-d reduction of the transport model: v is the foot of the
// x = 0 characteristic, u = 1/m1 is enforced each step from the conservation
// law u = h0(v), and Lambda = 1/w0(v).
struct CPState {
    double t = 0.0;
    double u = 1.0;
    double v = 0.0;
    double lambda = 1.0;
};

struct CPRun {
    Trajectory trajectory;  // t,u,v,lambda,dlambda_dt,conservation_residual
    std::vector<CPState> states;
    std::optional<double> blow_up_time;  // finite-support data: Lambda -> inf
    double max_step_error = 0.0;         // step-halving monitor, worst case
};

// Integrates dv/dt = h0(v) by classical RK4. Fixed step dt up to t = 1, then
// the step grows in proportion to t (log-uniform), so long horizons stay
// cheap; a step-halving error monitor records the worst per-step deviation.
// output_times, when given, become the emission grid (always includes t=0).
CPRun evolve_cp(const Profile& profile, double t_end, double dt,
                const std::vector<double>& output_times = {});

// w(x,t) by characteristic pushforward: w0(u x + v).
double pushforward_w(const Profile& profile, const CPState& state, double x);

// dLambda/dt = beta_{X0}(v(t)).
double coarsening_rate_cp(const Profile& profile, const CPState& state);

}  // namespace cpsim
