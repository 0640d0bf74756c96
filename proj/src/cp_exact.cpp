#include "cpsim/cp_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cpsim/errors.hpp"

namespace cpsim {

namespace {

struct Pair {
    double v;
    double log_m1;
};

// RHS of the closed system: dv/dt = h0(v), d(log m1)/dt = w0(v) = 1/Lambda.
Pair rhs(const Profile& p, const Pair& s) {
    return {p.h(s.v), p.w(s.v)};
}

Pair rk4_step(const Profile& p, const Pair& s, double h) {
    Pair k1 = rhs(p, s);
    Pair k2 = rhs(p, {s.v + 0.5 * h * k1.v, s.log_m1 + 0.5 * h * k1.log_m1});
    Pair k3 = rhs(p, {s.v + 0.5 * h * k2.v, s.log_m1 + 0.5 * h * k2.log_m1});
    Pair k4 = rhs(p, {s.v + h * k3.v, s.log_m1 + h * k3.log_m1});
    return {s.v + h / 6.0 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v),
            s.log_m1 +
                h / 6.0 * (k1.log_m1 + 2 * k2.log_m1 + 2 * k3.log_m1 +
                           k4.log_m1)};
}

}  // namespace

CPRun evolve_cp(const Profile& profile, double t_end, double dt,
                const std::vector<double>& output_times) {
    if (!(t_end > 0.0) || !(dt > 0.0))
        throw validation_error("evolve_cp: t_end and dt must be positive");
    Profile p = profile.normalized();

    std::vector<double> emit = output_times;
    if (emit.empty()) {
        emit.push_back(0.0);
        for (double t = dt; t < 1.0 && t < t_end; t += std::max(dt, 0.01))
            emit.push_back(t);
        for (double t = std::min(1.0, t_end); t < t_end; t *= 1.05)
            emit.push_back(t);
        emit.push_back(t_end);
    } else {
        std::sort(emit.begin(), emit.end());
        if (emit.front() > 0.0) emit.insert(emit.begin(), 0.0);
    }

    CPRun run;
    run.trajectory.columns = {"t",          "u", "v", "lambda",
                              "dlambda_dt", "conservation_residual"};

    Pair s{0.0, 0.0};
    double t = 0.0;
    auto emit_state = [&](double tt, const Pair& ss) {
        double u = p.h(ss.v);
        double w0 = p.w(ss.v);
        CPState st{tt, u, ss.v, w0 > 0.0 ? 1.0 / w0 : std::numeric_limits<double>::infinity()};
        double residual = std::abs(p.h(ss.v) * std::exp(ss.log_m1) - 1.0);
        run.states.push_back(st);
        run.trajectory.rows.push_back(
            {tt, st.u, st.v, st.lambda, coarsening_rate_cp(p, st), residual});
    };

    emit_state(0.0, s);
    for (std::size_t k = 1; k < emit.size(); ++k) {
        double target = emit[k];
        while (t < target) {
            double h = (t < 1.0) ? dt : dt * t;
            h = std::min(h, target - t);
            Pair full = rk4_step(p, s, h);
            Pair half = rk4_step(p, rk4_step(p, s, 0.5 * h), 0.5 * h);
            run.max_step_error =
                std::max(run.max_step_error, std::abs(full.v - half.v));
            s = half;
            t += h;
            if (p.w(s.v) < 1e-14) {
                run.blow_up_time = t;
                emit_state(t, s);
                return run;
            }
        }
        emit_state(t, s);
    }
    return run;
}

double pushforward_w(const Profile& profile, const CPState& state, double x) {
    return profile.normalized().w(state.u * x + state.v);
}

double coarsening_rate_cp(const Profile& profile, const CPState& state) {
    return profile.normalized().beta(state.v);
}

}  // namespace cpsim
