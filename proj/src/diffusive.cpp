#include "cpsim/diffusive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cpsim/errors.hpp"

namespace cpsim {

namespace {

constexpr double kCfl = 0.4;
constexpr double kTailMassTrigger = 1e-10;  // grid growth threshold
constexpr double kTrimBudget = 1e-15;       // per-event trimmed x-mass
constexpr int kTrimStride = 256;

void recompute_sums(DiffusiveState& s) {
    double mx = 0.0, m0 = 0.0, mn = 0.0;
    for (std::size_t i = 0; i < s.active; ++i) {
        double x = (double(i) + 1.0) * s.dx;
        mx += x * s.c[i];
        m0 += s.c[i];
        mn = std::min(mn, s.c[i]);
    }
    s.mass_x = mx * s.dx;
    s.mass_0 = m0 * s.dx;
    s.min_c = mn;
    s.lambda = s.mass_x / s.mass_0;
}

}  // namespace

double DiffusiveState::cfl_dt() const {
    double x_act = (double(active)) * dx;
    double vmax = std::max(1.0, x_act / lambda - 1.0);
    return kCfl * std::min(dx * dx / epsilon, dx / vmax);
}

DiffusiveState init_grid(const Profile& profile, double epsilon, double dx,
                         double x_max) {
    if (!(dx > 0.0) || !(x_max > dx))
        throw validation_error("init_grid: need dx > 0 and x_max > dx");
    if (!(epsilon > 0.0))
        throw validation_error("init_grid: epsilon must be positive");
    Profile p = profile.normalized();
    // Mass beyond the grid: int_X^inf x c = X w(X) + h(X).
    double tail = x_max * p.w(x_max) + p.h(x_max);
    if (tail > 1e-10)
        throw validation_error(
            "init_grid: x_max too small, initial tail x-mass = " +
            std::to_string(tail));

    DiffusiveState s;
    s.dx = dx;
    s.epsilon = epsilon;
    std::size_t n = std::size_t(std::ceil(x_max / dx));
    s.c.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        s.c[i] = p.density((double(i) + 1.0) * dx);
    s.active = n;
    while (s.active > 1 && s.c[s.active - 1] == 0.0) --s.active;
    recompute_sums(s);
    double r = 1.0 / s.mass_x;
    for (auto& ci : s.c) ci *= r;
    recompute_sums(s);
    return s;
}

DiffusiveState delta_datum(double dx, double epsilon, double x_max) {
    if (!(dx > 0.0)) throw validation_error("delta_datum: dx must be positive");
    DiffusiveState s;
    s.dx = dx;
    s.epsilon = epsilon;
    std::size_t n = std::max<std::size_t>(16, std::size_t(std::ceil(x_max / dx)));
    s.c.assign(n, 0.0);
    s.c[0] = 1.0 / (dx * dx);
    s.active = 1;
    recompute_sums(s);
    return s;
}

namespace {

// One explicit Euler substep with the given Lambda; accumulates the new sums.
void euler_substep(const DiffusiveState& s, double dt, double lambda,
                   std::vector<double>& out, std::size_t n_upd, double& mx,
                   double& m0, double& mn) {
    const double dx = s.dx;
    const double inv_lam = 1.0 / lambda;
    const double adv = dt / dx;
    const double dif = 0.5 * dt * s.epsilon / (dx * dx);
    const double* c = s.c.data();
    double* cn = out.data();
    double j_prev = 0.0;  // flux at x = 0 vanishes (Dirichlet)
    double sx = 0.0, s0 = 0.0, smin = 0.0;
    const std::size_t na = s.active;
    for (std::size_t i = 0; i < n_upd; ++i) {
        double x = (double(i) + 1.0) * dx;
        double ci = i < na ? c[i] : 0.0;
        double cl = i == 0 ? 0.0 : c[i - 1];
        double cr = (i + 1 < na) ? c[i + 1] : 0.0;
        double j_here = (x * inv_lam - 1.0) * ci;
        double val = ci - adv * (j_here - j_prev) + dif * (cr - 2.0 * ci + cl);
        j_prev = j_here;
        cn[i] = val;
        sx += x * val;
        s0 += val;
        smin = std::min(smin, val);
    }
    mx = sx * dx;
    m0 = s0 * dx;
    mn = smin;
}

}  // namespace

void step_diffusive(DiffusiveState& s, double dt) {
    if (!(dt > 0.0)) throw validation_error("step_diffusive: dt must be positive");
    if (dt > s.cfl_dt() * (1.0 + 1e-12))
        throw validation_error("step_diffusive: dt violates the CFL bound");

    std::size_t n_upd = std::min(s.c.size(), s.active + 1);
    static thread_local std::vector<double> scratch;
    scratch.resize(s.c.size());

    double lambda = s.lambda;
    double mx, m0, mn;
    if (s.predictor_corrector) {
        // provisional half step to re-evaluate Lambda at t + dt/2
        euler_substep(s, 0.5 * dt, lambda, scratch, n_upd, mx, m0, mn);
        lambda = mx / m0;
    }
    euler_substep(s, dt, lambda, scratch, n_upd, mx, m0, mn);
    for (std::size_t i = 0; i < n_upd; ++i) s.c[i] = scratch[i];
    if (mn < -1e-12 * (1.0 + std::abs(s.c[0])))
        throw numeric_error("step_diffusive: negative cell, min c = " +
                            std::to_string(mn));
    s.active = n_upd;
    while (s.active > 1 && s.c[s.active - 1] == 0.0) --s.active;
    s.mass_x = mx;
    s.mass_0 = m0;
    s.min_c = mn;
    s.lambda = mx / m0;
    s.t += dt;
}

double coarsening_rate_diffusive(const DiffusiveState& s) {
    double c1 = s.active > 0 ? s.c[0] : 0.0;
    double c2 = s.active > 1 ? s.c[1] : 0.0;
    double cx0 = (4.0 * c1 - c2) / (2.0 * s.dx);
    return 0.5 * s.epsilon * cx0 / (s.mass_0 * s.mass_0);
}

double coarsening_rate_discrete(const DiffusiveState& s) {
    double c1 = s.active > 0 ? s.c[0] : 0.0;
    return 0.5 * s.epsilon * (c1 / s.dx) / (s.mass_0 * s.mass_0);
}

SmerekaSolution smereka_explicit(double dx, double t, std::size_t n_cells) {
    if (t < 0.0) throw validation_error("smereka_explicit: t must be >= 0");
    SmerekaSolution sol;
    sol.u = 1.0 / (1.0 + t / dx);
    sol.v = dx * std::log1p(t / dx);
    sol.lambda = dx + t;
    sol.c.resize(n_cells);
    double amp = sol.u * std::exp(-sol.v / dx) / (dx * dx);
    double q = 1.0 - sol.u;
    double g = 1.0;
    for (std::size_t n = 0; n < n_cells; ++n) {
        sol.c[n] = amp * g;
        g *= q;
    }
    return sol;
}

namespace {

void trim_tail(DiffusiveState& s) {
    double budget = kTrimBudget * s.mass_x;
    double acc = 0.0;
    std::size_t i = s.active;
    while (i > 1) {
        double x = double(i) * s.dx;
        double cell = x * s.c[i - 1] * s.dx;
        if (acc + cell > budget) break;
        acc += cell;
        --i;
    }
    if (i < s.active) {
        for (std::size_t j = i; j < s.active; ++j) s.c[j] = 0.0;
        s.active = i;
        recompute_sums(s);
    }
}

void maybe_grow(DiffusiveState& s) {
    if (s.active + 2 < s.c.size()) return;
    // Tail x-mass near the boundary decides growth (always true here since
    // the active front reached the allocation).
    double tail = 0.0;
    std::size_t from = s.c.size() > 16 ? s.c.size() - 16 : 0;
    for (std::size_t i = from; i < s.active; ++i)
        tail += (double(i) + 1.0) * s.dx * s.c[i] * s.dx;
    if (tail > kTailMassTrigger || s.active + 2 >= s.c.size())
        s.c.resize(s.c.size() * 2, 0.0);
}

}  // namespace

DiffusiveRunResult run_to(
    DiffusiveState state, double t_end, std::vector<double> output_times,
    const std::function<void(const DiffusiveState&)>& on_output) {
    if (!(t_end > state.t))
        throw validation_error("run_to: t_end must exceed current time");
    if (output_times.empty()) output_times.push_back(t_end);
    std::sort(output_times.begin(), output_times.end());

    DiffusiveRunResult out;
    out.trajectory.columns = {"t", "lambda", "dlambda_dt", "mass_x", "min_c"};
    auto emit = [&](const DiffusiveState& s) {
        out.trajectory.rows.push_back({s.t, s.lambda,
                                       coarsening_rate_diffusive(s), s.mass_x,
                                       s.min_c});
        if (on_output) on_output(s);
    };

    double lambda_prev = state.lambda;
    long step_count = 0;
    for (double target : output_times) {
        if (target > t_end) target = t_end;
        while (state.t < target * (1.0 - 1e-14)) {
            maybe_grow(state);
            double dt = std::min(state.cfl_dt(), target - state.t);
            step_diffusive(state, dt);
            if (state.lambda < lambda_prev - 1e-12)
                throw numeric_error("run_to: Lambda decreased at t = " +
                                    std::to_string(state.t));
            lambda_prev = state.lambda;
            if (++step_count % kTrimStride == 0) trim_tail(state);
        }
        emit(state);
        if (target >= t_end) break;
    }
    out.state = std::move(state);
    return out;
}

// ---- viscous v-form ---------------------------------------------------------

double ViscousState::cfl_dt() const {
    double vmax = 1.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        double x = double(j) * dx;
        vmax = std::max(vmax, std::abs(x / lambda - 1.0 + epsilon * v[j]));
    }
    double dt = kCfl * dx / vmax;
    if (nu > 0.0) dt = std::min(dt, kCfl * dx * dx / (nu * epsilon));
    return dt;
}

ViscousState init_viscous(const Profile& profile, double epsilon, double nu,
                          double dx, double x_max) {
    if (!(nu > 0.0) || nu > 1.0)
        throw validation_error("init_viscous: nu must lie in (0, 1]");
    if (!(dx > 0.0) || !(x_max > dx))
        throw validation_error("init_viscous: need dx > 0, x_max > dx");
    Profile p = profile.normalized();
    if (std::isfinite(p.support_end()) && x_max >= p.support_end())
        throw validation_error(
            "init_viscous: x_max must stay below the support end");
    ViscousState s;
    s.dx = dx;
    s.epsilon = epsilon;
    s.nu = nu;
    std::size_t n = std::size_t(std::ceil(x_max / dx)) + 1;
    s.v.resize(n);
    for (std::size_t j = 0; j < n; ++j) s.v[j] = p.v(double(j) * dx);
    s.lambda = 1.0 / s.v[0];
    s.compact_support = std::isfinite(p.support_end());
    s.initial_tail_slope = (s.v[n - 1] - s.v[n - 2]) / dx;
    s.lambda_monotone_guaranteed =
        nu >= 1.0 || s.v[0] <= 1.0 / (epsilon * (1.0 - nu));
    s.gamma.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double vl = j == 0 ? s.v[1] - 2.0 * dx * s.v[0] * s.v[0] : s.v[j - 1];
        double vr = j + 1 < n ? s.v[j + 1]
                              : s.v[j] + dx * s.initial_tail_slope;
        s.gamma[j] = s.v[j] * s.v[j] - (vr - vl) / (2.0 * dx);
    }
    return s;
}

void step_viscous_v(ViscousState& s, double dt) {
    if (dt > s.cfl_dt() * (1.0 + 1e-12))
        throw validation_error("step_viscous_v: dt violates the CFL bound");
    const std::size_t n = s.v.size();
    const double dx = s.dx;
    double far_slope = s.initial_tail_slope;
    if (s.compact_support && s.coeffs.sigma2 > 0.0)
        far_slope = std::min(s.initial_tail_slope,
                             1.0 / (s.epsilon * s.coeffs.sigma2));

    static thread_local std::vector<double> vn;
    vn.resize(n);
    const double inv_lam = 1.0 / s.lambda;
    const double dif = 0.5 * dt * s.nu * s.epsilon / (dx * dx);
    for (std::size_t j = 0; j < n; ++j) {
        double x = double(j) * dx;
        double vj = s.v[j];
        double vl = j == 0 ? s.v[1] - 2.0 * dx * s.v[0] * s.v[0] : s.v[j - 1];
        double vr = j + 1 < n ? s.v[j + 1] : s.v[n - 1] + dx * far_slope;
        double vel = x * inv_lam - 1.0 + s.epsilon * vj;
        double dvdx = vel >= 0.0 ? (vj - vl) / dx : (vr - vj) / dx;
        vn[j] = vj + dt * (-vel * dvdx - vj * inv_lam) +
                dif * (vr - 2.0 * vj + vl);
    }
    for (std::size_t j = 1; j < n; ++j)
        if (vn[j] < vn[j - 1] * (1.0 - 1e-10))
            throw numeric_error(
                "step_viscous_v: v lost monotonicity at cell " +
                std::to_string(j) + ", t = " + std::to_string(s.t));
    s.v = vn;
    s.t += dt;
    s.coeffs = advance(s.coeffs, inv_lam, dt);
    s.lambda = 1.0 / s.v[0];
    for (std::size_t j = 0; j < n; ++j) {
        double vl = j == 0 ? s.v[1] - 2.0 * dx * s.v[0] * s.v[0] : s.v[j - 1];
        double vr = j + 1 < n ? s.v[j + 1] : s.v[n - 1] + dx * far_slope;
        s.gamma[j] = s.v[j] * s.v[j] - (vr - vl) / (2.0 * dx);
    }
}

ViscousRunResult run_viscous_to(ViscousState& state, double t_end,
                                std::vector<double> output_times) {
    if (!(t_end > state.t))
        throw validation_error("run_viscous_to: t_end must exceed current time");
    if (output_times.empty()) output_times.push_back(t_end);
    std::sort(output_times.begin(), output_times.end());

    ViscousRunResult out;
    out.trajectory.columns = {"t", "lambda", "dlambda_dt", "min_gamma"};
    double t_prev = state.t, lam_prev = state.lambda;
    auto emit = [&](const ViscousState& s) {
        double rate = s.t > t_prev ? (s.lambda - lam_prev) / (s.t - t_prev)
                                   : 0.0;
        double mg = *std::min_element(s.gamma.begin(), s.gamma.end());
        out.trajectory.rows.push_back({s.t, s.lambda, rate, mg});
    };

    emit(state);
    for (double target : output_times) {
        if (target > t_end) target = t_end;
        t_prev = state.t;
        lam_prev = state.lambda;
        while (state.t < target * (1.0 - 1e-14)) {
            double dt = std::min(state.cfl_dt(), target - state.t);
            step_viscous_v(state, dt);
        }
        emit(state);
        if (target >= t_end) break;
    }
    return out;
}

}  // namespace cpsim
