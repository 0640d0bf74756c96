#include "cpsim/inviscid.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "cpsim/errors.hpp"
#include "cpsim/numerics.hpp"

namespace cpsim {

namespace {

double solve_z_impl(const Profile& p, double eps_coeff, double target,
                    double support_end) {
    // Root of g(z) = z + eps_coeff v0(z) - target, strictly increasing in z.
    if (eps_coeff == 0.0) {
        if (target >= support_end)
            throw numeric_error("solve_z: characteristic reached support end");
        return target;
    }
    double hi = std::min(target, support_end * (1.0 - 1e-15));
    if (hi < 0.0) hi = 0.0;
    auto g = [&](double z) { return z + eps_coeff * p.v(z) - target; };
    auto dg = [&](double z) { return 1.0 + eps_coeff * p.v_prime(z); };
    if (g(0.0) > 0.0)
        throw validation_error(
            "solve_z: solvability violated, v0(0) > F_A / eps-coefficient");
    double tol = 1e-12 * (1.0 + std::abs(target));
    return num::solve_monotone(g, dg, 0.0, hi, tol);
}

}  // namespace

double solve_z(const Profile& profile, const Coeffs& c, double epsilon,
               double x) {
    Profile p = profile.normalized();
    double eps_coeff = epsilon * c.sigma2 / (c.m1 * c.m1);
    double target = characteristic_map(c, x);
    return solve_z_impl(p, eps_coeff, target, p.support_end());
}

double v_at(const Profile& profile, const InviscidState& state, double x) {
    Profile p = profile.normalized();
    double z = solve_z(p, state.coeffs, state.epsilon, x);
    return p.v(z) / state.coeffs.m1;
}

namespace {

// Rate identity evaluated from primitive quantities.
double rate_from(const Profile& p, const Coeffs& c, double eps, double z) {
    double v0z = p.v(z);
    double vp = p.v_prime(z);
    double m1 = c.m1;
    double denom = 1.0 + eps * c.sigma2 / (m1 * m1) * vp;
    double v_x0 = vp / (m1 * m1 * denom);  // chain rule through z(x)
    double v00 = v0z / m1;                 // v(0,t) = 1/Lambda
    return 1.0 - (1.0 - eps * v00) * v_x0 / (v00 * v00);
}

}  // namespace

double coarsening_rate_inviscid(const Profile& profile,
                                const InviscidState& state) {
    Profile p = profile.normalized();
    return rate_from(p, state.coeffs, state.epsilon, state.z);
}

InviscidRun evolve_inviscid(const Profile& profile, double epsilon,
                            double t_end, double dt,
                            const std::vector<double>& output_times) {
    if (!(t_end > 0.0) || !(dt > 0.0))
        throw validation_error("evolve_inviscid: t_end, dt must be positive");
    Profile p = profile.normalized();
    ValidationReport vr = p.validate_inviscid_data(epsilon);
    if (epsilon > 0.0 && !vr.pass())
        throw validation_error("evolve_inviscid: initial data rejected: " +
                               vr.summary());
    if (epsilon == 0.0 && !vr.v_increasing)
        throw validation_error("evolve_inviscid: v0 must be increasing");
    double support_end = p.support_end();

    // RHS at given accumulated coefficients: solve z, then A = v0(z)/m1.
    auto deriv = [&](const Coeffs& c, double& z_out) {
        double eps_coeff = epsilon * c.sigma2 / (c.m1 * c.m1);
        double target = c.m2 / c.m1;
        double z = solve_z_impl(p, eps_coeff, target, support_end);
        z_out = z;
        double a = p.v(z) / c.m1;
        return std::array<double, 3>{a * c.m1, 1.0 + a * c.m2,
                                     1.0 + 2.0 * a * c.sigma2};
    };
    auto add = [](const Coeffs& c, const std::array<double, 3>& k,
                  double h) {
        Coeffs out = c;
        out.m1 += h * k[0];
        out.m2 += h * k[1];
        out.sigma2 += h * k[2];
        return out;
    };
    auto rk4 = [&](const Coeffs& c, double h) {
        double zd;
        auto k1 = deriv(c, zd);
        auto k2 = deriv(add(c, k1, 0.5 * h), zd);
        auto k3 = deriv(add(c, k2, 0.5 * h), zd);
        auto k4 = deriv(add(c, k3, h), zd);
        Coeffs out = c;
        out.t += h;
        out.m1 += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        out.m2 += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        out.sigma2 += h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
        return out;
    };

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

    InviscidRun run;
    run.trajectory.columns = {"t",      "z",      "m1",         "m2",
                              "sigma2", "lambda", "dlambda_dt", "eps_v0"};
    Coeffs c;
    double z_prev = -1.0;
    auto emit_state = [&](const Coeffs& cc) {
        double zd;
        deriv(cc, zd);
        InviscidState st{cc.t, cc, zd, cc.m1 / p.v(zd), epsilon};
        double v00 = 1.0 / st.lambda;
        if (epsilon * v00 >= 1.0)
            throw numeric_error(
                "evolve_inviscid: constraint eps v(0,t) < 1 lost at t = " +
                std::to_string(cc.t));
        if (zd < z_prev - 1e-9)
            throw numeric_error("evolve_inviscid: z decreased at t = " +
                                std::to_string(cc.t));
        z_prev = zd;
        run.states.push_back(st);
        run.trajectory.rows.push_back({cc.t, zd, cc.m1, cc.m2, cc.sigma2,
                                       st.lambda,
                                       rate_from(p, cc, epsilon, zd),
                                       epsilon * v00});
    };

    emit_state(c);
    double t = 0.0;
    for (std::size_t k = 1; k < emit.size(); ++k) {
        double target = emit[k];
        while (t < target) {
            double h = (t < 1.0) ? dt : dt * t;
            h = std::min(h, target - t);
            c = rk4(c, h);
            t = c.t;
        }
        emit_state(c);
    }
    return run;
}

FixedPointResult fixed_point_bootstrap(const Profile& profile, double epsilon,
                                       double T, double delta0, double delta1,
                                       double grid_dt, double tol,
                                       int max_iter) {
    Profile p = profile.normalized();
    double v00 = p.v(0.0);
    if (epsilon > 0.0 && !((1.0 + delta0) * v00 < 1.0 / epsilon))
        throw validation_error(
            "fixed_point_bootstrap: (1+delta0) v0(0) < 1/eps violated");
    if (!(T <= delta1 / v00 * (1.0 + 1e-12)))
        throw validation_error(
            "fixed_point_bootstrap: T exceeds delta1 / v0(0)");

    std::size_t n = std::max<std::size_t>(2, std::size_t(std::ceil(T / grid_dt)) + 1);
    std::vector<double> times(n);
    for (std::size_t i = 0; i < n; ++i) times[i] = T * double(i) / double(n - 1);

    std::vector<double> V(n, v00), BV(n);
    double support_end = p.support_end();
    FixedPointResult out;
    out.times = times;

    double prev_diff = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        // Accumulate coefficients for A(s) = V(s), midpoint-sampled per cell.
        Coeffs c;
        BV[0] = v00;
        for (std::size_t i = 1; i < n; ++i) {
            double h = times[i] - times[i - 1];
            c = advance(c, 0.5 * (V[i - 1] + V[i]), h);
            double eps_coeff = epsilon * c.sigma2 / (c.m1 * c.m1);
            double z = solve_z_impl(p, eps_coeff, c.m2 / c.m1, support_end);
            BV[i] = p.v(z) / c.m1;
        }
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            diff = std::max(diff, std::abs(BV[i] - V[i]));
        V.swap(BV);
        out.iterations = it + 1;
        if (it > 0 && prev_diff > 0.0)
            out.contraction_factor =
                std::max(out.contraction_factor, diff / prev_diff);
        prev_diff = diff;
        if (diff < tol) break;
    }
    if (prev_diff >= tol && out.contraction_factor >= 1.0)
        throw numeric_error(
            "fixed_point_bootstrap: no contraction observed, factor = " +
            std::to_string(out.contraction_factor));
    out.lambda.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.lambda[i] = 1.0 / V[i];
    return out;
}

}  // namespace cpsim
