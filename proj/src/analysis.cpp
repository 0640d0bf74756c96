#include "cpsim/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "cpsim/cp_exact.hpp"
#include "cpsim/diffusive.hpp"
#include "cpsim/errors.hpp"

namespace cpsim::analysis {

BetaProfileReport beta_profile_from_grid(const std::vector<double>& c,
                                         double dx, double w_floor) {
    if (c.empty()) throw validation_error("beta_profile_from_grid: empty grid");
    bool any = false;
    for (double ci : c) any = any || ci != 0.0;
    if (!any) throw validation_error("beta_profile_from_grid: all-zero grid");

    // node j sits at x = j dx; node 0 carries the Dirichlet value c = 0
    const std::size_t n = c.size();
    std::vector<double> cn(n + 1, 0.0), w(n + 1, 0.0), h(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) cn[i + 1] = c[i];
    for (std::size_t j = n; j-- > 0;)
        w[j] = w[j + 1] + 0.5 * (cn[j] + cn[j + 1]) * dx;
    for (std::size_t j = n; j-- > 0;)
        h[j] = h[j + 1] + 0.5 * (w[j] + w[j + 1]) * dx;

    BetaProfileReport rep;
    rep.masked_from = double(n) * dx;
    for (std::size_t j = 1; j <= n; ++j) {
        double x = double(j) * dx;
        if (w[j] < w_floor) {
            rep.masked_from = x;
            break;
        }
        rep.x.push_back(x);
        rep.beta.push_back(cn[j] * h[j] / (w[j] * w[j]));
    }
    rep.sup_beta = rep.beta.empty()
                       ? 0.0
                       : *std::max_element(rep.beta.begin(), rep.beta.end());
    return rep;
}

LogConcavityReport log_concavity_from_v(const std::vector<double>& v,
                                        double dx, double tol) {
    LogConcavityReport rep;
    rep.min_slope = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        double u = (v[i + 1] - v[i]) / dx;
        rep.min_slope = std::min(rep.min_slope, u);
        if (u < -tol * std::max(1.0, v[i] * v[i])) {
            rep.pass = false;
            rep.violations.push_back(i);
        }
    }
    return rep;
}

LogConcavityReport log_concavity_from_c(const std::vector<double>& c,
                                        double dx, double tol) {
    const std::size_t n = c.size();
    std::vector<double> w(n, 0.0), h(n, 0.0), v;
    double wacc = 0.0, hacc = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        double cr = (i + 1 < n) ? c[i + 1] : 0.0;
        wacc += 0.5 * (c[i] + cr) * dx;
        w[i] = wacc;
    }
    for (std::size_t i = n; i-- > 0;) {
        double wr = (i + 1 < n) ? w[i + 1] : 0.0;
        hacc += 0.5 * (w[i] + wr) * dx;
        h[i] = hacc;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i] < 1e-12) break;
        v.push_back(w[i] / h[i]);
    }
    return log_concavity_from_v(v, dx, tol);
}

double gaussian_beta(double length_scale, double z) {
    if (!(length_scale > 0.0) || z < 0.0)
        throw validation_error("gaussian_beta: need L > 0, z >= 0");
    double r = 1.0 + z / length_scale;
    double delta = 1.0 / (length_scale * r * r);
    // integrand support: cut where x + delta x^2/2 > 60
    double cut = delta > 0.0
                     ? (-1.0 + std::sqrt(1.0 + 120.0 * delta)) / delta
                     : 60.0;
    cut = std::min(cut, 60.0);
    auto f0 = [&](double x) { return std::exp(-x - 0.5 * delta * x * x); };
    auto f1 = [&](double x) { return x * f0(x); };
    double i0 = num::integrate(f0, 0.0, cut, 1e-12);
    double i1 = num::integrate(f1, 0.0, cut, 1e-12);
    if (!(i0 > 0.0)) throw numeric_error("gaussian_beta: quadrature failed");
    return i1 / (i0 * i0);
}

std::optional<double> doubling_time(const Trajectory& traj) {
    auto t = traj.column("t");
    auto lam = traj.column("lambda");
    if (lam.empty()) return std::nullopt;
    double target = 2.0 * lam.front();
    for (std::size_t i = 1; i < lam.size(); ++i) {
        if (lam[i] >= target) {
            double f = (target - lam[i - 1]) / (lam[i] - lam[i - 1]);
            return t[i - 1] + f * (t[i] - t[i - 1]);
        }
    }
    return std::nullopt;
}

GaussianRecursion gaussian_l_recursion(double length_scale) {
    Profile p = Profile::gaussian(length_scale);
    // Doubling point: w0(v*) = 1/2 along the characteristic foot.
    double hi = 1.0;
    while (p.w(hi) > 0.5) hi *= 2.0;
    double v_star =
        num::bisect([&](double v) { return 0.5 - p.w(v); }, 0.0, hi, 1e-15);
    double u_star = p.h(v_star);

    GaussianRecursion rec;
    rec.mu = v_star;
    rec.t_double =
        num::integrate([&](double v) { return 1.0 / p.h(v); }, 0.0, v_star,
                       1e-12);

    // Rescaled evolved density (exact affine transport, mean back to 1):
    // c_hat(x) = const * c0(u* Lambda x + v*) with Lambda = 2.
    const double lam = 2.0;
    std::vector<double> xs, logc;
    for (int i = 0; i <= 200; ++i) {
        double x = 3.0 * double(i) / 200.0;
        double arg = u_star * lam * x + v_star;
        double d = p.density(arg);
        if (d <= 0.0) break;
        xs.push_back(x);
        logc.push_back(std::log(d));
    }
    double resid = 0.0;
    auto cfit = num::fit_quadratic(xs, logc, &resid);
    rec.refit_residual = resid;
    double a_new = -cfit[1];
    double l_new = a_new * a_new / (-2.0 * cfit[2]);
    if (!(l_new > 0.0) || resid > 1e-8)
        throw numeric_error("gaussian_l_recursion: refit not Gaussian");
    rec.a_of_l = l_new;
    rec.delta = l_new - length_scale;
    return rec;
}

RateFit rate_fit_log(const Trajectory& traj, double t_lo, double t_hi,
                     std::size_t n_samples) {
    RateFit fit;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    auto t = traj.column("t");
    auto rate = traj.column("dlambda_dt");
    if (t.empty() || t.back() < t_hi)
        throw validation_error("rate_fit_log: window outside trajectory");
    n_samples = std::max<std::size_t>(n_samples, 8);

    // geometric targets; nearest trajectory row per target
    std::size_t row = 0;
    double prev_y = -1.0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        double target = t_lo * std::pow(t_hi / t_lo,
                                        double(k) / double(n_samples - 1));
        while (row + 1 < t.size() &&
               std::abs(t[row + 1] - target) <= std::abs(t[row] - target))
            ++row;
        double y = 1.0 - rate[row];
        if (y <= 0.0) {
            fit.skipped = true;
            fit.reason = "1 - dLambda/dt not positive in window";
            return fit;
        }
        if (prev_y > 0.0 && y > prev_y * (1.0 + 1e-6)) {
            fit.skipped = true;
            fit.reason = "1 - dLambda/dt not decreasing in window";
            return fit;
        }
        prev_y = y;
        fit.sample_t.push_back(t[row]);
        fit.sample_y.push_back(y);
    }
    std::vector<double> u;
    for (double tt : fit.sample_t) u.push_back(1.0 / std::log(tt));
    fit.c = num::fit_proportional(u, fit.sample_y);
    fit.within_band = true;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double scaled = fit.sample_y[i] * std::log(fit.sample_t[i]);
        if (scaled < fit.c / 3.0 || scaled > 3.0 * fit.c)
            fit.within_band = false;
    }
    return fit;
}

num::Hermite make_convex_q0(const std::vector<double>& y,
                            const std::vector<double>& q) {
    for (std::size_t i = 1; i + 1 < q.size(); ++i) {
        double h0 = y[i] - y[i - 1], h1 = y[i + 1] - y[i];
        double second = (q[i + 1] - q[i]) / h1 - (q[i] - q[i - 1]) / h0;
        if (second < -1e-9 * (1.0 + std::abs(q[i])))
            throw validation_error("make_convex_q0: data not convex");
    }
    return num::Hermite(y, q);
}

HopfLaxResult hopf_lax_propagate(const num::Hermite& q0, const Coeffs& c,
                                 double epsilon, double x) {
    if (!(c.sigma2 > 0.0))
        throw validation_error("hopf_lax_propagate: sigma2 must be positive");
    double es2 = epsilon * c.sigma2;
    auto objective = [&](double y) {
        double d = x + c.m2 - c.m1 * y;
        return 0.5 * d * d / es2 + q0(y);
    };
    double lo = q0.x_front(), hi = q0.x_back();
    double y_min = num::golden_min(objective, lo, hi,
                                   1e-12 * (1.0 + hi - lo), 200);

    HopfLaxResult out;
    out.y_min = y_min;
    out.q = 0.5 * std::log(2.0 * M_PI * epsilon) +
            0.5 * std::log(c.sigma2) - 2.0 * std::log(c.m1) +
            objective(y_min);
    // 1 - beta(x,t) = (1 - beta0(y_min)) / (1 + eps sigma2 q0''(y_min)/m1^2)
    double q1 = q0.derivative(y_min);
    double q2 = q0.second_derivative(y_min);
    double beta0 = 1.0 - q2 / (q1 * q1);
    out.beta = 1.0 - (1.0 - beta0) / (1.0 + es2 * q2 / (c.m1 * c.m1));
    return out;
}

std::vector<StudyRow> eps_convergence_study(const Profile& profile,
                                            const std::vector<double>& eps_list,
                                            double T, double dx,
                                            double x_max) {
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw validation_error(
                "eps_convergence_study: eps_list must be decreasing");
    Profile p = profile.normalized();

    // transport reference
    std::vector<double> times;
    for (int k = 0; k <= 40; ++k) times.push_back(T * double(k) / 40.0);
    CPRun ref = evolve_cp(p, T, 1e-3, times);
    auto lam0 = ref.trajectory.column("lambda");
    const CPState& end0 = ref.states.back();
    double rate0 = p.beta(end0.v);

    std::vector<StudyRow> rows;
    for (double eps : eps_list) {
        DiffusiveState s = init_grid(p, eps, dx, x_max);
        std::size_t k = 0;
        double sup_lam = 0.0;
        DiffusiveRunResult run = run_to(std::move(s), T, times);
        auto lam_eps = run.trajectory.column("lambda");
        for (k = 0; k < times.size() && k < lam_eps.size(); ++k)
            sup_lam = std::max(sup_lam, std::abs(lam_eps[k] - lam0[k]));

        // w comparison on a coarse x grid at time T
        const DiffusiveState& fs = run.state;
        double sup_w = 0.0;
        double wacc = 0.0;
        std::vector<double> w(fs.active + 1, 0.0);
        for (std::size_t i = fs.active; i-- > 0;) {
            double cr = (i + 1 < fs.active) ? fs.c[i + 1] : 0.0;
            wacc += 0.5 * (fs.c[i] + cr) * fs.dx;
            w[i + 1] = wacc;
        }
        w[0] = w[1] + 0.5 * fs.c[0] * fs.dx;
        for (std::size_t i = 0; i <= fs.active; i += 50) {
            double x = double(i) * fs.dx;
            double w0 = pushforward_w(p, end0, x);
            sup_w = std::max(sup_w, std::abs(w[i] - w0));
        }
        StudyRow row;
        row.epsilon = eps;
        row.sup_lambda_err = sup_lam;
        row.sup_w_err = sup_w;
        row.rate_gap = std::abs(coarsening_rate_diffusive(fs) - rate0);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace cpsim::analysis
