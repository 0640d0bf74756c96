#include "cpsim/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "cpsim/errors.hpp"
#include "cpsim/numerics.hpp"
#include "cpsim/rng.hpp"

namespace cpsim {

DriftSpec DriftSpec::constant(double a) {
    if (a < 0.0) throw validation_error("DriftSpec: A must be nonnegative");
    DriftSpec d;
    d.constant_ = true;
    d.a_ = a;
    return d;
}

DriftSpec DriftSpec::lambda_path(std::vector<double> t,
                                 std::vector<double> lambda) {
    if (t.size() != lambda.size() || t.size() < 2)
        throw validation_error("DriftSpec: need matching t/Lambda arrays");
    DriftSpec d;
    d.constant_ = false;
    d.t_ = std::move(t);
    d.lambda_ = std::move(lambda);
    return d;
}

double DriftSpec::a_at(double s) const {
    if (constant_) return a_;
    if (s <= t_.front()) return 1.0 / lambda_.front();
    if (s >= t_.back()) return 1.0 / lambda_.back();
    auto it = std::upper_bound(t_.begin(), t_.end(), s);
    std::size_t i = std::size_t(it - t_.begin()) - 1;
    double w = (s - t_[i]) / (t_[i + 1] - t_[i]);
    return 1.0 / ((1.0 - w) * lambda_[i] + w * lambda_[i + 1]);
}

double green_full(const Coeffs& at_T, double epsilon, double x, double y) {
    if (!(at_T.sigma2 > 0.0))
        throw validation_error("green_full: sigma2 must be positive");
    double var = epsilon * at_T.sigma2;
    double d = x - (at_T.m1 * y - at_T.m2);
    return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * M_PI * var);
}

double action_q(const Coeffs& at_T, double x, double y) {
    if (!(at_T.sigma2 > 0.0))
        throw validation_error("action_q: sigma2 must be positive");
    double d = x + at_T.m2 - at_T.m1 * y;
    return 0.5 * d * d / at_T.sigma2;
}

double bridge_mean(const Coeffs& at_s, const Coeffs& at_T, double x,
                   double y) {
    TwoTime st = between(at_s, at_T);
    return (x * st.m1 * at_s.sigma2 + y * at_s.m1 * st.sigma2 +
            st.m1 * st.m2 * at_s.sigma2 - at_s.m2 * st.sigma2) /
           at_T.sigma2;
}

double bridge_cov(const Coeffs& at_s1, const Coeffs& at_s2,
                  const Coeffs& at_T) {
    const Coeffs& a = at_s1.t <= at_s2.t ? at_s1 : at_s2;
    const Coeffs& b = at_s1.t <= at_s2.t ? at_s2 : at_s1;
    TwoTime ab = between(a, b);
    TwoTime bT = between(b, at_T);
    return ab.m1 * a.sigma2 * bT.sigma2 / at_T.sigma2;
}

double prop51_rhs(const Coeffs& at_T, double lambda_factor, double y) {
    double mu = 1.0 - at_T.m2 / at_T.sigma2 + at_T.m1 * y / at_T.sigma2;
    return -std::expm1(-2.0 * lambda_factor * mu);
}

double green_dirichlet_driftless(double x, double y, double epsilon,
                                 double T) {
    if (!(x > 0.0) || !(y > 0.0))
        throw validation_error("green_dirichlet_driftless: need x, y > 0");
    double var = epsilon * T;
    double direct = std::exp(-0.5 * (x - y + T) * (x - y + T) / var);
    double image =
        std::exp(-2.0 * x / epsilon - 0.5 * (x + y - T) * (x + y - T) / var);
    return (direct - image) / std::sqrt(2.0 * M_PI * var);
}

double exit_prob_drifted_bm(double lambda_prime, double lambda_cap,
                            double mu) {
    if (!(lambda_prime > 0.0) || !(lambda_prime < lambda_cap))
        throw validation_error("exit_prob_drifted_bm: need 0 < l' < L'");
    if (!(mu > 0.0))
        throw validation_error("exit_prob_drifted_bm: mu must be positive");
    return std::expm1(-2.0 * mu * lambda_prime) /
           std::expm1(-2.0 * mu * lambda_cap);
}

namespace {

// Grid coefficients for the sampling methods; index i is time s_i = i T / n.
struct GridCoeffs {
    std::vector<Coeffs> at;  // accumulated from 0 to s_i
    double T = 0.0;
    double dt = 0.0;

    double m1_to_T(std::size_t i) const { return at.back().m1 / at[i].m1; }
    double m2_to_T(std::size_t i) const {
        return at.back().m2 - at[i].m2 * m1_to_T(i);
    }
    double sigma2_to_T(std::size_t i) const {
        double r = m1_to_T(i);
        return at.back().sigma2 - at[i].sigma2 * r * r;
    }
};

GridCoeffs build_grid(const DriftSpec& drift, double T, std::size_t n) {
    GridCoeffs g;
    g.T = T;
    g.dt = T / double(n);
    g.at.resize(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        double mid = (double(i) - 0.5) * g.dt;
        g.at[i] = advance(g.at[i - 1], drift.a_at(mid), g.dt);
    }
    return g;
}

struct ChunkStats {
    double survivors = 0.0;
    std::vector<double> sum, sumsq;
};

}  // namespace

PathBatch sample_bridge(const BridgeSpec& spec, BridgeMethod method) {
    if (spec.n_steps < 10)
        throw validation_error("sample_bridge: n_steps must be >= 10");
    const std::size_t n = spec.n_steps;
    const double eps = spec.epsilon;
    GridCoeffs g = build_grid(spec.drift, spec.T, n);

    // Deterministic path means and coefficient arrays at grid times.
    std::vector<double> mean(n + 1), sig2_to_T(n + 1), m1_to_T(n + 1),
        m2_to_T(n + 1), m1_at(n + 1), a_mid(n);
    for (std::size_t i = 0; i <= n; ++i) {
        mean[i] = bridge_mean(g.at[i], g.at.back(), spec.x, spec.y);
        sig2_to_T[i] = g.sigma2_to_T(i);
        m1_to_T[i] = g.m1_to_T(i);
        m2_to_T[i] = g.m2_to_T(i);
        m1_at[i] = g.at[i].m1;
    }
    for (std::size_t i = 0; i < n; ++i)
        a_mid[i] = spec.drift.a_at((double(i) + 0.5) * g.dt);

    // Martingale increment deviations for the exact-in-law recursion.
    std::vector<double> incr_sd(n, 0.0);
    double m1T2 = g.at.back().m1 * g.at.back().m1;
    for (std::size_t i = 0; i + 1 < n; ++i)
        incr_sd[i] = std::sqrt(
            (1.0 / sig2_to_T[i + 1] - 1.0 / sig2_to_T[i]) / m1T2);

    std::vector<std::size_t> mon_idx;
    for (double f : spec.monitor_fractions)
        mon_idx.push_back(std::size_t(std::lround(f * double(n))));

    const std::size_t chunk = 8192;
    const std::size_t n_chunks = (spec.n_paths + chunk - 1) / chunk;
    std::vector<ChunkStats> stats(n_chunks);

    auto run_chunk = [&](std::size_t ci) {
        ChunkStats& cs = stats[ci];
        cs.sum.assign(mon_idx.size(), 0.0);
        cs.sumsq.assign(mon_idx.size(), 0.0);
        std::size_t lo = ci * chunk;
        std::size_t hi = std::min(spec.n_paths, lo + chunk);
        std::vector<double> path(n + 1);
        for (std::size_t p = lo; p < hi; ++p) {
            Philox rng(spec.seed, p);
            path[0] = spec.y;
            if (method == BridgeMethod::kernel_factor) {
                double r = 0.0;
                double sq_eps = std::sqrt(eps);
                for (std::size_t i = 1; i < n; ++i) {
                    r += incr_sd[i - 1] * rng.normal();
                    path[i] = mean[i] + sq_eps * sig2_to_T[i] * m1_at[i] * r;
                }
                path[n] = spec.x;
            } else {
                double yv = spec.y;
                double sq = std::sqrt(eps * g.dt);
                for (std::size_t i = 0; i + 1 < n; ++i) {
                    double m1sT = m1_to_T[i];
                    double drift = a_mid[i] * yv - 1.0 +
                                   m1sT * (spec.x + m2_to_T[i] - m1sT * yv) /
                                       sig2_to_T[i];
                    yv += g.dt * drift + sq * rng.normal();
                    path[i + 1] = yv;
                }
                path[n] = spec.x;  // pin through the drift singularity
            }
            // survival with per-step boundary-crossing correction
            bool alive = path[0] > 0.0;
            for (std::size_t i = 1; i <= n && alive; ++i) {
                if (path[i] <= 0.0) {
                    alive = false;
                    break;
                }
                if (spec.crossing_correction) {
                    double cross = std::exp(-2.0 * path[i - 1] * path[i] /
                                            (eps * g.dt));
                    if (rng.uniform() < cross) alive = false;
                }
            }
            if (alive) cs.survivors += 1.0;
            for (std::size_t m = 0; m < mon_idx.size(); ++m) {
                double v = path[mon_idx[m]];
                cs.sum[m] += v;
                cs.sumsq[m] += v * v;
            }
        }
    };

    int n_threads = std::max(1, spec.threads);
    if (n_threads == 1) {
        for (std::size_t ci = 0; ci < n_chunks; ++ci) run_chunk(ci);
    } else {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        std::mutex mu;
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back([&]() {
                for (;;) {
                    std::size_t ci;
                    {
                        std::lock_guard<std::mutex> lk(mu);
                        if (next >= n_chunks) return;
                        ci = next++;
                    }
                    run_chunk(ci);
                }
            });
        for (auto& th : pool) th.join();
    }

    PathBatch out;
    out.n_paths = spec.n_paths;
    double surv = 0.0;
    std::vector<double> sum(mon_idx.size(), 0.0), sumsq(mon_idx.size(), 0.0);
    for (const auto& cs : stats) {
        surv += cs.survivors;
        for (std::size_t m = 0; m < mon_idx.size(); ++m) {
            sum[m] += cs.sum[m];
            sumsq[m] += cs.sumsq[m];
        }
    }
    out.p_hat = surv / double(spec.n_paths);
    out.se = std::sqrt(out.p_hat * (1.0 - out.p_hat) / double(spec.n_paths));
    for (std::size_t m = 0; m < mon_idx.size(); ++m) {
        std::size_t i = mon_idx[m];
        double mu1 = sum[m] / double(spec.n_paths);
        double var = sumsq[m] / double(spec.n_paths) - mu1 * mu1;
        out.monitor_times.push_back(double(i) * g.dt);
        out.sample_mean.push_back(mu1);
        out.sample_var.push_back(var * double(spec.n_paths) /
                                 double(spec.n_paths - 1));
        out.expected_mean.push_back(mean[i]);
        out.expected_var.push_back(eps *
                                   bridge_cov(g.at[i], g.at[i], g.at.back()));
    }
    out.step_warning = spec.n_steps < 100;
    return out;
}

std::pair<double, double> survival_probability_mc(const BridgeSpec& spec,
                                                  BridgeMethod method) {
    if (!(spec.x > 0.0) || !(spec.y > 0.0))
        throw validation_error("survival_probability_mc: need x, y > 0");
    PathBatch b = sample_bridge(spec, method);
    return {b.p_hat, b.se};
}

std::pair<double, double> exit_prob_drifted_bm_mc(double lambda_prime,
                                                  double lambda_cap, double mu,
                                                  double epsilon,
                                                  std::size_t n_paths,
                                                  std::size_t n_steps,
                                                  std::uint64_t seed) {
    if (!(lambda_prime > 0.0) || !(lambda_prime < lambda_cap))
        throw validation_error("exit_prob_drifted_bm_mc: need 0 < l' < L'");
    double z0 = lambda_prime * epsilon;
    double top = lambda_cap * epsilon;
    // step chosen so a single move is small next to the strip width
    double dt = (top / 50.0) * (top / 50.0) / epsilon;
    double sdt = std::sqrt(epsilon * dt);
    std::size_t right = 0;
    const std::size_t max_iter = 100 * n_steps;
    for (std::size_t p = 0; p < n_paths; ++p) {
        Philox rng(seed, p);
        double z = z0;
        for (std::size_t it = 0; it < max_iter; ++it) {
            double zn = z + mu * dt + sdt * rng.normal();
            if (zn >= top) {
                ++right;
                break;
            }
            if (zn <= 0.0) break;
            // crossing corrections against both barriers
            double cross_lo = std::exp(-2.0 * z * zn / (epsilon * dt));
            if (rng.uniform() < cross_lo) break;
            double cross_hi =
                std::exp(-2.0 * (top - z) * (top - zn) / (epsilon * dt));
            if (rng.uniform() < cross_hi) {
                ++right;
                break;
            }
            z = zn;
        }
    }
    double p = double(right) / double(n_paths);
    return {p, std::sqrt(p * (1.0 - p) / double(n_paths))};
}

double ks_statistic_standard_normal(std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    double n = double(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double cdf = 1.0 - num::normal_tail(sample[i]);
        d = std::max(d, std::abs(cdf - double(i) / n));
        d = std::max(d, std::abs(double(i + 1) / n - cdf));
    }
    return d;
}

double two_proportion_z(double p1, std::size_t n1, double p2,
                        std::size_t n2) {
    double pooled = (p1 * double(n1) + p2 * double(n2)) / double(n1 + n2);
    double se = std::sqrt(pooled * (1.0 - pooled) *
                          (1.0 / double(n1) + 1.0 / double(n2)));
    return (p1 - p2) / se;
}

}  // namespace cpsim
