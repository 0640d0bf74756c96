#include "cpsim/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "cpsim/analysis.hpp"
#include "cpsim/bridge.hpp"
#include "cpsim/cp_exact.hpp"
#include "cpsim/diffusive.hpp"
#include "cpsim/inviscid.hpp"
#include "cpsim/profiles.hpp"

namespace cpsim::acceptance {

namespace {

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!ok) detail << "[FAIL " << what << "] ";
    }
    void note(const std::string& s) { detail << s << " "; }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// 1. Self-similar exactness: Lambda(t) = 1 + beta t to 1e-7 on [0, 10].
Check criterion_1(int) {
    Check ck;
    for (double beta : {0.5, 1.0, 2.0}) {
        CPRun run = evolve_cp(Profile::self_similar(beta), 10.0, 1e-3);
        double err = 0.0;
        for (const auto& row : run.trajectory.rows) {
            double t = row[0], lam = row[3];
            err = std::max(err, std::abs(lam - (1.0 + beta * t)));
        }
        ck.note("beta=" + fmt(beta) + " err=" + fmt(err));
        ck.require(err <= 1e-7, "max|Lambda-(1+beta t)| <= 1e-7");
    }
    return ck;
}

// 2. Smereka golden test: eps = 2 dx, point datum; Lambda = dx + t within 1%
//    on [0,5]; final snapshot within 2% in L1.
Check criterion_2(int) {
    Check ck;
    const double dx = 1e-3, eps = 2e-3, t_end = 5.0;
    DiffusiveState s = delta_datum(dx, eps, 0.5);
    std::vector<double> outputs = {0.5, 1.0, 1.5, 2.0, 2.5,
                                   3.0, 3.5, 4.0, 4.5, 5.0};
    DiffusiveRunResult run = run_to(std::move(s), t_end, outputs);
    double rel = 0.0;
    for (const auto& row : run.trajectory.rows) {
        double t = row[0], lam = row[1];
        rel = std::max(rel, std::abs(lam - (dx + t)) / (dx + t));
    }
    ck.note("lambda relerr=" + fmt(rel));
    ck.require(rel <= 0.01, "Lambda within 1%");

    SmerekaSolution exact = smereka_explicit(dx, t_end, run.state.active);
    double l1 = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < run.state.active; ++i) {
        l1 += std::abs(run.state.c[i] - exact.c[i]) * dx;
        norm += exact.c[i] * dx;
    }
    ck.note("snapshot L1 rel=" + fmt(l1 / norm));
    ck.require(l1 <= 0.02 * norm, "snapshot L1 within 2%");
    return ck;
}

// 3. Inviscid fixed point: exponential datum, eps = 0.1.
Check criterion_3(int) {
    Check ck;
    Profile expo = Profile::self_similar(1.0);
    InviscidRun run = evolve_inviscid(expo, 0.1, 100.0, 1e-3);
    double err = 0.0;
    for (const auto& row : run.trajectory.rows)
        err = std::max(err, std::abs(row[5] - (1.0 + row[0])));
    ck.note("|Lambda-(1+t)| max=" + fmt(err));
    ck.require(err <= 1e-6, "Lambda = 1+t within 1e-6 on [0,100]");

    const double T = 0.08;
    FixedPointResult fp = fixed_point_bootstrap(expo, 0.1, T, 0.1, 0.1, 1e-4);
    std::vector<double> check_times;
    for (std::size_t i = 100; i < fp.times.size(); i += 100)
        check_times.push_back(fp.times[i]);
    InviscidRun ref = evolve_inviscid(expo, 0.1, T, 1e-4, check_times);
    double agree = 0.0;
    for (std::size_t k = 0; k < check_times.size(); ++k) {
        double lam_fp = fp.lambda[(k + 1) * 100];
        double lam_ev = ref.trajectory.rows[k + 1][5];
        agree = std::max(agree, std::abs(lam_fp - lam_ev));
    }
    ck.note("fp-vs-evolve=" + fmt(agree) +
            " contraction=" + fmt(fp.contraction_factor));
    ck.require(agree <= 1e-8, "bootstrap agrees with evolve within 1e-8");
    return ck;
}

// 4. Selection principle and log rate for SelfSimilar(1/2), eps = 0.1.
Check criterion_4(int) {
    Check ck;
    InviscidRun run =
        evolve_inviscid(Profile::self_similar(0.5), 0.1, 1e4, 1e-3);
    double lam_end = run.trajectory.back("lambda");
    ck.note("Lambda(1e4)/1e4=" + fmt(lam_end / 1e4));
    ck.require(lam_end / 1e4 >= 0.9 && lam_end / 1e4 <= 1.1,
               "Lambda(t)/t in [0.9, 1.1] at t = 1e4");

    auto t = run.trajectory.column("t");
    auto rate = run.trajectory.column("dlambda_dt");
    bool increasing = true;
    double r_lo = 0.0, r_hi = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < 100.0) continue;
        if (r_lo == 0.0) r_lo = rate[i];
        if (rate[i] < r_hi - 1e-9) increasing = false;
        r_hi = std::max(r_hi, rate[i]);
    }
    ck.note("rate(1e2)=" + fmt(r_lo) + " rate(1e4)=" + fmt(rate.back()));
    ck.require(increasing && rate.back() > r_lo,
               "dLambda/dt increasing toward 1");
    ck.require(rate.back() <= 1.0 + 1e-9, "dLambda/dt <= 1");

    analysis::RateFit fit = analysis::rate_fit_log(run.trajectory, 1e2, 1e4);
    ck.note("C=" + fmt(fit.c));
    ck.require(!fit.skipped && fit.within_band,
               "(1-dLambda/dt) log t in factor-3 band");
    return ck;
}

// 5. Gaussian transport rate and doubling-time recursion.
Check criterion_5(int) {
    Check ck;
    CPRun run = evolve_cp(Profile::gaussian(1.0), 1e6, 1e-3);
    analysis::RateFit fit = analysis::rate_fit_log(run.trajectory, 1e2, 1e6);
    ck.note("C=" + fmt(fit.c));
    ck.require(!fit.skipped && fit.within_band,
               "(1-dLambda/dt) log t in factor-3 band on [1e2, 1e6]");

    std::vector<double> deltas;
    for (double L : {1.0, 2.0, 5.0, 10.0, 50.0}) {
        analysis::GaussianRecursion rec = analysis::gaussian_l_recursion(L);
        deltas.push_back(rec.delta);
        ck.require(rec.refit_residual < 1e-8, "Gaussian refit residual");
    }
    double dmin = *std::min_element(deltas.begin(), deltas.end());
    double dmax = *std::max_element(deltas.begin(), deltas.end());
    ck.note("A(L)-L in [" + fmt(dmin) + ", " + fmt(dmax) + "]");
    ck.require(dmin > 0.0, "A(L) - L > 0");
    ck.require(dmax / dmin <= 3.0, "A(L) - L stable across L");
    return ck;
}

// 6. Driftless first-passage exactness.
Check criterion_6(int threads) {
    Check ck;
    BridgeSpec spec;
    spec.drift = DriftSpec::constant(0.0);
    spec.T = 1.0;
    spec.epsilon = 0.5;
    spec.x = 1.0;
    spec.y = 1.0;
    spec.n_paths = 100000;
    spec.n_steps = 1000;
    spec.seed = 20260810;
    spec.threads = threads;
    auto [p_hat, se] = survival_probability_mc(spec);
    double exact = 1.0 - std::exp(-4.0);
    ck.note("p_hat=" + fmt(p_hat) + " exact=" + fmt(exact) + " se=" + fmt(se));
    ck.require(std::abs(p_hat - exact) <= 3.0 * se,
               "|p_hat - (1 - e^-4)| <= 3 SE");

    double lp = 1.0, lc = 3.0, mu = 1.0;
    double analytic = exit_prob_drifted_bm(lp, lc, mu);
    auto [pm, sem] =
        exit_prob_drifted_bm_mc(lp, lc, mu, 0.5, 100000, 1000, 4242);
    ck.note("exit mc=" + fmt(pm) + " exact=" + fmt(analytic));
    ck.require(std::abs(pm - analytic) <= 3.0 * sem,
               "exit probability MC within 3 SE");
    return ck;
}

// 7. Proposition 5.1 limit at lambda = 1, y = 1, T = 1, A = 1.
Check criterion_7(int threads) {
    Check ck;
    Coeffs cT = const_a_closed_form(1.0, 1.0);
    double rhs = prop51_rhs(cT, 1.0, 1.0);
    double prev = 1e9;
    double final_gap = 0.0;
    for (double eps : {0.2, 0.1, 0.05, 0.02}) {
        BridgeSpec spec;
        spec.drift = DriftSpec::constant(1.0);
        spec.T = 1.0;
        spec.epsilon = eps;
        spec.y = 1.0;
        spec.x = eps;  // lambda = 1
        spec.n_paths = 200000;
        spec.n_steps = 2000;
        spec.seed = 77;
        spec.threads = threads;
        auto [p_hat, se] = survival_probability_mc(spec);
        double gap = std::abs(p_hat - rhs);
        ck.note("eps=" + fmt(eps) + " gap=" + fmt(gap));
        ck.require(gap < prev, "|p_hat - rhs| decreasing in eps");
        prev = gap;
        final_gap = gap;
    }
    ck.require(final_gap <= 0.02, "gap <= 0.02 at eps = 0.02");
    return ck;
}

// 8. eps -> 0 convergence of the diffusive model at T = 1, dx = 1e-3.
Check criterion_8(int) {
    Check ck;
    auto rows = analysis::eps_convergence_study(
        Profile::self_similar(1.0), {0.2, 0.1, 0.05}, 1.0, 1e-3, 32.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ck.note("eps=" + fmt(rows[i].epsilon) +
                " lam_err=" + fmt(rows[i].sup_lambda_err) +
                " rate_gap=" + fmt(rows[i].rate_gap));
        if (i > 0) {
            ck.require(rows[i].sup_lambda_err < rows[i - 1].sup_lambda_err,
                       "sup|Lambda_eps - Lambda_0| strictly decreasing");
            ck.require(rows[i].rate_gap < rows[i - 1].rate_gap,
                       "coarsening-rate gap strictly decreasing");
        }
    }
    return ck;
}

// 9. Diffusive long-run properties with log-concave data.
Check criterion_9(int) {
    Check ck;
    std::vector<double> outputs;
    for (double t = 0.01; t < 1.0; t *= 2.0) outputs.push_back(t);
    for (int k = 0; k <= 18; ++k) outputs.push_back(1.0 + 0.5 * k);  // [1,10]
    for (double t = 12.0; t <= 100.0; t *= 1.3) outputs.push_back(t);
    outputs.push_back(100.0);

    for (int prof = 0; prof < 2; ++prof) {
        Profile p = prof == 0 ? Profile::self_similar(1.0)
                              : Profile::gaussian(1.0);
        std::string pname = prof == 0 ? "exp" : "gauss1";
        for (double eps : {0.2, 0.1, 0.05}) {
            double dx = eps / 4.0;
            DiffusiveState s = init_grid(p, eps, dx, 34.0);
            double sup_beta = 0.0;
            auto hook = [&](const DiffusiveState& st) {
                std::vector<double> cgrid(st.c.begin(),
                                          st.c.begin() + st.active);
                auto rep =
                    analysis::beta_profile_from_grid(cgrid, st.dx, 1e-12);
                sup_beta = std::max(sup_beta, rep.sup_beta);
            };
            DiffusiveRunResult run =
                run_to(std::move(s), 100.0, outputs, hook);
            auto t = run.trajectory.column("t");
            auto lam = run.trajectory.column("lambda");
            auto rate = run.trajectory.column("dlambda_dt");
            bool monotone = true;
            double max_rate = 0.0;
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (i > 0 && lam[i] < lam[i - 1] - 1e-12) monotone = false;
                if (t[i] >= 1.0 && t[i] <= 10.0)
                    max_rate = std::max(max_rate, rate[i]);
            }
            ck.note(pname + " eps=" + fmt(eps) + " L(100)=" +
                    fmt(lam.back()) + " maxrate=" + fmt(max_rate) +
                    " supbeta=" + fmt(sup_beta));
            ck.require(monotone, "Lambda non-decreasing");
            ck.require(lam.back() > 50.0, "Lambda(100) > 50");
            ck.require(max_rate <= 3.0, "max dLambda/dt on [1,10] <= 3");
            ck.require(sup_beta <= 1.05, "sup grid-beta <= 1.05");
        }
    }
    return ck;
}

// 10. Bridge moment suite for A in {0, 1}.
Check criterion_10(int threads) {
    Check ck;
    for (double a : {0.0, 1.0}) {
        BridgeSpec spec;
        spec.drift = DriftSpec::constant(a);
        spec.T = 1.0;
        spec.epsilon = 0.5;
        spec.x = 1.0;
        spec.y = 1.0;
        spec.n_paths = 100000;
        spec.n_steps = 2000;
        spec.seed = 31337;
        spec.threads = threads;
        PathBatch kf = sample_bridge(spec, BridgeMethod::kernel_factor);
        spec.seed = 31338;
        PathBatch md = sample_bridge(spec, BridgeMethod::markov_drift);
        for (const PathBatch* b : {&kf, &md}) {
            for (std::size_t m = 0; m < b->monitor_times.size(); ++m) {
                double se_mean =
                    std::sqrt(b->expected_var[m] / double(b->n_paths));
                double se_var = b->expected_var[m] *
                                std::sqrt(2.0 / double(b->n_paths - 1));
                ck.require(std::abs(b->sample_mean[m] - b->expected_mean[m]) <=
                               3.0 * se_mean,
                           "mean within 3 SE (A=" + fmt(a) + ")");
                ck.require(std::abs(b->sample_var[m] - b->expected_var[m]) <=
                               3.0 * se_var,
                           "variance within 3 SE (A=" + fmt(a) + ")");
            }
        }
        double z = two_proportion_z(kf.p_hat, kf.n_paths, md.p_hat,
                                    md.n_paths);
        ck.note("A=" + fmt(a) + " z=" + fmt(z));
        ck.require(std::abs(z) <= 2.576,
                   "methods indistinguishable (1% z-test)");
    }
    return ck;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::vector<int> selection,
                                            int threads) {
    struct Entry {
        int index;
        const char* name;
        std::function<Check(int)> fn;
    };
    const std::vector<Entry> entries = {
        {1, "self-similar exactness", criterion_1},
        {2, "Smereka golden test", criterion_2},
        {3, "inviscid fixed point", criterion_3},
        {4, "selection principle + log rate", criterion_4},
        {5, "Gaussian transport rate + doubling recursion", criterion_5},
        {6, "driftless first-passage exactness", criterion_6},
        {7, "Dirichlet/full Green ratio limit", criterion_7},
        {8, "eps -> 0 convergence", criterion_8},
        {9, "diffusive long-run properties", criterion_9},
        {10, "bridge moment suite", criterion_10},
    };
    std::vector<CriterionResult> out;
    for (const auto& e : entries) {
        if (!selection.empty() &&
            std::find(selection.begin(), selection.end(), e.index) ==
                selection.end())
            continue;
        CriterionResult r;
        r.index = e.index;
        r.name = e.name;
        auto t0 = std::chrono::steady_clock::now();
        try {
            Check ck = e.fn(threads);
            r.pass = ck.pass;
            r.detail = ck.detail.str();
        } catch (const std::exception& ex) {
            r.pass = false;
            r.detail = std::string("exception: ") + ex.what();
        }
        r.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        out.push_back(r);
    }
    return out;
}

std::string format_results(const std::vector<CriterionResult>& results) {
    std::ostringstream os;
    for (const auto& r : results) {
        os << (r.pass ? "PASS" : "FAIL") << "  [" << r.index << "] " << r.name
           << "  (" << fmt(r.seconds) << " s)\n";
        if (!r.detail.empty()) os << "      " << r.detail << "\n";
    }
    return os.str();
}

}  // namespace cpsim::acceptance
