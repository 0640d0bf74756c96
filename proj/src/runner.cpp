#include "cpsim/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cpsim/analysis.hpp"
#include "cpsim/bridge.hpp"
#include "cpsim/cp_exact.hpp"
#include "cpsim/diffusive.hpp"
#include "cpsim/errors.hpp"
#include "cpsim/inviscid.hpp"
#include "cpsim/trajectory.hpp"

namespace cpsim {

namespace fs = std::filesystem;
using nlohmann::json;

std::string file_hash_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("file_hash_hex: cannot open " + path);
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= std::uint8_t(buf[i]);
            h *= 0x100000001b3ull;
        }
        if (!in) break;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", (unsigned long long)h);
    return out;
}

namespace {

constexpr const char* kVersion = "cpsim 1.0.0";

double scalar(const std::vector<double>& v, const std::string& name) {
    if (v.size() != 1)
        throw validation_error("parameter '" + name +
                               "' must be a scalar for run (use sweep)");
    return v[0];
}

struct RunOutput {
    std::vector<std::string> files;
    json headline = json::object();
};

RunOutput execute(const RunConfig& cfg, const fs::path& dir, int threads) {
    RunOutput out;
    auto save = [&](const std::string& name, const Trajectory& t) {
        fs::path p = dir / name;
        write_csv(p.string(), t);
        out.files.push_back(p.string());
    };

    if (cfg.model == "cp") {
        Profile p = cfg.profile.build();
        CPRun run = evolve_cp(p, cfg.t_end, cfg.dt, cfg.output_times);
        save("trajectory.csv", run.trajectory);
        out.headline["lambda_end"] = run.trajectory.back("lambda");
        if (run.blow_up_time)
            out.headline["blow_up_time"] = *run.blow_up_time;
    } else if (cfg.model == "inviscid") {
        Profile p = cfg.profile.build();
        double eps = scalar(cfg.epsilon, "epsilon");
        InviscidRun run =
            evolve_inviscid(p, eps, cfg.t_end, cfg.dt, cfg.output_times);
        save("trajectory.csv", run.trajectory);
        out.headline["lambda_end"] = run.trajectory.back("lambda");
        out.headline["rate_end"] = run.trajectory.back("dlambda_dt");
    } else if (cfg.model == "diffusive") {
        double eps = scalar(cfg.epsilon, "epsilon");
        double dx = scalar(cfg.dx, "dx");
        DiffusiveState s =
            cfg.profile.kind == "delta"
                ? delta_datum(dx, eps, cfg.x_max)
                : init_grid(cfg.profile.build(), eps, dx, cfg.x_max);
        s.predictor_corrector = cfg.predictor_corrector;
        DiffusiveRunResult run =
            run_to(std::move(s), cfg.t_end, cfg.output_times);
        save("trajectory.csv", run.trajectory);
        std::vector<double> xs(run.state.active);
        std::vector<double> cs(run.state.active);
        for (std::size_t i = 0; i < run.state.active; ++i) {
            xs[i] = (double(i) + 1.0) * run.state.dx;
            cs[i] = run.state.c[i];
        }
        fs::path snap = dir / "snapshot.csv";
        write_csv_pairs(snap.string(), "x", "c", xs, cs);
        out.files.push_back(snap.string());
        out.headline["lambda_end"] = run.state.lambda;
        out.headline["mass_x_end"] = run.state.mass_x;
    } else if (cfg.model == "viscous") {
        Profile p = cfg.profile.build();
        double eps = scalar(cfg.epsilon, "epsilon");
        double dx = scalar(cfg.dx, "dx");
        double nu = scalar(cfg.nu, "nu");
        ViscousState s = init_viscous(p, eps, nu, dx, cfg.x_max);
        ViscousRunResult run = run_viscous_to(s, cfg.t_end, cfg.output_times);
        save("trajectory.csv", run.trajectory);
        std::vector<double> xs(s.v.size()), vs(s.v.size());
        for (std::size_t i = 0; i < s.v.size(); ++i) {
            xs[i] = double(i) * s.dx;
            vs[i] = s.v[i];
        }
        fs::path snap = dir / "snapshot.csv";
        write_csv_pairs(snap.string(), "x", "v", xs, vs);
        out.files.push_back(snap.string());
        out.headline["lambda_end"] = s.lambda;
        out.headline["bw7_ok"] = s.lambda_monotone_guaranteed;
    } else if (cfg.model == "bridge") {
        double a = scalar(cfg.bridge_a, "A");
        Trajectory table;
        table.columns = {"epsilon", "x", "y", "T", "p_hat", "se", "rhs_a3"};
        Coeffs cT = const_a_closed_form(a, cfg.bridge_T);
        for (double eps : cfg.epsilon) {
            BridgeSpec spec;
            spec.drift = DriftSpec::constant(a);
            spec.T = cfg.bridge_T;
            spec.epsilon = eps;
            spec.y = cfg.bridge_y;
            spec.x = cfg.bridge_use_lambda ? cfg.bridge_lambda * eps
                                           : cfg.bridge_x;
            spec.n_paths = cfg.n_paths;
            spec.n_steps = cfg.n_steps;
            spec.seed = cfg.seed;
            spec.threads = threads;
            auto method = cfg.bridge_method == "markov_drift"
                              ? BridgeMethod::markov_drift
                              : BridgeMethod::kernel_factor;
            auto [p_hat, se] = survival_probability_mc(spec, method);
            double rhs = cfg.bridge_use_lambda
                             ? prop51_rhs(cT, cfg.bridge_lambda, cfg.bridge_y)
                             : std::numeric_limits<double>::quiet_NaN();
            table.rows.push_back(
                {eps, spec.x, spec.y, spec.T, p_hat, se, rhs});
        }
        save("results.csv", table);
        out.headline["p_hat_last"] = table.rows.back()[4];
    } else if (cfg.model == "study") {
        Profile p = cfg.profile.build();
        if (cfg.eps_list.empty())
            throw validation_error("study: eps_list is required");
        double dx = scalar(cfg.dx, "dx");
        auto rows = analysis::eps_convergence_study(p, cfg.eps_list,
                                                    cfg.study_T, dx,
                                                    cfg.x_max);
        Trajectory table;
        table.columns = {"epsilon", "sup_lambda_err", "sup_w_err", "rate_gap"};
        for (const auto& r : rows)
            table.rows.push_back(
                {r.epsilon, r.sup_lambda_err, r.sup_w_err, r.rate_gap});
        save("study.csv", table);
        out.headline["rate_gap_last"] = rows.back().rate_gap;
    } else {
        throw validation_error("unknown model " + cfg.model);
    }
    return out;
}

void write_manifest(const fs::path& dir, const RunConfig& cfg,
                    const RunOutput& out, double wall_seconds,
                    const std::string& error_class,
                    const std::string& error_message) {
    json m;
    m["version"] = kVersion;
    m["seed"] = cfg.seed;
    m["model"] = cfg.model;
    m["wall_seconds"] = wall_seconds;
    m["headline"] = out.headline;
    if (!error_class.empty()) {
        m["error_class"] = error_class;
        m["error_message"] = error_message;
    }
    json files = json::array();
    for (const auto& f : out.files) {
        json e;
        e["path"] = fs::path(f).filename().string();
        e["fnv1a64"] = file_hash_hex(f);
        files.push_back(e);
    }
    m["outputs"] = files;
    std::ofstream o(dir / "manifest.json");
    o << m.dump(2) << "\n";
}

}  // namespace

int run_experiment(const RunConfig& cfg, int threads) {
    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    auto t0 = std::chrono::steady_clock::now();
    RunOutput out;
    std::string err_class, err_msg;
    int code = 0;
    try {
        out = execute(cfg, dir, threads);
    } catch (const validation_error& e) {
        err_class = "validation";
        err_msg = e.what();
        code = 3;
    } catch (const numeric_error& e) {
        err_class = "numeric";
        err_msg = e.what();
        code = 4;
    }
    double wall = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    write_manifest(dir, cfg, out, wall, err_class, err_msg);
    return code;
}

int run_sweep(const RunConfig& cfg, int threads) {
    if (!cfg.has_lists())
        throw validation_error("sweep: no list-valued parameter");
    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    auto t0 = std::chrono::steady_clock::now();

    Trajectory table;
    table.columns = {"epsilon", "dx",       "nu",     "A",
                     "exit",    "lambda_end", "p_hat"};
    RunOutput agg;
    // deterministic product order: epsilon, dx, nu, A
    for (double eps : cfg.epsilon)
        for (double dxv : cfg.dx)
            for (double nuv : cfg.nu)
                for (double av : cfg.bridge_a) {
                    RunConfig cell = cfg;
                    cell.epsilon = {eps};
                    cell.dx = {dxv};
                    cell.nu = {nuv};
                    cell.bridge_a = {av};
                    std::ostringstream name;
                    name << "cell_eps" << eps << "_dx" << dxv << "_nu" << nuv
                         << "_A" << av;
                    cell.out_dir = (dir / name.str()).string();
                    int code = run_experiment(cell, threads);
                    double lam = std::numeric_limits<double>::quiet_NaN();
                    double ph = std::numeric_limits<double>::quiet_NaN();
                    std::ifstream mf(fs::path(cell.out_dir) / "manifest.json");
                    if (mf) {
                        json m = json::parse(mf, nullptr, false);
                        if (m.is_object() && m.contains("headline")) {
                            if (m["headline"].contains("lambda_end"))
                                lam = m["headline"]["lambda_end"];
                            if (m["headline"].contains("p_hat_last"))
                                ph = m["headline"]["p_hat_last"];
                        }
                    }
                    table.rows.push_back(
                        {eps, dxv, nuv, av, double(code), lam, ph});
                }
    fs::path sweep_csv = dir / "sweep.csv";
    write_csv(sweep_csv.string(), table);
    agg.files.push_back(sweep_csv.string());
    double wall = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    write_manifest(dir, cfg, agg, wall, "", "");
    return 0;
}

}  // namespace cpsim
