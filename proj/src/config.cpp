#include "cpsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cpsim/errors.hpp"
#include "cpsim/trajectory.hpp"

namespace cpsim {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw config_error("unknown key '" + it.key() + "' in " + where);
}

std::vector<double> as_list(const json& v, const std::string& where) {
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
    } else if (v.is_array()) {
        for (const auto& e : v) {
            if (!e.is_number())
                throw config_error(where + ": list entries must be numbers");
            out.push_back(e.get<double>());
        }
        if (out.empty()) throw config_error(where + ": empty list");
    } else {
        throw config_error(where + ": expected number or list");
    }
    return out;
}

}  // namespace

Profile ProfileSpec::build() const {
    if (kind == "self_similar") return Profile::self_similar(beta);
    if (kind == "gaussian") return Profile::gaussian(length);
    if (kind == "tabulated") {
        if (!csv_path.empty()) {
            std::vector<double> x, v;
            read_csv_pairs(csv_path, x, v);
            return Profile::tabulated(std::move(x), std::move(v), x_inf);
        }
        return Profile::tabulated(x_nodes, v_values, x_inf);
    }
    throw validation_error("profile kind '" + kind +
                           "' cannot build a Profile");
}

bool RunConfig::has_lists() const {
    return epsilon.size() > 1 || dx.size() > 1 || nu.size() > 1 ||
           bridge_a.size() > 1;
}

RunConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    if (!root.is_object()) throw config_error("config must be a JSON object");
    check_keys(root,
               {"model", "profile", "solver", "bridge", "study", "seed",
                "out"},
               "config");

    RunConfig cfg;
    if (!root.contains("model") || !root["model"].is_string())
        throw config_error("config: 'model' (string) is required");
    cfg.model = root["model"].get<std::string>();
    static const std::set<std::string> kModels{"cp",      "inviscid",
                                               "diffusive", "viscous",
                                               "bridge",  "study"};
    if (!kModels.count(cfg.model))
        throw config_error("config: unknown model '" + cfg.model + "'");

    if (root.contains("profile")) {
        const json& p = root["profile"];
        check_keys(p, {"kind", "beta", "L", "x", "v", "x_inf", "csv"},
                   "profile");
        if (!p.contains("kind") || !p["kind"].is_string())
            throw config_error("profile: 'kind' (string) is required");
        cfg.profile.kind = p["kind"].get<std::string>();
        static const std::set<std::string> kKinds{"self_similar", "gaussian",
                                                  "tabulated", "delta"};
        if (!kKinds.count(cfg.profile.kind))
            throw config_error("profile: unknown kind '" + cfg.profile.kind +
                               "'");
        if (p.contains("beta")) cfg.profile.beta = p["beta"].get<double>();
        if (p.contains("L")) cfg.profile.length = p["L"].get<double>();
        if (p.contains("x_inf")) cfg.profile.x_inf = p["x_inf"].get<double>();
        if (p.contains("csv"))
            cfg.profile.csv_path = p["csv"].get<std::string>();
        if (p.contains("x"))
            cfg.profile.x_nodes = as_list(p["x"], "profile.x");
        if (p.contains("v"))
            cfg.profile.v_values = as_list(p["v"], "profile.v");
    } else if (cfg.model != "bridge") {
        throw config_error("config: 'profile' is required for model " +
                           cfg.model);
    }

    if (root.contains("solver")) {
        const json& s = root["solver"];
        check_keys(s,
                   {"epsilon", "dx", "dt", "nu", "t_end", "x_max",
                    "output_times", "predictor_corrector"},
                   "solver");
        if (s.contains("epsilon")) cfg.epsilon = as_list(s["epsilon"], "solver.epsilon");
        if (s.contains("dx")) cfg.dx = as_list(s["dx"], "solver.dx");
        if (s.contains("nu")) cfg.nu = as_list(s["nu"], "solver.nu");
        if (s.contains("dt")) cfg.dt = s["dt"].get<double>();
        if (s.contains("t_end")) cfg.t_end = s["t_end"].get<double>();
        if (s.contains("x_max")) cfg.x_max = s["x_max"].get<double>();
        if (s.contains("output_times"))
            cfg.output_times = as_list(s["output_times"], "solver.output_times");
        if (s.contains("predictor_corrector"))
            cfg.predictor_corrector = s["predictor_corrector"].get<bool>();
        if (cfg.dt <= 0.0 || cfg.t_end <= 0.0)
            throw config_error("solver: dt and t_end must be positive");
    }

    if (root.contains("bridge")) {
        const json& b = root["bridge"];
        check_keys(b,
                   {"T", "x", "y", "lambda", "epsilon", "A", "n_paths",
                    "n_steps", "method"},
                   "bridge");
        if (b.contains("T")) cfg.bridge_T = b["T"].get<double>();
        if (b.contains("x")) cfg.bridge_x = b["x"].get<double>();
        if (b.contains("y")) cfg.bridge_y = b["y"].get<double>();
        if (b.contains("lambda")) {
            cfg.bridge_lambda = b["lambda"].get<double>();
            cfg.bridge_use_lambda = true;
        }
        if (b.contains("epsilon"))
            cfg.epsilon = as_list(b["epsilon"], "bridge.epsilon");
        if (b.contains("A")) cfg.bridge_a = as_list(b["A"], "bridge.A");
        if (b.contains("n_paths"))
            cfg.n_paths = b["n_paths"].get<std::size_t>();
        if (b.contains("n_steps"))
            cfg.n_steps = b["n_steps"].get<std::size_t>();
        if (b.contains("method")) {
            cfg.bridge_method = b["method"].get<std::string>();
            if (cfg.bridge_method != "kernel_factor" &&
                cfg.bridge_method != "markov_drift")
                throw config_error("bridge: unknown method '" +
                                   cfg.bridge_method + "'");
        }
    }

    if (root.contains("study")) {
        const json& s = root["study"];
        check_keys(s, {"eps_list", "T"}, "study");
        if (s.contains("eps_list"))
            cfg.eps_list = as_list(s["eps_list"], "study.eps_list");
        if (s.contains("T")) cfg.study_T = s["T"].get<double>();
    }

    if (root.contains("seed")) cfg.seed = root["seed"].get<std::uint64_t>();
    if (root.contains("out")) cfg.out_dir = root["out"].get<std::string>();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace cpsim
