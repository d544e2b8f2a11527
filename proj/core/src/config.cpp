#include "bcdprox/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace bcdprox {

namespace {

using nlohmann::json;

void check_keys(const json &obj, const std::set<std::string> &allowed, const std::string &where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (allowed.find(it.key()) == allowed.end()) {
            throw ContractError("config: unknown key '" + it.key() + "' in " + where);
        }
    }
}

} // namespace

ExperimentConfig parse_config(const std::string &json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw ContractError(std::string("config: JSON parse error: ") + e.what());
    }
    if (!root.is_object()) { throw ContractError("config: top level must be a JSON object"); }
    check_keys(root,
               {"model", "t0", "t_end", "dt", "noise", "lambda", "order", "theta_init",
                "theta_true", "replicates", "methods", "out_dir"},
               "top level");

    ExperimentConfig cfg;
    try {
        if (!root.contains("model")) { throw ContractError("config: missing required key 'model'"); }
        cfg.model = root.at("model").get<std::string>();
        if (!is_benchmark_name(cfg.model)) {
            throw ContractError("config: unknown model '" + cfg.model + "'");
        }

        if (root.contains("t0")) { cfg.t0 = root.at("t0").get<double>(); }
        if (root.contains("t_end")) { cfg.t_end = root.at("t_end").get<double>(); }
        if (root.contains("dt")) { cfg.dt = root.at("dt").get<double>(); }

        if (root.contains("noise")) {
            const json &noise = root.at("noise");
            check_keys(noise, {"kind", "variance", "seed"}, "noise");
            if (noise.contains("kind")) {
                const auto kind = noise.at("kind").get<std::string>();
                if (kind == "gaussian") {
                    cfg.noise.kind = NoiseSpec::Kind::gaussian;
                } else if (kind == "laplacian") {
                    cfg.noise.kind = NoiseSpec::Kind::laplacian;
                } else {
                    throw ContractError("config: noise.kind must be gaussian or laplacian");
                }
            }
            if (noise.contains("variance")) { cfg.noise.variance = noise.at("variance").get<double>(); }
            if (noise.contains("seed")) { cfg.noise.seed = noise.at("seed").get<std::uint64_t>(); }
        }

        if (root.contains("lambda")) { cfg.lambda = root.at("lambda").get<double>(); }
        if (root.contains("order")) { cfg.order = root.at("order").get<int>(); }

        if (root.contains("theta_init")) {
            const json &ti = root.at("theta_init");
            check_keys(ti, {"sigma2", "seed"}, "theta_init");
            if (ti.contains("sigma2")) { cfg.theta_init.sigma2 = ti.at("sigma2").get<double>(); }
            if (ti.contains("seed")) { cfg.theta_init.seed = ti.at("seed").get<std::uint64_t>(); }
        }

        if (root.contains("theta_true")) {
            const json &tt = root.at("theta_true");
            if (!tt.is_array() || tt.empty()) {
                throw ContractError("config: theta_true must be a nonempty array");
            }
            Vector v(static_cast<Eigen::Index>(tt.size()));
            for (std::size_t i = 0; i < tt.size(); ++i) {
                v[static_cast<Eigen::Index>(i)] = tt.at(i).get<double>();
            }
            cfg.theta_true = v;
        }

        if (root.contains("replicates")) { cfg.replicates = root.at("replicates").get<int>(); }
        if (cfg.replicates < 1) { throw ContractError("config: replicates must be >= 1"); }

        if (root.contains("methods")) {
            const json &methods = root.at("methods");
            if (!methods.is_array() || methods.empty()) {
                throw ContractError("config: methods must be a nonempty array");
            }
            cfg.methods.clear();
            for (const auto &entry : methods) {
                const auto name = entry.get<std::string>();
                const auto method = method_from_string(name);
                if (!method.has_value()) { throw ContractError("config: unknown method '" + name + "'"); }
                cfg.methods.push_back(*method);
            }
        }

        if (root.contains("out_dir")) { cfg.out_dir = root.at("out_dir").get<std::string>(); }

        if (!(cfg.lambda >= 0.0)) { throw ContractError("config: lambda must be nonnegative"); }
        if (cfg.order < 1 || cfg.order > 5) { throw ContractError("config: order must be in [1, 5]"); }
        if (!(cfg.noise.variance >= 0.0)) { throw ContractError("config: noise.variance must be nonnegative"); }
        if (!(cfg.theta_init.sigma2 >= 0.0)) {
            throw ContractError("config: theta_init.sigma2 must be nonnegative");
        }
    } catch (const json::exception &e) {
        throw ContractError(std::string("config: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) { throw ContractError("config: cannot open " + path.string()); }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace bcdprox
