#include "nlpre/scenario.hpp"

#include "nlpre/appc.hpp"
#include "nlpre/robot.hpp"
#include "nlpre/solar.hpp"

#include <cmath>

namespace nlpre {

const std::vector<ScenarioInfo>& scenario_list() {
    static const std::vector<ScenarioInfo> scenarios = {
        {"robot2dof-drem", "S5.2.5",
         "two-link arm, tracking control with filtered-torque parameter estimation"},
        {"robot2dof-overparam", "S5.2.5",
         "two-link arm, classical adaptive tracking over the extended parameter vector"},
        {"solar", "S6.1", "solar-heated house identification, 10-minute sampling"},
        {"appc-indirect", "S6.2.2", "first-order plant, deadbeat pole placement, switching parameter"},
        {"appc-direct", "S6.2.3", "second-order plant, deadbeat controller coefficients estimated directly"},
    };
    return scenarios;
}

namespace {

Config common_defaults(const std::string& name) {
    Config cfg;
    cfg.scenario = name;
    cfg.set("seed", ConfigValue::from_number(1));
    cfg.set("out", ConfigValue::from_text(""));
    return cfg;
}

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

}  // namespace

Config scenario_defaults(const std::string& name) {
    if (name == "robot2dof-drem") {
        Config cfg = common_defaults(name);
        cfg.set("horizon", ConfigValue::from_number(20.0));
        cfg.set("h", ConfigValue::from_number(1e-3));
        cfg.set("g", ConfigValue::from_number(kRobotDefaultGravity));
        Vec theta(4);
        theta << 0.7, 0.8, 1.5, 0.5;
        cfg.set("theta", ConfigValue::from_vector(theta));
        cfg.set("theta_hat0", ConfigValue::from_vector(Vec::Constant(4, 0.01)));
        cfg.set("q0", ConfigValue::from_vector(vec2(0.2 * M_PI, 0.3 * M_PI)));
        cfg.set("dq0", ConfigValue::from_vector(vec2(0.0, 0.0)));
        cfg.set("lambda", ConfigValue::from_number(2.0));      // extension filter pole
        cfg.set("lambda_reg", ConfigValue::from_number(1.0));  // regressor filter pole
        cfg.set("Gamma_diag", ConfigValue::from_vector(Vec::Constant(4, 5.0)));
        cfg.set("P_diag", ConfigValue::from_vector(Vec::Ones(4)));
        cfg.set("K1_diag", ConfigValue::from_vector(vec2(3.0, 3.0)));
        cfg.set("K2_diag", ConfigValue::from_vector(vec2(1.0, 1.0)));
        return cfg;
    }
    if (name == "robot2dof-overparam") {
        Config cfg = common_defaults(name);
        cfg.set("horizon", ConfigValue::from_number(20.0));
        cfg.set("h", ConfigValue::from_number(1e-3));
        cfg.set("g", ConfigValue::from_number(kRobotDefaultGravity));
        Vec theta(4);
        theta << 0.7, 0.8, 1.5, 0.5;
        cfg.set("theta", ConfigValue::from_vector(theta));
        cfg.set("S_hat0", ConfigValue::from_vector(Vec::Constant(5, 0.01)));
        cfg.set("q0", ConfigValue::from_vector(vec2(0.2 * M_PI, 0.3 * M_PI)));
        cfg.set("dq0", ConfigValue::from_vector(vec2(0.0, 0.0)));
        cfg.set("Gamma_diag", ConfigValue::from_vector(Vec::Constant(5, 5.0)));
        cfg.set("K1_diag", ConfigValue::from_vector(vec2(3.0, 3.0)));
        cfg.set("K2_diag", ConfigValue::from_vector(vec2(1.0, 1.0)));
        return cfg;
    }
    if (name == "solar") {
        Config cfg = common_defaults(name);
        cfg.set("horizon", ConfigValue::from_number(96));
        cfg.set("alpha", ConfigValue::from_number(0.9));
        cfg.set("gamma", ConfigValue::from_number(1.0));
        cfg.set("kappa", ConfigValue::from_number(3.0));
        cfg.set("P_diag", ConfigValue::from_vector(Vec::Ones(4)));
        cfg.set("theta", ConfigValue::from_vector(Vec::Constant(4, 0.5)));
        // eta_hat0 defaults to eta - 0.5 per component, derived at run time
        cfg.set("eta_hat0", ConfigValue::from_text("auto"));
        cfg.set("baseline_gamma", ConfigValue::from_number(1.0));
        cfg.set("S_hat0", ConfigValue::from_vector(Vec::Zero(6)));
        return cfg;
    }
    if (name == "appc-indirect") {
        Config cfg = common_defaults(name);
        cfg.set("horizon", ConfigValue::from_number(150));
        cfg.set("alpha", ConfigValue::from_number(0.9));
        cfg.set("gamma", ConfigValue::from_number(1.0));
        cfg.set("kappa", ConfigValue::from_number(2.0));
        cfg.set("P_diag", ConfigValue::from_vector(Vec::Ones(1)));
        cfg.set("theta_initial", ConfigValue::from_number(0.5));
        cfg.set("theta_switched", ConfigValue::from_number(-0.5));
        cfg.set("switch_sample", ConfigValue::from_number(50));
        cfg.set("theta_hat0", ConfigValue::from_number(0.5));
        Vec s0(2);
        s0 << 0.5, 0.125;
        cfg.set("S_hat0", ConfigValue::from_vector(s0));
        cfg.set("baseline_gamma", ConfigValue::from_number(1.0));
        cfg.set("r_amp", ConfigValue::from_number(1.0));
        cfg.set("r_freq", ConfigValue::from_number(1.57));
        cfg.set("overparam", ConfigValue::from_number(0));
        return cfg;
    }
    if (name == "appc-direct") {
        Config cfg = common_defaults(name);
        cfg.set("horizon", ConfigValue::from_number(200));
        cfg.set("alpha", ConfigValue::from_number(0.9));
        cfg.set("gamma", ConfigValue::from_number(1.0));
        cfg.set("kappa", ConfigValue::from_number(3.0));
        cfg.set("P_diag", ConfigValue::from_vector(Vec::Ones(4)));
        cfg.set("a1", ConfigValue::from_number(-0.5));
        cfg.set("b1", ConfigValue::from_number(1.0));
        cfg.set("b2", ConfigValue::from_number(0.5));
        Vec eta0(4);
        eta0 << 0.5, 0.05, 0.1, 0.2;
        cfg.set("eta_hat0", ConfigValue::from_vector(eta0));
        cfg.set("r_amp", ConfigValue::from_number(1.0));
        cfg.set("r_freq", ConfigValue::from_number(1.57));
        cfg.set("r_amp2", ConfigValue::from_number(0.5));
        cfg.set("r_freq2", ConfigValue::from_number(0.7));
        cfg.set("r_amp3", ConfigValue::from_number(0.25));
        cfg.set("r_freq3", ConfigValue::from_number(1.3));
        return cfg;
    }
    std::string names;
    for (const auto& s : scenario_list()) {
        if (!names.empty()) names += ", ";
        names += s.name;
    }
    throw ConfigError("unknown scenario '" + name + "'; registered scenarios: " + names);
}

FactorizedNPRE scenario_npre(const std::string& name, const Config* config) {
    if (name == "robot2dof-drem" || name == "robot2dof-overparam" || name == "robot2dof") {
        double a = 1.0;
        if (config && config->has("P_diag") &&
            config->values.at("P_diag").kind == ConfigValue::Kind::Vector) {
            a = config->vector("P_diag")[0];
        }
        return robot_npre(a);
    }
    if (name == "solar") return solar_npre();
    if (name == "appc-indirect") return appc_indirect_npre();
    if (name == "appc-direct") return appc_direct_npre();
    throw ConfigError("no regression registered under '" + name + "'");
}

RunResult run_scenario(const Config& config) {
    const std::string& name = config.scenario;
    if (name == "robot2dof-drem" || name == "robot2dof-overparam") return run_ct_scenario(config);
    if (name == "solar" || name == "appc-indirect" || name == "appc-direct") {
        return run_dt_scenario(config);
    }
    throw ConfigError("unknown scenario '" + name + "'");
}

}  // namespace nlpre
