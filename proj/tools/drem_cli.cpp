// Command-line front end: scenario listing, monotonicity certification,
// scenario execution with CSV traces, and estimator gain validation.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
#include "CLI11.hpp"

#include "nlpre/certify.hpp"
#include "nlpre/estimator.hpp"
#include "nlpre/scenario.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

nlpre::Config overlay_from_pairs(const std::string& scenario,
                                const std::vector<std::string>& pairs) {
    nlpre::Config overlay;
    overlay.scenario = scenario;
    for (const auto& pair : pairs) {
        const size_t eq = pair.find('=');
        if (eq == std::string::npos) {
            throw nlpre::ConfigError("override '" + pair + "' is not of the form key=value");
        }
        overlay.set(pair.substr(0, eq), nlpre::parse_config_value(pair.substr(eq + 1)));
    }
    return overlay;
}

// Defaults layered with an optional config file and command-line overrides.
nlpre::Config resolve_config(const std::string& scenario, const std::string& config_path,
                            const std::vector<std::string>& overrides) {
    nlpre::Config cfg = nlpre::scenario_defaults(scenario);
    if (!config_path.empty()) {
        nlpre::Config file_cfg = nlpre::parse_config_file(config_path);
        if (!file_cfg.scenario.empty() && file_cfg.scenario != scenario) {
            throw nlpre::ConfigError("config file is for scenario '" + file_cfg.scenario +
                                    "', requested '" + scenario + "'");
        }
        file_cfg.scenario = scenario;
        cfg = nlpre::merge_config(cfg, file_cfg);
    }
    cfg = nlpre::merge_config(cfg, overlay_from_pairs(scenario, overrides));
    return cfg;
}

std::string output_path(const nlpre::Config& cfg, const std::string& out_flag) {
    std::string configured = cfg.has("out") ? cfg.text("out") : "";
    if (!out_flag.empty()) configured = "";
    std::string dir = out_flag;
    if (dir.empty()) {
        if (!configured.empty()) return configured;  // full path from config
        if (const char* env = std::getenv("DREM_OUT_DIR")) dir = env;
    }
    if (dir.empty()) dir = ".";
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / (cfg.scenario + ".csv")).string();
}

int run_one(const nlpre::Config& cfg, const std::string& out_flag, std::mutex& io_mutex) {
    const nlpre::RunResult result = nlpre::run_scenario(cfg);
    const std::string path = output_path(cfg, out_flag);
    nlpre::export_csv(result.trace, path);

    std::lock_guard<std::mutex> lock(io_mutex);
    for (const auto& warning : result.warnings) {
        std::cout << "[" << cfg.scenario << "] warning: " << warning << "\n";
    }
    std::cout << "[" << cfg.scenario << "] trace: " << path << " (" << result.trace.rows.size()
              << " rows)\n";
    for (const auto& [key, value] : result.summary) {
        std::printf("[%s] %s = %.6g\n", cfg.scenario.c_str(), key.c_str(), value);
    }
    return kExitOk;
}

void print_report(const std::string& label, const nlpre::CertificateReport& report,
                  const std::string& bound) {
    std::printf("%-22s %s  statistic=%.6g  bound=%s  samples=%ld\n", label.c_str(),
                report.passed ? "pass" : "FAIL", report.statistic, bound.c_str(),
                report.samples_checked);
    if (!report.passed && report.worst_point.size()) {
        std::printf("%-22s witness eta = [", "");
        for (nlpre::Index i = 0; i < report.worst_point.size(); ++i) {
            std::printf("%s%.6g", i ? ", " : "", report.worst_point[i]);
        }
        std::printf("]\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DREM-based estimation scenarios for factorizable nonlinear regressions"};
    app.require_subcommand(1);

    auto* cmd_list = app.add_subcommand("list", "List registered scenarios");

    std::string scenario;
    long samples = 2000;
    unsigned seed = 1;
    std::vector<std::string> overrides;
    auto* cmd_certify =
        app.add_subcommand("certify", "Sample the monotonicity and Lipschitz certificates");
    cmd_certify->add_option("scenario", scenario, "registered scenario name")->required();
    cmd_certify->add_option("--samples", samples, "sample count");
    cmd_certify->add_option("--seed", seed, "sampler seed");
    cmd_certify->add_option("--set", overrides, "override key=value (e.g. P_diag=[0.5,0.5,1,1])");

    std::vector<std::string> run_scenarios;
    std::string config_path;
    std::string out_dir;
    unsigned jobs = 1;
    std::vector<std::string> run_overrides;
    double flag_gamma = std::numeric_limits<double>::quiet_NaN();
    double flag_kappa = std::numeric_limits<double>::quiet_NaN();
    double flag_alpha = std::numeric_limits<double>::quiet_NaN();
    double flag_lambda = std::numeric_limits<double>::quiet_NaN();
    double flag_horizon = std::numeric_limits<double>::quiet_NaN();
    double flag_h = std::numeric_limits<double>::quiet_NaN();
    double flag_seed = std::numeric_limits<double>::quiet_NaN();
    auto* cmd_run = app.add_subcommand("run", "Run scenarios and export CSV traces");
    cmd_run->add_option("scenario", run_scenarios, "scenario names")->required();
    cmd_run->add_option("--config", config_path, "config file (key = value lines)");
    cmd_run->add_option("--out", out_dir, "output directory (default $DREM_OUT_DIR or .)");
    cmd_run->add_option("--jobs", jobs, "run scenarios in parallel");
    cmd_run->add_option("--set", run_overrides, "override key=value");
    cmd_run->add_option("--gamma", flag_gamma, "adaptation gain");
    cmd_run->add_option("--kappa", flag_kappa, "normalization constant");
    cmd_run->add_option("--alpha", flag_alpha, "extension filter pole (DT)");
    cmd_run->add_option("--lambda", flag_lambda, "extension filter pole (CT)");
    cmd_run->add_option("--horizon", flag_horizon, "run length (s or samples)");
    cmd_run->add_option("--step", flag_h, "integrator step h (CT)");
    cmd_run->add_option("--seed", flag_seed, "scenario seed");

    std::string gains_scenario;
    double rho = 2.0, nu = 1.0, vg_gamma = 1.0, vg_kappa = 1.0, lmax = 1.0;
    auto* cmd_gains = app.add_subcommand("validate-gains", "Check a DT gain pair against (rho, nu, P)");
    cmd_gains->add_option("--scenario", gains_scenario,
                          "take rho, nu and P from a registered scenario");
    cmd_gains->add_option("--rho", rho, "monotonicity margin");
    cmd_gains->add_option("--nu", nu, "Lipschitz bound");
    cmd_gains->add_option("--lmax", lmax, "largest eigenvalue of P");
    cmd_gains->add_option("--gamma", vg_gamma, "adaptation gain")->required();
    cmd_gains->add_option("--kappa", vg_kappa, "normalization constant")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*cmd_list) {
            for (const auto& info : nlpre::scenario_list()) {
                std::printf("%-22s %-8s %s\n", info.name.c_str(), info.anchor.c_str(),
                            info.summary.c_str());
            }
            return kExitOk;
        }

        if (*cmd_certify) {
            nlpre::Config cfg = nlpre::scenario_defaults(scenario);
            cfg = nlpre::merge_config(cfg, overlay_from_pairs(scenario, overrides));
            const nlpre::FactorizedNPRE npre = nlpre::scenario_npre(scenario, &cfg);
            const auto dem = nlpre::check_demidovich(npre, samples, seed);
            const auto lip = nlpre::check_lipschitz(npre, samples, seed);
            print_report("demidovich", dem, "rho=" + std::to_string(npre.change.rho));
            print_report("lipschitz", lip, "nu=" + std::to_string(npre.change.nu));
            return (dem.passed && lip.passed) ? kExitOk : kExitRuntime;
        }

        if (*cmd_run) {
            std::vector<nlpre::Config> configs;
            for (const auto& name : run_scenarios) {
                nlpre::Config cfg = resolve_config(name, config_path, run_overrides);
                auto set_flag = [&](const char* key, double value) {
                    if (!std::isnan(value)) {
                        nlpre::Config one;
                        one.scenario = name;
                        one.set(key, nlpre::ConfigValue::from_number(value));
                        cfg = nlpre::merge_config(cfg, one);
                    }
                };
                set_flag("gamma", flag_gamma);
                set_flag("kappa", flag_kappa);
                set_flag("alpha", flag_alpha);
                set_flag("lambda", flag_lambda);
                set_flag("horizon", flag_horizon);
                set_flag("h", flag_h);
                set_flag("seed", flag_seed);
                configs.push_back(std::move(cfg));
            }

            std::mutex io_mutex;
            if (jobs <= 1 || configs.size() <= 1) {
                for (const auto& cfg : configs) run_one(cfg, out_dir, io_mutex);
            } else {
                std::vector<std::thread> workers;
                std::exception_ptr first_error;
                std::mutex error_mutex;
                size_t next = 0;
                std::mutex next_mutex;
                for (unsigned w = 0; w < std::min<size_t>(jobs, configs.size()); ++w) {
                    workers.emplace_back([&]() {
                        for (;;) {
                            size_t index;
                            {
                                std::lock_guard<std::mutex> lock(next_mutex);
                                if (next >= configs.size()) return;
                                index = next++;
                            }
                            try {
                                run_one(configs[index], out_dir, io_mutex);
                            } catch (...) {
                                std::lock_guard<std::mutex> lock(error_mutex);
                                if (!first_error) first_error = std::current_exception();
                            }
                        }
                    });
                }
                for (auto& worker : workers) worker.join();
                if (first_error) std::rethrow_exception(first_error);
            }
            return kExitOk;
        }

        if (*cmd_gains) {
            nlpre::Mat p = nlpre::Mat::Identity(1, 1) * lmax;
            if (!gains_scenario.empty()) {
                const nlpre::FactorizedNPRE npre = nlpre::scenario_npre(gains_scenario);
                rho = npre.change.rho;
                nu = npre.change.nu;
                p = npre.change.P;
            }
            const nlpre::GainReport report = nlpre::validate_dt_gains(rho, nu, p, vg_gamma, vg_kappa);
            std::printf("sigma = %.12g (admissible)\n", report.sigma);
            std::printf("kappa >= %.12g required, kappa = %.12g given\n", report.kappa_min, vg_kappa);
            std::printf("gamma upper bound (open): %.12g\n", report.gamma_max);
            if (report.interval_applicable) {
                std::printf("l2-excitation interval: gamma in [%.12g, %.12g]\n", report.gamma_lo,
                            report.gamma_hi);
            } else {
                std::printf("l2-excitation interval: not applicable (nu > rho / lmax(P))\n");
            }
            return kExitOk;
        }
    } catch (const nlpre::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlpre::GainError& e) {
        std::cerr << "gain validation failed: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
