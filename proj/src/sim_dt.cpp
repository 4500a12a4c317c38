// Discrete-time scenario runners: solar-house identification and the two
// pole-placement loops. Each sample advances the plant, builds the regression
// pair, steps the extension with the previous pair, mixes, and updates the
// estimator (plus the overparameterized gradient baseline where it applies).
#include "nlpre/scenario.hpp"

#include "nlpre/appc.hpp"
#include "nlpre/estimator.hpp"
#include "nlpre/extension.hpp"
#include "nlpre/solar.hpp"

#include <cmath>
#include <deque>

namespace nlpre {

namespace {

constexpr double kInverseHoldTol = 1e-6;

std::vector<std::string> numbered(const std::string& stem, Index n) {
    std::vector<std::string> names;
    for (Index i = 0; i < n; ++i) names.push_back(stem + std::to_string(i + 1));
    return names;
}

double sigma_of(const Config& cfg, const ParameterChange& change, std::vector<std::string>& warnings) {
    const double gamma = cfg.number("gamma");
    const double kappa = cfg.number("kappa");
    const double lmax = Vec(cfg.vector("P_diag")).maxCoeff();
    const double sigma = 2.0 * gamma * change.rho - gamma * gamma * change.nu * change.nu * lmax * lmax;
    try {
        validate_dt_gains(change.rho, change.nu, Mat(cfg.vector("P_diag").asDiagonal()), gamma, kappa);
    } catch (const GainError& err) {
        warnings.push_back(std::string("gain validation: ") + err.what());
    }
    return sigma;
}

RunResult run_solar(const Config& cfg) {
    const long horizon = static_cast<long>(cfg.number("horizon"));
    if (horizon < 0) throw ConfigError("horizon must be non-negative");

    FactorizedNPRE npre = solar_npre();
    const Vec theta = cfg.vector("theta");
    const Vec s_true = solar_s(theta);
    const Vec eta_true = npre.change.forward(theta);

    Vec eta_hat;
    if (cfg.values.at("eta_hat0").kind == ConfigValue::Kind::Text) {
        eta_hat = eta_true.array() - 0.5;
    } else {
        eta_hat = cfg.vector("eta_hat0");
    }

    RunResult result;
    const double sigma = sigma_of(cfg, npre.change, result.warnings);
    DTDremEstimator est{eta_hat, cfg.number("gamma"), cfg.number("kappa"),
                        Mat(cfg.vector("P_diag").asDiagonal()), sigma};
    GradientBaseline baseline{cfg.vector("S_hat0"), cfg.number("baseline_gamma")};
    DTExtensionState ext = DTExtensionState::zero(6, cfg.number("alpha"));
    ExcitationTracker tracker;

    Trace& trace = result.trace;
    trace.scenario = cfg.scenario;
    trace.columns = {"k", "y_p", "u", "intensity"};
    auto add = [&](const std::vector<std::string>& names) {
        trace.columns.insert(trace.columns.end(), names.begin(), names.end());
    };
    add(numbered("omega", 6));
    trace.columns.push_back("delta");
    trace.columns.push_back("delta_sq");
    add(numbered("scriptY", 4));
    add(numbered("eta_hat", 4));
    trace.columns.push_back("eta_err_norm");
    add(numbered("theta_hat", 4));
    trace.columns.push_back("theta_err_norm");
    add(numbered("S_hat", 6));
    trace.columns.push_back("baseline_residual");
    trace.columns.push_back("baseline_S_err_norm");
    trace.columns.push_back("sum_delta_sq_norm");
    trace.columns.push_back("product");
    trace.columns.push_back("singular_flag");

    Vec theta_held = npre.change.inverse(eta_hat);

    // y_p(k) = 0 for k <= 0; omega rows use lagged values, zero before start.
    double yp_prev1 = 0.0, yp_prev2 = 0.0;
    Vec omega_prev = Vec::Zero(6);
    double y_prev = 0.0;

    auto record = [&](long k, double yp, const Vec& omega, const MixedOutput& mixed, bool singular) {
        std::vector<double> row = {static_cast<double>(k), yp, solar_fan(k), solar_intensity(k)};
        for (Index i = 0; i < 6; ++i) row.push_back(omega[i]);
        row.push_back(mixed.delta);
        row.push_back(mixed.delta * mixed.delta);
        for (Index i = 0; i < 4; ++i) row.push_back(mixed.script_y[i]);
        for (Index i = 0; i < 4; ++i) row.push_back(est.eta_hat[i]);
        row.push_back((est.eta_hat - eta_true).norm());
        for (Index i = 0; i < 4; ++i) row.push_back(theta_held[i]);
        row.push_back((theta_held - theta).norm());
        for (Index i = 0; i < 6; ++i) row.push_back(baseline.S_hat[i]);
        row.push_back(y_prev - omega.dot(baseline.S_hat));
        row.push_back((baseline.S_hat - s_true).norm());
        row.push_back(tracker.integral_delta_sq);
        row.push_back(tracker.product);
        row.push_back(singular ? 1.0 : 0.0);
        trace.append(std::move(row));
    };

    record(0, 0.0, Vec::Zero(6), MixedOutput{Vec::Zero(4), 0.0}, false);

    for (long k = 1; k <= horizon; ++k) {
        const double u1 = solar_fan(k - 1), u2 = solar_fan(k - 2);
        const double i2 = solar_intensity(k - 2);
        const Vec omega = solar_omega(yp_prev1, yp_prev2, u1, u2, i2);
        const double yp = omega.dot(s_true);

        ext = dt_extension_step(ext, omega_prev.transpose(), Vec::Constant(1, y_prev));
        const MixedOutput mixed = mix(ext, npre.change);
        est.eta_hat = dt_estimator_step(est, mixed, npre);
        baseline.S_hat = dt_gradient_baseline_step(baseline, omega.transpose(), Vec::Constant(1, yp));
        tracker = track_excitation_dt(tracker, mixed.delta, est.kappa, est.sigma);

        bool singular = false;
        if (std::abs(est.eta_hat[0]) < kInverseHoldTol) {
            singular = true;
            ++result.singular_events;
        } else {
            theta_held = npre.change.inverse(est.eta_hat);
        }

        y_prev = yp;
        omega_prev = omega;
        yp_prev2 = yp_prev1;
        yp_prev1 = yp;
        record(k, yp, omega, mixed, singular);
    }

    const auto& last = trace.rows.back();
    auto col = [&](const std::string& name) {
        for (size_t i = 0; i < trace.columns.size(); ++i)
            if (trace.columns[i] == name) return last[i];
        throw Error("missing trace column " + name);
    };
    result.summary = {
        {"final_eta_err", col("eta_err_norm")},
        {"final_theta_err", col("theta_err_norm")},
        {"baseline_residual", col("baseline_residual")},
        {"baseline_S_err", col("baseline_S_err_norm")},
        {"sum_delta_sq", tracker.sum_delta_sq},
        {"product", tracker.product},
        {"singular_events", static_cast<double>(result.singular_events)},
    };
    return result;
}

RunResult run_appc_indirect(const Config& cfg) {
    const long horizon = static_cast<long>(cfg.number("horizon"));
    if (horizon < 0) throw ConfigError("horizon must be non-negative");
    const long switch_sample = static_cast<long>(cfg.number("switch_sample"));
    const double theta_initial = cfg.number("theta_initial");
    const double theta_switched = cfg.number("theta_switched");
    const double r_amp = cfg.number("r_amp");
    const double r_freq = cfg.number("r_freq");
    const bool overparam = cfg.number("overparam") != 0.0;

    FactorizedNPRE npre = appc_indirect_npre();
    RunResult result;
    const double sigma = sigma_of(cfg, npre.change, result.warnings);
    DTDremEstimator est{Vec::Constant(1, cfg.number("theta_hat0")), cfg.number("gamma"),
                        cfg.number("kappa"), Mat(cfg.vector("P_diag").asDiagonal()), sigma};
    GradientBaseline baseline{cfg.vector("S_hat0"), cfg.number("baseline_gamma")};
    DTExtensionState ext = DTExtensionState::zero(2, cfg.number("alpha"));
    ExcitationTracker tracker;

    auto theta_of = [&](long k) { return k < switch_sample ? theta_initial : theta_switched; };
    auto r_of = [&](long k) { return k < 0 ? 0.0 : r_amp * std::sin(r_freq * static_cast<double>(k)); };

    Trace& trace = result.trace;
    trace.scenario = cfg.scenario;
    trace.columns = {"k",        "theta_true", "y_p",     "u",       "r",
                     "y_reg",    "omega1",     "omega2",  "delta",   "delta_sq",
                     "scriptY1", "theta_hat",  "theta_err", "tracking_err", "S_hat1",
                     "S_hat2",   "baseline_gap", "sum_delta_sq_norm", "product", "singular_flag"};

    double yp = 0.0;       // y_p(k)
    double yp1 = 0.0;      // y_p(k-1)
    double u0 = 0.0;       // u(k)
    double u1 = 0.0;       // u(k-1)
    double u2 = 0.0;       // u(k-2)
    Vec omega_prev = Vec::Zero(2);
    double y_prev = 0.0;

    auto control = [&](long k, double theta_hat) {
        try {
            if (overparam) return appc_indirect_overparam_control(baseline.S_hat, yp, u1, r_of(k));
            return appc_indirect_control(theta_hat, yp, u1, r_of(k));
        } catch (const Error&) {
            ++result.singular_events;
            return u1;  // hold the previous control value
        }
    };

    auto record = [&](long k, const Vec& omega, double y_reg, const MixedOutput& mixed,
                      double err_track, bool singular) {
        std::vector<double> row = {
            static_cast<double>(k), theta_of(k), yp, u0, r_of(k), y_reg, omega[0], omega[1],
            mixed.delta, mixed.delta * mixed.delta,
            mixed.script_y.size() ? mixed.script_y[0] : 0.0, est.eta_hat[0],
            est.eta_hat[0] - theta_of(k), err_track, baseline.S_hat[0], baseline.S_hat[1],
            baseline.S_hat[1] - baseline.S_hat[0], tracker.integral_delta_sq, tracker.product,
            singular ? 1.0 : 0.0};
        trace.append(std::move(row));
    };

    u0 = control(0, est.eta_hat[0]);
    record(0, Vec::Zero(2), 0.0, MixedOutput{Vec::Zero(1), 0.0}, 0.0, false);

    for (long k = 1; k <= horizon; ++k) {
        const double theta = theta_of(k);
        // promote u(k-1) history before computing the new sample
        u2 = u1;
        u1 = u0;
        yp1 = yp;
        yp = appc_indirect_plant_step(theta, yp1, u1, u2);

        Vec omega(2);
        omega << -yp1, u2;
        const double y_reg = yp - u1;

        ext = dt_extension_step(ext, omega_prev.transpose(), Vec::Constant(1, y_prev));
        const MixedOutput mixed = mix(ext, npre.change);
        est.eta_hat = dt_estimator_step(est, mixed, npre);
        baseline.S_hat = dt_gradient_baseline_step(baseline, omega.transpose(), Vec::Constant(1, y_reg));
        tracker = track_excitation_dt(tracker, mixed.delta, est.kappa, est.sigma);

        const long singular_before = result.singular_events;
        u0 = control(k, est.eta_hat[0]);
        const bool singular = result.singular_events != singular_before;

        const double th = theta;
        const double err_track = yp - (r_of(k - 1) + th * th * th * r_of(k - 2));

        omega_prev = omega;
        y_prev = y_reg;
        record(k, omega, y_reg, mixed, err_track, singular);
    }

    const auto& last = trace.rows.back();
    result.summary = {
        {"final_theta_err", std::abs(last[12])},
        {"final_tracking_err", std::abs(last[13])},
        {"sum_delta_sq", tracker.sum_delta_sq},
        {"product", tracker.product},
        {"singular_events", static_cast<double>(result.singular_events)},
    };
    return result;
}

RunResult run_appc_direct(const Config& cfg) {
    const long horizon = static_cast<long>(cfg.number("horizon"));
    if (horizon < 0) throw ConfigError("horizon must be non-negative");
    const AppcDirectPlant plant{cfg.number("a1"), cfg.number("b1"), cfg.number("b2")};
    const Vec theta_true = appc_direct_theta(plant);

    FactorizedNPRE npre = appc_direct_npre();
    const Vec eta_true = npre.change.forward(theta_true);
    RunResult result;
    const double sigma = sigma_of(cfg, npre.change, result.warnings);
    DTDremEstimator est{cfg.vector("eta_hat0"), cfg.number("gamma"), cfg.number("kappa"),
                        Mat(cfg.vector("P_diag").asDiagonal()), sigma};
    DTExtensionState ext = DTExtensionState::zero(5, cfg.number("alpha"));
    ExcitationTracker tracker;

    auto r_of = [&](long k) {
        if (k < 0) return 0.0;
        const double kk = static_cast<double>(k);
        return cfg.number("r_amp") * std::sin(cfg.number("r_freq") * kk) +
               cfg.number("r_amp2") * std::sin(cfg.number("r_freq2") * kk + 1.0) +
               cfg.number("r_amp3") * std::sin(cfg.number("r_freq3") * kk + 2.0);
    };

    Trace& trace = result.trace;
    trace.scenario = cfg.scenario;
    trace.columns = {"k", "y_p", "u", "r"};
    auto add = [&](const std::vector<std::string>& names) {
        trace.columns.insert(trace.columns.end(), names.begin(), names.end());
    };
    add(numbered("omega", 5));
    trace.columns.push_back("delta");
    trace.columns.push_back("delta_sq");
    add(numbered("scriptY", 4));
    add(numbered("eta_hat", 4));
    trace.columns.push_back("eta_err_norm");
    add(numbered("theta_hat", 4));
    trace.columns.push_back("theta_err_norm");
    trace.columns.push_back("tracking_err");
    trace.columns.push_back("sum_delta_sq_norm");
    trace.columns.push_back("product");
    trace.columns.push_back("singular_flag");

    Vec theta_held = npre.change.inverse(est.eta_hat);

    double yp = 0.0, yp1 = 0.0, yp2 = 0.0;
    double u0 = 0.0, u1 = 0.0, u2 = 0.0, u3 = 0.0;
    Vec omega_prev = Vec::Zero(5);
    double y_prev = 0.0;

    auto record = [&](long k, const Vec& omega, const MixedOutput& mixed, double err_track,
                      bool singular) {
        std::vector<double> row = {static_cast<double>(k), yp, u0, r_of(k)};
        for (Index i = 0; i < 5; ++i) row.push_back(omega[i]);
        row.push_back(mixed.delta);
        row.push_back(mixed.delta * mixed.delta);
        for (Index i = 0; i < 4; ++i) row.push_back(mixed.script_y.size() ? mixed.script_y[i] : 0.0);
        for (Index i = 0; i < 4; ++i) row.push_back(est.eta_hat[i]);
        row.push_back((est.eta_hat - eta_true).norm());
        for (Index i = 0; i < 4; ++i) row.push_back(theta_held[i]);
        row.push_back((theta_held - theta_true).norm());
        row.push_back(err_track);
        row.push_back(tracker.integral_delta_sq);
        row.push_back(tracker.product);
        row.push_back(singular ? 1.0 : 0.0);
        trace.append(std::move(row));
    };

    u0 = appc_direct_control(theta_held[2], theta_held[3], yp, u1, r_of(0));
    record(0, Vec::Zero(5), MixedOutput{Vec::Zero(4), 0.0}, 0.0, false);

    for (long k = 1; k <= horizon; ++k) {
        u3 = u2;
        u2 = u1;
        u1 = u0;
        yp2 = yp1;
        yp1 = yp;
        yp = appc_direct_plant_step(plant, yp1, u1, u2);

        const Vec omega = appc_direct_omega(yp1, yp2, u1, u2, u3);

        ext = dt_extension_step(ext, omega_prev.transpose(), Vec::Constant(1, y_prev));
        const MixedOutput mixed = mix(ext, npre.change);
        est.eta_hat = dt_estimator_step(est, mixed, npre);
        tracker = track_excitation_dt(tracker, mixed.delta, est.kappa, est.sigma);

        bool singular = false;
        if (std::abs(est.eta_hat[0]) < kInverseHoldTol || std::abs(est.eta_hat[1]) < kInverseHoldTol ||
            std::abs(est.eta_hat[2]) < kInverseHoldTol) {
            singular = true;
            ++result.singular_events;
        } else {
            theta_held = npre.change.inverse(est.eta_hat);
        }
        u0 = appc_direct_control(theta_held[2], theta_held[3], yp, u1, r_of(k));

        const double err_track = yp - (plant.b1 * r_of(k - 1) + plant.b2 * r_of(k - 2));

        omega_prev = omega;
        y_prev = yp;
        record(k, omega, mixed, err_track, singular);
    }

    const auto& last = trace.rows.back();
    auto col = [&](const std::string& name) {
        for (size_t i = 0; i < trace.columns.size(); ++i)
            if (trace.columns[i] == name) return last[i];
        throw Error("missing trace column " + name);
    };
    result.summary = {
        {"final_eta_err", col("eta_err_norm")},
        {"final_theta_err", col("theta_err_norm")},
        {"final_tracking_err", std::abs(col("tracking_err"))},
        {"sum_delta_sq", tracker.sum_delta_sq},
        {"product", tracker.product},
        {"singular_events", static_cast<double>(result.singular_events)},
    };
    return result;
}

}  // namespace

RunResult run_dt_scenario(const Config& cfg) {
    if (cfg.scenario == "solar") return run_solar(cfg);
    if (cfg.scenario == "appc-indirect") return run_appc_indirect(cfg);
    if (cfg.scenario == "appc-direct") return run_appc_direct(cfg);
    throw ConfigError("not a discrete-time scenario: " + cfg.scenario);
}

}  // namespace nlpre
