// Continuous-time scenario runners: the two-link arm under the estimated-
// parameter tracking controller (regressor extension, mixing and estimator
// integrated on the same RK4 clock as the plant) and under the classical
// overparameterized adaptive law.
#include "nlpre/scenario.hpp"

#include "nlpre/estimator.hpp"
#include "nlpre/extension.hpp"
#include "nlpre/rk4.hpp"
#include "nlpre/robot.hpp"

#include <cmath>

namespace nlpre {

namespace {

// Components of eta_hat smaller than this freeze the plant-side inverse; the
// estimator keeps integrating.
constexpr double kInverseHoldTol = 1e-6;

struct RobotDremLayout {
    // q(2) dq(2) filters(14) Y(5) Phi(25) eta_hat(4)
    static constexpr Index kQ = 0;
    static constexpr Index kDq = 2;
    static constexpr Index kFilters = 4;
    static constexpr Index kY = 18;
    static constexpr Index kPhi = 23;
    static constexpr Index kEta = 48;
    static constexpr Index kSize = 52;
};

Mat unpack_phi(const Vec& x, Index offset, Index p) {
    Mat phi(p, p);
    for (Index c = 0; c < p; ++c) phi.col(c) = x.segment(offset + c * p, p);
    return phi;
}

void pack_phi(Vec& x, Index offset, const Mat& phi) {
    const Index p = phi.rows();
    for (Index c = 0; c < p; ++c) x.segment(offset + c * p, p) = phi.col(c);
}

std::vector<std::string> numbered(const std::string& stem, Index n) {
    std::vector<std::string> names;
    for (Index i = 0; i < n; ++i) names.push_back(stem + std::to_string(i + 1));
    return names;
}

RunResult run_robot_drem(const Config& cfg) {
    using L = RobotDremLayout;

    const double horizon = cfg.number("horizon");
    const double h = cfg.number("h");
    if (h <= 0.0) throw ConfigError("step size h must be positive");
    if (horizon < 0.0) throw ConfigError("horizon must be non-negative");

    const TwoDofRobot robot{cfg.vector("theta"), cfg.number("g")};
    const double lambda_ext = cfg.number("lambda");
    const double lambda_reg = cfg.number("lambda_reg");
    const Mat gamma = Mat(cfg.vector("Gamma_diag").asDiagonal());
    const Mat k1 = Mat(cfg.vector("K1_diag").asDiagonal());
    const Mat k2 = Mat(cfg.vector("K2_diag").asDiagonal());
    const Reference ref = robot_reference();

    FactorizedNPRE npre = scenario_npre("robot2dof", &cfg);
    const Vec eta_true = npre.change.forward(robot.theta);
    const Mat gamma_inv = gamma.inverse();

    // Certainty-equivalence side: last admissible plant parameters.
    Vec theta_held = cfg.vector("theta_hat0");
    bool stage_singular = false;

    auto theta_from_eta = [&](const Vec& eta_hat) {
        if (std::abs(eta_hat[0]) < kInverseHoldTol || std::abs(eta_hat[1]) < kInverseHoldTol) {
            stage_singular = true;
            return theta_held;
        }
        const Vec th = npre.change.inverse(eta_hat);
        theta_held = th;
        return th;
    };

    auto derivative = [&](double t, const Vec& x) {
        const Vec q = x.segment(L::kQ, 2);
        const Vec dq = x.segment(L::kDq, 2);
        const auto filters = RobotRegressorFilters::from_flat(x.segment(L::kFilters, 14), lambda_reg);
        const Vec y = robot_regressor_output(filters);
        const Mat omega = robot_regressor_omega(filters, q, dq);
        const Vec eta_hat = x.segment(L::kEta, 4);
        const Vec theta_hat = theta_from_eta(eta_hat);

        const Vec u = slotine_li_control(robot_s(theta_hat), q, dq, t, k1, k2, ref, robot.g);
        const Vec ddq = robot_dynamics(robot, q, dq, u);
        const auto dfilters = robot_regressor_derivative(filters, q, dq, u, robot.g);

        const CTExtensionState ext{x.segment(L::kY, 5), unpack_phi(x, L::kPhi, 5), lambda_ext};
        const auto [dy_ext, dphi] = ct_extension_derivative(ext, omega, y);
        const MixedOutput mixed = mix(ext, npre.change);
        const Vec deta = ct_estimator_derivative({eta_hat, gamma, npre.change.P}, mixed, npre);

        Vec dx(L::kSize);
        dx.segment(L::kQ, 2) = dq;
        dx.segment(L::kDq, 2) = ddq;
        dx.segment(L::kFilters, 14) = dfilters.flat();
        dx.segment(L::kY, 5) = dy_ext;
        pack_phi(dx, L::kPhi, dphi);
        dx.segment(L::kEta, 4) = deta;
        return dx;
    };

    RunResult result;
    Trace& trace = result.trace;
    trace.scenario = cfg.scenario;
    trace.columns = {"t"};
    auto add = [&](const std::vector<std::string>& names) {
        trace.columns.insert(trace.columns.end(), names.begin(), names.end());
    };
    add(numbered("q", 2));
    add(numbered("dq", 2));
    add(numbered("q_star", 2));
    trace.columns.push_back("tracking_err_norm");
    trace.columns.push_back("s_norm");
    add(numbered("u", 2));
    add(numbered("y", 2));
    for (Index r = 0; r < 2; ++r)
        for (Index c = 0; c < 5; ++c)
            trace.columns.push_back("omega" + std::to_string(r + 1) + std::to_string(c + 1));
    trace.columns.push_back("delta");
    trace.columns.push_back("delta_sq");
    add(numbered("scriptY", 4));
    add(numbered("eta_hat", 4));
    trace.columns.push_back("eta_err_norm");
    add(numbered("theta_hat", 4));
    trace.columns.push_back("theta_err_norm");
    trace.columns.push_back("int_delta_sq");
    trace.columns.push_back("lyapunov_v");
    trace.columns.push_back("singular_flag");

    Vec x = Vec::Zero(L::kSize);
    x.segment(L::kQ, 2) = cfg.vector("q0");
    x.segment(L::kDq, 2) = cfg.vector("dq0");
    x.segment(L::kEta, 4) = npre.change.forward(cfg.vector("theta_hat0"));

    ExcitationTracker tracker;
    const long steps = static_cast<long>(std::llround(horizon / h));

    auto record = [&](double t, const Vec& state, bool singular) {
        const Vec q = state.segment(L::kQ, 2);
        const Vec dq = state.segment(L::kDq, 2);
        const auto filters = RobotRegressorFilters::from_flat(state.segment(L::kFilters, 14), lambda_reg);
        const Vec y = robot_regressor_output(filters);
        const Mat omega = robot_regressor_omega(filters, q, dq);
        const Vec eta_hat = state.segment(L::kEta, 4);
        stage_singular = false;
        const Vec theta_hat = theta_from_eta(eta_hat);
        const bool row_singular = singular || stage_singular;
        const Vec u = slotine_li_control(robot_s(theta_hat), q, dq, t, k1, k2, ref, robot.g);
        const CTExtensionState ext{state.segment(L::kY, 5), unpack_phi(state, L::kPhi, 5), lambda_ext};
        const MixedOutput mixed = mix(ext, npre.change);
        const SlidingSignals sig = sliding_signals(q, dq, t, k2, ref);
        const Vec eta_err = eta_hat - eta_true;

        std::vector<double> row;
        row.reserve(trace.columns.size());
        row.push_back(t);
        for (Index i = 0; i < 2; ++i) row.push_back(q[i]);
        for (Index i = 0; i < 2; ++i) row.push_back(dq[i]);
        const Vec qs = ref.pos(t);
        for (Index i = 0; i < 2; ++i) row.push_back(qs[i]);
        row.push_back(sig.qerr.norm());
        row.push_back(sig.s.norm());
        for (Index i = 0; i < 2; ++i) row.push_back(u[i]);
        for (Index i = 0; i < 2; ++i) row.push_back(y[i]);
        for (Index r = 0; r < 2; ++r)
            for (Index c = 0; c < 5; ++c) row.push_back(omega(r, c));
        row.push_back(mixed.delta);
        row.push_back(mixed.delta * mixed.delta);
        for (Index i = 0; i < 4; ++i) row.push_back(mixed.script_y[i]);
        for (Index i = 0; i < 4; ++i) row.push_back(eta_hat[i]);
        row.push_back(eta_err.norm());
        for (Index i = 0; i < 4; ++i) row.push_back(theta_hat[i]);
        row.push_back((theta_hat - robot.theta).norm());
        row.push_back(tracker.integral_delta_sq);
        row.push_back(0.5 * eta_err.dot(gamma_inv * eta_err));
        row.push_back(row_singular ? 1.0 : 0.0);
        trace.append(std::move(row));
        return mixed.delta;
    };

    double delta_at_row = record(0.0, x, false);
    for (long i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) * h;
        stage_singular = false;
        Vec next;
        try {
            next = rk4_step(derivative, x, t, h);
        } catch (const IntegrationError& err) {
            throw IntegrationError(std::string(err.what()) + " in scenario " + cfg.scenario, i);
        }
        const bool step_singular = stage_singular;
        if (step_singular) ++result.singular_events;
        // rectangle rule on the grid, left endpoint
        tracker = track_excitation_ct(tracker, delta_at_row, h);
        x = next;
        delta_at_row = record(static_cast<double>(i + 1) * h, x, step_singular);
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
        {"final_tracking_err", col("tracking_err_norm")},
        {"int_delta_sq", tracker.integral_delta_sq},
        {"singular_events", static_cast<double>(result.singular_events)},
    };
    return result;
}

RunResult run_robot_overparam(const Config& cfg) {
    const double horizon = cfg.number("horizon");
    const double h = cfg.number("h");
    if (h <= 0.0) throw ConfigError("step size h must be positive");
    if (horizon < 0.0) throw ConfigError("horizon must be non-negative");

    const TwoDofRobot robot{cfg.vector("theta"), cfg.number("g")};
    const Mat gamma = Mat(cfg.vector("Gamma_diag").asDiagonal());
    const Mat k1 = Mat(cfg.vector("K1_diag").asDiagonal());
    const Mat k2 = Mat(cfg.vector("K2_diag").asDiagonal());
    const Reference ref = robot_reference();
    const Vec s_true = robot.s();

    // State: q(2) dq(2) S_hat(5)
    auto derivative = [&](double t, const Vec& x) {
        const Vec q = x.segment(0, 2);
        const Vec dq = x.segment(2, 2);
        const Vec s_hat = x.segment(4, 5);
        const SlidingSignals sig = sliding_signals(q, dq, t, k2, ref);
        const Mat w = slotine_li_w(q, dq, sig.dqr, sig.ddqr, robot.g);
        const Vec u = w * s_hat - k1 * sig.s;
        Vec dx(9);
        dx.segment(0, 2) = dq;
        dx.segment(2, 2) = robot_dynamics(robot, q, dq, u);
        dx.segment(4, 5) = -(gamma * (w.transpose() * sig.s));
        return dx;
    };

    RunResult result;
    Trace& trace = result.trace;
    trace.scenario = cfg.scenario;
    trace.columns = {"t", "q1", "q2", "dq1", "dq2", "q_star1", "q_star2", "tracking_err_norm",
                     "s_norm", "u1", "u2", "S_hat1", "S_hat2", "S_hat3", "S_hat4", "S_hat5",
                     "S_err_norm"};

    Vec x = Vec::Zero(9);
    x.segment(0, 2) = cfg.vector("q0");
    x.segment(2, 2) = cfg.vector("dq0");
    x.segment(4, 5) = cfg.vector("S_hat0");

    auto record = [&](double t, const Vec& state) {
        const Vec q = state.segment(0, 2);
        const Vec dq = state.segment(2, 2);
        const Vec s_hat = state.segment(4, 5);
        const SlidingSignals sig = sliding_signals(q, dq, t, k2, ref);
        const Mat w = slotine_li_w(q, dq, sig.dqr, sig.ddqr, robot.g);
        const Vec u = w * s_hat - k1 * sig.s;
        std::vector<double> row = {t, q[0], q[1], dq[0], dq[1]};
        const Vec qs = ref.pos(t);
        row.push_back(qs[0]);
        row.push_back(qs[1]);
        row.push_back(sig.qerr.norm());
        row.push_back(sig.s.norm());
        row.push_back(u[0]);
        row.push_back(u[1]);
        for (Index i = 0; i < 5; ++i) row.push_back(s_hat[i]);
        row.push_back((s_hat - s_true).norm());
        trace.append(std::move(row));
    };

    const long steps = static_cast<long>(std::llround(horizon / h));
    record(0.0, x);
    for (long i = 0; i < steps; ++i) {
        x = rk4_step(derivative, x, static_cast<double>(i) * h, h);
        record(static_cast<double>(i + 1) * h, x);
    }

    const auto& last = trace.rows.back();
    result.summary = {
        {"final_tracking_err", last[7]},
        {"final_S_err", last[16]},
    };
    return result;
}

}  // namespace

RunResult run_ct_scenario(const Config& cfg) {
    if (cfg.scenario == "robot2dof-drem") return run_robot_drem(cfg);
    if (cfg.scenario == "robot2dof-overparam") return run_robot_overparam(cfg);
    throw ConfigError("not a continuous-time scenario: " + cfg.scenario);
}

}  // namespace nlpre
