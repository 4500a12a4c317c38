// Two-link planar manipulator: rigid-body matrices parameterized through the
// map S(theta) with theta = (l1, l2, m1, m2), the filtered-torque regressor,
// the tracking controllers, and the registered parameter change.
#pragma once

#include "nlpre/map.hpp"
#include "nlpre/rk4.hpp"

#include <cmath>
#include <functional>

namespace nlpre {

inline constexpr double kRobotDefaultGravity = 9.81;

/// S(theta) = (l2^2 m2 + l1^2 (m1+m2), l1 l2 m2, l2^2 m2, l2 m2, l1 (m1+m2)).
inline Vec robot_s(const Vec& theta) {
    const double l1 = theta[0], l2 = theta[1], m1 = theta[2], m2 = theta[3];
    Vec s(5);
    s << l2 * l2 * m2 + l1 * l1 * (m1 + m2), l1 * l2 * m2, l2 * l2 * m2, l2 * m2, l1 * (m1 + m2);
    return s;
}

inline Mat robot_s_jacobian(const Vec& theta) {
    const double l1 = theta[0], l2 = theta[1], m1 = theta[2], m2 = theta[3];
    Mat j(5, 4);
    j << 2 * l1 * (m1 + m2), 2 * l2 * m2, l1 * l1, l2 * l2 + l1 * l1,
         l2 * m2,            l1 * m2,     0,       l1 * l2,
         0,                  2 * l2 * m2, 0,       l2 * l2,
         0,                  m2,          0,       l2,
         m1 + m2,            0,           l1,      l1;
    return j;
}

/// Inertia matrix assembled from the map value s = S(theta).
inline Mat robot_inertia(const Vec& s, const Vec& q) {
    const double c2 = std::cos(q[1]);
    Mat m(2, 2);
    m << s[0] + 2.0 * s[1] * c2, s[2] + s[1] * c2,
         s[2] + s[1] * c2,       s[2];
    return m;
}

/// Coriolis matrix in the Christoffel convention, so that Mdot - 2C is
/// skew-symmetric.
inline Mat robot_coriolis(const Vec& s, const Vec& q, const Vec& dq) {
    const double h = s[1] * std::sin(q[1]);
    Mat c(2, 2);
    c << -h * dq[1], -h * (dq[0] + dq[1]),
          h * dq[0], 0.0;
    return c;
}

inline double robot_potential(const Vec& s, const Vec& q, double g) {
    return s[3] * g * (1.0 + std::sin(q[0] + q[1])) + s[4] * g * (1.0 + std::sin(q[0]));
}

/// Gradient of the potential energy.
inline Vec robot_gravity(const Vec& s, const Vec& q, double g) {
    const double c12 = std::cos(q[0] + q[1]);
    Vec grad(2);
    grad << s[3] * g * c12 + s[4] * g * std::cos(q[0]), s[3] * g * c12;
    return grad;
}

/// Physical robot with fixed true parameters.
struct TwoDofRobot {
    Vec theta;  // (l1, l2, m1, m2)
    double g = kRobotDefaultGravity;

    Vec s() const { return robot_s(theta); }
};

/// Forward dynamics: qddot = M(q)^{-1} (u - C(q,qdot) qdot - grad U(q)).
inline Vec robot_dynamics(const TwoDofRobot& robot, const Vec& q, const Vec& dq, const Vec& u) {
    const Vec s = robot.s();
    const Mat m = robot_inertia(s, q);
    return m.ldlt().solve(u - robot_coriolis(s, q, dq) * dq - robot_gravity(s, q, robot.g));
}

inline double robot_energy(const TwoDofRobot& robot, const Vec& q, const Vec& dq) {
    const Vec s = robot.s();
    return 0.5 * dq.dot(robot_inertia(s, q) * dq) + robot_potential(s, q, robot.g);
}

// --- Tracking references and controllers -----------------------------------

struct Reference {
    std::function<Vec(double)> pos;
    std::function<Vec(double)> vel;
    std::function<Vec(double)> acc;
};

/// Default joint reference used by the robot scenarios.
inline Reference robot_reference() {
    const double pi = M_PI;
    Reference r;
    r.pos = [pi](double t) {
        Vec q(2);
        q << 0.4 * pi * std::sin(2.0 * t) + 0.2 * pi, 0.3 * pi * std::cos(t) + 0.3 * pi;
        return q;
    };
    r.vel = [pi](double t) {
        Vec q(2);
        q << 0.8 * pi * std::cos(2.0 * t), -0.3 * pi * std::sin(t);
        return q;
    };
    r.acc = [pi](double t) {
        Vec q(2);
        q << -1.6 * pi * std::sin(2.0 * t), -0.3 * pi * std::cos(t);
        return q;
    };
    return r;
}

/// Regressor of the tracking law: beta = W(q, qdot, qdot_r, qddot_r) S(theta).
inline Mat slotine_li_w(const Vec& q, const Vec& dq, const Vec& dqr, const Vec& ddqr, double g) {
    const double c2 = std::cos(q[1]), s2 = std::sin(q[1]);
    const double c12 = std::cos(q[0] + q[1]), c1 = std::cos(q[0]);
    Mat w(2, 5);
    w << ddqr[0], c2 * (2.0 * ddqr[0] + ddqr[1]) - s2 * (dq[1] * dqr[0] + (dq[0] + dq[1]) * dqr[1]),
         ddqr[1], g * c12, g * c1,
         0.0, c2 * ddqr[0] + s2 * dq[0] * dqr[0], ddqr[0] + ddqr[1], g * c12, 0.0;
    return w;
}

/// Sliding variable and reference-velocity signals of the passivity-based
/// tracking law.
struct SlidingSignals {
    Vec qerr, derr, s, dqr, ddqr;
};

inline SlidingSignals sliding_signals(const Vec& q, const Vec& dq, double t,
                                      const Mat& k2, const Reference& ref) {
    SlidingSignals sig;
    sig.qerr = q - ref.pos(t);
    sig.derr = dq - ref.vel(t);
    sig.s = sig.derr + k2 * sig.qerr;
    sig.dqr = ref.vel(t) - k2 * sig.qerr;
    sig.ddqr = ref.acc(t) - k2 * sig.derr;
    return sig;
}

/// Passivity-based tracking torque u = W S(theta_hat) - K1 s. With exact
/// parameters the closed loop obeys M sdot + (C + K1) s = 0, so the damping
/// term enters with a negative sign.
inline Vec slotine_li_control(const Vec& s_hat, const Vec& q, const Vec& dq, double t,
                              const Mat& k1, const Mat& k2, const Reference& ref, double g) {
    const SlidingSignals sig = sliding_signals(q, dq, t, k2, ref);
    return slotine_li_w(q, dq, sig.dqr, sig.ddqr, g) * s_hat - k1 * sig.s;
}

/// Feedback-linearizing torque yielding qerr'' + K1 qerr' + K2 qerr = 0 when
/// the parameters are exact.
inline Vec computed_torque_control(const Vec& s_hat, const Vec& q, const Vec& dq, double t,
                                   const Mat& k1, const Mat& k2, const Reference& ref, double g) {
    const Vec qerr = q - ref.pos(t);
    const Vec derr = dq - ref.vel(t);
    const Vec v = ref.acc(t) - k1 * derr - k2 * qerr;
    return robot_inertia(s_hat, q) * v + robot_coriolis(s_hat, q, dq) * dq + robot_gravity(s_hat, q, g);
}

// --- Filtered-torque regressor ----------------------------------------------

/// First-order filter states realizing the torque-side regression
/// y = H[u], y = Omega(q, qdot) S(theta) up to an exponentially decaying
/// initial-condition term. Differentiated terms H[d/dt(m_i qdot)] are
/// realized as m_i qdot - lambda H[m_i qdot], so no signal differentiation is
/// needed.
struct RobotRegressorFilters {
    static constexpr Index kSize = 14;

    double lambda = 1.0;
    Vec w1 = Vec::Zero(2);  // H[m_1 qdot]
    Vec w2 = Vec::Zero(2);  // H[m_2(q) qdot]
    Vec w3 = Vec::Zero(2);  // H[m_3 qdot]
    Vec z2 = Vec::Zero(2);  // H of the quadratic-velocity term of m_2
    Vec g4 = Vec::Zero(2);  // H[grad U_1]
    Vec g5 = Vec::Zero(2);  // H[grad U_2]
    Vec yf = Vec::Zero(2);  // H[u]

    Vec flat() const {
        Vec x(kSize);
        x << w1, w2, w3, z2, g4, g5, yf;
        return x;
    }

    static RobotRegressorFilters from_flat(const Vec& x, double lambda) {
        RobotRegressorFilters f;
        f.lambda = lambda;
        f.w1 = x.segment(0, 2);
        f.w2 = x.segment(2, 2);
        f.w3 = x.segment(4, 2);
        f.z2 = x.segment(6, 2);
        f.g4 = x.segment(8, 2);
        f.g5 = x.segment(10, 2);
        f.yf = x.segment(12, 2);
        return f;
    }
};

namespace detail {

inline Vec robot_m1_qd(const Vec& dq) {
    Vec v(2);
    v << dq[0], 0.0;
    return v;
}

inline Vec robot_m2_qd(const Vec& q, const Vec& dq) {
    const double c2 = std::cos(q[1]);
    Vec v(2);
    v << c2 * (2.0 * dq[0] + dq[1]), c2 * dq[0];
    return v;
}

inline Vec robot_m3_qd(const Vec& dq) {
    Vec v(2);
    v << dq[1], dq[0] + dq[1];
    return v;
}

// -(1/2) grad_q (qdot^T m_2(q) qdot); the m_1 and m_3 blocks are constant in
// q, so only m_2 contributes.
inline Vec robot_m2_grad_term(const Vec& q, const Vec& dq) {
    Vec v(2);
    v << 0.0, std::sin(q[1]) * (dq[0] * dq[0] + dq[0] * dq[1]);
    return v;
}

inline Vec robot_grad_u1(const Vec& q, double g) {
    const double c12 = std::cos(q[0] + q[1]);
    Vec v(2);
    v << g * c12, g * c12;
    return v;
}

inline Vec robot_grad_u2(const Vec& q, double g) {
    Vec v(2);
    v << g * std::cos(q[0]), 0.0;
    return v;
}

}  // namespace detail

/// Regressor matrix assembled from the current filter states and (q, qdot).
inline Mat robot_regressor_omega(const RobotRegressorFilters& f, const Vec& q, const Vec& dq) {
    Mat omega(2, 5);
    omega.col(0) = detail::robot_m1_qd(dq) - f.lambda * f.w1;
    omega.col(1) = detail::robot_m2_qd(q, dq) - f.lambda * f.w2 + f.z2;
    omega.col(2) = detail::robot_m3_qd(dq) - f.lambda * f.w3;
    omega.col(3) = f.g4;
    omega.col(4) = f.g5;
    return omega;
}

inline Vec robot_regressor_output(const RobotRegressorFilters& f) { return f.yf; }

/// Time derivative of the filter states for given (q, qdot, u, g).
inline RobotRegressorFilters robot_regressor_derivative(const RobotRegressorFilters& f,
                                                        const Vec& q, const Vec& dq,
                                                        const Vec& u, double g) {
    RobotRegressorFilters d;
    d.lambda = f.lambda;
    d.w1 = -f.lambda * f.w1 + detail::robot_m1_qd(dq);
    d.w2 = -f.lambda * f.w2 + detail::robot_m2_qd(q, dq);
    d.w3 = -f.lambda * f.w3 + detail::robot_m3_qd(dq);
    d.z2 = -f.lambda * f.z2 + detail::robot_m2_grad_term(q, dq);
    d.g4 = -f.lambda * f.g4 + detail::robot_grad_u1(q, g);
    d.g5 = -f.lambda * f.g5 + detail::robot_grad_u2(q, g);
    d.yf = -f.lambda * f.yf + u;
    return d;
}

/// Advances the filters one RK4 step along externally supplied trajectories
/// and returns the new state. The trajectory callables are queried at the
/// stage times.
template <typename QFn, typename DQFn, typename UFn>
RobotRegressorFilters robot_regressor_step(const RobotRegressorFilters& f, QFn&& q_of_t,
                                           DQFn&& dq_of_t, UFn&& u_of_t, double t, double h,
                                           double g) {
    auto deriv = [&](double tau, const Vec& x) {
        const RobotRegressorFilters state = RobotRegressorFilters::from_flat(x, f.lambda);
        return robot_regressor_derivative(state, q_of_t(tau), dq_of_t(tau), u_of_t(tau), g).flat();
    };
    return RobotRegressorFilters::from_flat(rk4_step(deriv, f.flat(), t, h), f.lambda);
}

// --- Registered parameter change --------------------------------------------

/// Admissible bound on the leading entry of P = diag(a, a, 1, 1) over a
/// theta box: a must be at least (theta2_max + theta1_max^2 / theta2_min) /
/// (4 theta4_min) for the certificate to hold on the whole region.
inline double robot_p_gain_bound(const Vec& lower, const Vec& upper) {
    return (upper[1] + upper[0] * upper[0] / lower[1]) / (4.0 * lower[3]);
}

/// Monotonicity margin registered for the default robot region; certified by
/// sampling (the margin of the certificate matrix stays well above this
/// value over the box below).
inline constexpr double kRobotRho = 0.05;
inline constexpr double kRobotNu = 3.0;

inline NonlinearMap robot_map() {
    NonlinearMap m;
    m.q = 4;
    m.p = 5;
    m.eval = robot_s;
    m.jacobian = robot_s_jacobian;
    m.lower = Vec(4);
    m.upper = Vec(4);
    m.lower << 0.5, 0.7, 1.0, 0.5;
    m.upper << 0.8, 1.0, 2.0, 1.0;
    return m;
}

/// eta = (l1, l2, l2 m2, l1 (m1+m2)); the selected components of the
/// transformed map reduce to G(eta) = (eta1 eta3, eta2 eta3, eta3, eta4).
inline ParameterChange robot_change(double a = 1.0) {
    ParameterChange c;
    c.name = "robot2dof";
    c.forward = [](const Vec& th) {
        Vec eta(4);
        eta << th[0], th[1], th[1] * th[3], th[0] * (th[2] + th[3]);
        return eta;
    };
    c.inverse = [](const Vec& eta) {
        if (eta[0] == 0.0) throw SingularInverseError("robot2dof", "eta1");
        if (eta[1] == 0.0) throw SingularInverseError("robot2dof", "eta2");
        Vec th(4);
        th << eta[0], eta[1], eta[3] / eta[0] - eta[2] / eta[1], eta[2] / eta[1];
        return th;
    };
    c.inverse_jacobian = [](const Vec& eta) {
        if (eta[0] == 0.0) throw SingularInverseError("robot2dof", "eta1");
        if (eta[1] == 0.0) throw SingularInverseError("robot2dof", "eta2");
        Mat j = Mat::Zero(4, 4);
        j(0, 0) = 1.0;
        j(1, 1) = 1.0;
        j(2, 0) = -eta[3] / (eta[0] * eta[0]);
        j(2, 1) = eta[2] / (eta[1] * eta[1]);
        j(2, 2) = -1.0 / eta[1];
        j(2, 3) = 1.0 / eta[0];
        j(3, 1) = -eta[2] / (eta[1] * eta[1]);
        j(3, 2) = 1.0 / eta[1];
        return j;
    };
    c.permutation = VecI(5);
    c.permutation << 1, 2, 3, 4, 0;
    c.selector_rows = VecI(4);
    c.selector_rows << 0, 1, 2, 3;
    Vec pdiag(4);
    pdiag << a, a, 1.0, 1.0;
    c.P = pdiag.asDiagonal();
    c.rho = kRobotRho;
    c.nu = kRobotNu;
    c.good_map = [](const Vec& eta) {
        Vec g(4);
        g << eta[0] * eta[2], eta[1] * eta[2], eta[2], eta[3];
        return g;
    };
    c.good_map_jacobian = [](const Vec& eta) {
        Mat j = Mat::Zero(4, 4);
        j(0, 0) = eta[2];
        j(0, 2) = eta[0];
        j(1, 1) = eta[2];
        j(1, 2) = eta[1];
        j(2, 2) = 1.0;
        j(3, 3) = 1.0;
        return j;
    };
    return c;
}

inline FactorizedNPRE robot_npre(double a = 1.0) { return {robot_map(), robot_change(a), 2}; }

}  // namespace nlpre
