// Adaptive pole placement with a deadbeat target, in both flavors:
//  - indirect: first-order plant y_p(k+1) + theta y_p(k) = u(k) + theta^3 u(k-1)
//    with the scalar plant parameter estimated and the controller solved from
//    the Bezout identity;
//  - direct: plant (1 + a1 q^-1) y_p = (b1 q^-1 + b2 q^-2) u with the
//    controller coefficients estimated through a five-dimensional regression.
#pragma once

#include "nlpre/map.hpp"

#include <cmath>
#include <utility>

namespace nlpre {

inline constexpr double kAppcSingularityTol = 1e-9;

// --- Indirect ----------------------------------------------------------------

/// Determinant of the 2x2 coefficient system for (l1, p0); the system is
/// solvable iff theta is outside {-1, 0, 1}.
inline double appc_indirect_sylvester_det(double theta) { return theta * theta * theta - theta; }

/// Controller coefficients (l1, p0) in reduced form; the reduction removes
/// the removable singularity at theta = 0 and leaves only theta = +-1.
inline std::pair<double, double> appc_indirect_bezout(double theta) {
    const double denom = theta * theta - 1.0;
    if (std::abs(denom) < kAppcSingularityTol) {
        throw Error("appc-indirect: Bezout system singular at theta = " + std::to_string(theta));
    }
    return {-theta * theta * theta / denom, theta / denom};
}

/// Certainty-equivalent deadbeat control in the factored form
/// u = -(th y_p - th^3 u_prev)/(th^2 - 1) + r, finite at th = 0.
inline double appc_indirect_control(double theta_hat, double yp, double u_prev, double r) {
    const double denom = theta_hat * theta_hat - 1.0;
    if (std::abs(denom) < kAppcSingularityTol) {
        throw Error("appc-indirect: controller singular at theta_hat = " + std::to_string(theta_hat));
    }
    const double th3 = theta_hat * theta_hat * theta_hat;
    return -(theta_hat * yp - th3 * u_prev) / denom + r;
}

/// Deadbeat control computed from the overparameterized estimate
/// S_hat = (theta, theta^3); singular on the line S1 = S2.
inline double appc_indirect_overparam_control(const Vec& s_hat, double yp, double u_prev,
                                              double r) {
    const double denom = s_hat[1] - s_hat[0];
    if (std::abs(denom) < kAppcSingularityTol) {
        throw Error("appc-indirect: overparameterized controller singular, S1 = S2");
    }
    return -(s_hat[0] * s_hat[0] * yp - s_hat[0] * s_hat[1] * u_prev) / denom + r;
}

/// Plant recursion y_p(k+1) = -theta y_p(k) + u(k) + theta^3 u(k-1).
inline double appc_indirect_plant_step(double theta, double yp, double u, double u_prev) {
    return -theta * yp + u + theta * theta * theta * u_prev;
}

inline NonlinearMap appc_indirect_map() {
    NonlinearMap m;
    m.q = 1;
    m.p = 2;
    m.eval = [](const Vec& th) {
        Vec s(2);
        s << th[0], th[0] * th[0] * th[0];
        return s;
    };
    m.jacobian = [](const Vec& th) {
        Mat j(2, 1);
        j << 1.0, 3.0 * th[0] * th[0];
        return j;
    };
    m.lower = Vec::Constant(1, -0.9);
    m.upper = Vec::Constant(1, 0.9);
    return m;
}

/// Scalar regression: the identity is the coordinate change and the first
/// component of the transformed map is selected, giving G(eta) = eta.
inline ParameterChange appc_indirect_change() {
    ParameterChange c;
    c.name = "appc-indirect";
    c.forward = [](const Vec& th) { return th; };
    c.inverse = [](const Vec& eta) { return eta; };
    c.inverse_jacobian = [](const Vec&) { return Mat::Identity(1, 1); };
    c.permutation = VecI(2);
    c.permutation << 0, 1;
    c.selector_rows = VecI(1);
    c.selector_rows << 0;
    c.P = Mat::Identity(1, 1);
    c.rho = 2.0;
    c.nu = 1.0;
    c.good_map = [](const Vec& eta) { return eta; };
    c.good_map_jacobian = [](const Vec&) { return Mat::Identity(1, 1); };
    return c;
}

inline FactorizedNPRE appc_indirect_npre() { return {appc_indirect_map(), appc_indirect_change(), 1}; }

// --- Direct ------------------------------------------------------------------

struct AppcDirectPlant {
    double a1 = -0.5;
    double b1 = 1.0;
    double b2 = 0.5;
};

/// Solves the deadbeat Bezout identity A L + B P = 1 for the plant above;
/// p1 = 0 always, and the pair (p0, l1) is unique when a1 b1 != b2
/// (coprimeness of the plant polynomials).
inline std::pair<double, double> appc_direct_bezout(const AppcDirectPlant& plant) {
    const double denom = plant.a1 * plant.b1 - plant.b2;
    if (std::abs(denom) < kAppcSingularityTol) {
        throw Error("appc-direct: plant polynomials not coprime, a1 b1 = b2");
    }
    const double p0 = -plant.a1 * plant.a1 / denom;
    const double l1 = plant.a1 * plant.b2 / denom;
    return {p0, l1};
}

/// True parameter vector (b1, b2, p0, l1) of the direct regression.
inline Vec appc_direct_theta(const AppcDirectPlant& plant) {
    const auto [p0, l1] = appc_direct_bezout(plant);
    Vec th(4);
    th << plant.b1, plant.b2, p0, l1;
    return th;
}

/// Plant recursion y_p(k) = -a1 y_p(k-1) + b1 u(k-1) + b2 u(k-2).
inline double appc_direct_plant_step(const AppcDirectPlant& plant, double yp1, double u1,
                                     double u2) {
    return -plant.a1 * yp1 + plant.b1 * u1 + plant.b2 * u2;
}

/// Regressor column (y_p(k-1), y_p(k-2), u(k-1), u(k-2), u(k-3)).
inline Vec appc_direct_omega(double yp1, double yp2, double u1, double u2, double u3) {
    Vec w(5);
    w << yp1, yp2, u1, u2, u3;
    return w;
}

/// S(theta) = (t1 t3, t2 t3, t1, t1 t4 + t2, t2 t4).
inline Vec appc_direct_s(const Vec& th) {
    Vec s(5);
    s << th[0] * th[2], th[1] * th[2], th[0], th[0] * th[3] + th[1], th[1] * th[3];
    return s;
}

inline Mat appc_direct_s_jacobian(const Vec& th) {
    Mat j = Mat::Zero(5, 4);
    j(0, 0) = th[2];
    j(0, 2) = th[0];
    j(1, 1) = th[2];
    j(1, 2) = th[1];
    j(2, 0) = 1.0;
    j(3, 0) = th[3];
    j(3, 1) = 1.0;
    j(3, 3) = th[0];
    j(4, 1) = th[3];
    j(4, 3) = th[1];
    return j;
}

/// Certainty-equivalent deadbeat control u(k) = r(k) - l1 u(k-1) - p0 y_p(k).
inline double appc_direct_control(double p0, double l1, double yp, double u_prev, double r) {
    return r - l1 * u_prev - p0 * yp;
}

inline NonlinearMap appc_direct_map() {
    NonlinearMap m;
    m.q = 4;
    m.p = 5;
    m.eval = appc_direct_s;
    m.jacobian = appc_direct_s_jacobian;
    m.lower = Vec(4);
    m.upper = Vec(4);
    m.lower << 0.2, 0.2, 0.1, 0.1;
    m.upper << 1.5, 1.5, 1.0, 1.0;
    return m;
}

/// eta = (t1, t2 t3, t1 t3, t2 t4); the selected components of the
/// transformed map are again the identity.
inline ParameterChange appc_direct_change() {
    ParameterChange c;
    c.name = "appc-direct";
    c.forward = [](const Vec& th) {
        Vec eta(4);
        eta << th[0], th[1] * th[2], th[0] * th[2], th[1] * th[3];
        return eta;
    };
    c.inverse = [](const Vec& eta) {
        if (eta[0] == 0.0) throw SingularInverseError("appc-direct", "eta1");
        if (eta[1] == 0.0) throw SingularInverseError("appc-direct", "eta2");
        if (eta[2] == 0.0) throw SingularInverseError("appc-direct", "eta3");
        Vec th(4);
        th << eta[0], eta[1] * eta[0] / eta[2], eta[2] / eta[0],
              eta[2] * eta[3] / (eta[1] * eta[0]);
        return th;
    };
    c.inverse_jacobian = [](const Vec& eta) {
        if (eta[0] == 0.0) throw SingularInverseError("appc-direct", "eta1");
        if (eta[1] == 0.0) throw SingularInverseError("appc-direct", "eta2");
        if (eta[2] == 0.0) throw SingularInverseError("appc-direct", "eta3");
        const double e1 = eta[0], e2 = eta[1], e3 = eta[2], e4 = eta[3];
        Mat j = Mat::Zero(4, 4);
        j(0, 0) = 1.0;
        j(1, 0) = e2 / e3;
        j(1, 1) = e1 / e3;
        j(1, 2) = -e2 * e1 / (e3 * e3);
        j(2, 0) = -e3 / (e1 * e1);
        j(2, 2) = 1.0 / e1;
        j(3, 0) = -e3 * e4 / (e2 * e1 * e1);
        j(3, 1) = -e3 * e4 / (e2 * e2 * e1);
        j(3, 2) = e4 / (e2 * e1);
        j(3, 3) = e3 / (e2 * e1);
        return j;
    };
    c.permutation = VecI(5);
    c.permutation << 2, 1, 0, 4, 3;
    c.selector_rows = VecI(4);
    c.selector_rows << 0, 1, 2, 3;
    c.P = Mat::Identity(4, 4);
    c.rho = 2.0;
    c.nu = 1.0;
    c.good_map = [](const Vec& eta) { return eta; };
    c.good_map_jacobian = [](const Vec& eta) { return Mat::Identity(eta.size(), eta.size()); };
    return c;
}

inline FactorizedNPRE appc_direct_npre() { return {appc_direct_map(), appc_direct_change(), 1}; }

}  // namespace nlpre
