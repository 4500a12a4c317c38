// Solar-heated house identification model: storage temperature driven by fan
// control and solar intensity, sampled every 10 minutes. The difference
// equation is bilinear in the four physical parameters and factors as
// y_p(k) = Omega(k) S(theta) with a six-dimensional map.
#pragma once

#include "nlpre/map.hpp"

#include <cmath>

namespace nlpre {

/// S(theta) = (1-t2, 1-t4, (t4-1)(1+t2), t1 t3, -t1, t1 (1+t2)).
inline Vec solar_s(const Vec& th) {
    Vec s(6);
    s << 1.0 - th[1], 1.0 - th[3], (th[3] - 1.0) * (1.0 + th[1]), th[0] * th[2], -th[0],
         th[0] * (1.0 + th[1]);
    return s;
}

inline Mat solar_s_jacobian(const Vec& th) {
    Mat j = Mat::Zero(6, 4);
    j(0, 1) = -1.0;
    j(1, 3) = -1.0;
    j(2, 1) = th[3] - 1.0;
    j(2, 3) = 1.0 + th[1];
    j(3, 0) = th[2];
    j(3, 2) = th[0];
    j(4, 0) = -1.0;
    j(5, 0) = 1.0 + th[1];
    j(5, 1) = th[0];
    return j;
}

/// Regressor row for one sample, from the lagged temperature, control and
/// intensity values. Requires u(k-2) != 0.
inline Vec solar_omega(double yp1, double yp2, double u1, double u2, double intensity2) {
    if (u2 == 0.0) throw Error("solar: regressor undefined, u(k-2) is zero");
    Vec w(6);
    w << yp1, yp1 * u1 / u2, yp2 * u1 / u2, u1 * intensity2, u1 * yp1, u1 * yp2;
    return w;
}

/// Advances the storage-temperature recursion one sample. Defined as the
/// inner product of the regressor row with S(theta), which is the model
/// equation itself regrouped term by term.
inline double solar_step(const Vec& s, double yp1, double yp2, double u1, double u2,
                         double intensity2) {
    return solar_omega(yp1, yp2, u1, u2, intensity2).dot(s);
}

/// Two-level fan pulse train: period 24 samples, half duty, levels 1.0 and
/// 0.5 (strictly nonzero so the regressor denominators never vanish).
inline double solar_fan(long k) { return (((k % 24) + 24) % 24) < 12 ? 1.0 : 0.5; }

/// Day profile of the solar intensity: half-sinusoid bursts with a linearly
/// decaying envelope over the 96-sample (16 h) horizon, peak scaled to a
/// physically plausible magnitude.
inline double solar_intensity(long k) {
    const double hump = std::max(0.0, std::sin(2.0 * M_PI * static_cast<double>(k) / 32.0));
    const double envelope = std::max(0.0, 1.0 - static_cast<double>(k) / 192.0);
    return 100.0 * hump * envelope;
}

inline NonlinearMap solar_map() {
    NonlinearMap m;
    m.q = 4;
    m.p = 6;
    m.eval = solar_s;
    m.jacobian = solar_s_jacobian;
    m.lower = Vec::Constant(4, 0.1);
    m.upper = Vec::Constant(4, 0.9);
    return m;
}

/// eta = (-t1, 1-t2, t1 t3, 1-t4); the selected components of the transformed
/// map are the identity, so P = I, rho = 2, nu = 1.
inline ParameterChange solar_change() {
    ParameterChange c;
    c.name = "solar";
    c.forward = [](const Vec& th) {
        Vec eta(4);
        eta << -th[0], 1.0 - th[1], th[0] * th[2], 1.0 - th[3];
        return eta;
    };
    c.inverse = [](const Vec& eta) {
        if (eta[0] == 0.0) throw SingularInverseError("solar", "eta1");
        Vec th(4);
        th << -eta[0], 1.0 - eta[1], -eta[2] / eta[0], 1.0 - eta[3];
        return th;
    };
    c.inverse_jacobian = [](const Vec& eta) {
        if (eta[0] == 0.0) throw SingularInverseError("solar", "eta1");
        Mat j = Mat::Zero(4, 4);
        j(0, 0) = -1.0;
        j(1, 1) = -1.0;
        j(2, 0) = eta[2] / (eta[0] * eta[0]);
        j(2, 2) = -1.0 / eta[0];
        j(3, 3) = -1.0;
        return j;
    };
    c.permutation = VecI(6);
    c.permutation << 4, 0, 3, 1, 5, 2;
    c.selector_rows = VecI(4);
    c.selector_rows << 0, 1, 2, 3;
    c.P = Mat::Identity(4, 4);
    c.rho = 2.0;
    c.nu = 1.0;
    c.good_map = [](const Vec& eta) { return eta; };
    c.good_map_jacobian = [](const Vec& eta) { return Mat::Identity(eta.size(), eta.size()); };
    return c;
}

inline FactorizedNPRE solar_npre() { return {solar_map(), solar_change(), 1}; }

}  // namespace nlpre
