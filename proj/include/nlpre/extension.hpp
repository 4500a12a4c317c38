// Regressor extension and mixing: first-order filters building the extended
// pair (Y, Phi) from (Omega, y), then multiplication by adj{Phi} and row
// selection to obtain q decoupled scalar regressions Y_i = Delta G_i(eta)
// with Delta = det{Phi}.
#pragma once

#include "nlpre/adjugate.hpp"
#include "nlpre/map.hpp"

#include <utility>

namespace nlpre {

/// Continuous-time extension state driven by
///   Y' = -lambda Y + Omega^T y,  Phi' = -lambda Phi + Omega^T Omega.
struct CTExtensionState {
    Vec Y;
    Mat Phi;
    double lambda = 1.0;

    static CTExtensionState zero(Index p, double lambda) {
        return {Vec::Zero(p), Mat::Zero(p, p), lambda};
    }
};

/// Discrete-time extension state advanced by
///   Y(k) = -alpha Y(k-1) + Omega^T(k-1) y(k-1),
///   Phi(k) = -alpha Phi(k-1) + Omega^T(k-1) Omega(k-1),
/// with 0 < alpha < 1. The recursion keeps the pole at -alpha, so transients
/// alternate in sign.
struct DTExtensionState {
    Vec Y;
    Mat Phi;
    double alpha = 0.9;

    static DTExtensionState zero(Index p, double alpha) {
        return {Vec::Zero(p), Mat::Zero(p, p), alpha};
    }
};

/// Mixed scalar regressions: script_y[i] = Delta * G_i(eta) whenever the
/// underlying regression is exact.
struct MixedOutput {
    Vec script_y;
    double delta = 0.0;
};

/// Time derivative of the CT extension state. Pure; feeds the integrator.
inline std::pair<Vec, Mat> ct_extension_derivative(const CTExtensionState& state,
                                                   const Mat& omega, const Vec& y) {
    return {-state.lambda * state.Y + omega.transpose() * y,
            -state.lambda * state.Phi + omega.transpose() * omega};
}

/// One step of the DT extension recursion, fed with the previous sample's
/// regression pair.
inline DTExtensionState dt_extension_step(const DTExtensionState& state,
                                          const Mat& omega_prev, const Vec& y_prev) {
    return {-state.alpha * state.Y + omega_prev.transpose() * y_prev,
            -state.alpha * state.Phi + omega_prev.transpose() * omega_prev,
            state.alpha};
}

/// Mixing: script_y = C adj{Phi} Y, Delta = det{Phi}. Total on singular Phi
/// (Delta = 0 and the estimator freezes).
inline MixedOutput mix(const Vec& Y, const Mat& Phi, const ParameterChange& change) {
    MixedOutput out;
    out.delta = determinant(Phi);
    const Vec mixed = adjugate(Phi) * Y;
    const VecI idx = change.good_indices();
    out.script_y.resize(idx.size());
    for (Index i = 0; i < idx.size(); ++i) out.script_y[i] = mixed[idx[i]];
    return out;
}

inline MixedOutput mix(const CTExtensionState& state, const ParameterChange& change) {
    return mix(state.Y, state.Phi, change);
}

inline MixedOutput mix(const DTExtensionState& state, const ParameterChange& change) {
    return mix(state.Y, state.Phi, change);
}

}  // namespace nlpre
