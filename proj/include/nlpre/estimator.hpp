// Parameter estimators over the mixed scalar regressions: the CT law
//   eta_hat' = Gamma P Delta (scriptY - Delta G(eta_hat)),
// the normalized DT law
//   eta_hat(k+1) = eta_hat(k) + gamma P Delta/(1+kappa Delta^2) (scriptY - Delta G(eta_hat)),
// the gain admissibility algebra for the DT law, an overparameterized
// normalized-gradient baseline, and excitation bookkeeping.
#pragma once

#include "nlpre/extension.hpp"
#include "nlpre/map.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace nlpre {

struct CTDremEstimator {
    Vec eta_hat;
    Mat Gamma;  // q x q positive definite adaptation gain
    Mat P;      // from the parameter change
};

struct DTDremEstimator {
    Vec eta_hat;
    double gamma = 1.0;  // adaptation gain
    double kappa = 1.0;  // normalization constant
    Mat P;
    double sigma = 0.0;  // 2 gamma rho - gamma^2 nu^2 lmax(P)^2, set by gain validation
};

/// Overparameterized estimate of the full map value S(theta).
struct GradientBaseline {
    Vec S_hat;
    double gamma = 1.0;
};

/// Result of validating a (gamma, kappa) pair against certified (rho, nu, P).
struct GainReport {
    double sigma = 0.0;
    double kappa_min = 1.0;          // max(1, sigma)
    double gamma_max = 0.0;          // 2 rho / (nu^2 lmax(P)^2), open upper bound
    bool interval_applicable = false;  // nu <= rho / lmax(P)
    double gamma_lo = std::numeric_limits<double>::quiet_NaN();
    double gamma_hi = std::numeric_limits<double>::quiet_NaN();
};

/// Validates the DT gain pair. Throws GainError when sigma <= 0 (gain too
/// large) or kappa < max(1, sigma) (normalization too weak). Also evaluates
/// the stricter interval condition under which Delta notin l2 suffices for
/// convergence.
inline GainReport validate_dt_gains(double rho, double nu, const Mat& P,
                                    double gamma, double kappa) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(P, Eigen::EigenvaluesOnly);
    const double lmax = eig.eigenvalues().maxCoeff();
    const double nl2 = nu * nu * lmax * lmax;

    GainReport report;
    report.gamma_max = 2.0 * rho / nl2;
    report.sigma = 2.0 * gamma * rho - gamma * gamma * nl2;
    report.kappa_min = std::max(1.0, report.sigma);
    report.interval_applicable = nu <= rho / lmax;
    if (report.interval_applicable) {
        const double disc = std::sqrt(rho * rho - nl2);
        report.gamma_lo = (rho - disc) / nl2;
        report.gamma_hi = (rho + disc) / nl2;
    }

    if (report.sigma <= 0.0) {
        std::ostringstream msg;
        msg << "adaptation gain too large: sigma = " << report.sigma
            << " <= 0; need gamma < " << report.gamma_max;
        throw GainError(msg.str());
    }
    if (kappa < report.kappa_min) {
        std::ostringstream msg;
        msg << "normalization constant too small: kappa = " << kappa
            << " < max(1, sigma) = " << report.kappa_min;
        throw GainError(msg.str());
    }
    return report;
}

/// Right-hand side of the CT estimator. Delta = 0 freezes the estimate.
inline Vec ct_estimator_derivative(const CTDremEstimator& est, const MixedOutput& mixed,
                                   const FactorizedNPRE& npre) {
    const Vec innovation = mixed.script_y - mixed.delta * eval_good_map(npre, est.eta_hat);
    return est.Gamma * (est.P * (mixed.delta * innovation));
}

/// One step of the normalized DT estimator; returns the updated estimate.
inline Vec dt_estimator_step(const DTDremEstimator& est, const MixedOutput& mixed,
                             const FactorizedNPRE& npre) {
    const double d = mixed.delta;
    const Vec innovation = mixed.script_y - d * eval_good_map(npre, est.eta_hat);
    return est.eta_hat + (est.gamma * d / (1.0 + est.kappa * d * d)) * (est.P * innovation);
}

/// Normalized-gradient update for the overparameterized linear regression
/// y = Omega S_hat with scalar output (n = 1).
inline Vec dt_gradient_baseline_step(const GradientBaseline& base, const Mat& omega,
                                     const Vec& y) {
    const double denom = base.gamma + omega.row(0).squaredNorm();
    const double innovation = y[0] - omega.row(0).dot(base.S_hat);
    return base.S_hat + omega.row(0).transpose() * (innovation / denom);
}

/// Running excitation bookkeeping. CT accumulates the integral of Delta^2 on
/// the integrator grid; DT accumulates the normalized sum
/// sum Delta^2/(1+kappa Delta^2) together with the contraction product
/// prod (1+(kappa-sigma)Delta^2)/(1+kappa Delta^2) and the raw sum of
/// Delta^2.
struct ExcitationTracker {
    double integral_delta_sq = 0.0;
    double product = 1.0;
    double sum_delta_sq = 0.0;
    double last_delta = 0.0;
};

inline ExcitationTracker track_excitation_ct(ExcitationTracker t, double delta, double dt) {
    t.integral_delta_sq += delta * delta * dt;
    t.last_delta = delta;
    return t;
}

inline ExcitationTracker track_excitation_dt(ExcitationTracker t, double delta,
                                             double kappa, double sigma) {
    const double d2 = delta * delta;
    t.integral_delta_sq += d2 / (1.0 + kappa * d2);
    t.product *= (1.0 + (kappa - sigma) * d2) / (1.0 + kappa * d2);
    t.sum_delta_sq += d2;
    t.last_delta = delta;
    return t;
}

}  // namespace nlpre
