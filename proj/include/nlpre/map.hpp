// Factorizable nonlinearly parameterized regressions: the nonlinear map S,
// the monotonizing parameter change, and the selected "good" map.
//
// Jacobians follow the usual row-per-output convention: for F: R^q -> R^p,
// J(i,j) = dF_i / dx_j. The monotonicity certificate matrix below is
// P J^T + J P, whose positive definiteness over a region bounds the
// directional increments (a-b)^T P [G(a)-G(b)] away from zero.
#pragma once

#include "nlpre/types.hpp"

#include <functional>
#include <limits>
#include <string>
#include <utility>

namespace nlpre {

/// Nonlinear parameter map S: R^q -> R^p (p > q) with analytic Jacobian and
/// a per-coordinate domain box (entries may be infinite).
struct NonlinearMap {
    Index q = 0;
    Index p = 0;
    std::function<Vec(const Vec&)> eval;
    std::function<Mat(const Vec&)> jacobian;  // p x q
    Vec lower;                                // domain box, size q
    Vec upper;

    static Vec unbounded(Index q) {
        return Vec::Constant(q, std::numeric_limits<double>::infinity());
    }
};

/// Bijective parameter change theta <-> eta together with the permutation and
/// row selection that pick the monotone components of W(eta) = S(D^I(eta)),
/// the certificate matrix P, and the certified constants rho (monotonicity
/// margin) and nu (Lipschitz bound).
///
/// permutation[i] is the source index of the i-th permuted row, so row
/// selection i picks W[permutation[selector_rows[i]]]. good_map /
/// good_map_jacobian may carry simplified closed forms of the selected
/// components; when absent they are composed from S, D^I and the inverse
/// Jacobian (which then must be provided).
struct ParameterChange {
    std::string name;
    std::function<Vec(const Vec&)> forward;            // theta -> eta
    std::function<Vec(const Vec&)> inverse;            // eta -> theta, may throw SingularInverseError
    std::function<Mat(const Vec&)> inverse_jacobian;   // q x q, optional if good_map_jacobian given
    VecI permutation;                                  // length p, 0-based
    VecI selector_rows;                                // length q, 0-based
    Mat P;                                             // q x q symmetric positive definite
    double rho = 0.0;
    double nu = 0.0;
    std::function<Vec(const Vec&)> good_map;           // optional closed form of C W(eta)
    std::function<Mat(const Vec&)> good_map_jacobian;  // optional analytic q x q Jacobian

    /// Index into W of the i-th good component.
    VecI good_indices() const {
        VecI idx(selector_rows.size());
        for (Index i = 0; i < selector_rows.size(); ++i) idx[i] = permutation[selector_rows[i]];
        return idx;
    }
};

/// A regression y = Omega S(theta) with y in R^n, Omega in R^{n x p}, bundled
/// with the parameter change that monotonizes it.
struct FactorizedNPRE {
    NonlinearMap map;
    ParameterChange change;
    Index n = 1;
};

/// W(eta) = S(D^I(eta)), the original map expressed in the new coordinates.
inline Vec eval_transformed_map(const FactorizedNPRE& npre, const Vec& eta) {
    return npre.map.eval(npre.change.inverse(eta));
}

/// The good map G(eta): the selected q components of the permuted W(eta).
/// Uses the registered closed form when one is present.
inline Vec eval_good_map(const FactorizedNPRE& npre, const Vec& eta) {
    if (npre.change.good_map) return npre.change.good_map(eta);
    const Vec w = eval_transformed_map(npre, eta);
    const VecI idx = npre.change.good_indices();
    Vec g(idx.size());
    for (Index i = 0; i < idx.size(); ++i) g[i] = w[idx[i]];
    return g;
}

/// Analytic Jacobian of the good map (q x q, row per output).
inline Mat good_map_jacobian(const FactorizedNPRE& npre, const Vec& eta) {
    if (npre.change.good_map_jacobian) return npre.change.good_map_jacobian(eta);
    const Vec theta = npre.change.inverse(eta);
    const Mat js = npre.map.jacobian(theta);            // p x q
    const Mat jd = npre.change.inverse_jacobian(eta);   // q x q
    const Mat jw = js * jd;                             // p x q
    const VecI idx = npre.change.good_indices();
    Mat jg(idx.size(), eta.size());
    for (Index i = 0; i < idx.size(); ++i) jg.row(i) = jw.row(idx[i]);
    return jg;
}

/// Certificate matrix P J^T + J P evaluated at eta, with J the good-map
/// Jacobian. For a linear good map G = A eta this equals P A^T + A P; for the
/// identity map it is exactly 2P.
inline Mat demidovich_matrix(const FactorizedNPRE& npre, const Vec& eta) {
    const Mat j = good_map_jacobian(npre, eta);
    const Mat pj = npre.change.P * j.transpose();
    return pj + pj.transpose();
}

}  // namespace nlpre
