// Classical adjugate and determinant helpers for small dense matrices.
//
// The adjugate is needed on possibly singular matrices (adj{A}A = det{A} I
// must keep holding when det{A} = 0), so the generic inverse-based shortcut
// gets a cofactor fallback near singularity.
#pragma once

#include "nlpre/types.hpp"

#include <cmath>

namespace nlpre {

namespace detail {

inline double det2(double a, double b, double c, double d) { return a * d - b * c; }

inline double det3(const Mat& m) {
    return m(0, 0) * det2(m(1, 1), m(1, 2), m(2, 1), m(2, 2))
         - m(0, 1) * det2(m(1, 0), m(1, 2), m(2, 0), m(2, 2))
         + m(0, 2) * det2(m(1, 0), m(1, 1), m(2, 0), m(2, 1));
}

// (p-1)x(p-1) minor of A with row i and column j removed.
inline Mat minor_of(const Mat& a, Index i, Index j) {
    const Index p = a.rows();
    Mat m(p - 1, p - 1);
    for (Index r = 0, mr = 0; r < p; ++r) {
        if (r == i) continue;
        for (Index c = 0, mc = 0; c < p; ++c) {
            if (c == j) continue;
            m(mr, mc++) = a(r, c);
        }
        ++mr;
    }
    return m;
}

inline double minor_det(const Mat& m) {
    switch (m.rows()) {
        case 0: return 1.0;
        case 1: return m(0, 0);
        case 2: return det2(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
        case 3: return det3(m);
        default: return Eigen::PartialPivLU<Mat>(m).determinant();
    }
}

}  // namespace detail

/// Determinant by cofactor expansion along the first row. Exact arithmetic
/// path for small p; used as the independent route against the LU value.
inline double cofactor_determinant(const Mat& a) {
    const Index p = a.rows();
    if (p == 0) return 1.0;
    if (p == 1) return a(0, 0);
    if (p == 2) return detail::det2(a(0, 0), a(0, 1), a(1, 0), a(1, 1));
    if (p == 3) return detail::det3(a);
    double det = 0.0;
    double sign = 1.0;
    for (Index j = 0; j < p; ++j) {
        det += sign * a(0, j) * cofactor_determinant(detail::minor_of(a, 0, j));
        sign = -sign;
    }
    return det;
}

/// Adjugate via the transpose-of-cofactors definition. Total, including on
/// singular input.
inline Mat adjugate_cofactor(const Mat& a) {
    const Index p = a.rows();
    if (p == 1) return Mat::Identity(1, 1);  // adj of a scalar is [1]
    Mat adj(p, p);
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) {
            const double c = detail::minor_det(detail::minor_of(a, i, j));
            adj(j, i) = (((i + j) % 2) == 0 ? c : -c);
        }
    }
    return adj;
}

/// Classical adjugate: adj{A} A = det{A} I, valid for singular A as well.
/// Small orders use cofactors directly; larger ones go through LU as
/// det{A} A^{-1} and fall back to cofactors when the determinant is too
/// small for the inverse to be trustworthy.
inline Mat adjugate(const Mat& a) {
    const Index p = a.rows();
    if (p <= 4) return adjugate_cofactor(a);

    Eigen::PartialPivLU<Mat> lu(a);
    const double det = lu.determinant();
    const double scale = a.cwiseAbs().maxCoeff();
    // negated comparison also routes det = 0 and NaN through the safe path
    if (!(std::abs(det) > 1e-12 * std::pow(scale, static_cast<double>(p)))) {
        return adjugate_cofactor(a);
    }
    return det * lu.inverse();
}

/// Determinant through partial-pivot LU.
inline double determinant(const Mat& a) {
    if (a.rows() == 0) return 1.0;
    return Eigen::PartialPivLU<Mat>(a).determinant();
}

}  // namespace nlpre
