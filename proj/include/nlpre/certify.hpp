// Sampling-based certification of the monotonicity and Lipschitz conditions
// carried by a parameter change. These are falsifiers with a confidence
// report, not proofs: they sample theta uniformly in the map's domain box,
// push the samples through D, and track the worst statistic found.
#pragma once

#include "nlpre/map.hpp"

#include <Eigen/Eigenvalues>

#include <random>

namespace nlpre {

/// Outcome of one certification sweep. `statistic` is the extremal value
/// found: the minimum eigenvalue of the certificate matrix (Demidovich), the
/// minimum increment ratio (strong monotonicity), or the maximum increment
/// ratio (Lipschitz). `worst_point` is the eta sample attaining it.
struct CertificateReport {
    double statistic = 0.0;
    Vec worst_point;
    long samples_checked = 0;
    bool passed = false;
};

namespace detail {

// Uniform sample of theta in the domain box; axes without finite bounds are
// drawn from [-unbounded_range, unbounded_range].
inline Vec sample_theta(const NonlinearMap& map, std::mt19937_64& rng, double unbounded_range) {
    Vec theta(map.q);
    for (Index i = 0; i < map.q; ++i) {
        double lo = map.lower.size() ? map.lower[i] : -unbounded_range;
        double hi = map.upper.size() ? map.upper[i] : unbounded_range;
        if (!std::isfinite(lo)) lo = -unbounded_range;
        if (!std::isfinite(hi)) hi = unbounded_range;
        std::uniform_real_distribution<double> dist(lo, hi);
        theta[i] = dist(rng);
    }
    return theta;
}

}  // namespace detail

/// Checks P J_G^T + J_G P >= rho I over sampled points of the eta region.
/// The report passes when the smallest eigenvalue seen stays at or above the
/// registered rho.
inline CertificateReport check_demidovich(const FactorizedNPRE& npre, long sample_count,
                                          unsigned seed, double unbounded_range = 10.0) {
    std::mt19937_64 rng(seed);
    CertificateReport report;
    report.statistic = std::numeric_limits<double>::infinity();
    for (long s = 0; s < sample_count; ++s) {
        const Vec theta = detail::sample_theta(npre.map, rng, unbounded_range);
        const Vec eta = npre.change.forward(theta);
        const Mat m = demidovich_matrix(npre, eta);
        Eigen::SelfAdjointEigenSolver<Mat> eig(m, Eigen::EigenvaluesOnly);
        const double lmin = eig.eigenvalues().minCoeff();
        if (lmin < report.statistic) {
            report.statistic = lmin;
            report.worst_point = eta;
        }
        ++report.samples_checked;
    }
    report.passed = report.statistic >= npre.change.rho;
    return report;
}

/// Checks the increment condition (a-b)^T P [G(a)-G(b)] >= rho |a-b|^2 over
/// sampled pairs; reports the minimal ratio found.
inline CertificateReport check_strong_monotonicity(const FactorizedNPRE& npre, long pair_count,
                                                   unsigned seed, double unbounded_range = 10.0) {
    std::mt19937_64 rng(seed);
    CertificateReport report;
    report.statistic = std::numeric_limits<double>::infinity();
    for (long s = 0; s < pair_count; ++s) {
        const Vec a = npre.change.forward(detail::sample_theta(npre.map, rng, unbounded_range));
        const Vec b = npre.change.forward(detail::sample_theta(npre.map, rng, unbounded_range));
        const double dist2 = (a - b).squaredNorm();
        if (dist2 < 1e-24) continue;  // degenerate pair, skip
        const double ratio = (a - b).dot(npre.change.P * (eval_good_map(npre, a) - eval_good_map(npre, b))) / dist2;
        if (ratio < report.statistic) {
            report.statistic = ratio;
            report.worst_point = a;
        }
        ++report.samples_checked;
    }
    report.passed = report.statistic >= npre.change.rho;
    return report;
}

/// Checks |G(a)-G(b)| <= nu |a-b| over sampled pairs; reports the maximal
/// ratio found.
inline CertificateReport check_lipschitz(const FactorizedNPRE& npre, long pair_count,
                                         unsigned seed, double unbounded_range = 10.0) {
    std::mt19937_64 rng(seed);
    CertificateReport report;
    report.statistic = 0.0;
    for (long s = 0; s < pair_count; ++s) {
        const Vec a = npre.change.forward(detail::sample_theta(npre.map, rng, unbounded_range));
        const Vec b = npre.change.forward(detail::sample_theta(npre.map, rng, unbounded_range));
        const double dist = (a - b).norm();
        if (dist < 1e-12) continue;
        const double ratio = (eval_good_map(npre, a) - eval_good_map(npre, b)).norm() / dist;
        if (ratio > report.statistic) {
            report.statistic = ratio;
            report.worst_point = a;
        }
        ++report.samples_checked;
    }
    report.passed = report.statistic <= npre.change.nu;
    return report;
}

}  // namespace nlpre
