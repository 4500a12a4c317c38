// Domain types of the factorizable regressions: parameter changes, good maps
// and the sampled monotonicity/Lipschitz certificates.
#include "nlpre/appc.hpp"
#include "nlpre/certify.hpp"
#include "nlpre/robot.hpp"
#include "nlpre/solar.hpp"

#include "doctest.h"

#include <random>

using nlpre::FactorizedNPRE;
using nlpre::Index;
using nlpre::Mat;
using nlpre::Vec;

namespace {

Vec sample_box(const nlpre::NonlinearMap& map, std::mt19937_64& rng) {
    Vec theta(map.q);
    for (Index i = 0; i < map.q; ++i) {
        std::uniform_real_distribution<double> dist(map.lower[i], map.upper[i]);
        theta[i] = dist(rng);
    }
    return theta;
}

// Central finite differences of the good map.
Mat fd_good_map_jacobian(const FactorizedNPRE& npre, const Vec& eta, double eps = 1e-6) {
    const Index q = eta.size();
    Mat j(q, q);
    for (Index k = 0; k < q; ++k) {
        Vec hi = eta, lo = eta;
        hi[k] += eps;
        lo[k] -= eps;
        j.col(k) = (nlpre::eval_good_map(npre, hi) - nlpre::eval_good_map(npre, lo)) / (2.0 * eps);
    }
    return j;
}

// Identity map with adjustable constants, for exercising the checks alone.
FactorizedNPRE scaled_identity_npre(Index q, double scale, double rho, double nu) {
    nlpre::NonlinearMap map;
    map.q = q;
    map.p = q + 1;
    map.eval = [scale, q](const Vec& th) {
        Vec s(q + 1);
        s.head(q) = scale * th;
        s[q] = 1.0;
        return s;
    };
    map.jacobian = [scale, q](const Vec&) {
        Mat j = Mat::Zero(q + 1, q);
        j.topLeftCorner(q, q) = scale * Mat::Identity(q, q);
        return j;
    };
    map.lower = Vec::Constant(q, -2.0);
    map.upper = Vec::Constant(q, 2.0);

    nlpre::ParameterChange change;
    change.name = "scaled-identity";
    change.forward = [](const Vec& th) { return th; };
    change.inverse = [](const Vec& eta) { return eta; };
    change.inverse_jacobian = [q](const Vec&) { return Mat::Identity(q, q); };
    change.permutation = nlpre::VecI::LinSpaced(q + 1, 0, static_cast<int>(q));
    change.selector_rows = nlpre::VecI::LinSpaced(q, 0, static_cast<int>(q - 1));
    change.P = Mat::Identity(q, q);
    change.rho = rho;
    change.nu = nu;
    return {map, change, 1};
}

}  // namespace

TEST_CASE("registered changes round-trip over their domain boxes") {
    std::mt19937_64 rng(11);
    const FactorizedNPRE npres[] = {nlpre::robot_npre(), nlpre::solar_npre(),
                                    nlpre::appc_indirect_npre(), nlpre::appc_direct_npre()};
    for (const auto& npre : npres) {
        for (int trial = 0; trial < 1000; ++trial) {
            const Vec theta = sample_box(npre.map, rng);
            const Vec back = npre.change.inverse(npre.change.forward(theta));
            CHECK((back - theta).norm() <= 1e-10 * (1.0 + theta.norm()));
        }
    }
}

TEST_CASE("good map values") {
    // solar and direct pole placement: identity good map
    const FactorizedNPRE solar = nlpre::solar_npre();
    Vec eta(4);
    eta << -0.5, 0.5, 0.25, 0.5;
    CHECK(nlpre::eval_good_map(solar, eta).isApprox(eta, 1e-14));

    const FactorizedNPRE direct = nlpre::appc_direct_npre();
    Vec eta_d(4);
    eta_d << 1.0, 0.125, 0.25, 0.125;
    CHECK(nlpre::eval_good_map(direct, eta_d).isApprox(eta_d, 1e-14));

    // robot: G(eta) = (eta1 eta3, eta2 eta3, eta3, eta4)
    const FactorizedNPRE robot = nlpre::robot_npre();
    Vec eta_r(4);
    eta_r << 0.7, 0.8, 0.4, 1.4;
    Vec expected(4);
    expected << 0.28, 0.32, 0.4, 1.4;
    CHECK(nlpre::eval_good_map(robot, eta_r).isApprox(expected, 1e-14));

    // cross-check against the composed route S(D^I(eta)) at a regular point
    const nlpre::VecI idx = robot.change.good_indices();
    const Vec w = nlpre::eval_transformed_map(robot, eta_r);
    for (Index i = 0; i < 4; ++i) {
        CHECK(nlpre::eval_good_map(robot, eta_r)[i] == doctest::Approx(w[idx[i]]).epsilon(1e-14));
    }
}

TEST_CASE("good map selection consistency for every registered change") {
    std::mt19937_64 rng(23);
    const FactorizedNPRE npres[] = {nlpre::robot_npre(), nlpre::solar_npre(),
                                    nlpre::appc_indirect_npre(), nlpre::appc_direct_npre()};
    for (const auto& npre : npres) {
        const nlpre::VecI idx = npre.change.good_indices();
        for (int trial = 0; trial < 100; ++trial) {
            const Vec eta = npre.change.forward(sample_box(npre.map, rng));
            const Vec g = nlpre::eval_good_map(npre, eta);
            const Vec w = nlpre::eval_transformed_map(npre, eta);
            for (Index i = 0; i < idx.size(); ++i) {
                CHECK(g[i] == doctest::Approx(w[idx[i]]).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("analytic good-map Jacobians match finite differences") {
    std::mt19937_64 rng(37);
    const FactorizedNPRE npres[] = {nlpre::robot_npre(), nlpre::solar_npre(),
                                    nlpre::appc_indirect_npre(), nlpre::appc_direct_npre()};
    for (const auto& npre : npres) {
        for (int trial = 0; trial < 100; ++trial) {
            const Vec eta = npre.change.forward(sample_box(npre.map, rng));
            const Mat analytic = nlpre::good_map_jacobian(npre, eta);
            const Mat fd = fd_good_map_jacobian(npre, eta);
            CHECK((analytic - fd).cwiseAbs().maxCoeff() <= 1e-5 * (1.0 + analytic.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("map Jacobians match finite differences of eval") {
    std::mt19937_64 rng(41);
    const FactorizedNPRE npres[] = {nlpre::robot_npre(), nlpre::solar_npre(),
                                    nlpre::appc_indirect_npre(), nlpre::appc_direct_npre()};
    for (const auto& npre : npres) {
        for (int trial = 0; trial < 100; ++trial) {
            const Vec theta = sample_box(npre.map, rng);
            const Mat analytic = npre.map.jacobian(theta);
            Mat fd(npre.map.p, npre.map.q);
            const double eps = 1e-6;
            for (Index k = 0; k < npre.map.q; ++k) {
                Vec hi = theta, lo = theta;
                hi[k] += eps;
                lo[k] -= eps;
                fd.col(k) = (npre.map.eval(hi) - npre.map.eval(lo)) / (2.0 * eps);
            }
            CHECK((analytic - fd).cwiseAbs().maxCoeff() <=
                  1e-5 * (1.0 + analytic.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("certificate matrix is exactly 2P for identity good maps") {
    const FactorizedNPRE npres[] = {nlpre::solar_npre(), nlpre::appc_direct_npre()};
    for (const auto& npre : npres) {
        const Vec eta = Vec::Constant(4, 0.3);
        CHECK(nlpre::demidovich_matrix(npre, eta).isApprox(2.0 * npre.change.P, 1e-15));
    }
}

TEST_CASE("demidovich check on the identity map") {
    // G = eta, P = I4: matrix is 2I, so rho = 2 is met with min eigenvalue 2
    const auto report = nlpre::check_demidovich(nlpre::solar_npre(), 200, 5);
    CHECK(report.passed);
    CHECK(report.statistic == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(report.samples_checked == 200);

    const auto direct = nlpre::check_demidovich(nlpre::appc_direct_npre(), 200, 5);
    CHECK(direct.passed);
    CHECK(direct.statistic == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("demidovich check on the robot region") {
    // default box satisfies the a >= (t2_max + t1_max^2/t2_min)/(4 t4_min)
    // bound at a = 1
    const nlpre::NonlinearMap map = nlpre::robot_map();
    CHECK(nlpre::robot_p_gain_bound(map.lower, map.upper) <= 1.0);

    const FactorizedNPRE robot = nlpre::robot_npre(1.0);
    const auto report = nlpre::check_demidovich(robot, 2000, 9);
    CHECK(report.passed);
    CHECK(report.statistic >= nlpre::kRobotRho);

    // oracle: the certificate matrix is positive definite iff
    // a > (eta1^2 + eta2^2) / (4 eta3); verify at sampled points
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec eta = robot.change.forward(sample_box(robot.map, rng));
        CHECK(1.0 > (eta[0] * eta[0] + eta[1] * eta[1]) / (4.0 * eta[2]));
    }

    // an undersized leading gain fails, with a witness point reported
    const FactorizedNPRE small = nlpre::robot_npre(0.2);
    const auto failing = nlpre::check_demidovich(small, 2000, 9);
    CHECK_FALSE(failing.passed);
    CHECK(failing.worst_point.size() == 4);
    // the witness must actually violate the sufficient condition at a = 0.2
    const Vec& w = failing.worst_point;
    CHECK(0.2 < (w[0] * w[0] + w[1] * w[1]) / (4.0 * w[2]));
}

TEST_CASE("demidovich check fails on an anti-monotone map") {
    FactorizedNPRE npre = scaled_identity_npre(4, -1.0, 0.1, 1.0);
    const auto report = nlpre::check_demidovich(npre, 50, 3);
    CHECK_FALSE(report.passed);
    CHECK(report.statistic == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("strong monotonicity ratios") {
    // identity: ratio exactly 1
    auto id = scaled_identity_npre(3, 1.0, 1.0, 1.0);
    auto report = nlpre::check_strong_monotonicity(id, 300, 13);
    CHECK(report.passed);
    CHECK(report.statistic == doctest::Approx(1.0).epsilon(1e-12));

    // doubling map with rho = 2
    auto twice = scaled_identity_npre(3, 2.0, 2.0, 2.0);
    CHECK(nlpre::check_strong_monotonicity(twice, 300, 13).passed);

    // anti-monotone: ratio -1, fails for any positive rho
    auto anti = scaled_identity_npre(3, -1.0, 0.1, 1.0);
    report = nlpre::check_strong_monotonicity(anti, 300, 13);
    CHECK_FALSE(report.passed);
    CHECK(report.statistic == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("lipschitz ratios") {
    auto id = scaled_identity_npre(3, 1.0, 1.0, 1.0);
    auto report = nlpre::check_lipschitz(id, 300, 17);
    CHECK(report.passed);
    CHECK(report.statistic == doctest::Approx(1.0).epsilon(1e-12));

    // tripling map against nu = 1 fails with ratio 3
    auto triple = scaled_identity_npre(3, 3.0, 1.0, 1.0);
    report = nlpre::check_lipschitz(triple, 300, 17);
    CHECK_FALSE(report.passed);
    CHECK(report.statistic == doctest::Approx(3.0).epsilon(1e-12));

    // identity with slack bound nu = 2 passes
    auto slack = scaled_identity_npre(3, 1.0, 1.0, 2.0);
    CHECK(nlpre::check_lipschitz(slack, 300, 17).passed);

    // registered constants hold on the sampled regions
    CHECK(nlpre::check_lipschitz(nlpre::solar_npre(), 500, 19).passed);
    CHECK(nlpre::check_lipschitz(nlpre::appc_direct_npre(), 500, 19).passed);
    CHECK(nlpre::check_lipschitz(nlpre::appc_indirect_npre(), 500, 19).passed);
    CHECK(nlpre::check_lipschitz(nlpre::robot_npre(), 500, 19).passed);
}

TEST_CASE("singular inverses raise typed errors naming the coordinate") {
    const auto solar = nlpre::solar_change();
    Vec eta = Vec::Zero(4);
    CHECK_THROWS_AS(solar.inverse(eta), nlpre::SingularInverseError);
    try {
        solar.inverse(eta);
    } catch (const nlpre::SingularInverseError& err) {
        CHECK(err.coordinate() == "eta1");
    }

    const auto direct = nlpre::appc_direct_change();
    Vec eta_d(4);
    eta_d << 1.0, 0.0, 0.5, 0.25;
    try {
        direct.inverse(eta_d);
        FAIL("expected SingularInverseError");
    } catch (const nlpre::SingularInverseError& err) {
        CHECK(err.coordinate() == "eta2");
    }
    eta_d << 1.0, 0.5, 0.0, 0.25;
    try {
        direct.inverse(eta_d);
        FAIL("expected SingularInverseError");
    } catch (const nlpre::SingularInverseError& err) {
        CHECK(err.coordinate() == "eta3");
    }

    // the composed good-map route surfaces the same error
    nlpre::FactorizedNPRE composed = nlpre::solar_npre();
    composed.change.good_map = nullptr;
    composed.change.good_map_jacobian = nullptr;
    CHECK_THROWS_AS(nlpre::eval_good_map(composed, Vec::Zero(4)), nlpre::SingularInverseError);
}

TEST_CASE("permutations of registered changes are bijections") {
    const FactorizedNPRE npres[] = {nlpre::robot_npre(), nlpre::solar_npre(),
                                    nlpre::appc_indirect_npre(), nlpre::appc_direct_npre()};
    for (const auto& npre : npres) {
        const nlpre::VecI& perm = npre.change.permutation;
        CHECK(perm.size() == npre.map.p);
        std::vector<bool> seen(perm.size(), false);
        for (Index i = 0; i < perm.size(); ++i) {
            REQUIRE(perm[i] >= 0);
            REQUIRE(perm[i] < perm.size());
            CHECK_FALSE(seen[perm[i]]);
            seen[perm[i]] = true;
        }
        // P symmetric positive definite
        Eigen::SelfAdjointEigenSolver<Mat> eig(npre.change.P, Eigen::EigenvaluesOnly);
        CHECK(eig.eigenvalues().minCoeff() > 0.0);
    }
}
