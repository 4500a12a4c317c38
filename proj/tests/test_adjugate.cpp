#include "nlpre/adjugate.hpp"

#include "doctest.h"

#include <random>

using nlpre::Index;
using nlpre::Mat;

namespace {

// Independent determinant oracle: cofactor expansion along the first row,
// written without reference to the library helpers.
double det_oracle(const Mat& a) {
    const Index p = a.rows();
    if (p == 1) return a(0, 0);
    double det = 0.0;
    for (Index j = 0; j < p; ++j) {
        Mat minor(p - 1, p - 1);
        for (Index r = 1; r < p; ++r) {
            Index mc = 0;
            for (Index c = 0; c < p; ++c) {
                if (c == j) continue;
                minor(r - 1, mc++) = a(r, c);
            }
        }
        det += ((j % 2) ? -1.0 : 1.0) * a(0, j) * det_oracle(minor);
    }
    return det;
}

Mat random_matrix(Index p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    Mat a(p, p);
    for (Index i = 0; i < p; ++i)
        for (Index j = 0; j < p; ++j) a(i, j) = dist(rng);
    return a;
}

}  // namespace

TEST_CASE("adjugate closed forms") {
    // 1x1: adj is [1] so that adj(A) A = det(A) I
    Mat one(1, 1);
    one << 7.0;
    CHECK(nlpre::adjugate(one)(0, 0) == 1.0);

    // 2x2 [[a,b],[c,d]] -> [[d,-b],[-c,a]]
    Mat a(2, 2);
    a << 1.0, 2.0, 3.0, 4.0;
    const Mat adj = nlpre::adjugate(a);
    CHECK(adj(0, 0) == 4.0);
    CHECK(adj(0, 1) == -2.0);
    CHECK(adj(1, 0) == -3.0);
    CHECK(adj(1, 1) == 1.0);

    for (Index p = 2; p <= 6; ++p) {
        CHECK(nlpre::adjugate(Mat::Identity(p, p)).isApprox(Mat::Identity(p, p), 1e-14));
    }
}

TEST_CASE("adjugate of a singular matrix") {
    Mat a(2, 2);
    a << 1.0, 2.0, 2.0, 4.0;
    const Mat adj = nlpre::adjugate(a);
    CHECK(adj(0, 0) == 4.0);
    CHECK(adj(0, 1) == -2.0);
    CHECK(adj(1, 0) == -2.0);
    CHECK(adj(1, 1) == 1.0);
    CHECK((adj * a).norm() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(nlpre::determinant(a) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("adjugate identity over random matrices, singular ones included") {
    std::mt19937_64 rng(2024);
    long checked = 0;
    for (Index p = 2; p <= 6; ++p) {
        for (int trial = 0; trial < 200; ++trial) {
            Mat a = random_matrix(p, rng);
            if (trial < 20) {
                // force rank deficiency
                a.col(p - 1) = 0.5 * a.col(0) - a.col(p > 2 ? 1 : 0);
            }
            const double scale = std::max(1.0, std::pow(a.cwiseAbs().maxCoeff(), double(p)));
            const Mat residual = nlpre::adjugate(a) * a - nlpre::determinant(a) * Mat::Identity(p, p);
            CHECK(residual.cwiseAbs().maxCoeff() <= 1e-9 * scale);
            ++checked;
        }
    }
    CHECK(checked == 1000);
}

TEST_CASE("LU determinant matches cofactor expansion for small orders") {
    std::mt19937_64 rng(7);
    for (Index p = 1; p <= 4; ++p) {
        for (int trial = 0; trial < 250; ++trial) {
            const Mat a = random_matrix(p, rng);
            const double lu = nlpre::determinant(a);
            const double co = det_oracle(a);
            CHECK(lu == doctest::Approx(co).epsilon(1e-10));
        }
    }
}
