// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <tsfuzzy/common.hpp>
#include <tsfuzzy/linalg.hpp>

#include "oracles.hpp"

using namespace tsfuzzy;
using linalg::Matrix;

namespace {

Matrix random_symmetric(Rng& rng, std::size_t n) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = rng.uniform(-2.0, 2.0);
            a(i, j) = v;
            a(j, i) = v;
        }
    return a;
}

} // namespace

TEST_CASE("jacobi eigendecomposition reconstructs random symmetric matrices") {
    Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + rng.below(6);
        const Matrix a = random_symmetric(rng, n);
        const auto eig = linalg::jacobi_eigen(a);

        Matrix reconstructed(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t e = 0; e < n; ++e)
                    s += eig.vectors(i, e) * eig.values[e] * eig.vectors(j, e);
                reconstructed(i, j) = s;
            }
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(reconstructed(i, j) - a(i, j)));
        CHECK(err <= 1e-12 * std::max(1.0, oracle::frobenius(a)));

        // eigenvector orthonormality
        for (std::size_t e = 0; e < n; ++e)
            for (std::size_t f = 0; f < n; ++f) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += eig.vectors(i, e) * eig.vectors(i, f);
                CHECK(std::abs(s - (e == f ? 1.0 : 0.0)) <= 1e-12);
            }
    }
}

TEST_CASE("jacobi eigenvalue product matches the LU determinant") {
    Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng.below(4);
        const Matrix a = random_symmetric(rng, n);
        const auto eig = linalg::jacobi_eigen(a);
        double product = 1.0;
        for (double v : eig.values) product *= v;
        const double reference = oracle::determinant(a);
        CHECK(std::abs(product - reference) <= 1e-10 * std::max(1.0, std::abs(reference)));
    }
}

TEST_CASE("cholesky factors SPD matrices and reports the failing pivot") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng.below(4);
        Matrix b(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) b(i, j) = rng.uniform(-1.0, 1.0);
        // b^T b + I is SPD
        Matrix spd = linalg::matmul(linalg::transpose(b), b);
        for (std::size_t i = 0; i < n; ++i) spd(i, i) += 1.0;

        const auto factor = linalg::cholesky(spd);
        REQUIRE(factor.ok);
        const Matrix recon = linalg::matmul(factor.lower, linalg::transpose(factor.lower));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                CHECK(std::abs(recon(i, j) - spd(i, j)) <= 1e-12 * std::max(1.0, std::abs(spd(i, j))));
    }

    Matrix singular(2, 2);
    singular(0, 0) = 1.0;
    // second pivot is exactly zero
    const auto failed = linalg::cholesky(singular);
    CHECK_FALSE(failed.ok);
    CHECK(failed.failed_index == 1);
}

TEST_CASE("select_symmetric keeps the requested block") {
    Matrix a(3, 3);
    int v = 0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) a(i, j) = ++v;
    const std::vector<std::size_t> keep{0, 2};
    const Matrix sub = linalg::select_symmetric(a, keep);
    CHECK(sub.rows() == 2);
    CHECK(sub(0, 0) == a(0, 0));
    CHECK(sub(0, 1) == a(0, 2));
    CHECK(sub(1, 0) == a(2, 0));
    CHECK(sub(1, 1) == a(2, 2));
}
