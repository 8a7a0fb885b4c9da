#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gdsq/linalg.hpp"
#include "gdsq/rng.hpp"

using gdsq::numerical_rank;
using gdsq::singular_values;
using gdsq::smallest_singular_value;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, gdsq::Rng& rng) {
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.gaussian();
    return m;
}

}  // namespace

TEST_CASE("smallest singular value of simple shapes") {
    Eigen::MatrixXd col(3, 1);
    col << 3, 0, 4;
    CHECK(smallest_singular_value(col) == doctest::Approx(5.0));

    Eigen::MatrixXd row(1, 2);
    row << -6, 8;
    CHECK(smallest_singular_value(row) == doctest::Approx(10.0));

    Eigen::MatrixXd diag = Eigen::Vector3d(4.0, 0.5, 2.0).asDiagonal();
    CHECK(smallest_singular_value(diag) == doctest::Approx(0.5));

    // Rank-one 2x2: one zero singular value.
    Eigen::MatrixXd r1(2, 2);
    r1 << 1, 2, 2, 4;
    CHECK(smallest_singular_value(r1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("two-column closed form matches Jacobi SVD") {
    gdsq::Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index rows = 2 + static_cast<Eigen::Index>(rng.uniform01() * 5.0);
        const Eigen::MatrixXd m = random_matrix(rows, 2, rng);
        const double fast = smallest_singular_value(m);
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        const double ref = svd.singularValues().minCoeff();
        CHECK(fast == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("wide and tall matrices use min(rows, cols) singular values") {
    gdsq::Rng rng(77);
    const Eigen::MatrixXd tall = random_matrix(5, 3, rng);
    const Eigen::MatrixXd wide = tall.transpose();
    CHECK(singular_values(tall).size() == 3);
    CHECK(singular_values(wide).size() == 3);
    CHECK(smallest_singular_value(tall) == doctest::Approx(smallest_singular_value(wide)));

    // Generic tall matrix: smallest singular value stays positive.
    CHECK(smallest_singular_value(tall) > 1e-8);
}

TEST_CASE("numerical rank on constructed matrices") {
    CHECK(numerical_rank(Eigen::MatrixXd::Zero(3, 3)) == 0);
    CHECK(numerical_rank(Eigen::MatrixXd::Identity(4, 4)) == 4);

    gdsq::Rng rng(8);
    const Eigen::VectorXd u = random_matrix(5, 1, rng);
    const Eigen::VectorXd v = random_matrix(4, 1, rng);
    CHECK(numerical_rank(u * v.transpose()) == 1);

    // Two independent outer products give rank 2.
    const Eigen::VectorXd u2 = random_matrix(5, 1, rng);
    const Eigen::VectorXd v2 = random_matrix(4, 1, rng);
    CHECK(numerical_rank(u * v.transpose() + u2 * v2.transpose()) == 2);

    // A tiny but above-cutoff singular value still counts toward the rank.
    Eigen::MatrixXd d = Eigen::Vector3d(1.0, 1e-6, 1e-13).asDiagonal();
    CHECK(numerical_rank(d) == 2);
    CHECK(numerical_rank(d, 1e-15) == 3);
}

TEST_CASE("singular values come back sorted descending") {
    gdsq::Rng rng(15);
    const Eigen::MatrixXd m = random_matrix(4, 4, rng);
    const Eigen::VectorXd sv = singular_values(m);
    for (Eigen::Index i = 0; i + 1 < sv.size(); ++i) CHECK(sv(i) >= sv(i + 1));
    CHECK(sv.minCoeff() == doctest::Approx(smallest_singular_value(m)));
}
