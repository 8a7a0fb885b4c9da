#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gdsq/common.hpp"
#include "gdsq/composition.hpp"
#include "gdsq/genericity.hpp"
#include "gdsq/linalg.hpp"
#include "gdsq/manifolds.hpp"
#include "gdsq/maps.hpp"
#include "gdsq/rng.hpp"

using gdsq::CentralPoints;
using gdsq::CoefficientMatrix;
using gdsq::CollisionVerdict;
using gdsq::GapScanOptions;
using gdsq::GdsMap;
using gdsq::ParamManifold;
using gdsq::RankScanOptions;
using gdsq::RankVerdict;
using gdsq::Tolerances;

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

Eigen::VectorXd pt(double t) {
    Eigen::VectorXd q(1);
    q << t;
    return q;
}

GdsMap random_square_map(int m, gdsq::Rng& rng) {
    Eigen::MatrixXd a(m, m), p(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double v = rng.gaussian();
            while (std::abs(v) < 0.1) v = rng.gaussian();
            a(i, j) = v;
            p(i, j) = rng.gaussian();
        }
    return {CoefficientMatrix(std::move(a)), CentralPoints(std::move(p))};
}

// Forward-mode differentiation of q -> G(f(q)), the independent oracle for
// the chain-rule formula.
Eigen::MatrixXd composed_ad(const GdsMap& g, const ParamManifold& f, const Eigen::VectorXd& q) {
    const int n = f.param_dim();
    std::vector<gdsq::Dual> qd(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) qd[static_cast<std::size_t>(k)] = gdsq::Dual(q(k));
    Eigen::MatrixXd out(g.components(), n);
    for (int k = 0; k < n; ++k) {
        qd[static_cast<std::size_t>(k)].d = 1.0;
        const auto img = g.eval_generic(f.value_dual(qd));
        for (Eigen::Index i = 0; i < g.components(); ++i)
            out(i, k) = img[static_cast<std::size_t>(i)].d;
        qd[static_cast<std::size_t>(k)].d = 0.0;
    }
    return out;
}

GdsMap fixture_map_2d() {
    Eigen::MatrixXd a(2, 2), p(2, 2);
    a << 1, 1, 1, 1;
    p << 2, 0, 0, 2;
    return {CoefficientMatrix(a), CentralPoints(p)};
}

}  // namespace

TEST_CASE("chain-rule matrix on the hand-worked circle example") {
    const GdsMap g = fixture_map_2d();
    const ParamManifold f = gdsq::circle(1.0, Eigen::Vector2d::Zero(), 2);
    const Eigen::MatrixXd j = gdsq::composition_jacobian(g, f, pt(0.0));
    REQUIRE(j.rows() == 2);
    REQUIRE(j.cols() == 1);
    // Row i = 2(a_i1 (1 - p_i1) * 0 + a_i2 (0 - p_i2) * 1).
    CHECK(j(0, 0) == 0.0);
    CHECK(j(1, 0) == -4.0);
}

TEST_CASE("chain rule agrees with the factored product and with dual numbers") {
    gdsq::Rng rng(301);
    const ParamManifold specimens[] = {
        gdsq::circle(1.3, Eigen::Vector2d(0.2, -0.1), 2),
        gdsq::trefoil(),
        gdsq::figure_eight(),
        gdsq::cusp_curve(),
        gdsq::torus_surface(4, 2.0, 0.5),
    };
    for (const ParamManifold& f : specimens) {
        const GdsMap g = random_square_map(f.ambient_dim, rng);
        for (int s = 0; s < 20; ++s) {
            Eigen::VectorXd q(f.param_dim());
            for (int k = 0; k < f.param_dim(); ++k) {
                const gdsq::Axis& ax = f.domain.axis(k);
                q(k) = rng.uniform(ax.lo, ax.hi);
            }
            const Eigen::MatrixXd jc = gdsq::composition_jacobian(g, f, q);
            const Eigen::MatrixXd prod = g.jacobian(f.value(q)) * f.jacobian(q);
            CHECK((jc - prod).cwiseAbs().maxCoeff() <=
                  1e-12 * (1.0 + prod.cwiseAbs().maxCoeff()));
            const Eigen::MatrixXd jad = composed_ad(g, f, q);
            CHECK((jc - jad).cwiseAbs().maxCoeff() <=
                  1e-9 * (1.0 + jad.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("composition rejects shape mismatches and out-of-domain parameters") {
    Eigen::MatrixXd a(1, 2), p(1, 2);
    a << 1, 1;
    p << 0, 0;
    const GdsMap rect{CoefficientMatrix(a), CentralPoints(p)};
    const ParamManifold f2 = gdsq::circle(1.0, Eigen::Vector2d::Zero(), 2);
    CHECK_THROWS_WITH_AS(gdsq::composition_jacobian(rect, f2, pt(0.0)),
                         doctest::Contains("equidimensional"), gdsq::Error);

    gdsq::Rng rng(5);
    const GdsMap g3 = random_square_map(3, rng);
    CHECK_THROWS_AS(gdsq::composition_jacobian(g3, f2, pt(0.0)), gdsq::Error);

    const ParamManifold box = gdsq::cusp_curve();
    const GdsMap g2 = random_square_map(2, rng);
    CHECK_THROWS_AS(gdsq::composition_jacobian(g2, box, pt(1.5)), gdsq::Error);
    CHECK_THROWS_AS(gdsq::composed_value(g2, box, pt(-1.5)), gdsq::Error);
}

TEST_CASE("gamma pair lands on the diagonal exactly when parameters coincide") {
    gdsq::Rng rng(33);
    const ParamManifold f = gdsq::figure_eight();
    const GdsMap g = random_square_map(2, rng);

    const Eigen::VectorXd on_diag = gdsq::gamma_pair(g, f, pt(1.1), pt(1.1));
    REQUIRE(on_diag.size() == 4);
    CHECK(on_diag(0) == on_diag(2));
    CHECK(on_diag(1) == on_diag(3));

    // The double point of the figure-eight gives equal halves through any map.
    const Eigen::VectorXd crossed = gdsq::gamma_pair(g, f, pt(0.0), pt(kPi));
    CHECK((crossed.head(2) - crossed.tail(2)).norm() < 1e-12);

    // Distance between the halves is the image gap by definition.
    const Eigen::VectorXd generic = gdsq::gamma_pair(g, f, pt(0.4), pt(2.0));
    const double gap =
        (gdsq::composed_value(g, f, pt(0.4)) - gdsq::composed_value(g, f, pt(2.0))).norm();
    CHECK((generic.head(2) - generic.tail(2)).norm() == doctest::Approx(gap));
}

TEST_CASE("grid resolution defaults and validation") {
    CHECK(gdsq::resolve_grid({}, 1) == std::vector<int>{4096});
    CHECK(gdsq::resolve_grid({}, 2) == std::vector<int>({128, 128}));
    CHECK(gdsq::resolve_grid({}, 3) == std::vector<int>({16, 16, 16}));
    CHECK(gdsq::resolve_grid({64}, 2) == std::vector<int>({64, 64}));
    CHECK(gdsq::resolve_grid({8, 12}, 2) == std::vector<int>({8, 12}));
    CHECK_THROWS_AS(gdsq::resolve_grid({8, 12, 9}, 2), gdsq::Error);
    CHECK_THROWS_AS(gdsq::resolve_grid({0}, 1), gdsq::Error);
}

TEST_CASE("immersion check on a fixture with constant singular value") {
    // For A all-ones, p = ((2,0),(0,2)) on the unit circle the composed
    // Jacobian is (4 sin t, -4 cos t): sigma is 4 at every parameter.
    const GdsMap g = fixture_map_2d();
    const ParamManifold f = gdsq::circle(1.0, Eigen::Vector2d::Zero(), 2);
    RankScanOptions opts;
    opts.grid = {256};
    const gdsq::RankReport rep = gdsq::immersion_check(g, f, opts);
    CHECK(rep.sigma_min == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(rep.sigma_min_screen == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(rep.verdict == RankVerdict::Immersion);
    CHECK(rep.refined);
    CHECK(rep.scale >= 1.0);
    CHECK(rep.grid_values.size() == 256);

    // Witness attains the reported minimum.
    const double at_witness =
        gdsq::smallest_singular_value(gdsq::composition_jacobian(g, f, rep.witness));
    CHECK(at_witness == doctest::Approx(rep.sigma_min).epsilon(1e-9));
}

TEST_CASE("cusp specimen always trips the rank scan") {
    gdsq::Rng rng(404);
    const ParamManifold f = gdsq::cusp_curve();
    for (int trial = 0; trial < 5; ++trial) {
        const GdsMap g = random_square_map(2, rng);
        RankScanOptions opts;
        opts.grid = {512};
        opts.refine_rounds = 8;
        const gdsq::RankReport rep = gdsq::immersion_check(g, f, opts);
        CHECK(rep.verdict == RankVerdict::RankDrop);
        // The rank drop sits at t = 0; refinement should land within one cell.
        CHECK(std::abs(rep.witness(0)) <= 2.0 / 512.0);
    }
}

TEST_CASE("screen minimum is monotone under grid doubling") {
    gdsq::Rng rng(505);
    const ParamManifold f = gdsq::trefoil();
    const GdsMap g = random_square_map(3, rng);
    double prev = -1.0;
    for (int grid : {256, 512, 1024}) {
        RankScanOptions opts;
        opts.grid = {grid};
        opts.refine_rounds = 0;
        const gdsq::RankReport rep = gdsq::immersion_check(g, f, opts);
        if (prev >= 0.0) CHECK(rep.sigma_min_screen <= prev + 1e-15);
        prev = rep.sigma_min_screen;
        CHECK(rep.sigma_min == rep.sigma_min_screen);  // no refinement requested
    }

    GapScanOptions gopts;
    gopts.delta = 0.05;
    double prev_gap = -1.0;
    for (int grid : {256, 512, 1024}) {
        gopts.grid = {grid};
        const gdsq::CollisionReport rep = gdsq::injectivity_check(g, f, gopts);
        if (prev_gap >= 0.0) CHECK(rep.image_gap_screen <= prev_gap + 1e-15);
        prev_gap = rep.image_gap_screen;
        CHECK(rep.image_gap <= rep.image_gap_screen + 1e-15);
    }
}

TEST_CASE("figure-eight always trips the collision scan") {
    gdsq::Rng rng(606);
    const ParamManifold f = gdsq::figure_eight();
    for (int trial = 0; trial < 5; ++trial) {
        const GdsMap g = random_square_map(2, rng);
        GapScanOptions opts;
        opts.grid = {1024};
        const gdsq::CollisionReport rep = gdsq::injectivity_check(g, f, opts);
        CHECK(rep.verdict == CollisionVerdict::Collision);
        CHECK(rep.image_gap < 1e-9);
        CHECK(rep.separation >= rep.delta * (1.0 - 1e-9));
    }
}

TEST_CASE("trefoil with a pinned generic map reads injective") {
    gdsq::Rng rng(707);
    const ParamManifold f = gdsq::trefoil();
    const GdsMap g = random_square_map(3, rng);
    GapScanOptions opts;
    opts.grid = {2048};
    const gdsq::CollisionReport rep = gdsq::injectivity_check(g, f, opts);
    CHECK(rep.verdict == CollisionVerdict::Injective);
    CHECK(rep.image_gap > 0.0);
    CHECK(rep.image_gap_screen >= rep.image_gap);
    CHECK(rep.separation >= rep.delta * (1.0 - 1e-9));
}

TEST_CASE("delta larger than the domain diameter is rejected") {
    gdsq::Rng rng(808);
    const GdsMap g = random_square_map(2, rng);
    const ParamManifold f = gdsq::figure_eight();  // periodic diameter pi
    GapScanOptions opts;
    opts.grid = {64};
    opts.delta = 4.0;
    CHECK_THROWS_WITH_AS(gdsq::injectivity_check(g, f, opts), doctest::Contains("diameter"),
                         gdsq::Error);
    opts.delta = -1.0;
    CHECK_THROWS_AS(gdsq::injectivity_check(g, f, opts), gdsq::Error);
}

TEST_CASE("three-way verdicts respond to the tolerance knobs") {
    const GdsMap g = fixture_map_2d();  // sigma identically 4, scale ~ 11.3
    const ParamManifold f = gdsq::circle(1.0, Eigen::Vector2d::Zero(), 2);
    RankScanOptions opts;
    opts.grid = {128};
    opts.refine_rounds = 0;

    Tolerances wide;  // margin pushed above sigma/scale: not provably immersed
    wide.tol_margin = 10.0;
    CHECK(gdsq::immersion_check(g, f, opts, wide).verdict == RankVerdict::Inconclusive);

    Tolerances harsh;  // rank cutoff pushed above sigma/scale: reads as a drop
    harsh.tol_rank = 10.0;
    harsh.tol_margin = 20.0;
    CHECK(gdsq::immersion_check(g, f, opts, harsh).verdict == RankVerdict::RankDrop);

    CHECK(gdsq::immersion_check(g, f, opts).verdict == RankVerdict::Immersion);
}

TEST_CASE("cusp specimen injectivity depends on the exclusion radius") {
    // Near the flat point the gap at separation delta scales like delta^3:
    // delta 0.01 is honestly inconclusive, delta 0.1 clearly injective.
    Eigen::MatrixXd a(2, 2), p(2, 2);
    a << 1.1, 0.7, -0.5, 1.3;
    p << 0.4, -0.2, 0.9, 0.6;
    const GdsMap g{CoefficientMatrix(a), CentralPoints(p)};
    const ParamManifold f = gdsq::cusp_curve();

    GapScanOptions fine;
    fine.grid = {2048};
    fine.delta = 0.01;
    CHECK(gdsq::injectivity_check(g, f, fine).verdict == CollisionVerdict::Inconclusive);

    GapScanOptions coarse;
    coarse.grid = {2048};
    coarse.delta = 0.1;
    CHECK(gdsq::injectivity_check(g, f, coarse).verdict == CollisionVerdict::Injective);
}

TEST_CASE("embedding check combines both halves") {
    Eigen::MatrixXd p(3, 3);
    p << 0.3, -0.8, 0.5, 1.2, 0.1, -0.4, -0.6, 0.9, 0.2;
    const GdsMap g = gdsq::make_distance_squared_map(CentralPoints(p));
    Eigen::VectorXd c0 = Eigen::VectorXd::Zero(3);
    const ParamManifold f = gdsq::circle(1.0, c0, 3);

    RankScanOptions ro;
    ro.grid = {1024};
    GapScanOptions go;
    go.grid = {1024};
    const gdsq::EmbeddingReport rep = gdsq::injective_immersion_check(g, f, ro, go);
    CHECK(rep.rank.verdict == RankVerdict::Immersion);
    CHECK(rep.collision.verdict == CollisionVerdict::Injective);
    CHECK(rep.embedding_candidate);

    // Negative controls: one half fails for each specimen by design.
    gdsq::Rng rng(909);
    const GdsMap g2 = random_square_map(2, rng);
    GapScanOptions cusp_go;
    cusp_go.grid = {1024};
    cusp_go.delta = 0.1;
    RankScanOptions r512;
    r512.grid = {512};
    const gdsq::EmbeddingReport cusp_rep =
        gdsq::injective_immersion_check(g2, gdsq::cusp_curve(), r512, cusp_go);
    CHECK(cusp_rep.rank.verdict == RankVerdict::RankDrop);
    CHECK(cusp_rep.collision.verdict == CollisionVerdict::Injective);
    CHECK_FALSE(cusp_rep.embedding_candidate);

    const gdsq::EmbeddingReport eight_rep =
        gdsq::injective_immersion_check(g2, gdsq::figure_eight(), r512, cusp_go);
    CHECK(eight_rep.rank.verdict == RankVerdict::Immersion);
    CHECK(eight_rep.collision.verdict == CollisionVerdict::Collision);
    CHECK_FALSE(eight_rep.embedding_candidate);
}

TEST_CASE("scan results are deterministic across repeated runs") {
    gdsq::Rng rng(111);
    const ParamManifold f = gdsq::trefoil();
    const GdsMap g = random_square_map(3, rng);
    RankScanOptions ro;
    ro.grid = {512};
    const gdsq::RankReport a = gdsq::immersion_check(g, f, ro);
    const gdsq::RankReport b = gdsq::immersion_check(g, f, ro);
    CHECK(a.sigma_min == b.sigma_min);
    CHECK(a.witness == b.witness);

    GapScanOptions go;
    go.grid = {512};
    const gdsq::CollisionReport ca = gdsq::injectivity_check(g, f, go);
    const gdsq::CollisionReport cb = gdsq::injectivity_check(g, f, go);
    CHECK(ca.image_gap == cb.image_gap);
    CHECK(ca.q == cb.q);
    CHECK(ca.q_prime == cb.q_prime);
}

TEST_CASE("image scale estimate dominates weights and image size") {
    const GdsMap g = fixture_map_2d();
    const ParamManifold f = gdsq::circle(1.0, Eigen::Vector2d::Zero(), 2);
    const double scale = gdsq::image_scale_estimate(g, f);
    CHECK(scale >= 1.0);
    CHECK(scale >= g.coefficients().matrix().cwiseAbs().maxCoeff());

    Eigen::MatrixXd a(2, 2), p(2, 2);
    a << 500, 1, 1, 1;
    p << 0, 0, 0, 0;
    const GdsMap big{CoefficientMatrix(a), CentralPoints(p)};
    CHECK(gdsq::image_scale_estimate(big, f) >= 500.0);
}
