#include <doctest.h>

#include <Eigen/Dense>
#include <limits>
#include <string>

#include "gdsq/common.hpp"
#include "gdsq/composition.hpp"
#include "gdsq/genericity.hpp"
#include "gdsq/jsonout.hpp"
#include "gdsq/manifolds.hpp"
#include "gdsq/maps.hpp"
#include "gdsq/serialize.hpp"
#include "gdsq/singularity.hpp"

using gdsq::Json;
using gdsq::ParamManifold;

namespace {

gdsq::RankReport sample_rank_report() {
    gdsq::RankReport r;
    r.grid = {64};
    r.sigma_min = 0.5;
    r.sigma_min_screen = 0.51;
    r.witness = Eigen::VectorXd::Constant(1, 0.25);
    r.refined = true;
    r.verdict = gdsq::RankVerdict::Immersion;
    r.scale = 2.0;
    r.grid_values = {0.5, 0.75};
    return r;
}

gdsq::CollisionReport sample_collision_report() {
    gdsq::CollisionReport r;
    r.grid = {128};
    r.q = Eigen::VectorXd::Constant(1, 0.1);
    r.q_prime = Eigen::VectorXd::Constant(1, 2.1);
    r.image_gap = 0.3;
    r.image_gap_screen = 0.31;
    r.separation = 2.0;
    r.delta = 1e-2;
    r.verdict = gdsq::CollisionVerdict::Injective;
    r.scale = 1.5;
    return r;
}

gdsq::MonteCarloSummary sample_mc_summary() {
    gdsq::MonteCarloSummary s;
    s.theorem = "immersion";
    s.manifold = "circle";
    s.trials = 2;
    s.seed = 7;
    s.margins = {0.5, 0.25};
    s.verdicts = {gdsq::McVerdict::Pass, gdsq::McVerdict::Fail};
    s.failures = 1;
    s.passes = 1;
    s.quantiles = {0.25, 0.3125, 0.375, 0.4375, 0.5};
    return s;
}

}  // namespace

TEST_CASE("vectors and matrices survive the JSON round trip") {
    Eigen::VectorXd v(3);
    v << 1.0, -2.5, 3.25;
    CHECK(gdsq::vector_from_json(gdsq::to_json(v), "v") == v);

    Eigen::MatrixXd m(2, 3);
    m << 1, 2, 3, 4, 5, 6;
    CHECK(gdsq::matrix_from_json(gdsq::to_json(m), "m") == m);

    CHECK_THROWS_WITH_AS(gdsq::vector_from_json(Json::object(), "cfg.x"),
                         doctest::Contains("cfg.x"), gdsq::Error);
    CHECK_THROWS_WITH_AS(gdsq::matrix_from_json(Json::parse("[[1,2],[3]]"), "cfg.A"),
                         doctest::Contains("length 2"), gdsq::Error);
    CHECK_THROWS_AS(gdsq::matrix_from_json(Json::parse("[]"), "cfg.A"), gdsq::Error);
}

TEST_CASE("map descriptors accept explicit weights or a named family") {
    const Json explicit_map = Json::parse(R"({"A": [[1,2],[3,4]], "p": [[0,0],[1,1]]})");
    const gdsq::GdsMap g = gdsq::map_from_json(explicit_map);
    CHECK(g.coefficients()(1, 0) == 3.0);
    CHECK(g.centers().point(1)(0) == 1.0);

    // Emit and re-parse: same matrices.
    const gdsq::GdsMap g2 = gdsq::map_from_json(gdsq::map_to_json(g));
    CHECK(g2.coefficients().matrix() == g.coefficients().matrix());
    CHECK(g2.centers().matrix() == g.centers().matrix());

    const gdsq::GdsMap d =
        gdsq::map_from_json(Json::parse(R"({"kind": "distance-squared", "p": [[0,0],[1,1]]})"));
    CHECK(d.coefficients().matrix() == Eigen::MatrixXd::Ones(2, 2));

    const gdsq::GdsMap l =
        gdsq::map_from_json(Json::parse(R"({"kind": "lorentzian", "p": [[0,0],[1,1]]})"));
    CHECK(l.coefficients()(0, 0) == -1.0);
    CHECK(l.coefficients()(0, 1) == 1.0);

    CHECK_THROWS_WITH_AS(
        gdsq::map_from_json(Json::parse(R"({"kind": "lorentzian", "A": [[1]], "p": [[1]]})")),
        doctest::Contains("either kind or A"), gdsq::Error);
    CHECK_THROWS_WITH_AS(gdsq::map_from_json(Json::parse(R"({"A": [[1]]})")),
                         doctest::Contains("map.p"), gdsq::Error);
    CHECK_THROWS_WITH_AS(gdsq::map_from_json(Json::parse(R"({"p": [[1]]})")),
                         doctest::Contains("either A or kind"), gdsq::Error);
    CHECK_THROWS_WITH_AS(gdsq::map_from_json(Json::parse(R"({"kind": "foo", "p": [[1]]})")),
                         doctest::Contains("distance-squared"), gdsq::Error);
}

TEST_CASE("manifold descriptors cover the whole specimen menu") {
    const ParamManifold c = gdsq::manifold_from_json(
        Json::parse(R"({"kind": "circle", "radius": 2.0, "center": [1, 1, 1]})"));
    CHECK(c.name == "circle");
    CHECK(c.ambient_dim == 3);
    CHECK(gdsq::eval_manifold(c, Eigen::VectorXd::Zero(1)) == Eigen::Vector3d(3.0, 1.0, 1.0));

    CHECK(gdsq::manifold_from_json(Json::parse(R"({"kind": "trefoil"})")).ambient_dim == 3);
    CHECK(gdsq::manifold_from_json(Json::parse(R"({"kind": "figure-eight"})")).name ==
          "figure-eight");
    CHECK(gdsq::manifold_from_json(Json::parse(R"({"kind": "cusp"})")).domain.axis(0).periodic ==
          false);
    const ParamManifold t = gdsq::manifold_from_json(
        Json::parse(R"({"kind": "torus", "m": 5, "major_radius": 3, "minor_radius": 1})"));
    CHECK(t.ambient_dim == 5);
    CHECK(t.param_dim() == 2);

    const ParamManifold e = gdsq::manifold_from_json(Json::parse(
        R"({"kind": "expr", "coordinates": ["t1", "t1*t1"], "axes": [{"lo": -1, "hi": 1}]})"));
    CHECK(e.ambient_dim == 2);
    CHECK(gdsq::eval_manifold(e, Eigen::VectorXd::Constant(1, 0.5))(1) == 0.25);

    CHECK_THROWS_WITH_AS(gdsq::manifold_from_json(Json::parse(R"({"kind": "sphere"})")),
                         doctest::Contains("unknown"), gdsq::Error);
    CHECK_THROWS_WITH_AS(
        gdsq::manifold_from_json(
            Json::parse(R"({"kind": "circle", "m": 2, "center": [0, 0, 0]})"), "cfg.manifold"),
        doctest::Contains("cfg.manifold.center"), gdsq::Error);
    CHECK_THROWS_WITH_AS(
        gdsq::manifold_from_json(Json::parse(R"({"kind": "expr", "coordinates": ["t1"]})")),
        doctest::Contains("axes"), gdsq::Error);
}

TEST_CASE("tolerance blocks fill defaults and reject non-positive values") {
    const gdsq::Tolerances def = gdsq::tolerances_from_json(Json::object(), "tol");
    CHECK(def.tol_rank == 1e-8);
    CHECK(def.tol_collision == 1e-8);
    CHECK(def.tol_margin == 1e-5);

    const gdsq::Tolerances t =
        gdsq::tolerances_from_json(Json::parse(R"({"tol_margin": 1e-4})"), "tol");
    CHECK(t.tol_margin == 1e-4);
    CHECK(t.tol_rank == 1e-8);

    CHECK_THROWS_WITH_AS(gdsq::tolerances_from_json(Json::parse(R"({"tol_rank": 0})"), "tol"),
                         doctest::Contains("tol.tol_rank"), gdsq::Error);

    const Json round = gdsq::to_json(t);
    CHECK(gdsq::tolerances_from_json(round, "tol").tol_margin == 1e-4);
}

TEST_CASE("every emitted report validates structurally") {
    CHECK_NOTHROW(gdsq::validate_report(gdsq::to_json(sample_rank_report())));
    CHECK_NOTHROW(gdsq::validate_report(gdsq::to_json(sample_collision_report())));
    CHECK_NOTHROW(gdsq::validate_report(gdsq::to_json(sample_mc_summary())));

    gdsq::EmbeddingReport e;
    e.rank = sample_rank_report();
    e.collision = sample_collision_report();
    e.embedding_candidate = true;
    CHECK_NOTHROW(gdsq::validate_report(gdsq::to_json(e)));

    const gdsq::GdsMap g(gdsq::CoefficientMatrix(Eigen::MatrixXd::Ones(2, 2)),
                         gdsq::CentralPoints((Eigen::MatrixXd(2, 2) << 0, 0, 1, 1).finished()));
    CHECK_NOTHROW(gdsq::validate_report(gdsq::to_json(gdsq::verify_lemma_singular(g))));
    CHECK_NOTHROW(gdsq::validate_report(
        gdsq::to_json(gdsq::trace_singular_curve(g, {-2, 2, -2, 2}))));

    gdsq::Classification cls;
    cls.cls = gdsq::PointClass::Fold;
    cls.eta = Eigen::Vector2d(1.0, 0.0);
    CHECK_NOTHROW(gdsq::validate_report(gdsq::to_json(cls)));
}

TEST_CASE("validation pinpoints missing and mistyped report fields") {
    Json r = gdsq::to_json(sample_rank_report());
    r.erase("sigma_min");
    CHECK_THROWS_WITH_AS(gdsq::validate_report(r), doctest::Contains("sigma_min"), gdsq::Error);

    Json r2 = gdsq::to_json(sample_collision_report());
    r2["image_gap"] = "big";
    CHECK_THROWS_WITH_AS(gdsq::validate_report(r2), doctest::Contains("image_gap"), gdsq::Error);

    Json r3 = gdsq::to_json(sample_mc_summary());
    r3.erase("check");
    CHECK_THROWS_WITH_AS(gdsq::validate_report(r3), doctest::Contains("check"), gdsq::Error);

    Json r4 = gdsq::to_json(sample_mc_summary());
    r4["check"] = "novel";
    CHECK_THROWS_WITH_AS(gdsq::validate_report(r4), doctest::Contains("novel"), gdsq::Error);
}

TEST_CASE("csv emitters write stable headers and rows") {
    const std::string margins = gdsq::margins_csv(sample_mc_summary());
    CHECK(margins.substr(0, margins.find('\n')) == "trial,margin,verdict");
    CHECK(margins.find("0,0.5,pass\n") != std::string::npos);
    CHECK(margins.find("1,0.25,fail\n") != std::string::npos);

    gdsq::SingularCurve curve;
    curve.components.push_back({{Eigen::Vector2d(0.5, -1.5)}, {gdsq::PointClass::Fold}});
    const std::string rows = gdsq::singular_curve_csv(curve);
    CHECK(rows.substr(0, rows.find('\n')) == "x1,x2,class");
    CHECK(rows.find("0.5,-1.5,fold\n") != std::string::npos);

    const std::string sigma = gdsq::sigma_grid_csv(sample_rank_report());
    CHECK(sigma.substr(0, sigma.find('\n')) == "index,sigma_min");
    CHECK(sigma.find("0,0.5\n") != std::string::npos);
    CHECK(sigma.find("1,0.75\n") != std::string::npos);
}

TEST_CASE("deterministic dump is stable and refuses non-finite values") {
    const Json a = gdsq::to_json(sample_collision_report());
    const std::string once = gdsq::dump_deterministic(a);
    const std::string twice = gdsq::dump_deterministic(gdsq::to_json(sample_collision_report()));
    CHECK(once == twice);
    CHECK(once.back() == '\n');
    CHECK(once.find("\"check\": \"injectivity\"") != std::string::npos);

    // Round trip through the parser preserves every number.
    const Json back = Json::parse(once);
    CHECK(back["image_gap"].get<double>() == 0.3);
    CHECK(back["scale"].get<double>() == 1.5);

    gdsq::MonteCarloSummary bad = sample_mc_summary();
    bad.margins[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH_AS(gdsq::dump_deterministic(gdsq::to_json(bad)),
                         doctest::Contains("non-finite"), gdsq::Error);
    CHECK_THROWS_WITH_AS(gdsq::margins_csv(bad), doctest::Contains("non-finite"), gdsq::Error);
}
