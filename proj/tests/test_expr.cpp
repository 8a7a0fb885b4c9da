#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "gdsq/common.hpp"
#include "gdsq/expr.hpp"

using gdsq::Axis;
using gdsq::Dual;
using gdsq::parse_expression;

namespace {

double ev(const std::string& text, std::vector<double> vars = {}) {
    return parse_expression(text).eval(vars);
}

// Derivative with respect to variable `k` (0-based) at `vars`.
double dv(const std::string& text, std::vector<double> vars, std::size_t k) {
    std::vector<Dual> d(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) d[i] = Dual(vars[i]);
    d[k].d = 1.0;
    return parse_expression(text).eval(d).d;
}

}  // namespace

TEST_CASE("expression values") {
    CHECK(ev("1+2*3") == doctest::Approx(7.0));
    CHECK(ev("(1+2)*3") == doctest::Approx(9.0));
    CHECK(ev("2^3^2") == doctest::Approx(512.0));  // right-associative
    CHECK(ev("-2^2") == doctest::Approx(-4.0));    // unary minus binds looser than ^
    CHECK(ev("10/4") == doctest::Approx(2.5));
    CHECK(ev("7 - 3 - 2") == doctest::Approx(2.0));  // left-associative
    CHECK(ev("sin(0)") == doctest::Approx(0.0));
    CHECK(ev("cos(0) + exp(0)") == doctest::Approx(2.0));
    CHECK(ev("  1.5e2 ") == doctest::Approx(150.0));
    CHECK(ev("+3") == doctest::Approx(3.0));
    CHECK(ev("t1*t2 - t1", {3.0, 5.0}) == doctest::Approx(12.0));
    CHECK(ev("sin(t1)^2 + cos(t1)^2", {0.77}) == doctest::Approx(1.0));
}

TEST_CASE("expression derivatives through duals") {
    CHECK(dv("t1*t1*t1", {2.0}, 0) == doctest::Approx(12.0));
    CHECK(dv("sin(2*t1)", {0.3}, 0) == doctest::Approx(2.0 * std::cos(0.6)));
    CHECK(dv("t1/t2", {1.0, 4.0}, 1) == doctest::Approx(-1.0 / 16.0));
    CHECK(dv("exp(t1*t1)", {0.5}, 0) == doctest::Approx(std::exp(0.25)));
    CHECK(dv("t1^3", {2.0}, 0) == doctest::Approx(12.0));
    CHECK(dv("(t1+t2)^2", {1.0, 2.0}, 0) == doctest::Approx(6.0));
}

TEST_CASE("parse errors carry 1-based positions") {
    CHECK_THROWS_WITH_AS(parse_expression("1 +"), doctest::Contains("unexpected end"),
                         gdsq::Error);
    CHECK_THROWS_WITH_AS(parse_expression("(1+2"), doctest::Contains("expected ')'"), gdsq::Error);
    CHECK_THROWS_WITH_AS(parse_expression("1 ? 2"), doctest::Contains("position 3"), gdsq::Error);
    CHECK_THROWS_WITH_AS(parse_expression("bogus(1)"), doctest::Contains("unknown identifier"),
                         gdsq::Error);
    CHECK_THROWS_WITH_AS(parse_expression("sin 1"), doctest::Contains("followed by '('"),
                         gdsq::Error);
    CHECK_THROWS_AS(parse_expression("t0"), gdsq::Error);
    CHECK_THROWS_AS(parse_expression(""), gdsq::Error);
    CHECK_THROWS_AS(parse_expression("1 2"), gdsq::Error);
}

TEST_CASE("max_variable tracks the highest referenced parameter") {
    CHECK(parse_expression("1+2").max_variable() == 0);
    CHECK(parse_expression("t1").max_variable() == 1);
    CHECK(parse_expression("t2 + sin(t5)").max_variable() == 5);
}

TEST_CASE("expression manifolds wire evaluator and derivatives together") {
    const std::vector<std::string> coords = {"cos(t1)", "sin(t1)", "t1/6"};
    const gdsq::ParamManifold f = gdsq::make_expr_manifold(
        coords, {Axis{0.0, 12.566370614359172, false}}, true, true);
    CHECK(f.ambient_dim == 3);
    CHECK(f.param_dim() == 1);
    CHECK(f.claims_immersion);
    CHECK(f.claims_injective);

    Eigen::VectorXd q(1);
    q << 1.1;
    const Eigen::VectorXd x = f.value(q);
    CHECK(x(0) == doctest::Approx(std::cos(1.1)));
    CHECK(x(1) == doctest::Approx(std::sin(1.1)));
    CHECK(x(2) == doctest::Approx(1.1 / 6.0));

    const Eigen::MatrixXd j = f.jacobian(q);
    CHECK(j(0, 0) == doctest::Approx(-std::sin(1.1)));
    CHECK(j(1, 0) == doctest::Approx(std::cos(1.1)));
    CHECK(j(2, 0) == doctest::Approx(1.0 / 6.0));

    const Eigen::MatrixXd ja = gdsq::ad_jacobian(f, q);
    CHECK((j - ja).cwiseAbs().maxCoeff() < 1e-14);

    // Referencing a parameter beyond the domain dimension is rejected.
    CHECK_THROWS_WITH_AS(
        gdsq::make_expr_manifold({"t2"}, {Axis{0.0, 1.0, false}}, false, false),
        doctest::Contains("references t2"), gdsq::Error);
    CHECK_THROWS_AS(gdsq::make_expr_manifold({}, {Axis{0.0, 1.0, false}}, false, false),
                    gdsq::Error);
}
