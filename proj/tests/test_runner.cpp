#include <doctest.h>

#include <string>

#include "gdsq/common.hpp"
#include "gdsq/jsonout.hpp"
#include "gdsq/runner.hpp"
#include "gdsq/serialize.hpp"

using gdsq::Json;
using gdsq::RunArtifacts;
using gdsq::run_command;

namespace {

// Unit circle pushed through all-ones weights with centers (2,0) and (0,2);
// the composed Jacobian has constant norm 4, a clean immersion fixture.
Json immersion_cfg() {
    return Json::parse(R"({
        "map": {"A": [[1,1],[1,1]], "p": [[2,0],[0,2]]},
        "manifold": {"kind": "circle"},
        "grid": 256
    })");
}

}  // namespace

TEST_CASE("eval and jacobian report exact pinned values") {
    const Json cfg =
        Json::parse(R"({"map": {"A": [[1,2],[3,4]], "p": [[0,0],[1,1]]}, "x": [1, 2]})");
    const RunArtifacts v = run_command("eval", cfg);
    CHECK(v.exit_code == 0);
    CHECK(v.report.at("check") == "value");
    CHECK(v.report.at("value") == Json::parse("[9.0, 4.0]"));
    CHECK(v.csv.empty());

    const RunArtifacts j = run_command("jacobian", cfg);
    CHECK(j.exit_code == 0);
    CHECK(j.report.at("jacobian") == Json::parse("[[2.0, 8.0], [0.0, 8.0]]"));
}

TEST_CASE("compose-jacobian matches the hand-worked chain rule") {
    const Json cfg = Json::parse(R"({
        "map": {"A": [[1,1],[1,1]], "p": [[2,0],[0,2]]},
        "manifold": {"kind": "circle"},
        "q": [0]
    })");
    const RunArtifacts out = run_command("compose-jacobian", cfg);
    CHECK(out.exit_code == 0);
    CHECK(out.report.at("jacobian") == Json::parse("[[0.0], [-4.0]]"));
    CHECK(out.report.at("manifold") == "circle");
}

TEST_CASE("check exit codes follow the three-way verdict") {
    const RunArtifacts pass = run_command("check-immersion", immersion_cfg());
    CHECK(pass.exit_code == 0);
    CHECK(pass.report.at("verdict") == "immersion");
    CHECK(pass.report.at("sigma_min").get<double>() == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(pass.csv.substr(0, pass.csv.find('\n')) == "index,sigma_min");
    CHECK_NOTHROW(gdsq::validate_report(pass.report));

    Json wide = immersion_cfg();
    wide["tolerances"] = Json::parse(R"({"tol_margin": 10})");
    CHECK(run_command("check-immersion", wide).exit_code == 3);

    Json coarse = immersion_cfg();
    coarse["tolerances"] = Json::parse(R"({"tol_rank": 10})");
    CHECK(run_command("check-immersion", coarse).exit_code == 2);
}

TEST_CASE("injectivity and embedding runs succeed on the spatial circle") {
    const Json cfg = Json::parse(R"({
        "map": {"kind": "distance-squared", "p": [[0.3,-0.8,0.5],[1.2,0.1,-0.4],[-0.6,0.9,0.2]]},
        "manifold": {"kind": "circle", "m": 3},
        "grid": 1024
    })");
    const RunArtifacts inj = run_command("check-injectivity", cfg);
    CHECK(inj.exit_code == 0);
    CHECK(inj.report.at("verdict") == "injective");
    CHECK(inj.report.at("image_gap").get<double>() > 1e-6);
    CHECK_NOTHROW(gdsq::validate_report(inj.report));

    const RunArtifacts emb = run_command("check-embedding", cfg);
    CHECK(emb.exit_code == 0);
    CHECK(emb.report.at("embedding_candidate") == true);
    CHECK(emb.csv.substr(0, emb.csv.find('\n')) == "index,sigma_min");
}

TEST_CASE("singular-set traces with an explicit or derived window") {
    const Json cfg = Json::parse(R"({
        "map": {"A": [[1,2],[3,1]], "p": [[0.3,-0.2],[1.1,0.7]]},
        "window": [-3, 3, -3, 3]
    })");
    const RunArtifacts out = run_command("singular-set", cfg, true);
    CHECK(out.exit_code == 0);
    CHECK(out.report.at("cusp_count") == 1);
    CHECK(out.report.at("unresolved_count") == 0);
    CHECK(out.csv.substr(0, out.csv.find('\n')) == "x1,x2,class");
    CHECK(out.svg.find("<svg") != std::string::npos);
    CHECK_NOTHROW(gdsq::validate_report(out.report));

    // No window: one is derived from the centers, padded by at least 1.
    Json auto_cfg = cfg;
    auto_cfg.erase("window");
    const RunArtifacts derived = run_command("singular-set", auto_cfg);
    const Json& w = derived.report.at("window");
    CHECK(w[0].get<double>() == doctest::Approx(-0.7));
    CHECK(w[1].get<double>() == doctest::Approx(2.1));
    CHECK(w[2].get<double>() == doctest::Approx(-1.2));
    CHECK(w[3].get<double>() == doctest::Approx(1.7));
    CHECK(derived.report.at("components").size() > 0);

    const Json planar = Json::parse(
        R"({"map": {"A": [[1,1,1],[1,1,1],[1,1,1]], "p": [[0,0,0],[1,1,1],[2,2,2]]}})");
    CHECK_THROWS_WITH_AS(run_command("singular-set", planar), doctest::Contains("planar"),
                         gdsq::Error);
}

TEST_CASE("classify labels the pinned fold point") {
    const Json cfg = Json::parse(R"({
        "map": {"A": [[1,2],[3,1]], "p": [[0.3,-0.2],[1.1,0.7]]},
        "x": [2.0, -0.6135135135135135]
    })");
    const RunArtifacts out = run_command("classify", cfg);
    CHECK(out.exit_code == 0);
    CHECK(out.report.at("class") == "fold");
    CHECK_NOTHROW(gdsq::validate_report(out.report));
}

TEST_CASE("verify-lemmas passes on sampled maps and records the witness") {
    const RunArtifacts out = run_command("verify-lemmas", Json::parse(R"({"m": 3, "seed": 7})"));
    CHECK(out.exit_code == 0);
    CHECK(out.report.at("check") == "lemmas");
    CHECK(out.report.at("m") == 3);
    CHECK(out.report.at("collision_found") == true);
    CHECK(out.report.at("collision").at("gap").get<double>() < 1e-9);
    CHECK(out.report.at("singular").at("all_rows_zero") == true);
    CHECK_NOTHROW(gdsq::validate_report(out.report));
}

TEST_CASE("mc exit codes distinguish pass, fail, and inconclusive") {
    const Json base = Json::parse(R"({
        "theorem": "immersion",
        "manifold": {"kind": "circle"},
        "A": [[1.3, 0.57], [0.6, 1.07]],
        "trials": 5,
        "seed": 21,
        "grid": 256
    })");
    const RunArtifacts pass = run_command("mc", base);
    CHECK(pass.exit_code == 0);
    CHECK(pass.report.at("failures") == 0);
    CHECK(pass.csv.substr(0, pass.csv.find('\n')) == "trial,margin,verdict");
    CHECK_NOTHROW(gdsq::validate_report(pass.report));

    Json wide = base;
    wide["tolerances"] = Json::parse(R"({"tol_margin": 100})");
    CHECK(run_command("mc", wide).exit_code == 3);

    const Json failing = Json::parse(R"({
        "theorem": "injectivity",
        "manifold": {"kind": "figure-eight"},
        "trials": 2,
        "seed": 17,
        "grid": 1024,
        "override_hypothesis": true
    })");
    const RunArtifacts fail = run_command("mc", failing, true);
    CHECK(fail.exit_code == 2);
    CHECK(fail.report.at("failures") == 2);
    CHECK(fail.svg.find("<svg") != std::string::npos);
}

TEST_CASE("bad-p constructions earn exit 0 by actually breaking the check") {
    const Json imm = Json::parse(R"({
        "mode": "immersion",
        "manifold": {"kind": "trefoil"},
        "q0": [1.2],
        "grid": 1024
    })");
    const RunArtifacts a = run_command("bad-p", imm);
    CHECK(a.exit_code == 0);
    CHECK(a.report.at("result").at("verdict") == "rank_drop");

    const Json inj = Json::parse(R"({
        "mode": "injectivity",
        "manifold": {"kind": "trefoil"},
        "q1": [0.4],
        "q2": [3.0],
        "grid": 1024
    })");
    const RunArtifacts b = run_command("bad-p", inj);
    CHECK(b.exit_code == 0);
    CHECK(b.report.at("pair_gap").get<double>() <= 1e-12);
    CHECK(b.report.at("result").at("verdict") == "collision");
}

TEST_CASE("identical configs produce byte-identical reports") {
    const Json cfg = Json::parse(R"({
        "theorem": "immersion",
        "manifold": {"kind": "circle"},
        "trials": 4,
        "seed": 5,
        "grid": 128
    })");
    const std::string a = gdsq::dump_deterministic(run_command("mc", cfg).report);
    const std::string b = gdsq::dump_deterministic(run_command("mc", cfg).report);
    CHECK(a == b);
    CHECK(a.find("\"check\": \"mc\"") != std::string::npos);
}

TEST_CASE("run_command rejects unknown subcommands and invalid configs") {
    CHECK_THROWS_WITH_AS(run_command("solve", Json::object()),
                         doctest::Contains("unknown subcommand"), gdsq::Error);
    CHECK_THROWS_AS(run_command("eval", Json::object()), gdsq::Error);
}
