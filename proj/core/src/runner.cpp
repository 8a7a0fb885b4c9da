#include "gdsq/runner.hpp"

#include <cmath>

#include "gdsq/common.hpp"
#include "gdsq/composition.hpp"
#include "gdsq/config.hpp"
#include "gdsq/genericity.hpp"
#include "gdsq/rng.hpp"
#include "gdsq/serialize.hpp"
#include "gdsq/singularity.hpp"
#include "gdsq/svg.hpp"

namespace gdsq {
namespace {

std::vector<int> grid_of(const Json& c) {
    if (!c.contains("grid")) return {};
    const Json& v = c.at("grid");
    if (v.is_number_integer()) return {v.get<int>()};
    return v.get<std::vector<int>>();
}

RankScanOptions rank_opts_of(const Json& c) {
    RankScanOptions o;
    o.grid = grid_of(c);
    if (c.contains("refine_rounds")) o.refine_rounds = c.at("refine_rounds").get<int>();
    return o;
}

GapScanOptions gap_opts_of(const Json& c) {
    GapScanOptions o;
    o.grid = grid_of(c);
    if (c.contains("delta")) o.delta = c.at("delta").get<double>();
    if (c.contains("starts")) o.starts = c.at("starts").get<int>();
    if (c.contains("descent_max_iters"))
        o.descent_max_iters = c.at("descent_max_iters").get<int>();
    return o;
}

Tolerances tol_of(const Json& c) {
    if (!c.contains("tolerances")) return {};
    return tolerances_from_json(c.at("tolerances"), "config.tolerances");
}

SingularTolerances singular_tol_of(const Json& c) {
    SingularTolerances t;
    if (c.contains("tol_trace")) t.tol_trace = c.at("tol_trace").get<double>();
    if (c.contains("tol_cls")) t.tol_cls = c.at("tol_cls").get<double>();
    return t;
}

std::uint64_t seed_of(const Json& c) {
    return c.contains("seed") ? c.at("seed").get<std::uint64_t>() : 0;
}

int rank_exit(RankVerdict v) {
    return v == RankVerdict::Immersion ? 0 : v == RankVerdict::RankDrop ? 2 : 3;
}

int gap_exit(CollisionVerdict v) {
    return v == CollisionVerdict::Injective ? 0 : v == CollisionVerdict::Collision ? 2 : 3;
}

// Window around the two centers when none is given: bounding box padded by
// max(1, half the center spread) per side.
Window auto_window(const GdsMap& g) {
    const Eigen::MatrixXd& p = g.centers().matrix();
    Window w;
    w.x1_lo = p.col(0).minCoeff();
    w.x1_hi = p.col(0).maxCoeff();
    w.x2_lo = p.col(1).minCoeff();
    w.x2_hi = p.col(1).maxCoeff();
    const double pad =
        std::max(1.0, 0.5 * std::max(w.x1_hi - w.x1_lo, w.x2_hi - w.x2_lo));
    w.x1_lo -= pad;
    w.x1_hi += pad;
    w.x2_lo -= pad;
    w.x2_hi += pad;
    return w;
}

// Random equidimensional map for verify-lemmas --m: weights resampled until
// |a_ij| >= 0.1 to respect the nonzero constraint with a conditioning margin.
GdsMap random_map(int m, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd a(m, m), p(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double v = rng.gaussian();
            while (std::abs(v) < 0.1) v = rng.gaussian();
            a(i, j) = v;
        }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) p(i, j) = rng.gaussian();
    return GdsMap(CoefficientMatrix(std::move(a)), CentralPoints(std::move(p)));
}

Eigen::MatrixXd ones(int m) { return Eigen::MatrixXd::Ones(m, m); }

RunArtifacts run_eval(const Json& c) {
    const GdsMap g = map_from_json(c.at("map"), "config.map");
    const Eigen::VectorXd x = vector_from_json(c.at("x"), "config.x");
    RunArtifacts out;
    out.report["check"] = "value";
    out.report["map"] = map_to_json(g);
    out.report["x"] = to_json(x);
    out.report["value"] = to_json(Eigen::VectorXd(g.eval(x)));
    return out;
}

RunArtifacts run_jacobian(const Json& c) {
    const GdsMap g = map_from_json(c.at("map"), "config.map");
    const Eigen::VectorXd x = vector_from_json(c.at("x"), "config.x");
    RunArtifacts out;
    out.report["check"] = "jacobian";
    out.report["map"] = map_to_json(g);
    out.report["x"] = to_json(x);
    out.report["jacobian"] = to_json(Eigen::MatrixXd(g.jacobian(x)));
    return out;
}

RunArtifacts run_compose_jacobian(const Json& c) {
    const GdsMap g = map_from_json(c.at("map"), "config.map");
    const ParamManifold f = manifold_from_json(c.at("manifold"), "config.manifold");
    const Eigen::VectorXd q = vector_from_json(c.at("q"), "config.q");
    RunArtifacts out;
    out.report["check"] = "jacobian";
    out.report["manifold"] = f.name;
    out.report["q"] = to_json(q);
    out.report["jacobian"] = to_json(composition_jacobian(g, f, q));
    return out;
}

RunArtifacts run_check_immersion(const Json& c) {
    const GdsMap g = map_from_json(c.at("map"), "config.map");
    const ParamManifold f = manifold_from_json(c.at("manifold"), "config.manifold");
    const RankReport rep = immersion_check(g, f, rank_opts_of(c), tol_of(c));
    RunArtifacts out;
    out.exit_code = rank_exit(rep.verdict);
    out.report = to_json(rep);
    out.csv = sigma_grid_csv(rep);
    return out;
}

RunArtifacts run_check_injectivity(const Json& c) {
    const GdsMap g = map_from_json(c.at("map"), "config.map");
    const ParamManifold f = manifold_from_json(c.at("manifold"), "config.manifold");
    const CollisionReport rep = injectivity_check(g, f, gap_opts_of(c), tol_of(c));
    RunArtifacts out;
    out.exit_code = gap_exit(rep.verdict);
    out.report = to_json(rep);
    return out;
}

RunArtifacts run_check_embedding(const Json& c) {
    const GdsMap g = map_from_json(c.at("map"), "config.map");
    const ParamManifold f = manifold_from_json(c.at("manifold"), "config.manifold");
    const EmbeddingReport rep =
        injective_immersion_check(g, f, rank_opts_of(c), gap_opts_of(c), tol_of(c));
    RunArtifacts out;
    if (rep.embedding_candidate)
        out.exit_code = 0;
    else if (rep.rank.verdict == RankVerdict::RankDrop ||
             rep.collision.verdict == CollisionVerdict::Collision)
        out.exit_code = 2;
    else
        out.exit_code = 3;
    out.report = to_json(rep);
    out.csv = sigma_grid_csv(rep.rank);
    return out;
}

RunArtifacts run_singular_set(const Json& c, bool want_svg) {
    const GdsMap g = map_from_json(c.at("map"), "config.map");
    if (g.ambient_dim() != 2) fail("config.map must be planar (m = 2) for singular-set");
    Window w;
    if (c.contains("window")) {
        const Json& v = c.at("window");
        w.x1_lo = v[0].get<double>();
        w.x1_hi = v[1].get<double>();
        w.x2_lo = v[2].get<double>();
        w.x2_hi = v[3].get<double>();
    } else {
        w = auto_window(g);
    }
    TraceOptions opts;
    if (c.contains("step")) opts.step = c.at("step").get<double>();
    if (c.contains("seed_grid")) opts.seed_grid = c.at("seed_grid").get<int>();
    const SingularCurve curve = trace_singular_curve(g, w, opts, singular_tol_of(c));
    RunArtifacts out;
    out.report = to_json(curve);
    out.csv = singular_curve_csv(curve);
    if (want_svg) out.svg = render_singular_curve_svg(curve, g);
    return out;
}

RunArtifacts run_classify(const Json& c) {
    const GdsMap g = map_from_json(c.at("map"), "config.map");
    const Eigen::VectorXd x = vector_from_json(c.at("x"), "config.x");
    const Classification cls = classify_singular_point(g, Eigen::Vector2d(x[0], x[1]),
                                                       singular_tol_of(c));
    RunArtifacts out;
    out.report = to_json(cls);
    return out;
}

RunArtifacts run_verify_lemmas(const Json& c) {
    const std::uint64_t seed = seed_of(c);
    const GdsMap g = c.contains("map") ? map_from_json(c.at("map"), "config.map")
                                       : random_map(c.at("m").get<int>(), seed);
    const int attempts = c.contains("attempts") ? c.at("attempts").get<int>() : 50;

    const LemmaSingularReport singular = verify_lemma_singular(g);
    RunArtifacts out;
    out.report["check"] = "lemmas";
    out.report["m"] = static_cast<int>(g.ambient_dim());
    out.report["singular"] = to_json(singular);
    bool collision_found = false;
    try {
        const CollisionWitness w = find_collision(g, attempts, seed);
        out.report["collision_found"] = true;
        out.report["collision"] = to_json(w);
        collision_found = true;
    } catch (const Error&) {
        out.report["collision_found"] = false;
        out.report["collision"] = nullptr;
    }
    const bool ok = singular.all_rows_zero && singular.all_rank_deficient && collision_found;
    out.exit_code = ok ? 0 : 2;
    return out;
}

RunArtifacts run_mc(const Json& c, bool want_svg) {
    const ParamManifold f = manifold_from_json(c.at("manifold"), "config.manifold");
    const CoefficientMatrix a(c.contains("A") ? matrix_from_json(c.at("A"), "config.A")
                                              : ones(f.ambient_dim));
    McOptions opts;
    if (c.contains("trials")) opts.trials = c.at("trials").get<int>();
    opts.seed = seed_of(c);
    if (c.contains("dist")) opts.dist = parse_dist(c.at("dist").get<std::string>());
    opts.rank = rank_opts_of(c);
    opts.gap = gap_opts_of(c);
    opts.tol = tol_of(c);
    if (c.contains("override_hypothesis"))
        opts.override_hypothesis = c.at("override_hypothesis").get<bool>();

    const std::string theorem = c.at("theorem").get<std::string>();
    const MonteCarloSummary summary = theorem == "immersion"
                                          ? mc_genericity_immersion(f, a, opts)
                                          : mc_genericity_injectivity(f, a, opts);
    RunArtifacts out;
    out.exit_code = summary.failures > 0 ? 2 : summary.inconclusive > 0 ? 3 : 0;
    out.report = to_json(summary);
    out.csv = margins_csv(summary);
    if (want_svg) out.svg = render_margin_histogram_svg(summary);
    return out;
}

RunArtifacts run_bad_p(const Json& c) {
    const ParamManifold f = manifold_from_json(c.at("manifold"), "config.manifold");
    const CoefficientMatrix a(c.contains("A") ? matrix_from_json(c.at("A"), "config.A")
                                              : ones(f.ambient_dim));
    const std::string mode = c.at("mode").get<std::string>();
    RunArtifacts out;
    out.report["check"] = "bad_p";
    out.report["mode"] = mode;
    out.report["manifold"] = f.name;

    if (mode == "immersion") {
        const Eigen::VectorXd q0 = vector_from_json(c.at("q0"), "config.q0");
        const CentralPoints p = construct_bad_p_immersion(f, q0);
        const GdsMap g(a, p);
        const RankReport rep = immersion_check(g, f, rank_opts_of(c), tol_of(c));
        out.report["q0"] = to_json(q0);
        out.report["p"] = to_json(p.matrix());
        out.report["result"] = to_json(rep);
        // The construction predicts a rank drop; anything else is a failure.
        out.exit_code = rep.verdict == RankVerdict::RankDrop ? 0 : 2;
        return out;
    }
    const Eigen::VectorXd q1 = vector_from_json(c.at("q1"), "config.q1");
    const Eigen::VectorXd q2 = vector_from_json(c.at("q2"), "config.q2");
    const CentralPoints p = construct_bad_p_injectivity(f, q1, q2);
    const GdsMap g(a, p);
    const Eigen::VectorXd pair = gamma_pair(g, f, q1, q2);
    const Eigen::Index m = g.components();
    const double pair_gap = (pair.head(m) - pair.tail(m)).norm();
    const CollisionReport rep = injectivity_check(g, f, gap_opts_of(c), tol_of(c));
    out.report["q1"] = to_json(q1);
    out.report["q2"] = to_json(q2);
    out.report["p"] = to_json(p.matrix());
    out.report["pair_gap"] = pair_gap;
    out.report["result"] = to_json(rep);
    out.exit_code = rep.verdict == CollisionVerdict::Collision ? 0 : 2;
    return out;
}

}  // namespace

RunArtifacts run_command(const std::string& subcommand, const Json& config, bool want_svg) {
    validate_config(subcommand, config);
    if (subcommand == "eval") return run_eval(config);
    if (subcommand == "jacobian") return run_jacobian(config);
    if (subcommand == "compose-jacobian") return run_compose_jacobian(config);
    if (subcommand == "check-immersion") return run_check_immersion(config);
    if (subcommand == "check-injectivity") return run_check_injectivity(config);
    if (subcommand == "check-embedding") return run_check_embedding(config);
    if (subcommand == "singular-set") return run_singular_set(config, want_svg);
    if (subcommand == "classify") return run_classify(config);
    if (subcommand == "verify-lemmas") return run_verify_lemmas(config);
    if (subcommand == "mc") return run_mc(config, want_svg);
    if (subcommand == "bad-p") return run_bad_p(config);
    fail("unknown subcommand '", subcommand, "'");
}

}  // namespace gdsq
