#pragma once

#include <Eigen/Dense>
#include <string>

#include "gdsq/composition.hpp"
#include "gdsq/genericity.hpp"
#include "gdsq/jsonout.hpp"
#include "gdsq/manifolds.hpp"
#include "gdsq/maps.hpp"
#include "gdsq/singularity.hpp"

namespace gdsq {

Json to_json(const Eigen::VectorXd& v);
Json to_json(const Eigen::MatrixXd& m);
Eigen::VectorXd vector_from_json(const Json& j, const std::string& path);
Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& path);

// Map descriptor: {"A": [[...]], "p": [[...]]} with explicit weights, or
// {"kind": "distance-squared" | "lorentzian", "p": [[...]]}.
GdsMap map_from_json(const Json& j, const std::string& path = "map");
Json map_to_json(const GdsMap& g);

// Manifold descriptor: {"kind": "circle" | "trefoil" | "figure-eight" |
// "cusp" | "torus" | "expr", ...kind-specific parameters}.
ParamManifold manifold_from_json(const Json& j, const std::string& path = "manifold");

Json to_json(const Tolerances& t);
Tolerances tolerances_from_json(const Json& j, const std::string& path);

Json to_json(const RankReport& r);
Json to_json(const CollisionReport& r);
Json to_json(const EmbeddingReport& r);
Json to_json(const LemmaSingularReport& r);
Json to_json(const CollisionWitness& w);
Json to_json(const ConicCoefficients& c);
Json to_json(const SingularCurve& c);
Json to_json(const Classification& c);
Json to_json(const MonteCarloSummary& s);

// Structural check for emitted reports; throws on a missing or mistyped
// field, naming its path. Exercised by the round-trip tests.
void validate_report(const Json& report);

// CSV emitters, header row first, doubles at 17 significant digits.
std::string margins_csv(const MonteCarloSummary& s);
std::string singular_curve_csv(const SingularCurve& c);
std::string sigma_grid_csv(const RankReport& r);

}  // namespace gdsq
