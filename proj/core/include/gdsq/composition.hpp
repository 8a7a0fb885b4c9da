#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "gdsq/manifolds.hpp"
#include "gdsq/maps.hpp"

namespace gdsq {

// Scale-aware verdict thresholds. Between the failure and the pass threshold
// the verdict is inconclusive, never a silent pass.
struct Tolerances {
    double tol_rank = 1e-8;       // rank-drop when sigma_min < tol_rank * scale
    double tol_collision = 1e-8;  // collision when image gap < tol_collision * scale
    double tol_margin = 1e-5;     // pass when the margin exceeds tol_margin * scale
};

enum class RankVerdict { Immersion, RankDrop, Inconclusive };
enum class CollisionVerdict { Injective, Collision, Inconclusive };

const char* to_string(RankVerdict v);
const char* to_string(CollisionVerdict v);

struct RankScanOptions {
    std::vector<int> grid;   // cells per axis; empty selects 4096 (curves) / 128 (surfaces)
    int refine_rounds = 12;  // local subdivision rounds around the lowest cells
};

struct GapScanOptions {
    std::vector<int> grid;
    double delta = 1e-2;  // exclusion radius in the domain metric
    int starts = 16;      // descent starts taken from the best screen candidates
    int descent_max_iters = 200;
};

struct RankReport {
    std::vector<int> grid;
    double sigma_min = 0.0;         // after refinement
    double sigma_min_screen = 0.0;  // grid minimum before refinement
    Eigen::VectorXd witness;
    bool refined = false;
    RankVerdict verdict = RankVerdict::Inconclusive;
    double scale = 1.0;
    Tolerances tolerances;
    std::vector<double> grid_values;  // sigma_min per grid point, row-major
};

struct CollisionReport {
    std::vector<int> grid;
    Eigen::VectorXd q;
    Eigen::VectorXd q_prime;
    double image_gap = 0.0;         // after descent refinement
    double image_gap_screen = 0.0;  // best separated grid pair
    double separation = 0.0;
    double delta = 0.0;
    CollisionVerdict verdict = CollisionVerdict::Inconclusive;
    double scale = 1.0;
    Tolerances tolerances;
};

struct EmbeddingReport {
    RankReport rank;
    CollisionReport collision;
    bool embedding_candidate = false;
};

// Chain-rule Jacobian of G following f: entry (i, k) equals
// 2 sum_j a_ij (f_j(q) - p_ij) df_j/dt_k(q), i.e. JG(f(q)) * Jf(q).
Eigen::MatrixXd composition_jacobian(const GdsMap& g, const ParamManifold& f,
                                     const Eigen::VectorXd& q);

// (G o f)(q); requires the equidimensional case like the checks below.
Eigen::VectorXd composed_value(const GdsMap& g, const ParamManifold& f, const Eigen::VectorXd& q);

// Concatenated pair image ((G o f)(q), (G o f)(q')) in R^{2m}. Equal arguments
// land exactly on the diagonal.
Eigen::VectorXd gamma_pair(const GdsMap& g, const ParamManifold& f, const Eigen::VectorXd& q,
                           const Eigen::VectorXd& q_prime);

RankReport immersion_check(const GdsMap& g, const ParamManifold& f, const RankScanOptions& opts = {},
                           const Tolerances& tol = {});

CollisionReport injectivity_check(const GdsMap& g, const ParamManifold& f,
                                  const GapScanOptions& opts = {}, const Tolerances& tol = {});

EmbeddingReport injective_immersion_check(const GdsMap& g, const ParamManifold& f,
                                          const RankScanOptions& rank_opts = {},
                                          const GapScanOptions& gap_opts = {},
                                          const Tolerances& tol = {});

// --- generic scan cores ----------------------------------------------------
// The checks above run these with the composed map; the manifold self-checks
// run them with f alone.

using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
using ValueFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct MinSigmaScan {
    double screen_min = 0.0;
    double refined_min = 0.0;
    Eigen::VectorXd witness;
    std::vector<int> grid;
    std::vector<double> values;  // per grid point, row-major
};

struct MinGapScan {
    double screen_min = 0.0;
    double refined_min = 0.0;
    Eigen::VectorXd q;
    Eigen::VectorXd q_prime;
    double separation = 0.0;
    std::vector<int> grid;
};

MinSigmaScan scan_min_singular(const ParamDomain& domain, const JacobianFn& jac,
                               const std::vector<int>& grid, int refine_rounds);

MinGapScan scan_min_gap(const ParamDomain& domain, const ValueFn& value, const JacobianFn& jac,
                        int ambient_dim, const GapScanOptions& opts);

// Default cells per axis: 4096 for one-parameter domains, 128 for two, 16 above.
std::vector<int> resolve_grid(const std::vector<int>& requested, int n);

// max(1, max |a_ij|, image bounding-box diagonal over a coarse grid).
double image_scale_estimate(const GdsMap& g, const ParamManifold& f);

}  // namespace gdsq
