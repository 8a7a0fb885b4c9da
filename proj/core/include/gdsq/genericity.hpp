#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gdsq/composition.hpp"
#include "gdsq/manifolds.hpp"
#include "gdsq/maps.hpp"
#include "gdsq/rng.hpp"

namespace gdsq {

// Absolutely continuous sampling law for central points; either law hits any
// fixed measure-zero set with probability zero.
struct Dist {
    enum class Kind { Gaussian, Uniform };
    Kind kind = Kind::Gaussian;
    double mean = 0.0;
    double stddev = 1.0;
    double lo = -1.0;
    double hi = 1.0;
};

Dist gaussian_dist(double mean, double stddev);
Dist uniform_dist(double lo, double hi);

// Descriptor round-trip: "gaussian(0,1)" / "uniform(-1,1)".
std::string to_string(const Dist& d);
Dist parse_dist(const std::string& text);

// m independent points in R^m; coordinates drawn in row-major order.
CentralPoints sample_central_points(int m, const Dist& dist, Rng& rng);

// Adds independent Gaussian noise to every coordinate.
CentralPoints perturb_points(const CentralPoints& p, double stddev, Rng& rng);

enum class McVerdict { Pass, Fail, Inconclusive };

const char* to_string(McVerdict v);

struct MarginQuantiles {
    double min = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double max = 0.0;
};

struct MonteCarloSummary {
    std::string theorem;  // "immersion" | "injectivity"
    std::string manifold;
    int trials = 0;
    std::uint64_t seed = 0;
    Dist dist;
    std::vector<double> margins;      // sigma_min or min image gap, one per trial
    std::vector<McVerdict> verdicts;  // one per trial
    int failures = 0;
    int passes = 0;
    int inconclusive = 0;
    MarginQuantiles quantiles;
};

struct McOptions {
    int trials = 1000;
    std::uint64_t seed = 0;
    Dist dist;
    RankScanOptions rank;
    GapScanOptions gap;
    Tolerances tol;
    bool override_hypothesis = false;  // run outside the theorem hypothesis
};

// Per trial: sample p from dist with the stream Rng(seed, trial), build
// G_{(p,A)}, run the corresponding check, record margin and verdict. Trials
// are schedule-invariant: results depend only on (seed, trial index).
// Immersion needs m >= 2n, injectivity m >= 2n+1, unless overridden.
MonteCarloSummary mc_genericity_immersion(const ParamManifold& f, const CoefficientMatrix& a,
                                          const McOptions& opts);
MonteCarloSummary mc_genericity_injectivity(const ParamManifold& f, const CoefficientMatrix& a,
                                            const McOptions& opts);

// Central points with p_i = f(q0) for every i. Every term of every entry of
// the composed Jacobian at q0 carries the factor f_j(q0) - p_ij = 0, so the
// Jacobian vanishes for ANY coefficient matrix: an explicit bad parameter.
CentralPoints construct_bad_p_immersion(const ParamManifold& f, const Eigen::VectorXd& q0);

// Central points with p_ij = (f_j(q1) + f_j(q2)) / 2. Both images sit at
// mirrored offsets from every center coordinate, so their squared distances
// agree termwise and (G o f)(q1) = (G o f)(q2) exactly for ANY coefficient
// matrix. Errors when f(q1) = f(q2): the pair itself is already a collision.
CentralPoints construct_bad_p_injectivity(const ParamManifold& f, const Eigen::VectorXd& q1,
                                          const Eigen::VectorXd& q2);

}  // namespace gdsq
