#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "gdsq/common.hpp"
#include "gdsq/dual.hpp"

namespace gdsq {

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool periodic = false;
};

// Parameter box, possibly periodic per axis. Periodic axes identify lo with hi
// and all metric operations use the shortest wrapped representative.
class ParamDomain {
public:
    ParamDomain() = default;
    explicit ParamDomain(std::vector<Axis> axes);

    int dim() const { return static_cast<int>(axes_.size()); }
    const Axis& axis(int k) const { return axes_[static_cast<std::size_t>(k)]; }

    // Canonical representative: periodic coordinates reduced into [lo, hi).
    Eigen::VectorXd wrap(const Eigen::VectorXd& q) const;

    // Throws when a non-periodic coordinate is outside its interval.
    void require_inside(const Eigen::VectorXd& q) const;

    // Euclidean distance on the quotient (shortest wrapped difference).
    double separation(const Eigen::VectorXd& q, const Eigen::VectorXd& r) const;

    // Shortest wrapped difference vector q - r.
    Eigen::VectorXd wrapped_difference(const Eigen::VectorXd& q, const Eigen::VectorXd& r) const;

    double diameter() const;

private:
    std::vector<Axis> axes_;
};

// A single-chart parametrized manifold f : D subset R^n -> R^m with exact
// Jacobian access and a dual-number evaluator for AD cross-checks. The claims
// flags are assertions about the specimen that the test grids verify; they are
// not enforced at construction.
struct ParamManifold {
    std::string name;
    ParamDomain domain;
    int ambient_dim = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> value;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;  // m x n
    std::function<std::vector<Dual>(const std::vector<Dual>&)> value_dual;
    bool claims_immersion = false;
    bool claims_injective = false;

    int param_dim() const { return domain.dim(); }
};

// Wraps periodic coordinates, validates box coordinates, evaluates f.
Eigen::VectorXd eval_manifold(const ParamManifold& f, const Eigen::VectorXd& q);

// Quotient metric between parameter points.
double domain_separation(const ParamManifold& f, const Eigen::VectorXd& q,
                         const Eigen::VectorXd& r);

// Jacobian by forward-mode AD of value_dual; oracle for the hand-written
// differentiators and the exact Jacobian of expression manifolds.
Eigen::MatrixXd ad_jacobian(const ParamManifold& f, const Eigen::VectorXd& q);

// --- specimen catalog ------------------------------------------------------

// Embedded round circle in the first two coordinates of R^m, m >= 2.
ParamManifold circle(double radius, const Eigen::VectorXd& center, int m);

// Knotted closed curve in R^3: (sin t + 2 sin 2t, cos t - 2 cos 2t, -sin 3t).
ParamManifold trefoil();

// Immersed but non-injective: (sin t, sin t cos t); double point at t = 0, pi.
ParamManifold figure_eight();

// Injective but not an immersion: (t^2, t^3) on [-1, 1]; rank drop at t = 0.
ParamManifold cusp_curve();

// Flat torus (R cos u, R sin u, r cos v, r sin v, 0, ...) in R^m, m >= 4.
ParamManifold torus_surface(int m, double major_radius, double minor_radius);

}  // namespace gdsq
