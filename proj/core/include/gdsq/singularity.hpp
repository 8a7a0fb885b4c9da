#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gdsq/maps.hpp"

namespace gdsq {

enum class PointClass { Fold, Cusp, Degenerate, Unresolved };

const char* to_string(PointClass c);

// tol_trace bounds |det JG| at accepted curve vertices relative to the local
// polynomial magnitude; tol_cls separates fold/cusp tests from noise relative
// to the gradient and Hessian scales.
struct SingularTolerances {
    double tol_trace = 1e-8;
    double tol_cls = 1e-6;
};

// det JG for m = 2 written as c_xx x1^2 + c_yy x2^2 + c_xy x1 x2 + c_x x1
// + c_y x2 + c_0. The expansion of the product Jacobian has no squared terms,
// so c_xx = c_yy = 0 for every map in the family: the zero set is a
// rectangular (axis-asymptote) hyperbola or degenerates to lines.
struct ConicCoefficients {
    double c_xx = 0.0;
    double c_yy = 0.0;
    double c_xy = 0.0;
    double c_x = 0.0;
    double c_y = 0.0;
    double c_0 = 0.0;

    double eval(double x1, double x2) const {
        return c_xx * x1 * x1 + c_yy * x2 * x2 + c_xy * x1 * x2 + c_x * x1 + c_y * x2 + c_0;
    }
    Eigen::Vector2d gradient(double x1, double x2) const {
        return {2.0 * c_xx * x1 + c_xy * x2 + c_x, 2.0 * c_yy * x2 + c_xy * x1 + c_y};
    }
    Eigen::Matrix2d hessian() const {
        Eigen::Matrix2d h;
        h << 2.0 * c_xx, c_xy, c_xy, 2.0 * c_yy;
        return h;
    }
    // Sum of absolute term magnitudes at x; normalizer for "is lambda zero
    // here" so the answer does not depend on the overall scale of A or p.
    double magnitude(double x1, double x2) const {
        return std::abs(c_xx * x1 * x1) + std::abs(c_yy * x2 * x2) + std::abs(c_xy * x1 * x2) +
               std::abs(c_x * x1) + std::abs(c_y * x2) + std::abs(c_0) + 1.0;
    }
};

// Determinant of the closed-form Jacobian; requires the equidimensional case.
double det_jacobian(const GdsMap& g, const Eigen::VectorXd& x);

// Exact expansion of det JG for m = 2.
ConicCoefficients conic_coefficients(const GdsMap& g);

struct LemmaSingularReport {
    struct PerCenter {
        Eigen::VectorXd center;
        double row_max_abs = 0.0;  // max |entry| of row i of J at p_i; exactly 0
        int rank = 0;
        double sigma_min = 0.0;
    };
    std::vector<PerCenter> centers;
    bool all_rows_zero = false;
    bool all_rank_deficient = false;
};

// Row i of J at p_i vanishes identically, so every center is a singular point.
LemmaSingularReport verify_lemma_singular(const GdsMap& g);

struct CollisionWitness {
    Eigen::VectorXd x;
    Eigen::VectorXd x_prime;
    double gap = 0.0;       // |G(x) - G(x')|
    double distance = 0.0;  // |x - x'|
    int attempts_used = 0;
};

// Searches for x != x' with G(x) = G(x'). Newton on G(x') = G(x) seeded from
// the reflections x' = 2 p_i - x (which zero out equation i exactly), then
// random multistart. Throws after `attempts` rounds without a witness.
CollisionWitness find_collision(const GdsMap& g, int attempts, std::uint64_t seed,
                                double tol_gap = 1e-9, double min_distance = 1e-3);

struct Window {
    double x1_lo = -1.0;
    double x1_hi = 1.0;
    double x2_lo = -1.0;
    double x2_hi = 1.0;
};

struct TraceOptions {
    double step = 1e-2;
    int seed_grid = 64;           // sign-change detection grid, per axis
    double corrector_tol = 1e-10;  // |lambda| target relative to local magnitude
    int max_vertices = 200000;
};

struct SingularCurve {
    struct Component {
        std::vector<Eigen::Vector2d> points;
        std::vector<PointClass> classes;
    };
    ConicCoefficients conic;
    std::vector<Component> components;
    Window window;
    double step = 0.0;
    int fold_count = 0;
    int cusp_count = 0;
    int degenerate_count = 0;
    int unresolved_count = 0;
    std::size_t vertex_count() const {
        std::size_t n = 0;
        for (const auto& c : components) n += c.points.size();
        return n;
    }
};

// Seeds from sign changes on a coarse grid, then predictor-corrector
// continuation along det JG = 0; branches clipped at the window. Cusps are
// located by the sign change of grad(lambda) . eta along each branch (eta a
// continuously oriented kernel field) and inserted as vertices; lattice
// vertices inside the tolerance band that are not the inserted cusp come back
// unresolved rather than silently fold.
SingularCurve trace_singular_curve(const GdsMap& g, const Window& window,
                                   const TraceOptions& opts = {},
                                   const SingularTolerances& tol = {});

struct Classification {
    PointClass cls = PointClass::Degenerate;
    Eigen::Vector2d eta = Eigen::Vector2d::Zero();  // unit kernel vector
    double grad_dot_eta = 0.0;
    double eta_hess_eta = 0.0;
    double det_value = 0.0;
};

// Pointwise Whitney test at a singular point: fold when the curve is
// transverse to the kernel line, else cusp when the second-order term
// survives, else degenerate. Requires |det JG(x)| below tol_trace at the
// local magnitude; rank 0 reports degenerate.
Classification classify_singular_point(const GdsMap& g, const Eigen::Vector2d& x,
                                       const SingularTolerances& tol = {});

}  // namespace gdsq
