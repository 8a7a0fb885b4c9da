#include "gdsq/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gdsq/common.hpp"
#include "gdsq/linalg.hpp"
#include "gdsq/rng.hpp"

namespace gdsq {
namespace {

void require_equidimensional(const GdsMap& g) {
    if (!g.equidimensional())
        fail("singularity analysis needs an equidimensional map; this one sends R^",
             g.ambient_dim(), " to R^", g.components());
}

void require_planar(const GdsMap& g) {
    require_equidimensional(g);
    if (g.ambient_dim() != 2)
        fail("the planar singular-set machinery needs m = 2, got m = ", g.ambient_dim());
}

// Magnitude of the gradient terms at x; "gradient is zero" is judged against
// this so the test is invariant under scaling A or p.
double gradient_magnitude(const ConicCoefficients& c, const Eigen::Vector2d& x) {
    return 2.0 * std::abs(c.c_xx * x[0]) + 2.0 * std::abs(c.c_yy * x[1]) +
           std::abs(c.c_xy) * (std::abs(x[0]) + std::abs(x[1])) + std::abs(c.c_x) +
           std::abs(c.c_y) + 1e-300;
}

double hessian_magnitude(const ConicCoefficients& c) {
    return std::max({2.0 * std::abs(c.c_xx), 2.0 * std::abs(c.c_yy), std::abs(c.c_xy)}) + 1e-300;
}

// Unit kernel vector of the 2x2 Jacobian at a rank-1 point: perpendicular to
// the larger row. Returns false at (numerical) rank 0.
bool kernel_vector(const Eigen::Matrix2d& j, Eigen::Vector2d& eta) {
    const double n0 = j.row(0).norm();
    const double n1 = j.row(1).norm();
    const double scale = std::max({1.0, j.cwiseAbs().maxCoeff()});
    const Eigen::Vector2d row = n0 >= n1 ? Eigen::Vector2d(j(0, 0), j(0, 1))
                                         : Eigen::Vector2d(j(1, 0), j(1, 1));
    const double nr = row.norm();
    if (nr <= 1e-14 * scale) return false;
    eta = Eigen::Vector2d(-row[1], row[0]) / nr;
    return true;
}

struct Tracer {
    ConicCoefficients conic;
    Window win;
    TraceOptions opts;

    bool inside(const Eigen::Vector2d& x) const {
        return x[0] >= win.x1_lo && x[0] <= win.x1_hi && x[1] >= win.x2_lo && x[1] <= win.x2_hi;
    }
    double lambda(const Eigen::Vector2d& x) const { return conic.eval(x[0], x[1]); }
    Eigen::Vector2d grad(const Eigen::Vector2d& x) const { return conic.gradient(x[0], x[1]); }
    bool on_curve(const Eigen::Vector2d& x, double rel) const {
        return std::abs(lambda(x)) <= rel * conic.magnitude(x[0], x[1]);
    }

    // Newton projection onto lambda = 0 along the gradient direction.
    bool correct(Eigen::Vector2d& x) const {
        for (int it = 0; it < 50; ++it) {
            if (on_curve(x, opts.corrector_tol)) return true;
            const Eigen::Vector2d gr = grad(x);
            const double g2 = gr.squaredNorm();
            if (!(g2 > 1e-300)) return false;
            x -= (lambda(x) / g2) * gr;
            if (!x.allFinite()) return false;
        }
        return on_curve(x, opts.corrector_tol);
    }

    // Exact root of lambda restricted to a window face. The restriction is
    // affine because the conic has no squared terms.
    bool boundary_root(const Eigen::Vector2d& from, const Eigen::Vector2d& outside,
                       Eigen::Vector2d& hit) const {
        double best_t = std::numeric_limits<double>::infinity();
        int face = -1;
        const auto cross = [&](double bound, int axis, int id) {
            const double a = from[axis], b = outside[axis];
            if ((a - bound) * (b - bound) <= 0.0 && a != b) {
                const double t = (bound - a) / (b - a);
                if (t >= 0.0 && t < best_t) {
                    best_t = t;
                    face = id;
                }
            }
        };
        cross(win.x1_lo, 0, 0);
        cross(win.x1_hi, 0, 1);
        cross(win.x2_lo, 1, 2);
        cross(win.x2_hi, 1, 3);
        if (face < 0) return false;

        const bool vertical = face < 2;  // face of constant x1
        const double c = vertical ? (face == 0 ? win.x1_lo : win.x1_hi)
                                  : (face == 2 ? win.x2_lo : win.x2_hi);
        // lambda on the face: (c_xy c + c_y) x2 + (c_x c + c_0)   for x1 = c,
        //                     (c_xy c + c_x) x1 + (c_y c + c_0)   for x2 = c.
        const double slope = vertical ? conic.c_xy * c + conic.c_y : conic.c_xy * c + conic.c_x;
        const double offset = vertical ? conic.c_x * c + conic.c_0 : conic.c_y * c + conic.c_0;
        if (std::abs(slope) < 1e-300) return false;  // asymptote meets this face
        const double other = -offset / slope;
        hit = vertical ? Eigen::Vector2d(c, other) : Eigen::Vector2d(other, c);
        if (!inside(hit)) return false;
        return (hit - from).norm() <= 2.0 * opts.step;
    }
};

// One continuation branch through `seed`, marched in both directions and
// clipped at the window.
std::vector<Eigen::Vector2d> trace_branch(const Tracer& t, const Eigen::Vector2d& seed,
                                          std::size_t budget) {
    Eigen::Vector2d g0 = t.grad(seed);
    if (g0.norm() <= 1e-13 * gradient_magnitude(t.conic, seed)) return {seed};
    Eigen::Vector2d t0(-g0[1], g0[0]);
    t0.normalize();
    if (t0[0] < 0.0 || (t0[0] == 0.0 && t0[1] < 0.0)) t0 = -t0;

    std::vector<Eigen::Vector2d> halves[2];
    bool closed = false;
    for (int dir = 0; dir < 2 && !closed; ++dir) {
        Eigen::Vector2d x = seed;
        Eigen::Vector2d heading = dir == 0 ? t0 : Eigen::Vector2d(-t0);
        auto& out = halves[dir];
        while (halves[0].size() + halves[1].size() + 1 < budget) {
            const Eigen::Vector2d gr = t.grad(x);
            if (gr.norm() <= 1e-13 * gradient_magnitude(t.conic, x)) break;
            Eigen::Vector2d tan(-gr[1], gr[0]);
            tan.normalize();
            if (tan.dot(heading) < 0.0) tan = -tan;

            // Halve the predictor until the corrected point stays within
            // 2 * step of the previous vertex.
            Eigen::Vector2d xn;
            bool ok = false;
            double h = t.opts.step;
            for (int tries = 0; tries < 8; ++tries, h *= 0.5) {
                xn = x + h * tan;
                if (t.correct(xn) && (xn - x).norm() <= 2.0 * t.opts.step) {
                    ok = true;
                    break;
                }
            }
            if (!ok) break;
            if (!t.inside(xn)) {
                Eigen::Vector2d hit;
                // A seed sitting on a window face would re-emit itself here.
                if (t.boundary_root(x, xn, hit) && (hit - x).norm() > 0.0) out.push_back(hit);
                break;
            }
            out.push_back(xn);
            if (dir == 0 && out.size() > 3 && (xn - seed).norm() < 0.5 * t.opts.step) {
                closed = true;
                break;
            }
            heading = (xn - x).normalized();
            x = xn;
        }
    }

    std::vector<Eigen::Vector2d> pts;
    pts.reserve(halves[0].size() + halves[1].size() + 2);
    for (auto it = halves[1].rbegin(); it != halves[1].rend(); ++it) pts.push_back(*it);
    pts.push_back(seed);
    for (const auto& p : halves[0]) pts.push_back(p);
    if (closed) pts.push_back(seed);  // make the loop explicit in the vertex list
    return pts;
}

// Oriented kernel field along a component; zero vector marks rank-0 vertices.
std::vector<Eigen::Vector2d> kernel_field(const GdsMap& g,
                                          const std::vector<Eigen::Vector2d>& pts) {
    std::vector<Eigen::Vector2d> etas(pts.size(), Eigen::Vector2d::Zero());
    bool have_ref = false;
    Eigen::Vector2d ref = Eigen::Vector2d::Zero();
    for (std::size_t k = 0; k < pts.size(); ++k) {
        Eigen::Vector2d eta;
        if (!kernel_vector(g.jacobian(pts[k]), eta)) continue;
        if (!have_ref) {
            if (eta[0] < 0.0 || (eta[0] == 0.0 && eta[1] < 0.0)) eta = -eta;
            have_ref = true;
        } else if (eta.dot(ref) < 0.0) {
            eta = -eta;
        }
        ref = eta;
        etas[k] = eta;
    }
    return etas;
}

}  // namespace

const char* to_string(PointClass c) {
    switch (c) {
        case PointClass::Fold: return "fold";
        case PointClass::Cusp: return "cusp";
        case PointClass::Degenerate: return "degenerate";
        default: return "unresolved";
    }
}

double det_jacobian(const GdsMap& g, const Eigen::VectorXd& x) {
    require_equidimensional(g);
    return g.jacobian(x).determinant();
}

ConicCoefficients conic_coefficients(const GdsMap& g) {
    require_planar(g);
    const auto& a = g.coefficients();
    const auto& p = g.centers();
    // det JG = 4[a11 a22 (x1-p11)(x2-p22) - a12 a21 (x2-p12)(x1-p21)];
    // both products are bilinear, so the squared terms cancel identically.
    const double u = 4.0 * a(0, 0) * a(1, 1);
    const double v = 4.0 * a(0, 1) * a(1, 0);
    ConicCoefficients c;
    c.c_xx = 0.0;
    c.c_yy = 0.0;
    c.c_xy = u - v;
    c.c_x = v * p(0, 1) - u * p(1, 1);
    c.c_y = v * p(1, 0) - u * p(0, 0);
    c.c_0 = u * p(0, 0) * p(1, 1) - v * p(0, 1) * p(1, 0);
    return c;
}

LemmaSingularReport verify_lemma_singular(const GdsMap& g) {
    require_equidimensional(g);
    const Eigen::Index m = g.ambient_dim();
    LemmaSingularReport rep;
    rep.all_rows_zero = true;
    rep.all_rank_deficient = true;
    for (Eigen::Index i = 0; i < m; ++i) {
        LemmaSingularReport::PerCenter pc;
        pc.center = g.centers().point(i);
        const Eigen::MatrixXd j = g.jacobian(pc.center);
        pc.row_max_abs = j.row(i).cwiseAbs().maxCoeff();
        pc.rank = numerical_rank(j);
        pc.sigma_min = smallest_singular_value(j);
        rep.all_rows_zero = rep.all_rows_zero && pc.row_max_abs == 0.0;
        rep.all_rank_deficient = rep.all_rank_deficient && pc.rank <= static_cast<int>(m) - 1;
        rep.centers.push_back(std::move(pc));
    }
    return rep;
}

CollisionWitness find_collision(const GdsMap& g, int attempts, std::uint64_t seed, double tol_gap,
                                double min_distance) {
    require_equidimensional(g);
    if (attempts < 1) fail("attempts must be positive, got ", attempts);
    const Eigen::Index m = g.ambient_dim();
    const Eigen::MatrixXd& centers = g.centers().matrix();
    const Eigen::VectorXd centroid = centers.colwise().mean().transpose();
    double spread = 1.0;
    for (Eigen::Index i = 0; i < m; ++i)
        spread = std::max(spread, (centers.row(i).transpose() - centroid).norm());

    const auto newton = [&](const Eigen::VectorXd& target, Eigen::VectorXd xp,
                            Eigen::VectorXd& out) {
        const double tol_abs = 1e-12 * std::max(1.0, target.cwiseAbs().maxCoeff());
        for (int it = 0; it < 60; ++it) {
            const Eigen::VectorXd f = g.eval(xp) - target;
            if (f.cwiseAbs().maxCoeff() <= tol_abs) {
                out = xp;
                return true;
            }
            const Eigen::VectorXd step = g.jacobian(xp).partialPivLu().solve(f);
            if (!step.allFinite()) return false;
            xp -= step;
            if (!xp.allFinite()) return false;
        }
        return false;
    };

    for (int a = 0; a < attempts; ++a) {
        Rng rng(seed, static_cast<std::uint64_t>(a));
        Eigen::VectorXd x(m);
        for (Eigen::Index k = 0; k < m; ++k) x[k] = centroid[k] + spread * rng.gaussian();
        const Eigen::VectorXd gx = g.eval(x);

        std::vector<Eigen::VectorXd> starts;
        starts.reserve(static_cast<std::size_t>(m) + 4);
        for (Eigen::Index i = 0; i < m; ++i)
            starts.push_back(2.0 * centers.row(i).transpose() - x);
        for (int k = 0; k < 4; ++k) {
            Eigen::VectorXd s(m);
            for (Eigen::Index c = 0; c < m; ++c) s[c] = centroid[c] + 2.0 * spread * rng.gaussian();
            starts.push_back(std::move(s));
        }

        for (const Eigen::VectorXd& s : starts) {
            Eigen::VectorXd xp;
            if (!newton(gx, s, xp)) continue;
            const double dist = (x - xp).norm();
            const double gap = (g.eval(xp) - gx).norm();
            if (dist > min_distance && gap < tol_gap) {
                CollisionWitness w;
                w.x = x;
                w.x_prime = xp;
                w.gap = gap;
                w.distance = dist;
                w.attempts_used = a + 1;
                return w;
            }
        }
    }
    fail("no collision found after ", attempts, " attempts; the search never silently passes");
}

SingularCurve trace_singular_curve(const GdsMap& g, const Window& window, const TraceOptions& opts,
                                   const SingularTolerances& tol) {
    require_planar(g);
    if (!(opts.step > 0.0)) fail("trace step must be positive, got ", opts.step);
    if (!(window.x1_hi > window.x1_lo) || !(window.x2_hi > window.x2_lo))
        fail("trace window is empty");
    if (opts.seed_grid < 2) fail("seed grid must have at least 2 cells, got ", opts.seed_grid);

    Tracer tracer{conic_coefficients(g), window, opts};
    SingularCurve curve;
    curve.conic = tracer.conic;
    curve.window = window;
    curve.step = opts.step;

    // Seed candidates: roots bracketed by sign changes on the coarse lattice.
    const int n = opts.seed_grid;
    const double dx = (window.x1_hi - window.x1_lo) / n;
    const double dy = (window.x2_hi - window.x2_lo) / n;
    Eigen::MatrixXd lam(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            lam(i, j) = tracer.conic.eval(window.x1_lo + i * dx, window.x2_lo + j * dy);

    std::vector<Eigen::Vector2d> seeds;
    const auto bisect_edge = [&](Eigen::Vector2d a, Eigen::Vector2d b) {
        double fa = tracer.lambda(a);
        for (int it = 0; it < 80; ++it) {
            const Eigen::Vector2d mid = 0.5 * (a + b);
            const double fm = tracer.lambda(mid);
            if (fm == 0.0) return mid;
            if ((fa < 0.0) == (fm < 0.0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        return Eigen::Vector2d(0.5 * (a + b));
    };
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const Eigen::Vector2d node(window.x1_lo + i * dx, window.x2_lo + j * dy);
            if (lam(i, j) == 0.0) seeds.push_back(node);
            if (i < n && lam(i, j) * lam(i + 1, j) < 0.0)
                seeds.push_back(bisect_edge(node, {node[0] + dx, node[1]}));
            if (j < n && lam(i, j) * lam(i, j + 1) < 0.0)
                seeds.push_back(bisect_edge(node, {node[0], node[1] + dy}));
        }
    }

    // Trace each seed not already covered by an earlier branch.
    std::vector<Eigen::Vector2d> all_vertices;
    for (const Eigen::Vector2d& raw : seeds) {
        if (curve.vertex_count() >= static_cast<std::size_t>(opts.max_vertices)) break;
        Eigen::Vector2d seed = raw;
        if (!tracer.correct(seed) || !tracer.inside(seed)) continue;
        bool covered = false;
        for (const Eigen::Vector2d& v : all_vertices) {
            if ((v - seed).norm() < opts.step) {
                covered = true;
                break;
            }
        }
        if (covered) continue;

        SingularCurve::Component comp;
        comp.points = trace_branch(
            tracer, seed, static_cast<std::size_t>(opts.max_vertices) - curve.vertex_count());
        all_vertices.insert(all_vertices.end(), comp.points.begin(), comp.points.end());
        curve.components.push_back(std::move(comp));
    }

    // Classification pass per component: locate cusps as sign changes of
    // grad(lambda) . eta along the branch, insert them, then label vertices.
    for (auto& comp : curve.components) {
        std::vector<Eigen::Vector2d> etas = kernel_field(g, comp.points);
        std::vector<double> gs(comp.points.size(), 0.0);
        for (std::size_t k = 0; k < comp.points.size(); ++k)
            gs[k] = etas[k].isZero() ? 0.0 : tracer.grad(comp.points[k]).dot(etas[k]);

        struct Insertion {
            std::size_t after;
            Eigen::Vector2d point;
        };
        std::vector<Insertion> cusps;
        for (std::size_t k = 0; k + 1 < comp.points.size(); ++k) {
            if (!(gs[k] * gs[k + 1] < 0.0)) continue;
            Eigen::Vector2d a = comp.points[k];
            Eigen::Vector2d b = comp.points[k + 1];
            Eigen::Vector2d eta_ref = etas[k];
            const bool a_neg = gs[k] < 0.0;
            for (int it = 0; it < 60; ++it) {
                Eigen::Vector2d mid = 0.5 * (a + b);
                if (!tracer.correct(mid)) break;
                Eigen::Vector2d eta;
                if (!kernel_vector(g.jacobian(mid), eta)) break;
                if (eta.dot(eta_ref) < 0.0) eta = -eta;
                const double gm = tracer.grad(mid).dot(eta);
                if ((gm < 0.0) == a_neg)
                    a = mid;
                else
                    b = mid;
            }
            Eigen::Vector2d cusp = 0.5 * (a + b);
            if (tracer.correct(cusp)) cusps.push_back({k, cusp});
        }

        std::vector<Eigen::Vector2d> pts;
        std::vector<bool> inserted;
        pts.reserve(comp.points.size() + cusps.size());
        std::size_t next = 0;
        for (std::size_t k = 0; k < comp.points.size(); ++k) {
            pts.push_back(comp.points[k]);
            inserted.push_back(false);
            if (next < cusps.size() && cusps[next].after == k) {
                pts.push_back(cusps[next].point);
                inserted.push_back(true);
                ++next;
            }
        }

        comp.points = std::move(pts);
        comp.classes.assign(comp.points.size(), PointClass::Unresolved);
        const std::vector<Eigen::Vector2d> full_etas = kernel_field(g, comp.points);
        for (std::size_t k = 0; k < comp.points.size(); ++k) {
            if (inserted[k]) {
                comp.classes[k] = PointClass::Cusp;
                ++curve.cusp_count;
                continue;
            }
            const Eigen::Vector2d& x = comp.points[k];
            const Eigen::Vector2d gr = tracer.grad(x);
            if (full_etas[k].isZero() || gr.norm() <= 1e-13 * gradient_magnitude(tracer.conic, x)) {
                comp.classes[k] = PointClass::Degenerate;
                ++curve.degenerate_count;
            } else if (std::abs(gr.dot(full_etas[k])) > tol.tol_cls * gr.norm()) {
                comp.classes[k] = PointClass::Fold;
                ++curve.fold_count;
            } else {
                ++curve.unresolved_count;  // inside the band but not the located cusp
            }
        }
    }
    return curve;
}

Classification classify_singular_point(const GdsMap& g, const Eigen::Vector2d& x,
                                       const SingularTolerances& tol) {
    require_planar(g);
    const ConicCoefficients conic = conic_coefficients(g);
    Classification out;
    out.det_value = conic.eval(x[0], x[1]);
    const double mag = conic.magnitude(x[0], x[1]);
    if (std::abs(out.det_value) >= tol.tol_trace * mag)
        fail("point (", x[0], ", ", x[1], ") is not singular within tolerance: |det JG| = ",
             std::abs(out.det_value), " against bound ", tol.tol_trace * mag);

    Eigen::Vector2d eta;
    if (!kernel_vector(g.jacobian(x), eta)) {
        out.cls = PointClass::Degenerate;  // both rows vanish
        return out;
    }
    out.eta = eta;
    const Eigen::Vector2d gr = conic.gradient(x[0], x[1]);
    out.grad_dot_eta = gr.dot(eta);
    out.eta_hess_eta = eta.dot(conic.hessian() * eta);
    const double grad_floor = 1e-12 * gradient_magnitude(conic, x);
    if (std::abs(out.grad_dot_eta) > tol.tol_cls * std::max(gr.norm(), grad_floor)) {
        out.cls = PointClass::Fold;
    } else if (gr.norm() > grad_floor &&
               std::abs(out.eta_hess_eta) > tol.tol_cls * hessian_magnitude(conic)) {
        out.cls = PointClass::Cusp;
    } else {
        out.cls = PointClass::Degenerate;
    }
    return out;
}

}  // namespace gdsq
