#include "gdsq/manifolds.hpp"

#include <cmath>

namespace gdsq {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

ParamDomain::ParamDomain(std::vector<Axis> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) fail("parameter domain needs at least one axis");
    for (std::size_t k = 0; k < axes_.size(); ++k)
        if (!(axes_[k].lo < axes_[k].hi))
            fail("axis ", k + 1, ": lower bound ", axes_[k].lo, " must be below upper bound ",
                 axes_[k].hi);
}

Eigen::VectorXd ParamDomain::wrap(const Eigen::VectorXd& q) const {
    Eigen::VectorXd out = q;
    for (int k = 0; k < dim(); ++k) {
        const Axis& ax = axes_[static_cast<std::size_t>(k)];
        if (!ax.periodic) continue;
        const double len = ax.hi - ax.lo;
        double v = std::fmod(out(k) - ax.lo, len);
        if (v < 0.0) v += len;
        out(k) = ax.lo + v;
    }
    return out;
}

void ParamDomain::require_inside(const Eigen::VectorXd& q) const {
    if (q.size() != dim())
        fail("parameter point has dimension ", q.size(), ", domain expects ", dim());
    for (int k = 0; k < dim(); ++k) {
        const Axis& ax = axes_[static_cast<std::size_t>(k)];
        if (!ax.periodic && (q(k) < ax.lo || q(k) > ax.hi))
            fail("parameter coordinate ", k + 1, " = ", q(k), " outside [", ax.lo, ", ", ax.hi,
                 "]");
    }
}

Eigen::VectorXd ParamDomain::wrapped_difference(const Eigen::VectorXd& q,
                                                const Eigen::VectorXd& r) const {
    Eigen::VectorXd d = q - r;
    for (int k = 0; k < dim(); ++k) {
        const Axis& ax = axes_[static_cast<std::size_t>(k)];
        if (!ax.periodic) continue;
        const double len = ax.hi - ax.lo;
        double v = std::fmod(d(k), len);
        if (v > 0.5 * len) v -= len;
        if (v < -0.5 * len) v += len;
        d(k) = v;
    }
    return d;
}

double ParamDomain::separation(const Eigen::VectorXd& q, const Eigen::VectorXd& r) const {
    return wrapped_difference(q, r).norm();
}

double ParamDomain::diameter() const {
    double s = 0.0;
    for (const Axis& ax : axes_) {
        const double len = ax.hi - ax.lo;
        const double d = ax.periodic ? 0.5 * len : len;
        s += d * d;
    }
    return std::sqrt(s);
}

Eigen::VectorXd eval_manifold(const ParamManifold& f, const Eigen::VectorXd& q) {
    f.domain.require_inside(q);
    return f.value(f.domain.wrap(q));
}

double domain_separation(const ParamManifold& f, const Eigen::VectorXd& q,
                         const Eigen::VectorXd& r) {
    f.domain.require_inside(q);
    f.domain.require_inside(r);
    return f.domain.separation(q, r);
}

Eigen::MatrixXd ad_jacobian(const ParamManifold& f, const Eigen::VectorXd& q) {
    const int n = f.param_dim();
    std::vector<Dual> qd(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) qd[static_cast<std::size_t>(k)] = Dual(q(k));
    Eigen::MatrixXd out(f.ambient_dim, n);
    for (int k = 0; k < n; ++k) {
        qd[static_cast<std::size_t>(k)].d = 1.0;
        const auto col = f.value_dual(qd);
        for (int i = 0; i < f.ambient_dim; ++i) out(i, k) = col[static_cast<std::size_t>(i)].d;
        qd[static_cast<std::size_t>(k)].d = 0.0;
    }
    return out;
}

ParamManifold circle(double radius, const Eigen::VectorXd& center, int m) {
    if (m < 2) fail("circle requires ambient dimension >= 2, got ", m);
    if (!(radius > 0.0)) fail("circle radius must be positive, got ", radius);
    if (center.size() != m)
        fail("circle center has dimension ", center.size(), ", expected ", m);

    ParamManifold f;
    f.name = "circle";
    f.domain = ParamDomain({Axis{0.0, kTwoPi, true}});
    f.ambient_dim = m;
    f.claims_immersion = true;
    f.claims_injective = true;
    f.value = [radius, center, m](const Eigen::VectorXd& q) {
        Eigen::VectorXd x = center;
        x(0) += radius * std::cos(q(0));
        x(1) += radius * std::sin(q(0));
        return x;
    };
    f.jacobian = [radius, m](const Eigen::VectorXd& q) {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, 1);
        j(0, 0) = -radius * std::sin(q(0));
        j(1, 0) = radius * std::cos(q(0));
        return j;
    };
    f.value_dual = [radius, center, m](const std::vector<Dual>& q) {
        std::vector<Dual> x(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) x[static_cast<std::size_t>(i)] = Dual(center(i));
        x[0] += Dual(radius) * cos(q[0]);
        x[1] += Dual(radius) * sin(q[0]);
        return x;
    };
    return f;
}

ParamManifold trefoil() {
    ParamManifold f;
    f.name = "trefoil";
    f.domain = ParamDomain({Axis{0.0, kTwoPi, true}});
    f.ambient_dim = 3;
    f.claims_immersion = true;
    f.claims_injective = true;
    f.value = [](const Eigen::VectorXd& q) {
        const double t = q(0);
        Eigen::VectorXd x(3);
        x << std::sin(t) + 2.0 * std::sin(2.0 * t), std::cos(t) - 2.0 * std::cos(2.0 * t),
            -std::sin(3.0 * t);
        return x;
    };
    f.jacobian = [](const Eigen::VectorXd& q) {
        const double t = q(0);
        Eigen::MatrixXd j(3, 1);
        j << std::cos(t) + 4.0 * std::cos(2.0 * t), -std::sin(t) + 4.0 * std::sin(2.0 * t),
            -3.0 * std::cos(3.0 * t);
        return j;
    };
    f.value_dual = [](const std::vector<Dual>& q) {
        const Dual t = q[0];
        return std::vector<Dual>{sin(t) + Dual(2.0) * sin(Dual(2.0) * t),
                                 cos(t) - Dual(2.0) * cos(Dual(2.0) * t),
                                 -sin(Dual(3.0) * t)};
    };
    return f;
}

ParamManifold figure_eight() {
    ParamManifold f;
    f.name = "figure-eight";
    f.domain = ParamDomain({Axis{0.0, kTwoPi, true}});
    f.ambient_dim = 2;
    f.claims_immersion = true;
    f.claims_injective = false;
    f.value = [](const Eigen::VectorXd& q) {
        const double t = q(0);
        Eigen::VectorXd x(2);
        x << std::sin(t), std::sin(t) * std::cos(t);
        return x;
    };
    f.jacobian = [](const Eigen::VectorXd& q) {
        const double t = q(0);
        Eigen::MatrixXd j(2, 1);
        // d/dt sin t cos t = cos 2t
        j << std::cos(t), std::cos(2.0 * t);
        return j;
    };
    f.value_dual = [](const std::vector<Dual>& q) {
        const Dual t = q[0];
        return std::vector<Dual>{sin(t), sin(t) * cos(t)};
    };
    return f;
}

ParamManifold cusp_curve() {
    ParamManifold f;
    f.name = "cusp";
    f.domain = ParamDomain({Axis{-1.0, 1.0, false}});
    f.ambient_dim = 2;
    f.claims_immersion = false;
    f.claims_injective = true;
    f.value = [](const Eigen::VectorXd& q) {
        const double t = q(0);
        Eigen::VectorXd x(2);
        x << t * t, t * t * t;
        return x;
    };
    f.jacobian = [](const Eigen::VectorXd& q) {
        const double t = q(0);
        Eigen::MatrixXd j(2, 1);
        j << 2.0 * t, 3.0 * t * t;
        return j;
    };
    f.value_dual = [](const std::vector<Dual>& q) {
        const Dual t = q[0];
        return std::vector<Dual>{t * t, t * t * t};
    };
    return f;
}

ParamManifold torus_surface(int m, double major_radius, double minor_radius) {
    if (m < 4) fail("torus requires ambient dimension >= 4, got ", m);
    if (!(major_radius > minor_radius && minor_radius > 0.0))
        fail("torus radii must satisfy R > r > 0, got R = ", major_radius, ", r = ", minor_radius);

    ParamManifold f;
    f.name = "torus";
    f.domain = ParamDomain({Axis{0.0, kTwoPi, true}, Axis{0.0, kTwoPi, true}});
    f.ambient_dim = m;
    f.claims_immersion = true;
    f.claims_injective = true;
    const double R = major_radius;
    const double r = minor_radius;
    f.value = [R, r, m](const Eigen::VectorXd& q) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
        x(0) = R * std::cos(q(0));
        x(1) = R * std::sin(q(0));
        x(2) = r * std::cos(q(1));
        x(3) = r * std::sin(q(1));
        return x;
    };
    f.jacobian = [R, r, m](const Eigen::VectorXd& q) {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, 2);
        j(0, 0) = -R * std::sin(q(0));
        j(1, 0) = R * std::cos(q(0));
        j(2, 1) = -r * std::sin(q(1));
        j(3, 1) = r * std::cos(q(1));
        return j;
    };
    f.value_dual = [R, r, m](const std::vector<Dual>& q) {
        std::vector<Dual> x(static_cast<std::size_t>(m), Dual(0.0));
        x[0] = Dual(R) * cos(q[0]);
        x[1] = Dual(R) * sin(q[0]);
        x[2] = Dual(r) * cos(q[1]);
        x[3] = Dual(r) * sin(q[1]);
        return x;
    };
    return f;
}

}  // namespace gdsq
