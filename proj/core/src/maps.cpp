#include "gdsq/maps.hpp"

#include <cmath>

namespace gdsq {

CoefficientMatrix::CoefficientMatrix(Eigen::MatrixXd entries) : a_(std::move(entries)) {
    if (a_.rows() < 1 || a_.cols() < 1)
        fail("coefficient matrix must have at least one row and column, got ", a_.rows(), "x",
             a_.cols());
    for (Eigen::Index i = 0; i < a_.rows(); ++i)
        for (Eigen::Index j = 0; j < a_.cols(); ++j)
            if (a_(i, j) == 0.0)
                fail("coefficient matrix entry (", i + 1, ",", j + 1, ") is zero; all entries must be nonzero");
}

bool CoefficientMatrix::conditioning_warning() const {
    const double amax = a_.cwiseAbs().maxCoeff();
    const double amin = a_.cwiseAbs().minCoeff();
    return amin < 1e-8 * amax;
}

CentralPoints::CentralPoints(Eigen::MatrixXd points) : p_(std::move(points)) {
    if (p_.rows() < 1 || p_.cols() < 1)
        fail("central points must contain at least one point of positive dimension, got ",
             p_.rows(), "x", p_.cols());
}

GdsMap::GdsMap(CoefficientMatrix a, CentralPoints p) : a_(std::move(a)), p_(std::move(p)) {
    if (p_.count() != a_.rows())
        fail("central point count ", p_.count(), " does not match coefficient rows ", a_.rows());
    if (p_.ambient_dim() != a_.cols())
        fail("central point dimension ", p_.ambient_dim(), " does not match coefficient columns ",
             a_.cols());
}

Eigen::VectorXd GdsMap::eval(const Eigen::VectorXd& x) const {
    if (x.size() != ambient_dim())
        fail("eval: point has dimension ", x.size(), ", map expects ", ambient_dim());
    Eigen::VectorXd out(components());
    for (Eigen::Index i = 0; i < components(); ++i) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < ambient_dim(); ++j) {
            const double d = x(j) - p_(i, j);
            s += a_(i, j) * d * d;
        }
        out(i) = s;
    }
    return out;
}

Eigen::MatrixXd GdsMap::jacobian(const Eigen::VectorXd& x) const {
    if (x.size() != ambient_dim())
        fail("jacobian: point has dimension ", x.size(), ", map expects ", ambient_dim());
    Eigen::MatrixXd j(components(), ambient_dim());
    for (Eigen::Index i = 0; i < components(); ++i)
        for (Eigen::Index k = 0; k < ambient_dim(); ++k)
            j(i, k) = 2.0 * a_(i, k) * (x(k) - p_(i, k));
    return j;
}

Eigen::MatrixXd jacobian_ad(const GdsMap& g, const Eigen::VectorXd& x) {
    if (x.size() != g.ambient_dim())
        fail("jacobian_ad: point has dimension ", x.size(), ", map expects ", g.ambient_dim());
    const auto m = g.ambient_dim();
    const auto l = g.components();
    std::vector<Dual> xd(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j) xd[static_cast<std::size_t>(j)] = Dual(x(j));
    Eigen::MatrixXd out(l, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        xd[static_cast<std::size_t>(j)].d = 1.0;
        const auto col = g.eval_generic(xd);
        for (Eigen::Index i = 0; i < l; ++i) out(i, j) = col[static_cast<std::size_t>(i)].d;
        xd[static_cast<std::size_t>(j)].d = 0.0;
    }
    return out;
}

GdsMap make_distance_squared_map(CentralPoints p) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Ones(p.count(), p.ambient_dim());
    return GdsMap(CoefficientMatrix(std::move(a)), std::move(p));
}

GdsMap make_lorentzian_map(CentralPoints p) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Ones(p.count(), p.ambient_dim());
    a.col(0).setConstant(-1.0);
    return GdsMap(CoefficientMatrix(std::move(a)), std::move(p));
}

}  // namespace gdsq
