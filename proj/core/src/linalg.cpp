#include "gdsq/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace gdsq {

double smallest_singular_value(const Eigen::MatrixXd& m) {
    const auto rows = m.rows();
    const auto cols = m.cols();
    if (rows == 0 || cols == 0) return 0.0;
    if (cols == 1) return m.col(0).norm();
    if (rows == 1) return m.row(0).norm();
    if (cols == 2 && rows >= 2) {
        // Reduce to a 2x2 triangle by Gram-Schmidt, then read sigma_min off
        // the triangle as |r11 r22| / sigma_max. Forming the Gram matrix
        // instead would square the condition number and bottom out near
        // sqrt(eps) * sigma_max; this stays at eps * sigma_max.
        const double r11 = m.col(0).norm();
        if (r11 == 0.0) return 0.0;
        const Eigen::VectorXd q1 = m.col(0) / r11;
        const double r12 = q1.dot(m.col(1));
        const double r22 = (m.col(1) - r12 * q1).norm();
        const double d = std::abs(r11 * r22);
        if (d == 0.0) return 0.0;
        const double t = r11 * r11 + r12 * r12 + r22 * r22;
        const double smax = std::sqrt(0.5 * (t + std::sqrt(std::max(0.0, t * t - 4.0 * d * d))));
        return d / smax;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues().minCoeff();
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd sv = svd.singularValues();
    const double smax = sv(0);
    if (smax == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_tol * smax) ++rank;
    return rank;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues();
}

}  // namespace gdsq
