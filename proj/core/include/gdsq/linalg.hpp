#pragma once

#include <Eigen/Dense>

namespace gdsq {

// Relative cutoff for numerical rank: singular values above
// rank_rel_tol * sigma_max count toward the rank.
inline constexpr double kRankRelTol = 1e-10;

// Smallest of the min(rows, cols) singular values. Closed forms for the
// one- and two-column cases keep the grid scans cheap; wider matrices go
// through Jacobi SVD.
double smallest_singular_value(const Eigen::MatrixXd& m);

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol = kRankRelTol);

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m);

}  // namespace gdsq
