#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gdsq/common.hpp"
#include "gdsq/dual.hpp"

namespace gdsq {

// Weight matrix A of a generalized distance-squared mapping. All entries must
// be nonzero; rows() may differ from cols() for the general rectangular family.
class CoefficientMatrix {
public:
    explicit CoefficientMatrix(Eigen::MatrixXd entries);

    Eigen::Index rows() const { return a_.rows(); }
    Eigen::Index cols() const { return a_.cols(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return a_(i, j); }
    const Eigen::MatrixXd& matrix() const { return a_; }

    // Near-zero entries are legal but degrade conditioning; flagged when
    // min |a_ij| < 1e-8 * max |a_ij|.
    bool conditioning_warning() const;

private:
    Eigen::MatrixXd a_;
};

// The tuple of central points, stored as one point per row.
class CentralPoints {
public:
    explicit CentralPoints(Eigen::MatrixXd points);

    Eigen::Index count() const { return p_.rows(); }
    Eigen::Index ambient_dim() const { return p_.cols(); }
    Eigen::VectorXd point(Eigen::Index i) const { return p_.row(i).transpose(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return p_(i, j); }
    const Eigen::MatrixXd& matrix() const { return p_; }

private:
    Eigen::MatrixXd p_;
};

// The mapping x |-> ( sum_j a_ij (x_j - p_ij)^2 )_i from R^m to R^l.
// Immutable after construction; evaluation is pure and thread-safe.
class GdsMap {
public:
    GdsMap(CoefficientMatrix a, CentralPoints p);

    Eigen::Index components() const { return a_.rows(); }   // l
    Eigen::Index ambient_dim() const { return a_.cols(); }  // m
    bool equidimensional() const { return components() == ambient_dim(); }

    const CoefficientMatrix& coefficients() const { return a_; }
    const CentralPoints& centers() const { return p_; }

    Eigen::VectorXd eval(const Eigen::VectorXd& x) const;

    // Entry (i, j) = 2 a_ij (x_j - p_ij).
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

    // Component-wise evaluation over any scalar supporting +,-,* with double.
    template <class Scalar>
    std::vector<Scalar> eval_generic(const std::vector<Scalar>& x) const {
        if (static_cast<Eigen::Index>(x.size()) != ambient_dim())
            fail("eval: point has dimension ", x.size(), ", map expects ", ambient_dim());
        std::vector<Scalar> out(static_cast<std::size_t>(components()));
        for (Eigen::Index i = 0; i < components(); ++i) {
            Scalar s{};
            for (Eigen::Index j = 0; j < ambient_dim(); ++j) {
                Scalar d = x[static_cast<std::size_t>(j)] - Scalar(p_(i, j));
                s += Scalar(a_(i, j)) * d * d;
            }
            out[static_cast<std::size_t>(i)] = s;
        }
        return out;
    }

private:
    CoefficientMatrix a_;
    CentralPoints p_;
};

// Independent oracle for GdsMap::jacobian: forward-mode differentiation of
// eval, one dual sweep per input coordinate.
Eigen::MatrixXd jacobian_ad(const GdsMap& g, const Eigen::VectorXd& x);

// D_p: every weight is 1.
GdsMap make_distance_squared_map(CentralPoints p);

// L_p: first-column weights are -1, the rest 1.
GdsMap make_lorentzian_map(CentralPoints p);

}  // namespace gdsq
