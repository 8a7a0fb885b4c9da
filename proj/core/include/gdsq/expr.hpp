#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gdsq/dual.hpp"
#include "gdsq/manifolds.hpp"

namespace gdsq {

// Arithmetic expression in variables t1..tn over +, -, *, /, ^, sin, cos, exp.
// Parsed once, evaluated on doubles or duals; derivatives of expression
// manifolds come from the dual path.
class Expr {
public:
    double eval(const std::vector<double>& vars) const;
    Dual eval(const std::vector<Dual>& vars) const;

    // Highest variable index referenced (1-based); 0 for constant expressions.
    int max_variable() const { return max_var_; }

    friend Expr parse_expression(const std::string& text);

    struct Node;  // defined in expr.cpp

private:
    std::shared_ptr<const Node> root_;
    int max_var_ = 0;
};

// Throws Error with the offending position on malformed input.
Expr parse_expression(const std::string& text);

// Builds a manifold from per-coordinate expression strings. Domain axes give
// the parameter count n; every expression may reference t1..tn only.
ParamManifold make_expr_manifold(const std::vector<std::string>& coordinates,
                                 std::vector<Axis> axes, bool claims_immersion,
                                 bool claims_injective);

}  // namespace gdsq
