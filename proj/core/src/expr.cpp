#include "gdsq/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "gdsq/common.hpp"

namespace gdsq {

enum class NodeKind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp };

struct Expr::Node {
    NodeKind kind;
    double number = 0.0;
    int var = 0;  // 0-based index for Variable nodes
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

template <class Scalar>
Scalar eval_node(const Expr::Node& n, const std::vector<Scalar>& vars) {
    switch (n.kind) {
        case NodeKind::Number: return Scalar(n.number);
        case NodeKind::Variable: return vars[static_cast<std::size_t>(n.var)];
        case NodeKind::Neg: return -eval_node(*n.lhs, vars);
        case NodeKind::Add: return eval_node(*n.lhs, vars) + eval_node(*n.rhs, vars);
        case NodeKind::Sub: return eval_node(*n.lhs, vars) - eval_node(*n.rhs, vars);
        case NodeKind::Mul: return eval_node(*n.lhs, vars) * eval_node(*n.rhs, vars);
        case NodeKind::Div: return eval_node(*n.lhs, vars) / eval_node(*n.rhs, vars);
        case NodeKind::Pow:
            if constexpr (std::is_same_v<Scalar, double>)
                return std::pow(eval_node(*n.lhs, vars), eval_node(*n.rhs, vars));
            else
                return pow(eval_node(*n.lhs, vars), eval_node(*n.rhs, vars));
        case NodeKind::Sin:
            if constexpr (std::is_same_v<Scalar, double>)
                return std::sin(eval_node(*n.lhs, vars));
            else
                return sin(eval_node(*n.lhs, vars));
        case NodeKind::Cos:
            if constexpr (std::is_same_v<Scalar, double>)
                return std::cos(eval_node(*n.lhs, vars));
            else
                return cos(eval_node(*n.lhs, vars));
        case NodeKind::Exp:
            if constexpr (std::is_same_v<Scalar, double>)
                return std::exp(eval_node(*n.lhs, vars));
            else
                return exp(eval_node(*n.lhs, vars));
    }
    fail("corrupt expression tree");
}

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    NodePtr parse(int& max_var) {
        NodePtr e = sum();
        skip_ws();
        if (pos_ != text_.size())
            fail("expression parse error at position ", pos_ + 1, ": unexpected '",
                 text_.substr(pos_, 1), "'");
        max_var = max_var_;
        return e;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
    int max_var_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    static NodePtr make(NodeKind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
        auto n = std::make_shared<Expr::Node>();
        n->kind = kind;
        n->lhs = std::move(lhs);
        n->rhs = std::move(rhs);
        return n;
    }

    NodePtr sum() {
        NodePtr e = product();
        for (;;) {
            if (consume('+')) e = make(NodeKind::Add, e, product());
            else if (consume('-')) e = make(NodeKind::Sub, e, product());
            else return e;
        }
    }

    NodePtr product() {
        NodePtr e = unary();
        for (;;) {
            if (consume('*')) e = make(NodeKind::Mul, e, unary());
            else if (consume('/')) e = make(NodeKind::Div, e, unary());
            else return e;
        }
    }

    NodePtr unary() {
        if (consume('-')) return make(NodeKind::Neg, unary());
        if (consume('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (consume('^')) return make(NodeKind::Pow, base, unary());  // right-associative
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expression parse error: unexpected end of input");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        if (consume('(')) {
            NodePtr e = sum();
            if (!consume(')'))
                fail("expression parse error at position ", pos_ + 1, ": expected ')'");
            return e;
        }
        fail("expression parse error at position ", pos_ + 1, ": unexpected '",
             std::string(1, c), "'");
    }

    NodePtr number() {
        const char* begin = text_.c_str() + pos_;
        char* end = nullptr;
        const double value = std::strtod(begin, &end);
        if (end == begin)
            fail("expression parse error at position ", pos_ + 1, ": malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        auto n = make(NodeKind::Number);
        const_cast<Expr::Node&>(*n).number = value;
        return n;
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string name = text_.substr(start, pos_ - start);
        if (name == "sin" || name == "cos" || name == "exp") {
            if (!consume('('))
                fail("expression parse error at position ", pos_ + 1, ": ", name,
                     " must be followed by '('");
            NodePtr arg = sum();
            if (!consume(')'))
                fail("expression parse error at position ", pos_ + 1, ": expected ')'");
            if (name == "sin") return make(NodeKind::Sin, arg);
            if (name == "cos") return make(NodeKind::Cos, arg);
            return make(NodeKind::Exp, arg);
        }
        if (name.size() >= 2 && name[0] == 't') {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
            if (digits) {
                const int idx = std::atoi(name.c_str() + 1);
                if (idx >= 1) {
                    max_var_ = std::max(max_var_, idx);
                    auto n = make(NodeKind::Variable);
                    const_cast<Expr::Node&>(*n).var = idx - 1;
                    return n;
                }
            }
        }
        fail("expression parse error at position ", start + 1, ": unknown identifier '", name,
             "' (variables are t1..tn; functions are sin, cos, exp)");
    }
};

}  // namespace

double Expr::eval(const std::vector<double>& vars) const { return eval_node(*root_, vars); }
Dual Expr::eval(const std::vector<Dual>& vars) const { return eval_node(*root_, vars); }

Expr parse_expression(const std::string& text) {
    Parser p(text);
    Expr e;
    e.root_ = p.parse(e.max_var_);
    return e;
}

ParamManifold make_expr_manifold(const std::vector<std::string>& coordinates,
                                 std::vector<Axis> axes, bool claims_immersion,
                                 bool claims_injective) {
    if (coordinates.empty()) fail("expression manifold needs at least one coordinate");
    const int n = static_cast<int>(axes.size());
    std::vector<Expr> exprs;
    exprs.reserve(coordinates.size());
    for (std::size_t i = 0; i < coordinates.size(); ++i) {
        Expr e = parse_expression(coordinates[i]);
        if (e.max_variable() > n)
            fail("coordinate ", i + 1, " references t", e.max_variable(),
                 " but the domain has only ", n, " axes");
        exprs.push_back(std::move(e));
    }

    ParamManifold f;
    f.name = "expr";
    f.domain = ParamDomain(std::move(axes));
    f.ambient_dim = static_cast<int>(exprs.size());
    f.claims_immersion = claims_immersion;
    f.claims_injective = claims_injective;
    const int m = f.ambient_dim;
    f.value = [exprs, m, n](const Eigen::VectorXd& q) {
        std::vector<double> vars(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) vars[static_cast<std::size_t>(k)] = q(k);
        Eigen::VectorXd x(m);
        for (int i = 0; i < m; ++i) x(i) = exprs[static_cast<std::size_t>(i)].eval(vars);
        return x;
    };
    f.value_dual = [exprs, m, n](const std::vector<Dual>& q) {
        std::vector<Dual> x(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) x[static_cast<std::size_t>(i)] = exprs[static_cast<std::size_t>(i)].eval(q);
        return x;
    };
    // Exact derivatives of the parsed coordinates come from the dual path.
    f.jacobian = [exprs, m, n](const Eigen::VectorXd& q) {
        std::vector<Dual> vars(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) vars[static_cast<std::size_t>(k)] = Dual(q(k));
        Eigen::MatrixXd j(m, n);
        for (int k = 0; k < n; ++k) {
            vars[static_cast<std::size_t>(k)].d = 1.0;
            for (int i = 0; i < m; ++i)
                j(i, k) = exprs[static_cast<std::size_t>(i)].eval(vars).d;
            vars[static_cast<std::size_t>(k)].d = 0.0;
        }
        return j;
    };
    return f;
}

}  // namespace gdsq
