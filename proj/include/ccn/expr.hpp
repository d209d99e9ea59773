#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccn::expr {

/// Parse failure with the byte offset of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
    [[nodiscard]] std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

/// Raised when evaluation produces a non-finite value.
class EvalError : public std::runtime_error {
public:
    EvalError(const std::string& msg, std::string subexpr)
        : std::runtime_error(msg + ": " + subexpr), subexpr_(std::move(subexpr)) {}
    [[nodiscard]] const std::string& subexpression() const { return subexpr_; }

private:
    std::string subexpr_;
};

enum class Kind { Number, Self, Input, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Tanh };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Kind kind = Kind::Number;
    double value = 0.0;  ///< Number
    int index = 0;       ///< coordinate, 1-based (Self, Input)
    int input = 0;       ///< input slot, 1-based (Input)
    int exponent = 0;    ///< Pow
    NodePtr a, b;
};

/// Parsed expression tree.
class Expr {
public:
    Expr() = default;
    explicit Expr(NodePtr root) : root_(std::move(root)) {}

    [[nodiscard]] const NodePtr& root() const { return root_; }
    [[nodiscard]] std::string to_string() const;

    /// Largest self coordinate and, per input slot, largest coordinate referenced.
    [[nodiscard]] int max_self_index() const;
    [[nodiscard]] std::vector<int> max_input_index() const;

private:
    NodePtr root_;
};

/// expr := term (('+'|'-') term)* ; term := factor (('*'|'/') factor)* ;
/// factor := ['-'|'+'] atom ['^' integer] ;
/// atom := number | x[i] | u[j][i] | func '(' expr ')' | '(' expr ')'
[[nodiscard]] Expr parse(const std::string& src);

[[nodiscard]] std::string to_string(const NodePtr& n);
[[nodiscard]] bool structurally_equal(const NodePtr& a, const NodePtr& b);

/// Tree-walking evaluation; throws EvalError naming the first non-finite subexpression.
[[nodiscard]] double evaluate(const NodePtr& n, const double* self, const std::vector<const double*>& inputs);

/// Flat stack program over a packed argument vector y = (x_c, u_1, u_2, ...).
class Program {
public:
    /// offsets[j] is the position of input slot j+1 in y; dims give bounds.
    Program(const Expr& e, int self_dim, const std::vector<int>& input_dims);

    /// Evaluates at y. Throws EvalError if the result is not finite.
    [[nodiscard]] double operator()(const double* y) const;

    [[nodiscard]] const Expr& source() const { return expr_; }

private:
    enum class Op : unsigned char { Const, Load, Neg, Add, Sub, Mul, Div, PowI, Sin, Cos, Exp, Tanh };
    struct Instr {
        Op op;
        int arg;
        double value;
    };
    void emit(const NodePtr& n);
    [[noreturn]] void fail(const double* y) const;

    Expr expr_;
    int self_dim_;
    std::vector<int> input_dims_;
    std::vector<int> offsets_;
    std::vector<Instr> code_;
    std::size_t depth_ = 0;
};

}  // namespace ccn::expr
