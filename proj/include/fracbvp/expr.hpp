#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fracbvp {

/// Syntax error with the byte offset of the offending token.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t offset_)
        : std::runtime_error(what + " (at byte " + std::to_string(offset_) + ")"),
          offset(offset_) {}
    std::size_t offset;
};

/// Domain violation during evaluation (ln of non-positive, sqrt of negative,
/// division by zero, non-integer power of a negative base, overflow).
struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Immutable expression tree over a fixed set of free variables.
///
/// Grammar: +, -, *, / left-associative, ^ right-associative and binding
/// tighter than unary minus; calls sin, cos, tan, atan, exp, ln, sqrt, abs
/// (unary) and min, max (binary); the named constant pi; decimal literals.
///
/// Copies share the tree; the tree is never mutated after parse, so Expr
/// values can be shared freely across threads.
class Expr {
public:
    struct Node;

    /// Parses `source` with the given free-variable context (order fixes the
    /// slot layout for eval()). Throws ParseError.
    static Expr parse(std::string_view source, std::vector<std::string> variables);

    /// Evaluates with one value per context variable, in context order.
    double eval(std::span<const double> values) const;

    /// Evaluates with named bindings; every context variable must be bound.
    double evaluate(const std::map<std::string, double>& bindings) const;

    /// The declared variable context, in declaration order.
    const std::vector<std::string>& variables() const { return *vars_; }

    /// True if the expression actually references `name`.
    bool uses_variable(std::string_view name) const;

    /// Canonical text form; reparsing yields a structurally identical tree.
    std::string to_string() const;

    friend bool structurally_equal(const Expr& a, const Expr& b);

private:
    Expr(std::shared_ptr<const Node> root, std::shared_ptr<const std::vector<std::string>> vars)
        : root_(std::move(root)), vars_(std::move(vars)) {}

    std::shared_ptr<const Node> root_;
    std::shared_ptr<const std::vector<std::string>> vars_;
};

bool structurally_equal(const Expr& a, const Expr& b);

} // namespace fracbvp
