#include "fracbvp/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace fracbvp {

struct Expr::Node {
    enum class Kind {
        kNumber,
        kVariable,
        kNeg,
        kAdd,
        kSub,
        kMul,
        kDiv,
        kPow,
        kSin,
        kCos,
        kTan,
        kAtan,
        kExp,
        kLn,
        kSqrt,
        kAbs,
        kMin,
        kMax,
    };

    Kind kind;
    double value = 0.0;    // kNumber only
    std::size_t slot = 0;  // kVariable only
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expr::Node;
using Kind = Node::Kind;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_number(double v) {
    return std::make_shared<Node>(Node{Kind::kNumber, v, 0, nullptr, nullptr});
}

NodePtr make_variable(std::size_t slot) {
    return std::make_shared<Node>(Node{Kind::kVariable, 0.0, slot, nullptr, nullptr});
}

NodePtr make_unary(Kind k, NodePtr operand) {
    return std::make_shared<Node>(Node{k, 0.0, 0, std::move(operand), nullptr});
}

NodePtr make_binary(Kind k, NodePtr lhs, NodePtr rhs) {
    return std::make_shared<Node>(Node{k, 0.0, 0, std::move(lhs), std::move(rhs)});
}

struct FunctionEntry {
    std::string_view name;
    Kind kind;
    int arity;
};

constexpr std::array<FunctionEntry, 10> kFunctions = {{
    {"sin", Kind::kSin, 1},
    {"cos", Kind::kCos, 1},
    {"tan", Kind::kTan, 1},
    {"atan", Kind::kAtan, 1},
    {"exp", Kind::kExp, 1},
    {"ln", Kind::kLn, 1},
    {"sqrt", Kind::kSqrt, 1},
    {"abs", Kind::kAbs, 1},
    {"min", Kind::kMin, 2},
    {"max", Kind::kMax, 2},
}};

const FunctionEntry* find_function(std::string_view name) {
    for (const auto& f : kFunctions) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

enum class Tok {
    kNumber,
    kName,
    kPlus,
    kMinus,
    kStar,
    kSlash,
    kCaret,
    kLParen,
    kRParen,
    kComma,
    kEnd,
};

struct Token {
    Tok kind;
    std::string_view text;
    std::size_t offset = 0;
    double value = 0.0;
};

class Parser {
public:
    Parser(std::string_view source, const std::vector<std::string>& vars)
        : source_(source), vars_(vars) {
        advance();
    }

    NodePtr parse_all() {
        NodePtr root = expression();
        if (tok_.kind != Tok::kEnd) {
            throw ParseError("unexpected trailing input", tok_.offset);
        }
        return root;
    }

private:
    // expression := term (('+'|'-') term)*
    NodePtr expression() {
        NodePtr lhs = term();
        while (tok_.kind == Tok::kPlus || tok_.kind == Tok::kMinus) {
            Kind k = tok_.kind == Tok::kPlus ? Kind::kAdd : Kind::kSub;
            advance();
            lhs = make_binary(k, std::move(lhs), term());
        }
        return lhs;
    }

    // term := factor (('*'|'/') factor)*
    NodePtr term() {
        NodePtr lhs = factor();
        while (tok_.kind == Tok::kStar || tok_.kind == Tok::kSlash) {
            Kind k = tok_.kind == Tok::kStar ? Kind::kMul : Kind::kDiv;
            advance();
            lhs = make_binary(k, std::move(lhs), factor());
        }
        return lhs;
    }

    // factor := '-' factor | power; '^' binds tighter than the leading '-'.
    NodePtr factor() {
        if (tok_.kind == Tok::kMinus) {
            advance();
            return make_unary(Kind::kNeg, factor());
        }
        return power();
    }

    // power := atom ('^' factor)?  (right-associative)
    NodePtr power() {
        NodePtr base = atom();
        if (tok_.kind == Tok::kCaret) {
            advance();
            return make_binary(Kind::kPow, std::move(base), factor());
        }
        return base;
    }

    NodePtr atom() {
        switch (tok_.kind) {
            case Tok::kNumber: {
                double v = tok_.value;
                advance();
                return make_number(v);
            }
            case Tok::kName:
                return name_atom();
            case Tok::kLParen: {
                advance();
                NodePtr inner = expression();
                expect(Tok::kRParen, "expected ')'");
                return inner;
            }
            case Tok::kEnd:
                throw ParseError("unexpected end of input", tok_.offset);
            default:
                throw ParseError("expected a value, name, or '('", tok_.offset);
        }
    }

    NodePtr name_atom() {
        std::string_view name = tok_.text;
        std::size_t name_offset = tok_.offset;
        advance();
        if (tok_.kind == Tok::kLParen) {
            const FunctionEntry* fn = find_function(name);
            if (fn == nullptr) {
                throw ParseError("unknown function '" + std::string(name) + "'", name_offset);
            }
            advance();
            NodePtr first = expression();
            if (fn->arity == 1) {
                expect(Tok::kRParen, "expected ')'");
                return make_unary(fn->kind, std::move(first));
            }
            expect(Tok::kComma, "expected ',' (function takes two arguments)");
            NodePtr second = expression();
            expect(Tok::kRParen, "expected ')'");
            return make_binary(fn->kind, std::move(first), std::move(second));
        }
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == name) return make_variable(i);
        }
        if (name == "pi") return make_number(std::numbers::pi);
        throw ParseError("unknown variable '" + std::string(name) + "'", name_offset);
    }

    void expect(Tok kind, const char* message) {
        if (tok_.kind != kind) throw ParseError(message, tok_.offset);
        advance();
    }

    void advance() { tok_ = next_token(); }

    Token next_token() {
        while (pos_ < source_.size() && std::isspace(static_cast<unsigned char>(source_[pos_]))) {
            ++pos_;
        }
        std::size_t start = pos_;
        if (pos_ >= source_.size()) return {Tok::kEnd, {}, start};
        char c = source_[pos_];
        switch (c) {
            case '+': ++pos_; return {Tok::kPlus, source_.substr(start, 1), start};
            case '-': ++pos_; return {Tok::kMinus, source_.substr(start, 1), start};
            case '*': ++pos_; return {Tok::kStar, source_.substr(start, 1), start};
            case '/': ++pos_; return {Tok::kSlash, source_.substr(start, 1), start};
            case '^': ++pos_; return {Tok::kCaret, source_.substr(start, 1), start};
            case '(': ++pos_; return {Tok::kLParen, source_.substr(start, 1), start};
            case ')': ++pos_; return {Tok::kRParen, source_.substr(start, 1), start};
            case ',': ++pos_; return {Tok::kComma, source_.substr(start, 1), start};
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double value = 0.0;
            const char* first = source_.data() + pos_;
            const char* last = source_.data() + source_.size();
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc() || ptr == first) {
                throw ParseError("malformed number", start);
            }
            pos_ += static_cast<std::size_t>(ptr - first);
            return {Tok::kNumber, source_.substr(start, pos_ - start), start, value};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < source_.size() &&
                   (std::isalnum(static_cast<unsigned char>(source_[end])) || source_[end] == '_')) {
                ++end;
            }
            std::string_view text = source_.substr(start, end - start);
            pos_ = end;
            return {Tok::kName, text, start};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }

    std::string_view source_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
    Token tok_{Tok::kEnd, {}, 0};
};

double eval_node(const Node& node, std::span<const double> values) {
    auto finite = [](double v, const char* what) {
        if (!std::isfinite(v)) throw EvalError(std::string(what) + " overflowed");
        return v;
    };
    switch (node.kind) {
        case Kind::kNumber: return node.value;
        case Kind::kVariable: return values[node.slot];
        case Kind::kNeg: return -eval_node(*node.lhs, values);
        case Kind::kAdd:
            return finite(eval_node(*node.lhs, values) + eval_node(*node.rhs, values), "addition");
        case Kind::kSub:
            return finite(eval_node(*node.lhs, values) - eval_node(*node.rhs, values),
                          "subtraction");
        case Kind::kMul:
            return finite(eval_node(*node.lhs, values) * eval_node(*node.rhs, values),
                          "multiplication");
        case Kind::kDiv: {
            double denom = eval_node(*node.rhs, values);
            if (denom == 0.0) throw EvalError("division by zero");
            return finite(eval_node(*node.lhs, values) / denom, "division");
        }
        case Kind::kPow: {
            double base = eval_node(*node.lhs, values);
            double exponent = eval_node(*node.rhs, values);
            if (base < 0.0 && exponent != std::floor(exponent)) {
                throw EvalError("negative base raised to a non-integer power");
            }
            if (base == 0.0 && exponent < 0.0) throw EvalError("zero raised to a negative power");
            return finite(std::pow(base, exponent), "power");
        }
        case Kind::kSin: return std::sin(eval_node(*node.lhs, values));
        case Kind::kCos: return std::cos(eval_node(*node.lhs, values));
        case Kind::kTan: return finite(std::tan(eval_node(*node.lhs, values)), "tan");
        case Kind::kAtan: return std::atan(eval_node(*node.lhs, values));
        case Kind::kExp: return finite(std::exp(eval_node(*node.lhs, values)), "exp");
        case Kind::kLn: {
            double arg = eval_node(*node.lhs, values);
            if (arg <= 0.0) throw EvalError("ln of a non-positive value");
            return std::log(arg);
        }
        case Kind::kSqrt: {
            double arg = eval_node(*node.lhs, values);
            if (arg < 0.0) throw EvalError("sqrt of a negative value");
            return std::sqrt(arg);
        }
        case Kind::kAbs: return std::abs(eval_node(*node.lhs, values));
        case Kind::kMin:
            return std::fmin(eval_node(*node.lhs, values), eval_node(*node.rhs, values));
        case Kind::kMax:
            return std::fmax(eval_node(*node.lhs, values), eval_node(*node.rhs, values));
    }
    throw EvalError("corrupt expression node");
}

// Precedence used by the printer; parenthesization is chosen so that
// reparsing reproduces the exact tree shape.
int precedence(Kind k) {
    switch (k) {
        case Kind::kAdd:
        case Kind::kSub: return 1;
        case Kind::kMul:
        case Kind::kDiv: return 2;
        case Kind::kNeg: return 3;
        case Kind::kPow: return 4;
        default: return 5;
    }
}

std::string format_number(double v) {
    std::array<char, 32> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

void print_node(const Node& node, const std::vector<std::string>& vars, int min_prec,
                std::string& out) {
    int prec = precedence(node.kind);
    bool parens = prec < min_prec;
    if (parens) out += '(';
    switch (node.kind) {
        case Kind::kNumber: out += format_number(node.value); break;
        case Kind::kVariable: out += vars[node.slot]; break;
        case Kind::kNeg:
            out += '-';
            print_node(*node.lhs, vars, 3, out);
            break;
        case Kind::kAdd:
        case Kind::kSub:
            print_node(*node.lhs, vars, 1, out);
            out += node.kind == Kind::kAdd ? " + " : " - ";
            print_node(*node.rhs, vars, 2, out);
            break;
        case Kind::kMul:
        case Kind::kDiv:
            print_node(*node.lhs, vars, 2, out);
            out += node.kind == Kind::kMul ? "*" : "/";
            print_node(*node.rhs, vars, 3, out);
            break;
        case Kind::kPow:
            print_node(*node.lhs, vars, 5, out);
            out += '^';
            print_node(*node.rhs, vars, 3, out);
            break;
        default: {
            for (const auto& f : kFunctions) {
                if (f.kind == node.kind) {
                    out += f.name;
                    out += '(';
                    print_node(*node.lhs, vars, 0, out);
                    if (f.arity == 2) {
                        out += ", ";
                        print_node(*node.rhs, vars, 0, out);
                    }
                    out += ')';
                    break;
                }
            }
            break;
        }
    }
    if (parens) out += ')';
}

bool nodes_equal(const Node& a, const std::vector<std::string>& avars, const Node& b,
                 const std::vector<std::string>& bvars) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Kind::kNumber: return a.value == b.value;
        case Kind::kVariable: return avars[a.slot] == bvars[b.slot];
        default: break;
    }
    if ((a.lhs == nullptr) != (b.lhs == nullptr)) return false;
    if ((a.rhs == nullptr) != (b.rhs == nullptr)) return false;
    if (a.lhs && !nodes_equal(*a.lhs, avars, *b.lhs, bvars)) return false;
    if (a.rhs && !nodes_equal(*a.rhs, avars, *b.rhs, bvars)) return false;
    return true;
}

bool node_uses(const Node& node, const std::vector<std::string>& vars, std::string_view name) {
    if (node.kind == Kind::kVariable) return vars[node.slot] == name;
    if (node.lhs && node_uses(*node.lhs, vars, name)) return true;
    if (node.rhs && node_uses(*node.rhs, vars, name)) return true;
    return false;
}

} // namespace

Expr Expr::parse(std::string_view source, std::vector<std::string> variables) {
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (variables[i].empty()) throw std::invalid_argument("empty variable name");
        for (std::size_t j = i + 1; j < variables.size(); ++j) {
            if (variables[i] == variables[j]) {
                throw std::invalid_argument("duplicate variable name '" + variables[i] + "'");
            }
        }
    }
    Parser parser(source, variables);
    NodePtr root = parser.parse_all();
    return Expr(std::move(root),
                std::make_shared<const std::vector<std::string>>(std::move(variables)));
}

double Expr::eval(std::span<const double> values) const {
    if (values.size() != vars_->size()) {
        throw std::invalid_argument("expected " + std::to_string(vars_->size()) +
                                    " variable values, got " + std::to_string(values.size()));
    }
    return eval_node(*root_, values);
}

double Expr::evaluate(const std::map<std::string, double>& bindings) const {
    std::vector<double> values(vars_->size());
    for (std::size_t i = 0; i < vars_->size(); ++i) {
        auto it = bindings.find((*vars_)[i]);
        if (it == bindings.end()) {
            throw std::invalid_argument("missing binding for variable '" + (*vars_)[i] + "'");
        }
        values[i] = it->second;
    }
    return eval_node(*root_, values);
}

bool Expr::uses_variable(std::string_view name) const {
    return node_uses(*root_, *vars_, name);
}

std::string Expr::to_string() const {
    std::string out;
    print_node(*root_, *vars_, 0, out);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    return nodes_equal(*a.root_, *a.vars_, *b.root_, *b.vars_);
}

} // namespace fracbvp
