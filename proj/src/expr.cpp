#include "ccn/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace ccn::expr {

namespace {

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr run() {
        auto e = expr();
        skip();
        if (p_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[p_]) + "'", p_);
        return e;
    }

private:
    void skip() {
        while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
    }
    bool accept(char c) {
        skip();
        if (p_ < s_.size() && s_[p_] == c) {
            ++p_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) {
            if (p_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", p_);
            throw ParseError(std::string("expected '") + c + "'", p_);
        }
    }

    NodePtr expr() {
        auto lhs = term();
        while (true) {
            if (accept('+')) lhs = make(Kind::Add, lhs, term());
            else if (accept('-')) lhs = make(Kind::Sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        auto lhs = factor();
        while (true) {
            if (accept('*')) lhs = make(Kind::Mul, lhs, factor());
            else if (accept('/')) lhs = make(Kind::Div, lhs, factor());
            else return lhs;
        }
    }

    NodePtr factor() {
        if (accept('-')) return make(Kind::Neg, powered());
        if (accept('+')) return powered();
        return powered();
    }

    NodePtr powered() {
        auto base = atom();
        if (accept('^')) {
            skip();
            std::size_t start = p_;
            bool neg = false;
            if (p_ < s_.size() && (s_[p_] == '-' || s_[p_] == '+')) {
                neg = s_[p_] == '-';
                ++p_;
            }
            long v = integer("exponent");
            if (v > 1000) throw ParseError("exponent too large", start);
            auto n = std::make_shared<Node>();
            n->kind = Kind::Pow;
            n->a = base;
            n->exponent = static_cast<int>(neg ? -v : v);
            return n;
        }
        return base;
    }

    long integer(const char* what) {
        skip();
        std::size_t start = p_;
        while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
        if (start == p_) throw ParseError(std::string("expected integer ") + what, start);
        return std::strtol(s_.substr(start, p_ - start).c_str(), nullptr, 10);
    }

    int index(const char* what) {
        expect('[');
        std::size_t at = p_;
        long v = integer(what);
        if (v < 1) throw ParseError(std::string(what) + " indices are 1-based", at);
        expect(']');
        return static_cast<int>(v);
    }

    NodePtr atom() {
        skip();
        if (p_ >= s_.size()) throw ParseError("unexpected end of input", p_);
        char c = s_[p_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (c == '(') {
            ++p_;
            auto e = expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = p_;
            while (p_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[p_]))) ++p_;
            std::string name = s_.substr(start, p_ - start);
            if (name == "x") {
                auto n = std::make_shared<Node>();
                n->kind = Kind::Self;
                n->index = index("coordinate");
                return n;
            }
            if (name == "u") {
                auto n = std::make_shared<Node>();
                n->kind = Kind::Input;
                n->input = index("input");
                n->index = index("coordinate");
                return n;
            }
            Kind k;
            if (name == "sin") k = Kind::Sin;
            else if (name == "cos") k = Kind::Cos;
            else if (name == "exp") k = Kind::Exp;
            else if (name == "tanh") k = Kind::Tanh;
            else throw ParseError("unknown identifier '" + name + "'", start);
            expect('(');
            auto arg = expr();
            expect(')');
            return make(k, arg);
        }
        throw ParseError("unexpected '" + std::string(1, c) + "'", p_);
    }

    NodePtr number() {
        std::size_t start = p_;
        while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
        if (p_ < s_.size() && s_[p_] == '.') {
            ++p_;
            while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
        }
        if (p_ < s_.size() && (s_[p_] == 'e' || s_[p_] == 'E')) {
            std::size_t save = p_;
            ++p_;
            if (p_ < s_.size() && (s_[p_] == '+' || s_[p_] == '-')) ++p_;
            std::size_t digits = p_;
            while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
            if (digits == p_) p_ = save;
        }
        std::string text = s_.substr(start, p_ - start);
        if (text == ".") throw ParseError("malformed number", start);
        auto n = std::make_shared<Node>();
        n->kind = Kind::Number;
        n->value = std::strtod(text.c_str(), nullptr);
        return n;
    }

    const std::string& s_;
    std::size_t p_ = 0;
};

int precedence(const Node& n) {
    switch (n.kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        case Kind::Number: return n.value < 0 ? 3 : 5;
        default: return 5;
    }
}

void print(const NodePtr& n, int min_prec, std::string& out) {
    bool paren = precedence(*n) < min_prec;
    if (paren) out += '(';
    char buf[64];
    switch (n->kind) {
        case Kind::Number:
            std::snprintf(buf, sizeof buf, "%.17g", n->value);
            out += buf;
            break;
        case Kind::Self: out += "x[" + std::to_string(n->index) + "]"; break;
        case Kind::Input: out += "u[" + std::to_string(n->input) + "][" + std::to_string(n->index) + "]"; break;
        case Kind::Neg:
            out += '-';
            print(n->a, 4, out);
            break;
        case Kind::Add:
        case Kind::Sub:
            print(n->a, 1, out);
            out += n->kind == Kind::Add ? " + " : " - ";
            print(n->b, 2, out);
            break;
        case Kind::Mul:
        case Kind::Div:
            print(n->a, 2, out);
            out += n->kind == Kind::Mul ? "*" : "/";
            print(n->b, 3, out);
            break;
        case Kind::Pow:
            print(n->a, 5, out);
            out += "^" + std::to_string(n->exponent);
            break;
        case Kind::Sin:
        case Kind::Cos:
        case Kind::Exp:
        case Kind::Tanh:
            out += n->kind == Kind::Sin ? "sin(" : n->kind == Kind::Cos ? "cos(" : n->kind == Kind::Exp ? "exp(" : "tanh(";
            print(n->a, 0, out);
            out += ')';
            break;
    }
    if (paren) out += ')';
}

double powi(double base, int e) {
    bool inv = e < 0;
    unsigned u = static_cast<unsigned>(inv ? -e : e);
    double r = 1.0;
    while (u) {
        if (u & 1U) r *= base;
        base *= base;
        u >>= 1U;
    }
    return inv ? 1.0 / r : r;
}

void walk_max(const NodePtr& n, int& self, std::vector<int>& in) {
    if (!n) return;
    if (n->kind == Kind::Self) self = std::max(self, n->index);
    if (n->kind == Kind::Input) {
        if (static_cast<int>(in.size()) < n->input) in.resize(static_cast<std::size_t>(n->input), 0);
        auto& v = in[static_cast<std::size_t>(n->input - 1)];
        v = std::max(v, n->index);
    }
    walk_max(n->a, self, in);
    walk_max(n->b, self, in);
}

}  // namespace

Expr parse(const std::string& src) { return Expr(Parser(src).run()); }

std::string to_string(const NodePtr& n) {
    std::string s;
    print(n, 0, s);
    return s;
}

std::string Expr::to_string() const { return expr::to_string(root_); }

int Expr::max_self_index() const {
    int s = 0;
    std::vector<int> in;
    walk_max(root_, s, in);
    return s;
}

std::vector<int> Expr::max_input_index() const {
    int s = 0;
    std::vector<int> in;
    walk_max(root_, s, in);
    return in;
}

bool structurally_equal(const NodePtr& a, const NodePtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Kind::Number: return a->value == b->value;
        case Kind::Self: return a->index == b->index;
        case Kind::Input: return a->index == b->index && a->input == b->input;
        case Kind::Pow: return a->exponent == b->exponent && structurally_equal(a->a, b->a);
        default: return structurally_equal(a->a, b->a) && structurally_equal(a->b, b->b);
    }
}

double evaluate(const NodePtr& n, const double* self, const std::vector<const double*>& inputs) {
    double v = 0.0;
    switch (n->kind) {
        case Kind::Number: v = n->value; break;
        case Kind::Self: v = self[n->index - 1]; break;
        case Kind::Input: v = inputs.at(static_cast<std::size_t>(n->input - 1))[n->index - 1]; break;
        case Kind::Neg: v = -evaluate(n->a, self, inputs); break;
        case Kind::Add: v = evaluate(n->a, self, inputs) + evaluate(n->b, self, inputs); break;
        case Kind::Sub: v = evaluate(n->a, self, inputs) - evaluate(n->b, self, inputs); break;
        case Kind::Mul: v = evaluate(n->a, self, inputs) * evaluate(n->b, self, inputs); break;
        case Kind::Div: v = evaluate(n->a, self, inputs) / evaluate(n->b, self, inputs); break;
        case Kind::Pow: v = powi(evaluate(n->a, self, inputs), n->exponent); break;
        case Kind::Sin: v = std::sin(evaluate(n->a, self, inputs)); break;
        case Kind::Cos: v = std::cos(evaluate(n->a, self, inputs)); break;
        case Kind::Exp: v = std::exp(evaluate(n->a, self, inputs)); break;
        case Kind::Tanh: v = std::tanh(evaluate(n->a, self, inputs)); break;
    }
    if (!std::isfinite(v)) throw EvalError("non-finite value", to_string(n));
    return v;
}

Program::Program(const Expr& e, int self_dim, const std::vector<int>& input_dims)
    : expr_(e), self_dim_(self_dim), input_dims_(input_dims) {
    if (!e.root()) throw std::runtime_error("empty expression");
    int off = self_dim;
    for (int d : input_dims) {
        offsets_.push_back(off);
        off += d;
    }
    if (e.max_self_index() > self_dim) {
        throw std::runtime_error("x[" + std::to_string(e.max_self_index()) + "] out of range, node has dimension " +
                                 std::to_string(self_dim));
    }
    auto mi = e.max_input_index();
    for (std::size_t j = 0; j < mi.size(); ++j) {
        if (mi[j] == 0) continue;
        if (j >= input_dims.size()) {
            throw std::runtime_error("u[" + std::to_string(j + 1) + "] out of range, node has " +
                                     std::to_string(input_dims.size()) + " inputs");
        }
        if (mi[j] > input_dims[j]) {
            throw std::runtime_error("u[" + std::to_string(j + 1) + "][" + std::to_string(mi[j]) +
                                     "] out of range, input has dimension " + std::to_string(input_dims[j]));
        }
    }
    emit(e.root());
    // stack depth
    std::size_t d = 0;
    for (const auto& in : code_) {
        switch (in.op) {
            case Op::Const:
            case Op::Load: ++d; break;
            case Op::Add:
            case Op::Sub:
            case Op::Mul:
            case Op::Div: --d; break;
            default: break;
        }
        depth_ = std::max(depth_, d);
    }
    if (depth_ > 256) throw std::runtime_error("expression nesting too deep");
}

void Program::emit(const NodePtr& n) {
    switch (n->kind) {
        case Kind::Number: code_.push_back({Op::Const, 0, n->value}); return;
        case Kind::Self: code_.push_back({Op::Load, n->index - 1, 0.0}); return;
        case Kind::Input:
            code_.push_back({Op::Load, offsets_[static_cast<std::size_t>(n->input - 1)] + n->index - 1, 0.0});
            return;
        case Kind::Pow:
            emit(n->a);
            code_.push_back({Op::PowI, n->exponent, 0.0});
            return;
        default: break;
    }
    emit(n->a);
    if (n->b) emit(n->b);
    Op op = Op::Neg;
    switch (n->kind) {
        case Kind::Neg: op = Op::Neg; break;
        case Kind::Add: op = Op::Add; break;
        case Kind::Sub: op = Op::Sub; break;
        case Kind::Mul: op = Op::Mul; break;
        case Kind::Div: op = Op::Div; break;
        case Kind::Sin: op = Op::Sin; break;
        case Kind::Cos: op = Op::Cos; break;
        case Kind::Exp: op = Op::Exp; break;
        case Kind::Tanh: op = Op::Tanh; break;
        default: break;
    }
    code_.push_back({op, 0, 0.0});
}

double Program::operator()(const double* y) const {
    double st[256];
    std::size_t sp = 0;
    for (const auto& in : code_) {
        switch (in.op) {
            case Op::Const: st[sp++] = in.value; break;
            case Op::Load: st[sp++] = y[in.arg]; break;
            case Op::Neg: st[sp - 1] = -st[sp - 1]; break;
            case Op::Add: --sp; st[sp - 1] += st[sp]; break;
            case Op::Sub: --sp; st[sp - 1] -= st[sp]; break;
            case Op::Mul: --sp; st[sp - 1] *= st[sp]; break;
            case Op::Div: --sp; st[sp - 1] /= st[sp]; break;
            case Op::PowI: st[sp - 1] = powi(st[sp - 1], in.arg); break;
            case Op::Sin: st[sp - 1] = std::sin(st[sp - 1]); break;
            case Op::Cos: st[sp - 1] = std::cos(st[sp - 1]); break;
            case Op::Exp: st[sp - 1] = std::exp(st[sp - 1]); break;
            case Op::Tanh: st[sp - 1] = std::tanh(st[sp - 1]); break;
        }
    }
    double v = st[0];
    if (!std::isfinite(v)) fail(y);
    return v;
}

void Program::fail(const double* y) const {
    std::vector<const double*> inputs;
    for (int off : offsets_) inputs.push_back(y + off);
    (void)evaluate(expr_.root(), y, inputs);
    throw EvalError("non-finite value", expr_.to_string());
}

}  // namespace ccn::expr
