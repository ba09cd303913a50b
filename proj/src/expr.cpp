#include "spraylab/expr.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "spraylab/errors.hpp"

namespace spraylab {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::size_t offset;  // 1-based
    double number = 0.0;
    std::string ident;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        current_.offset = pos_ + 1;
        if (pos_ >= text_.size()) {
            current_.kind = Tok::End;
            return;
        }
        const char c = text_[pos_];
        switch (c) {
            case '+': current_.kind = Tok::Plus; ++pos_; return;
            case '-': current_.kind = Tok::Minus; ++pos_; return;
            case '*': current_.kind = Tok::Star; ++pos_; return;
            case '/': current_.kind = Tok::Slash; ++pos_; return;
            case '^': current_.kind = Tok::Caret; ++pos_; return;
            case '(': current_.kind = Tok::LParen; ++pos_; return;
            case ')': current_.kind = Tok::RParen; ++pos_; return;
            case ',': current_.kind = Tok::Comma; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            current_.kind = Tok::Ident;
            current_.ident = text_.substr(start, pos_ - start);
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_ + 1);
    }

    void lex_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark;  // 'e' belongs to an identifier that follows, not this number
            }
        }
        const std::string chunk = text_.substr(start, pos_ - start);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(chunk.data(), chunk.data() + chunk.size(), value);
        if (ec != std::errc() || ptr != chunk.data() + chunk.size())
            throw ParseError("malformed number '" + chunk + "'", start + 1);
        current_.kind = Tok::Number;
        current_.number = value;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    Token current_;
};

bool is_function(const std::string& name) {
    return name == "sqrt" || name == "exp" || name == "log" || name == "sin" || name == "cos" ||
           name == "tan" || name == "pow";
}

NodeKind function_kind(const std::string& name) {
    if (name == "sqrt") return NodeKind::Sqrt;
    if (name == "exp") return NodeKind::Exp;
    if (name == "log") return NodeKind::Log;
    if (name == "sin") return NodeKind::Sin;
    if (name == "cos") return NodeKind::Cos;
    return NodeKind::Tan;
}

class Parser {
  public:
    Parser(const std::string& text, int dim) : lex_(text), dim_(dim) {}

    Expr run() {
        Expr e;
        e.dim = dim_;
        e.root = parse_expr();
        if (lex_.peek().kind != Tok::End)
            throw ParseError("trailing input", lex_.peek().offset, "end of input or operator");
        e.nodes = std::move(nodes_);
        return e;
    }

  private:
    int add(ExprNode nd) {
        nodes_.push_back(nd);
        return static_cast<int>(nodes_.size()) - 1;
    }

    int parse_expr() {
        int left = parse_term();
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            const Token op = lex_.take();
            const int right = parse_term();
            ExprNode nd;
            nd.kind = op.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
            nd.a = left;
            nd.b = right;
            nd.offset = static_cast<std::uint32_t>(op.offset);
            left = add(nd);
        }
        return left;
    }

    int parse_term() {
        int left = parse_factor();
        while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
            const Token op = lex_.take();
            const int right = parse_factor();
            ExprNode nd;
            nd.kind = op.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
            nd.a = left;
            nd.b = right;
            nd.offset = static_cast<std::uint32_t>(op.offset);
            left = add(nd);
        }
        return left;
    }

    int parse_factor() {
        if (lex_.peek().kind == Tok::Minus) {
            const Token op = lex_.take();
            const int child = parse_factor();
            ExprNode nd;
            nd.kind = NodeKind::Neg;
            nd.a = child;
            nd.offset = static_cast<std::uint32_t>(op.offset);
            return add(nd);
        }
        return parse_power();
    }

    int parse_power() {
        const int base = parse_base();
        if (lex_.peek().kind != Tok::Caret) return base;
        const Token op = lex_.take();
        const double expo = parse_constant_exponent();
        ExprNode nd;
        nd.kind = NodeKind::Pow;
        nd.a = base;
        nd.value = expo;
        nd.offset = static_cast<std::uint32_t>(op.offset);
        return add(nd);
    }

    // Parses an exponent subtree, requires it to be variable-free, folds it to
    // a number, and drops the temporary nodes.
    double parse_constant_exponent() {
        const std::size_t mark = nodes_.size();
        const std::size_t at = lex_.peek().offset;
        int sign = 1;
        while (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            sign = -sign;
        }
        const int sub = parse_base();
        for (std::size_t i = mark; i < nodes_.size(); ++i) {
            if (nodes_[i].kind == NodeKind::VarX || nodes_[i].kind == NodeKind::VarY)
                throw ParseError("exponent must be constant", at, "constant expression");
        }
        const VecXd empty_x = VecXd::Zero(dim_);
        const VecXd empty_y = VecXd::Ones(dim_);
        Expr tmp;
        tmp.dim = dim_;
        tmp.nodes.assign(nodes_.begin(), nodes_.end());
        tmp.root = sub;
        const double value = eval(tmp, empty_x, empty_y);
        nodes_.resize(mark);
        return sign * value;
    }

    int parse_base() {
        const Token t = lex_.peek();
        switch (t.kind) {
            case Tok::Number: {
                lex_.take();
                ExprNode nd;
                nd.kind = NodeKind::Constant;
                nd.value = t.number;
                nd.offset = static_cast<std::uint32_t>(t.offset);
                return add(nd);
            }
            case Tok::LParen: {
                lex_.take();
                const int inner = parse_expr();
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::Ident: {
                lex_.take();
                if (lex_.peek().kind == Tok::LParen) return parse_call(t);
                return parse_variable(t);
            }
            default:
                throw ParseError("expected an operand", t.offset, "number, identifier or '('");
        }
    }

    int parse_call(const Token& name) {
        if (!is_function(name.ident))
            throw ParseError("unknown function '" + name.ident + "'", name.offset,
                             "sqrt, exp, log, sin, cos, tan or pow");
        expect(Tok::LParen, "'('");
        if (name.ident == "pow") {
            const int arg = parse_expr();
            expect(Tok::Comma, "',' (pow takes two arguments)");
            const double expo = parse_constant_exponent();
            expect(Tok::RParen, "')'");
            ExprNode nd;
            nd.kind = NodeKind::Pow;
            nd.a = arg;
            nd.value = expo;
            nd.offset = static_cast<std::uint32_t>(name.offset);
            return add(nd);
        }
        const int arg = parse_expr();
        if (lex_.peek().kind == Tok::Comma)
            throw ParseError("function '" + name.ident + "' takes one argument", lex_.peek().offset,
                             "')'");
        expect(Tok::RParen, "')'");
        ExprNode nd;
        nd.kind = function_kind(name.ident);
        nd.a = arg;
        nd.offset = static_cast<std::uint32_t>(name.offset);
        return add(nd);
    }

    int parse_variable(const Token& t) {
        const std::string& s = t.ident;
        if (s.size() >= 2 && (s[0] == 'x' || s[0] == 'y')) {
            bool digits = true;
            for (std::size_t i = 1; i < s.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(s[i]))) digits = false;
            if (digits) {
                const long idx = std::strtol(s.c_str() + 1, nullptr, 10);
                if (idx < 1 || idx > dim_)
                    throw ParseError("unknown variable '" + s + "' (dim=" + std::to_string(dim_) + ")",
                                     t.offset);
                ExprNode nd;
                nd.kind = s[0] == 'x' ? NodeKind::VarX : NodeKind::VarY;
                nd.index = static_cast<int>(idx) - 1;
                nd.offset = static_cast<std::uint32_t>(t.offset);
                return add(nd);
            }
        }
        throw ParseError("unknown identifier '" + s + "'", t.offset,
                         "x1..x" + std::to_string(dim_) + ", y1..y" + std::to_string(dim_) +
                             " or a function name");
    }

    void expect(Tok kind, const std::string& what) {
        if (lex_.peek().kind != kind)
            throw ParseError("unexpected token", lex_.peek().offset, what);
        lex_.take();
    }

    Lexer lex_;
    int dim_;
    std::vector<ExprNode> nodes_;
};

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div: return 2;
        case NodeKind::Neg: return 3;
        case NodeKind::Pow: return 4;
        default: return 5;
    }
}

void print_node(const Expr& e, int idx, int context, std::string& out) {
    const ExprNode& nd = e.nodes[idx];
    const int prec = precedence(nd.kind);
    const bool parens = prec < context;
    if (parens) out += '(';
    switch (nd.kind) {
        case NodeKind::Constant: out += format_double(nd.value); break;
        case NodeKind::VarX: out += "x" + std::to_string(nd.index + 1); break;
        case NodeKind::VarY: out += "y" + std::to_string(nd.index + 1); break;
        case NodeKind::Add:
            print_node(e, nd.a, prec, out);
            out += '+';
            print_node(e, nd.b, prec + 1, out);
            break;
        case NodeKind::Sub:
            print_node(e, nd.a, prec, out);
            out += '-';
            print_node(e, nd.b, prec + 1, out);
            break;
        case NodeKind::Mul:
            print_node(e, nd.a, prec, out);
            out += '*';
            print_node(e, nd.b, prec + 1, out);
            break;
        case NodeKind::Div:
            print_node(e, nd.a, prec, out);
            out += '/';
            print_node(e, nd.b, prec + 1, out);
            break;
        case NodeKind::Neg:
            out += '-';
            print_node(e, nd.a, prec, out);
            break;
        case NodeKind::Pow:
            print_node(e, nd.a, prec + 1, out);
            out += '^';
            if (nd.value < 0) out += '-';
            out += format_double(std::abs(nd.value));
            break;
        case NodeKind::Sqrt:
        case NodeKind::Exp:
        case NodeKind::Log:
        case NodeKind::Sin:
        case NodeKind::Cos:
        case NodeKind::Tan: {
            const char* name = nd.kind == NodeKind::Sqrt  ? "sqrt"
                               : nd.kind == NodeKind::Exp ? "exp"
                               : nd.kind == NodeKind::Log ? "log"
                               : nd.kind == NodeKind::Sin ? "sin"
                               : nd.kind == NodeKind::Cos ? "cos"
                                                          : "tan";
            out += name;
            out += '(';
            print_node(e, nd.a, 0, out);
            out += ')';
            break;
        }
    }
    if (parens) out += ')';
}

bool tree_equal(const Expr& ea, int ia, const Expr& eb, int ib) {
    const ExprNode& a = ea.nodes[ia];
    const ExprNode& b = eb.nodes[ib];
    if (a.kind != b.kind || a.index != b.index || a.value != b.value) return false;
    if ((a.a >= 0) != (b.a >= 0) || (a.b >= 0) != (b.b >= 0)) return false;
    if (a.a >= 0 && !tree_equal(ea, a.a, eb, b.a)) return false;
    if (a.b >= 0 && !tree_equal(ea, a.b, eb, b.b)) return false;
    return true;
}

}  // namespace

bool Expr::operator==(const Expr& other) const {
    if (dim != other.dim) return false;
    if ((root < 0) != (other.root < 0)) return false;
    if (root < 0) return true;
    return tree_equal(*this, root, other, other.root);
}

Expr parse(const std::string& text, int dim) {
    if (text.empty()) throw ParseError("empty expression", 1, "an expression");
    if (dim < 1 || dim > kMaxDim)
        throw ConfigError("dimension " + std::to_string(dim) + " out of supported range [1, " +
                          std::to_string(kMaxDim) + "]");
    return Parser(text, dim).run();
}

std::string print(const Expr& expr) {
    std::string out;
    if (expr.root >= 0) print_node(expr, expr.root, 0, out);
    return out;
}

Expr load_expr_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open expression file: " + path);
    std::string header;
    std::getline(in, header);
    const auto eq = header.find('=');
    if (header.rfind("dim", 0) != 0 || eq == std::string::npos)
        throw ConfigError("expression file must start with a 'dim=<n>' line: " + path);
    int dim = 0;
    try {
        dim = std::stoi(header.substr(eq + 1));
    } catch (const std::exception&) {
        throw ConfigError("bad dimension in expression file header: " + header);
    }
    std::stringstream rest;
    rest << in.rdbuf();
    return parse(rest.str(), dim);
}

}  // namespace spraylab
