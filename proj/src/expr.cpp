#include "flowcurv/expr.hpp"

#include <cctype>

namespace flowcurv {

namespace {

enum class Tok { integer, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
    Tok kind;
    std::string text;
    int col;
};

class Lexer {
  public:
    Lexer(const std::string& src, int line) : src_(src), line_(line) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }
    int line() const { return line_; }

  private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok_.col = static_cast<int>(pos_) + 1;
        if (pos_ >= src_.size()) {
            tok_ = {Tok::end, "", tok_.col};
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            tok_ = {Tok::integer, src_.substr(start, pos_ - start), static_cast<int>(start) + 1};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            tok_ = {Tok::ident, src_.substr(start, pos_ - start), static_cast<int>(start) + 1};
            return;
        }
        Tok k;
        switch (c) {
            case '+': k = Tok::plus; break;
            case '-': k = Tok::minus; break;
            case '*': k = Tok::star; break;
            case '/': k = Tok::slash; break;
            case '^': k = Tok::caret; break;
            case '(': k = Tok::lparen; break;
            case ')': k = Tok::rparen; break;
            default:
                throw parse_error(std::string("unexpected character '") + c + "'", line_,
                                  static_cast<int>(pos_) + 1);
        }
        tok_ = {k, std::string(1, c), static_cast<int>(pos_) + 1};
        ++pos_;
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_;
    Token tok_;
};

class ExprParser {
  public:
    ExprParser(Lexer& lex, const ContextPtr& ctx) : lex_(lex), ctx_(ctx) {}

    Poly parse() {
        Poly p = sum();
        if (lex_.peek().kind != Tok::end)
            throw parse_error("unexpected token '" + lex_.peek().text + "'", lex_.line(), lex_.peek().col);
        return p;
    }

  private:
    Poly sum() {
        Poly p = product();
        while (lex_.peek().kind == Tok::plus || lex_.peek().kind == Tok::minus) {
            Token op = lex_.take();
            Poly q = product();
            p = op.kind == Tok::plus ? p + q : p - q;
        }
        return p;
    }

    Poly product() {
        Poly p = unary();
        while (lex_.peek().kind == Tok::star || lex_.peek().kind == Tok::slash) {
            Token op = lex_.take();
            if (op.kind == Tok::star) {
                p = p * unary();
            } else {
                // polynomial ring: division only by an integer literal
                Token t = lex_.peek();
                if (t.kind != Tok::integer)
                    throw parse_error("division by a non-literal is not a polynomial", lex_.line(), t.col);
                lex_.take();
                Rational d = Rational::parse(t.text);
                if (d.is_zero()) throw parse_error("division by zero", lex_.line(), t.col);
                p = p.scaled(Rational(1) / d);
            }
        }
        return p;
    }

    Poly unary() {
        if (lex_.peek().kind == Tok::minus) {
            lex_.take();
            return -unary();
        }
        return power();
    }

    Poly power() {
        Poly base = atom();
        if (lex_.peek().kind == Tok::caret) {
            Token caret = lex_.take();
            Token e = lex_.peek();
            if (e.kind != Tok::integer)
                throw parse_error("exponent must be a non-negative integer", lex_.line(),
                                  e.kind == Tok::end ? caret.col : e.col);
            lex_.take();
            unsigned long exp = std::stoul(e.text);
            if (exp > 255) throw parse_error("exponent too large", lex_.line(), e.col);
            base = base.pow(static_cast<unsigned>(exp));
        }
        return base;
    }

    Poly atom() {
        Token t = lex_.peek();
        switch (t.kind) {
            case Tok::integer:
                lex_.take();
                return Poly::constant(ctx_, Rational::parse(t.text));
            case Tok::ident: {
                lex_.take();
                int idx = ctx_->index_of(t.text);
                if (idx < 0)
                    throw parse_error("undeclared variable '" + t.text + "'", lex_.line(), t.col);
                return Poly::variable(ctx_, idx);
            }
            case Tok::lparen: {
                lex_.take();
                Poly p = sum();
                if (lex_.peek().kind != Tok::rparen)
                    throw parse_error("expected ')'", lex_.line(), lex_.peek().col);
                lex_.take();
                return p;
            }
            case Tok::end:
                throw parse_error("unexpected end of expression", lex_.line(), t.col);
            default:
                throw parse_error("unexpected token '" + t.text + "'", lex_.line(), t.col);
        }
    }

    Lexer& lex_;
    const ContextPtr& ctx_;
};

} // namespace

Poly parse_expression(const std::string& text, const ContextPtr& ctx, int line) {
    Lexer lex(text, line);
    ExprParser parser(lex, ctx);
    return parser.parse();
}

} // namespace flowcurv
