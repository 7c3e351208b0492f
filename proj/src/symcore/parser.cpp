#include "phase_atlas/symcore/parser.hpp"

#include <cctype>
#include <sstream>

#include "phase_atlas/error.hpp"

namespace phase_atlas {

namespace {

class ExpressionParser {
  public:
    ExpressionParser(std::string_view text, const ContextPtr& ctx, std::size_t line,
                     std::size_t column)
        : text_(text), ctx_(ctx), line_(line), column_(column) {}

    RationalExpr parse() {
        skip_space();
        if (at_end())
            fail("empty expression");
        RationalExpr e = expr();
        skip_space();
        if (!at_end())
            fail(std::string("unexpected character '") + peek() + "'");
        return e;
    }

  private:
    RationalExpr expr() {
        RationalExpr acc = term();
        for (;;) {
            skip_space();
            if (accept('+'))
                acc += term();
            else if (accept('-'))
                acc -= term();
            else
                return acc;
        }
    }

    RationalExpr term() {
        RationalExpr acc = factor();
        for (;;) {
            skip_space();
            if (accept('*')) {
                acc *= factor();
            } else if (peek() == '/') {
                auto line = line_;
                auto col = column_;
                advance();
                RationalExpr d = factor();
                if (d.is_zero())
                    throw ParseError("division by the zero polynomial", line, col);
                acc /= d;
            } else {
                return acc;
            }
        }
    }

    RationalExpr factor() {
        skip_space();
        if (accept('-'))
            return -factor();
        RationalExpr b = base();
        skip_space();
        if (accept('^')) {
            skip_space();
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                fail("expected a nonnegative integer exponent");
            auto digits = read_while([](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
            if (digits.size() > 6)
                fail("exponent too large");
            b = b.pow(static_cast<unsigned>(std::stoul(digits)));
        }
        return b;
    }

    RationalExpr base() {
        skip_space();
        if (at_end())
            fail("unexpected end of expression");
        char c = peek();
        if (c == '(') {
            advance();
            RationalExpr e = expr();
            skip_space();
            if (!accept(')'))
                fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            auto digits = read_while([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
            return RationalExpr::constant(ctx_, Rational(mpz_class(digits)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            auto line = line_;
            auto col = column_;
            auto name = read_while([](char ch) {
                return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
            });
            auto idx = ctx_->find(name);
            if (!idx)
                throw ParseError("undeclared identifier '" + name + "'", line, col);
            return RationalExpr(Polynomial::variable(ctx_, *idx));
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    template <class Pred>
    std::string read_while(Pred pred) {
        std::string out;
        while (!at_end() && pred(peek())) {
            out.push_back(peek());
            advance();
        }
        return out;
    }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
            advance();
    }

    bool accept(char c) {
        if (!at_end() && peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, column_); }

    std::string_view text_;
    const ContextPtr& ctx_;
    std::size_t pos_ = 0;
    std::size_t line_;
    std::size_t column_;
};

} // namespace

RationalExpr parse_expression(std::string_view text, const ContextPtr& ctx, std::size_t line,
                              std::size_t column) {
    return ExpressionParser(text, ctx, line, column).parse();
}

std::string to_string(const Monomial& m, const Context& ctx) {
    std::string out;
    for (const auto& [v, e] : m.factors()) {
        if (!out.empty())
            out += '*';
        out += ctx[v].name;
        if (e != 1)
            out += '^' + std::to_string(e);
    }
    return out;
}

std::string to_string(const Polynomial& p) {
    if (p.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& t : p.terms()) {
        Rational c = t.coeff;
        bool negative = sgn(c) < 0;
        if (negative)
            c = -c;
        if (first)
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        first = false;
        if (t.monomial.is_one()) {
            out += c.get_str();
        } else {
            if (c != 1)
                out += c.get_str() + "*";
            out += to_string(t.monomial, *p.context());
        }
    }
    return out;
}

std::string to_string(const RationalExpr& e) {
    if (e.is_polynomial())
        return to_string(e.numerator());
    return "(" + to_string(e.numerator()) + ")/(" + to_string(e.denominator()) + ")";
}

} // namespace phase_atlas
