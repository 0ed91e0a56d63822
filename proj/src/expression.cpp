#include "qfractal/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "qfractal/error.hpp"

namespace qfractal {

namespace {

class Parser {
public:
    Parser(std::string_view text, const ExpressionContext& ctx) : text_(text), ctx_(ctx) {}

    double parse() {
        skip();
        if (at_end()) fail("empty expression");
        const double v = expr();
        skip();
        if (!at_end()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        if (!std::isfinite(v)) fail("result is not finite");
        return v;
    }

private:
    std::string_view text_;
    const ExpressionContext& ctx_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& why) const {
        throw ConfigError("bad expression '" + std::string(text_) + "': " + why);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    void skip() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool starts_primary() {
        skip();
        const char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' ||
               std::isalpha(static_cast<unsigned char>(c));
    }

    double expr() {
        double v = term();
        for (;;) {
            if (accept('+')) v += term();
            else if (accept('-')) v -= term();
            else return v;
        }
    }

    double term() {
        double v = unary();
        for (;;) {
            if (accept('*')) v *= unary();
            else if (accept('/')) {
                const double d = unary();
                if (d == 0.0) fail("division by zero");
                v /= d;
            } else if (starts_primary()) v *= power();  // implicit: 29T, 2pi, 3(…)
            else return v;
        }
    }

    double unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    double power() {
        const double base = primary();
        if (accept('^')) return std::pow(base, unary());
        return base;
    }

    double primary() {
        skip();
        const char c = peek();
        if (c == '(') {
            ++pos_;
            const double v = expr();
            if (!accept(')')) fail("missing ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        if (at_end()) fail("unexpected end");
        fail("unexpected '" + std::string(1, c) + "'");
    }

    double number() {
        double v = 0.0;
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        // from_chars would read "2e" of "2exp"; only allow an exponent when digits follow
        auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::fixed);
        if (ec != std::errc()) fail("bad number");
        if (ptr < last && (*ptr == 'e' || *ptr == 'E')) {
            const char* q = ptr + 1;
            if (q < last && (*q == '+' || *q == '-')) ++q;
            if (q < last && std::isdigit(static_cast<unsigned char>(*q))) {
                auto r = std::from_chars(first, last, v, std::chars_format::general);
                if (r.ec != std::errc()) fail("bad number");
                ptr = r.ptr;
            }
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return v;
    }

    double identifier() {
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "pi") return std::numbers::pi;
        if (name == "L") return ctx_.L;
        if (name == "T") {
            if (!ctx_.T) fail("T (recurrence period) is not available here");
            return *ctx_.T;
        }
        if (name == "sqrt") {
            if (!accept('(')) fail("sqrt needs '('");
            const double v = expr();
            if (!accept(')')) fail("missing ')'");
            if (v < 0.0) fail("sqrt of a negative number");
            return std::sqrt(v);
        }
        fail("unknown symbol '" + std::string(name) + "'");
    }
};

}  // namespace

double evaluate_expression(std::string_view text, const ExpressionContext& context) {
    return Parser(text, context).parse();
}

bool expression_uses_period(std::string_view text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != 'T') continue;
        const bool left = i > 0 && (std::isalpha(static_cast<unsigned char>(text[i - 1])) || text[i - 1] == '_');
        const bool right = i + 1 < text.size() &&
                           (std::isalnum(static_cast<unsigned char>(text[i + 1])) || text[i + 1] == '_');
        if (!left && !right) return true;
    }
    return false;
}

}  // namespace qfractal
