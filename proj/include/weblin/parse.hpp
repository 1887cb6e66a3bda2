#pragma once

#include <cctype>
#include <string>

#include "weblin/expr.hpp"

namespace weblin {

struct parse_error : std::runtime_error {
    size_t pos;
    parse_error(const std::string& msg, size_t at)
        : std::runtime_error(msg + " (at position " + std::to_string(at) + ")"), pos(at) {}
};

// Recursive-descent parser for the documented grammar:
//
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := ('+'|'-')* power
//   power   := atom ('^' ('-')? integer)?
//   atom    := number | 'x' | 'y' | func '(' expr ')' | '(' expr ')'
//   number  := digits ('.' digits)? (('e'|'E') ('+'|'-')? digits)?
//   func    := exp | log | sin | cos | arctan | atan | sqrt
//
// '^' takes an integer exponent. '1/2' folds to the exact rational 1/2 and
// decimal literals are exact rationals as well.
class Parser {
  public:
    explicit Parser(std::string src) : src_(std::move(src)) {}

    Expr parse() {
        Expr e = parse_sum();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, pos_); }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    Expr parse_sum() {
        Expr e = parse_term();
        for (;;) {
            if (eat('+'))
                e = add(e, parse_term());
            else if (eat('-'))
                e = sub(e, parse_term());
            else
                return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_factor();
        for (;;) {
            if (eat('*'))
                e = mul(e, parse_factor());
            else if (eat('/'))
                e = quot(e, parse_factor());
            else
                return e;
        }
    }

    Expr parse_factor() {
        int sign = 1;
        for (;;) {
            if (eat('+')) continue;
            if (eat('-')) {
                sign = -sign;
                continue;
            }
            break;
        }
        Expr e = parse_power();
        return sign < 0 ? neg(e) : e;
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (!eat('^')) return base;
        bool negexp = eat('-');
        skip_ws();
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected integer exponent after '^'");
        long e = std::stol(src_.substr(start, pos_ - start));
        return pow(base, negexp ? -e : e);
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr parse_number() {
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            size_t save = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = save;  // 'e' was not an exponent marker
            }
        }
        std::string text = src_.substr(start, pos_ - start);
        try {
            return num(parse_rat(text));
        } catch (const std::exception&) {
            pos_ = start;
            fail("bad numeric literal '" + text + "'");
        }
    }

    Expr parse_ident() {
        size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string name = src_.substr(start, pos_ - start);
        if (name == "x") return x_var();
        if (name == "y") return y_var();
        Fn fn;
        if (name == "exp")
            fn = Fn::Exp;
        else if (name == "log" || name == "ln")
            fn = Fn::Log;
        else if (name == "sin")
            fn = Fn::Sin;
        else if (name == "cos")
            fn = Fn::Cos;
        else if (name == "arctan" || name == "atan" || name == "arctg")
            fn = Fn::Atan;
        else if (name == "sqrt")
            fn = Fn::Sqrt;
        else {
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        if (!eat('(')) fail("expected '(' after function name");
        Expr arg = parse_sum();
        if (!eat(')')) fail("expected ')'");
        return call(fn, arg);
    }

    std::string src_;
    size_t pos_ = 0;
};

inline Expr parse_expr(const std::string& src) { return Parser(src).parse(); }

}  // namespace weblin
