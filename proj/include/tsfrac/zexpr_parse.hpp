#pragma once

#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

#include "tsfrac/zexpr.hpp"

namespace tsfrac {

// Recursive-descent parser for the z-domain grammar:
//   expr   := term (('+'|'-') term)*
//   term   := coeff? factor ('/' denom)?
//   factor := 'z' '^' real | 'z' | '1'
//   denom  := '(' 'z' '-' complex ')' ('^' int)? denom* | 'z' ('^' int)?
// plus the shorthands the canonical printer relies on: a bare real constant,
// a coefficient followed directly by '/', parenthesised complex coefficients,
// and "0" for the empty expression.
namespace detail {

class ZParser {
  public:
    explicit ZParser(const std::string& text) : s_(text) {}

    ZExpr run() {
        std::vector<PowerTerm> terms;
        skip_ws();
        double sign = 1.0;
        if (peek() == '-') {
            ++pos_;
            sign = -1.0;
        } else if (peek() == '+') {
            ++pos_;
        }
        terms.push_back(term(sign));
        skip_ws();
        while (pos_ < s_.size()) {
            char op = peek();
            if (op != '+' && op != '-') throw ParseError("expected '+' or '-'", pos_);
            ++pos_;
            terms.push_back(term(op == '-' ? -1.0 : 1.0));
            skip_ws();
        }
        return canonicalize(std::move(terms));
    }

  private:
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    void expect(char c) {
        skip_ws();
        if (peek() != c)
            throw ParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }

    double real_number() {
        skip_ws();
        if (std::isalpha(static_cast<unsigned char>(peek())))
            throw ParseError("expected a number", pos_);
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("expected a number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }

    cplx complex_number() {
        double re = real_number();
        std::size_t save = pos_;
        skip_ws();
        if (peek() == 'i') {  // pure imaginary
            ++pos_;
            return cplx(0.0, re);
        }
        if (peek() == '+' || peek() == '-') {
            char op = peek();
            ++pos_;
            skip_ws();
            std::size_t imstart = pos_;
            double im;
            try {
                im = real_number();
            } catch (const ParseError&) {
                pos_ = save;
                return cplx(re, 0.0);
            }
            skip_ws();
            if (peek() != 'i') {
                pos_ = save;
                (void)imstart;
                return cplx(re, 0.0);
            }
            ++pos_;
            return cplx(re, op == '-' ? -im : im);
        }
        pos_ = save;
        return cplx(re, 0.0);
    }

    // 'z' optionally followed by ^real; returns the exponent
    double zpower(bool integer_only) {
        expect('z');
        skip_ws();
        if (peek() != '^') return 1.0;
        ++pos_;
        std::size_t at = pos_;
        double p = real_number();
        if (integer_only && p != std::round(p))
            throw ParseError("denominator power of z must be an integer", at);
        return p;
    }

    void denominators(PowerTerm& t) {
        while (true) {
            skip_ws();
            if (peek() == '(') {
                ++pos_;
                expect('z');
                skip_ws();
                char op = peek();
                if (op != '-' && op != '+') throw ParseError("expected '-' or '+'", pos_);
                ++pos_;
                cplx loc = complex_number();
                if (op == '+') loc = -loc;
                expect(')');
                int order = 1;
                skip_ws();
                if (peek() == '^') {
                    ++pos_;
                    std::size_t at = pos_;
                    double o = real_number();
                    if (o != std::round(o) || o < 1)
                        throw ParseError("pole order must be a positive integer", at);
                    order = static_cast<int>(o);
                }
                t.poles.push_back(Pole{loc, order});
            } else if (peek() == 'z') {
                double p = zpower(true);
                if (p < 1) throw ParseError("denominator power of z must be positive", pos_);
                t.poles.push_back(Pole{0.0, static_cast<int>(p)});
            } else {
                break;
            }
        }
        if (t.poles.empty()) throw ParseError("expected a denominator", pos_);
    }

    PowerTerm term(double sign) {
        skip_ws();
        PowerTerm t;
        t.coeff = sign;
        bool have_factor = false;
        char c = peek();
        if (c == '(') {  // parenthesised complex coefficient
            ++pos_;
            t.coeff *= complex_number();
            expect(')');
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                skip_ws();
            }
        } else if (c != 'z') {
            double v = real_number();
            skip_ws();
            if (peek() == '*') {
                t.coeff *= v;
                ++pos_;
                skip_ws();
            } else if (peek() == '/') {
                t.coeff *= v;
                have_factor = true;  // implicit factor 1
            } else {
                t.coeff *= v;  // bare constant
                return t;
            }
        }
        if (!have_factor) {
            skip_ws();
            if (peek() == 'z') {
                t.exponent = zpower(false);
            } else if (peek() == '1') {
                ++pos_;
            } else {
                throw ParseError("expected 'z' or '1'", pos_);
            }
        }
        skip_ws();
        if (peek() == '/') {
            ++pos_;
            denominators(t);
        }
        return t;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline ZExpr zexpr_parse(const std::string& text) { return detail::ZParser(text).run(); }

}  // namespace tsfrac
