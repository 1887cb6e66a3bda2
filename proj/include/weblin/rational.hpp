#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace weblin {

using Rat = mpq_class;

struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_zero(const Rat& q) { return sgn(q) == 0; }
inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Rat rat_pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    if (is_zero(base)) {
        if (e < 0) throw domain_error("0 raised to a negative power");
        return Rat(0);
    }
    Rat b = e < 0 ? Rat(1) / base : base;
    unsigned long n = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Rat acc(1);
    while (n) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    return acc;
}

inline Rat rat_abs(const Rat& q) { return sgn(q) < 0 ? Rat(-q) : q; }

// gcd on rationals: gcd of numerators over lcm of denominators. gcd(0,0)=0.
inline Rat rat_gcd(const Rat& a, const Rat& b) {
    if (is_zero(a)) return rat_abs(b);
    if (is_zero(b)) return rat_abs(a);
    mpz_class gn, ld;
    mpz_gcd(gn.get_mpz_t(), a.get_num().get_mpz_t(), b.get_num().get_mpz_t());
    mpz_lcm(ld.get_mpz_t(), a.get_den().get_mpz_t(), b.get_den().get_mpz_t());
    Rat g(gn, ld);
    g.canonicalize();
    return g;
}

// Exact rational square root when one exists.
inline std::optional<Rat> rat_sqrt(const Rat& q) {
    if (sgn(q) < 0) return std::nullopt;
    mpz_class sn, sd;
    if (!mpz_perfect_square_p(q.get_num().get_mpz_t())) return std::nullopt;
    if (!mpz_perfect_square_p(q.get_den().get_mpz_t())) return std::nullopt;
    mpz_sqrt(sn.get_mpz_t(), q.get_num().get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), q.get_den().get_mpz_t());
    return Rat(std::move(sn), std::move(sd));
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

// Parses "p", "p/q" or a decimal literal like "0.25" / "-1.5e-3" (exponent optional).
inline Rat parse_rat(const std::string& text) {
    auto bad = [&]() { return std::invalid_argument("bad rational literal: " + text); };
    std::string s = text;
    if (s.empty()) throw bad();
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rat q;
        if (q.set_str(s, 10) != 0) throw bad();
        q.canonicalize();
        if (q.get_den() == 0) throw bad();
        return q;
    }
    auto dot = s.find('.');
    auto epos = s.find_first_of("eE");
    long ex10 = 0;
    if (epos != std::string::npos) {
        ex10 = std::stol(s.substr(epos + 1));
        s = s.substr(0, epos);
    }
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        ex10 -= static_cast<long>(s.size() - dot - 1);
        s = digits;
    }
    if (s.empty() || s == "-" || s == "+") throw bad();
    mpz_class n;
    if (n.set_str(s, 10) != 0) throw bad();
    Rat q(n);
    if (ex10 > 0)
        q *= rat_pow(Rat(10), ex10);
    else if (ex10 < 0)
        q /= rat_pow(Rat(10), -ex10);
    q.canonicalize();
    return q;
}

}  // namespace weblin
