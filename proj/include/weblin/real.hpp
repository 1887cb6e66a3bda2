#pragma once

#include <mpfr.h>

#include <cstdio>
#include <string>
#include <utility>

#include "weblin/rational.hpp"

namespace weblin {

// Multiple-precision float. Default precision is 128 bits so that the
// degree-24 obstruction polynomials can be evaluated without losing the
// verdict to cancellation; IEEE double is recoverable via to_double().
class Real {
  public:
    static mpfr_prec_t& default_prec() {
        static mpfr_prec_t prec = 128;
        return prec;
    }

    Real() { mpfr_init2(v_, default_prec()); mpfr_set_zero(v_, 1); }
    explicit Real(double d) { mpfr_init2(v_, default_prec()); mpfr_set_d(v_, d, MPFR_RNDN); }
    explicit Real(long n) { mpfr_init2(v_, default_prec()); mpfr_set_si(v_, n, MPFR_RNDN); }
    explicit Real(const Rat& q) { mpfr_init2(v_, default_prec()); mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }

    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, default_prec()); mpfr_swap(v_, o.v_); }
    Real& operator=(Real o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Real() { mpfr_clear(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_); }
    int sign() const { return mpfr_sgn(v_); }
    bool is_finite() const { return mpfr_number_p(v_); }

    friend Real operator+(const Real& a, const Real& b) { Real r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a, const Real& b) { Real r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator*(const Real& a, const Real& b) { Real r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator/(const Real& a, const Real& b) { Real r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    Real operator-() const { Real r; mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }
    Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }

    Real pow_int(long e) const {
        Real r;
        if (e >= 0) {
            mpfr_pow_ui(r.v_, v_, static_cast<unsigned long>(e), MPFR_RNDN);
        } else {
            mpfr_pow_ui(r.v_, v_, static_cast<unsigned long>(-e), MPFR_RNDN);
            mpfr_ui_div(r.v_, 1, r.v_, MPFR_RNDN);
        }
        return r;
    }

    Real abs() const { Real r; mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }
    Real exp() const { Real r; mpfr_exp(r.v_, v_, MPFR_RNDN); return r; }
    Real log() const { Real r; mpfr_log(r.v_, v_, MPFR_RNDN); return r; }
    Real sin() const { Real r; mpfr_sin(r.v_, v_, MPFR_RNDN); return r; }
    Real cos() const { Real r; mpfr_cos(r.v_, v_, MPFR_RNDN); return r; }
    Real atan() const { Real r; mpfr_atan(r.v_, v_, MPFR_RNDN); return r; }
    Real sqrt() const { Real r; mpfr_sqrt(r.v_, v_, MPFR_RNDN); return r; }

    std::string str(int digits = 20) const {
        char buf[128];
        mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, v_);
        return buf;
    }

  private:
    mpfr_t v_;
};

}  // namespace weblin
