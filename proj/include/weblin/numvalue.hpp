#pragma once

#include <string>
#include <utility>

#include "weblin/rational.hpp"
#include "weblin/real.hpp"

namespace weblin {

// Tagged numeric value: exact rational or multiple-precision float.
// Any operation touching a float operand demotes the result to float;
// the `exact` flag records whether exactness was preserved end to end.
class NumValue {
  public:
    NumValue() : exact_(true), q_(0) {}
    NumValue(Rat q) : exact_(true), q_(std::move(q)) {}  // NOLINT: implicit by design
    explicit NumValue(Real f) : exact_(false), f_(std::move(f)) {}
    explicit NumValue(double d) : exact_(false), f_(d) {}

    bool exact() const { return exact_; }
    const Rat& rat() const {
        if (!exact_) throw domain_error("NumValue: float value has no exact rational form");
        return q_;
    }
    Real real() const { return exact_ ? Real(q_) : f_; }
    double to_double() const { return exact_ ? q_.get_d() : f_.to_double(); }

    bool is_zero() const { return exact_ ? is_zero_rat() : f_.is_zero(); }
    int sign() const { return exact_ ? sgn(q_) : f_.sign(); }

    friend NumValue operator+(const NumValue& a, const NumValue& b) {
        if (a.exact_ && b.exact_) return NumValue(Rat(a.q_ + b.q_));
        return NumValue(a.real() + b.real());
    }
    friend NumValue operator-(const NumValue& a, const NumValue& b) {
        if (a.exact_ && b.exact_) return NumValue(Rat(a.q_ - b.q_));
        return NumValue(a.real() - b.real());
    }
    friend NumValue operator*(const NumValue& a, const NumValue& b) {
        if (a.exact_ && b.exact_) return NumValue(Rat(a.q_ * b.q_));
        return NumValue(a.real() * b.real());
    }
    friend NumValue operator/(const NumValue& a, const NumValue& b) {
        if (b.is_zero()) throw domain_error("division by zero");
        if (a.exact_ && b.exact_) return NumValue(Rat(a.q_ / b.q_));
        return NumValue(a.real() / b.real());
    }
    NumValue operator-() const { return exact_ ? NumValue(Rat(-q_)) : NumValue(-f_); }

    NumValue pow_int(long e) const {
        if (exact_) {
            if (is_zero_rat() && e < 0) throw domain_error("division by zero (negative power)");
            return NumValue(rat_pow(q_, e));
        }
        if (f_.is_zero() && e < 0) throw domain_error("division by zero (negative power)");
        return NumValue(f_.pow_int(e));
    }

    std::string str() const { return exact_ ? rat_str(q_) : f_.str(); }

  private:
    bool is_zero_rat() const { return sgn(q_) == 0; }

    bool exact_;
    Rat q_;
    Real f_;
};

}  // namespace weblin
