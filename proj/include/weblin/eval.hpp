#pragma once

#include <cmath>
#include <unordered_map>
#include <vector>

#include "weblin/expr.hpp"
#include "weblin/numvalue.hpp"

namespace weblin {

enum class EvalMode { Exact, Float };

struct Point {
    Rat x, y;
};

namespace detail {

inline NumValue real_call(Fn fn, const Real& a) {
    switch (fn) {
        case Fn::Exp: return NumValue(a.exp());
        case Fn::Log:
            if (a.sign() <= 0) throw domain_error("log of non-positive value");
            return NumValue(a.log());
        case Fn::Sin: return NumValue(a.sin());
        case Fn::Cos: return NumValue(a.cos());
        case Fn::Atan: return NumValue(a.atan());
        case Fn::Sqrt:
            if (a.sign() < 0) throw domain_error("sqrt of negative value");
            return NumValue(a.sqrt());
    }
    throw domain_error("unknown function");
}

// Exact evaluation of a function call succeeds only where the argument pins
// a rational value (exp(0)=1, log(1)=0, sin(0)=0, cos(0)=1, arctan(0)=0,
// sqrt of a rational square); anything else falls over to the float path.
inline NumValue exact_call(Fn fn, const NumValue& a) {
    if (a.exact()) {
        const Rat& q = a.rat();
        switch (fn) {
            case Fn::Exp:
                if (is_zero(q)) return NumValue(Rat(1));
                break;
            case Fn::Log:
                if (sgn(q) <= 0) throw domain_error("log of non-positive value");
                if (cmp(q, 1) == 0) return NumValue(Rat(0));
                break;
            case Fn::Sin:
                if (is_zero(q)) return NumValue(Rat(0));
                break;
            case Fn::Cos:
                if (is_zero(q)) return NumValue(Rat(1));
                break;
            case Fn::Atan:
                if (is_zero(q)) return NumValue(Rat(0));
                break;
            case Fn::Sqrt:
                if (sgn(q) < 0) throw domain_error("sqrt of negative value");
                if (auto r = rat_sqrt(q)) return NumValue(*r);
                break;
        }
    }
    return real_call(fn, a.real());
}

}  // namespace detail

class Evaluator {
  public:
    Evaluator(Point p, EvalMode mode) : p_(std::move(p)), mode_(mode) {}

    NumValue eval(const Expr& e) {
        auto it = memo_.find(e.get());
        if (it != memo_.end()) return it->second;
        NumValue v = compute(e);
        memo_.emplace(e.get(), v);
        return v;
    }

  private:
    NumValue leaf(const Rat& q) const {
        return mode_ == EvalMode::Exact ? NumValue(q) : NumValue(Real(q));
    }

    NumValue compute(const Expr& e) {
        switch (e->op) {
            case Op::Const: return leaf(e->value);
            case Op::Var: return leaf(e->var == 0 ? p_.x : p_.y);
            case Op::Add: {
                NumValue acc = eval(e->kids[0]);
                for (size_t i = 1; i < e->kids.size(); ++i) acc = acc + eval(e->kids[i]);
                return acc;
            }
            case Op::Mul: {
                NumValue acc = eval(e->kids[0]);
                for (size_t i = 1; i < e->kids.size(); ++i) acc = acc * eval(e->kids[i]);
                return acc;
            }
            case Op::Pow: return eval(e->kids[0]).pow_int(e->ipow);
            case Op::Call: {
                NumValue a = eval(e->kids[0]);
                return mode_ == EvalMode::Exact ? detail::exact_call(e->fn, a)
                                                : detail::real_call(e->fn, a.real());
            }
        }
        throw domain_error("unreachable expression kind");
    }

    Point p_;
    EvalMode mode_;
    std::unordered_map<const ExprNode*, NumValue> memo_;
};

inline NumValue eval(const Expr& e, const Point& p, EvalMode mode = EvalMode::Exact) {
    return Evaluator(p, mode).eval(e);
}

inline NumValue eval(const Expr& e, const Rat& x, const Rat& y, EvalMode mode = EvalMode::Exact) {
    return Evaluator(Point{x, y}, mode).eval(e);
}

// Straight-line program compiled from a shared expression DAG. Used for the
// dense grid evaluations where per-node hashing would dominate.
class Tape {
  public:
    template <class It>
    Tape(It roots_begin, It roots_end) {
        std::unordered_map<const ExprNode*, int> slot;
        for (It it = roots_begin; it != roots_end; ++it) outputs_.push_back(compile(*it, slot));
    }
    explicit Tape(const std::vector<Expr>& roots) : Tape(roots.begin(), roots.end()) {}

    size_t n_outputs() const { return outputs_.size(); }

    template <class T>
    void eval(const T& x, const T& y, std::vector<T>& out) const {
        std::vector<T> reg(code_.size());
        for (size_t i = 0; i < code_.size(); ++i) {
            const Ins& ins = code_[i];
            switch (ins.op) {
                case TOp::Const: reg[i] = make_const<T>(ins); break;
                case TOp::VarX: reg[i] = x; break;
                case TOp::VarY: reg[i] = y; break;
                case TOp::Add: reg[i] = reg[ins.a] + reg[ins.b]; break;
                case TOp::Mul: reg[i] = reg[ins.a] * reg[ins.b]; break;
                case TOp::Pow: reg[i] = pow_val(reg[ins.a], ins.e); break;
                case TOp::Exp: reg[i] = exp_val(reg[ins.a]); break;
                case TOp::Log: reg[i] = log_val(reg[ins.a]); break;
                case TOp::Sin: reg[i] = sin_val(reg[ins.a]); break;
                case TOp::Cos: reg[i] = cos_val(reg[ins.a]); break;
                case TOp::Atan: reg[i] = atan_val(reg[ins.a]); break;
                case TOp::Sqrt: reg[i] = sqrt_val(reg[ins.a]); break;
            }
        }
        out.resize(outputs_.size());
        for (size_t i = 0; i < outputs_.size(); ++i) out[i] = reg[outputs_[i]];
    }

  private:
    enum class TOp : uint8_t { Const, VarX, VarY, Add, Mul, Pow, Exp, Log, Sin, Cos, Atan, Sqrt };
    struct Ins {
        TOp op;
        int a = 0, b = 0;
        long e = 0;
        double dval = 0;
        Rat qval;
    };

    template <class T>
    T make_const(const Ins& ins) const {
        if constexpr (std::is_same_v<T, double>)
            return ins.dval;
        else
            return T(ins.qval);
    }
    static double pow_val(double b, long e) { return std::pow(b, static_cast<double>(e)); }
    static Real pow_val(const Real& b, long e) { return b.pow_int(e); }
    static double exp_val(double a) { return std::exp(a); }
    static double log_val(double a) { return std::log(a); }
    static double sin_val(double a) { return std::sin(a); }
    static double cos_val(double a) { return std::cos(a); }
    static double atan_val(double a) { return std::atan(a); }
    static double sqrt_val(double a) { return std::sqrt(a); }
    static Real exp_val(const Real& a) { return a.exp(); }
    static Real log_val(const Real& a) { return a.log(); }
    static Real sin_val(const Real& a) { return a.sin(); }
    static Real cos_val(const Real& a) { return a.cos(); }
    static Real atan_val(const Real& a) { return a.atan(); }
    static Real sqrt_val(const Real& a) { return a.sqrt(); }

    int emit(Ins ins) {
        code_.push_back(std::move(ins));
        return static_cast<int>(code_.size() - 1);
    }

    int compile(const Expr& e, std::unordered_map<const ExprNode*, int>& slot) {
        auto it = slot.find(e.get());
        if (it != slot.end()) return it->second;
        int r = -1;
        switch (e->op) {
            case Op::Const: {
                Ins ins;
                ins.op = TOp::Const;
                ins.qval = e->value;
                ins.dval = e->value.get_d();
                r = emit(std::move(ins));
                break;
            }
            case Op::Var: r = emit({e->var == 0 ? TOp::VarX : TOp::VarY}); break;
            case Op::Add:
            case Op::Mul: {
                TOp op = e->op == Op::Add ? TOp::Add : TOp::Mul;
                int acc = compile(e->kids[0], slot);
                for (size_t i = 1; i < e->kids.size(); ++i) {
                    int rhs = compile(e->kids[i], slot);
                    acc = emit({op, acc, rhs});
                }
                r = acc;
                break;
            }
            case Op::Pow: {
                int b = compile(e->kids[0], slot);
                Ins ins;
                ins.op = TOp::Pow;
                ins.a = b;
                ins.e = e->ipow;
                r = emit(std::move(ins));
                break;
            }
            case Op::Call: {
                int a = compile(e->kids[0], slot);
                TOp op = TOp::Exp;
                switch (e->fn) {
                    case Fn::Exp: op = TOp::Exp; break;
                    case Fn::Log: op = TOp::Log; break;
                    case Fn::Sin: op = TOp::Sin; break;
                    case Fn::Cos: op = TOp::Cos; break;
                    case Fn::Atan: op = TOp::Atan; break;
                    case Fn::Sqrt: op = TOp::Sqrt; break;
                }
                r = emit({op, a});
                break;
            }
        }
        slot.emplace(e.get(), r);
        return r;
    }

    std::vector<Ins> code_;
    std::vector<int> outputs_;
};

}  // namespace weblin
