#pragma once

#include <unordered_map>
#include <vector>

#include "weblin/expr.hpp"

namespace weblin {

namespace detail {

class Differ {
  public:
    explicit Differ(int v) : v_(v) {}

    Expr run(const Expr& e) {
        auto it = memo_.find(e.get());
        if (it != memo_.end()) return it->second;
        Expr d = compute(e);
        memo_.emplace(e.get(), d);
        return d;
    }

  private:
    Expr compute(const Expr& e) {
        switch (e->op) {
            case Op::Const: return num(0);
            case Op::Var: return num(e->var == v_ ? 1 : 0);
            case Op::Add: {
                std::vector<Expr> parts;
                parts.reserve(e->kids.size());
                for (const auto& k : e->kids) parts.push_back(run(k));
                return add(std::move(parts));
            }
            case Op::Mul: {
                std::vector<Expr> terms;
                for (size_t i = 0; i < e->kids.size(); ++i) {
                    Expr di = run(e->kids[i]);
                    if (is_const(di, 0)) continue;
                    std::vector<Expr> fac;
                    fac.reserve(e->kids.size());
                    for (size_t j = 0; j < e->kids.size(); ++j) fac.push_back(j == i ? di : e->kids[j]);
                    terms.push_back(mul(std::move(fac)));
                }
                return add(std::move(terms));
            }
            case Op::Pow: {
                const Expr& b = e->kids[0];
                Expr db = run(b);
                if (is_const(db, 0)) return num(0);
                return mul(num(e->ipow), pow(b, e->ipow - 1), db);
            }
            case Op::Call: {
                const Expr& u = e->kids[0];
                Expr du = run(u);
                if (is_const(du, 0)) return num(0);
                switch (e->fn) {
                    case Fn::Exp: return mul(call(Fn::Exp, u), du);
                    case Fn::Log: return mul(inv(u), du);
                    case Fn::Sin: return mul(call(Fn::Cos, u), du);
                    case Fn::Cos: return mul(num(-1), call(Fn::Sin, u), du);
                    case Fn::Atan: return mul(inv(add(num(1), pow(u, 2))), du);
                    case Fn::Sqrt: return mul(num(Rat(1, 2)), inv(call(Fn::Sqrt, u)), du);
                }
                return num(0);
            }
        }
        return num(0);
    }

    int v_;
    std::unordered_map<const ExprNode*, Expr> memo_;
};

}  // namespace detail

// Exact partial derivative with respect to variable v (0 = x, 1 = y).
inline Expr diff(const Expr& e, int v) { return detail::Differ(v).run(e); }

namespace detail {

// Conservative simplifier: constant folding, 0/1 identities, like-term and
// like-factor collection, power merging. No trigonometric rewriting.
class Simplifier {
  public:
    Expr run(const Expr& e) {
        auto it = memo_.find(e.get());
        if (it != memo_.end()) return it->second;
        Expr s = compute(e);
        keep_.push_back(e);  // the memo keys by address, so keep nodes alive
        memo_.emplace(e.get(), s);
        return s;
    }

  private:
    static void split_coeff(const Expr& e, Rat& coeff, Expr& core) {
        if (e->op == Op::Mul && e->kids[0]->op == Op::Const) {
            coeff = e->kids[0]->value;
            std::vector<Expr> rest(e->kids.begin() + 1, e->kids.end());
            core = mul(std::move(rest));
        } else {
            coeff = 1;
            core = e;
        }
    }

    Expr compute(const Expr& e) {
        switch (e->op) {
            case Op::Const:
            case Op::Var:
                return e;
            case Op::Call: {
                Expr u = run(e->kids[0]);
                return call(e->fn, u);
            }
            case Op::Pow: {
                Expr b = run(e->kids[0]);
                if (b->op == Op::Mul) {
                    // (a*b)^n -> a^n * b^n so powers of shared factors merge
                    std::vector<Expr> fac;
                    fac.reserve(b->kids.size());
                    for (const auto& k : b->kids) fac.push_back(pow(k, e->ipow));
                    return run_fresh(mul(std::move(fac)));
                }
                return pow(b, e->ipow);
            }
            case Op::Mul: {
                std::vector<std::pair<Expr, long>> bases;
                Rat c(1);
                std::vector<Expr> pending;
                for (const auto& k : e->kids) pending.push_back(run(k));
                for (auto& k : pending) {
                    if (k->op == Op::Const) {
                        c *= k->value;
                        continue;
                    }
                    Expr base = k;
                    long ex = 1;
                    if (k->op == Op::Pow) {
                        base = k->kids[0];
                        ex = k->ipow;
                    }
                    bases.emplace_back(base, ex);
                }
                if (is_zero(c)) return num(0);
                std::sort(bases.begin(), bases.end(),
                          [](const auto& a, const auto& b) { return expr_less(a.first, b.first); });
                std::vector<Expr> out;
                for (size_t i = 0; i < bases.size();) {
                    size_t j = i;
                    long ex = 0;
                    while (j < bases.size() && expr_equal(bases[j].first, bases[i].first)) {
                        ex += bases[j].second;
                        ++j;
                    }
                    if (ex != 0) out.push_back(pow(bases[i].first, ex));
                    i = j;
                }
                out.push_back(num(c));
                return mul(std::move(out));
            }
            case Op::Add: {
                std::vector<std::pair<Expr, Rat>> groups;
                Rat c(0);
                for (const auto& k0 : e->kids) {
                    Expr k = run(k0);
                    if (k->op == Op::Const) {
                        c += k->value;
                        continue;
                    }
                    if (k->op == Op::Add) {
                        for (const auto& kk : k->kids) {
                            if (kk->op == Op::Const) {
                                c += kk->value;
                                continue;
                            }
                            Rat cf;
                            Expr core;
                            split_coeff(kk, cf, core);
                            groups.emplace_back(core, cf);
                        }
                        continue;
                    }
                    Rat cf;
                    Expr core;
                    split_coeff(k, cf, core);
                    groups.emplace_back(core, cf);
                }
                std::sort(groups.begin(), groups.end(),
                          [](const auto& a, const auto& b) { return expr_less(a.first, b.first); });
                std::vector<Expr> out;
                for (size_t i = 0; i < groups.size();) {
                    size_t j = i;
                    Rat cf(0);
                    while (j < groups.size() && expr_equal(groups[j].first, groups[i].first)) {
                        cf += groups[j].second;
                        ++j;
                    }
                    if (!is_zero(cf)) out.push_back(mul(num(cf), groups[i].first));
                    i = j;
                }
                out.push_back(num(c));
                return add(std::move(out));
            }
        }
        return e;
    }

    Expr run_fresh(const Expr& e) {
        // helper for rewritten nodes that are not in the memo
        Expr s = compute(e);
        return s;
    }

    std::unordered_map<const ExprNode*, Expr> memo_;
    std::vector<Expr> keep_;
};

}  // namespace detail

inline Expr simplify(const Expr& e) {
    Expr cur = e;
    for (int i = 0; i < 3; ++i) {
        Expr next = detail::Simplifier().run(cur);
        if (expr_equal(next, cur)) break;
        cur = next;
    }
    return cur;
}

}  // namespace weblin
