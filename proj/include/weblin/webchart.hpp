#pragma once

#include <map>
#include <string>
#include <utility>

#include "weblin/calculus.hpp"
#include "weblin/eval.hpp"
#include "weblin/expr.hpp"

namespace weblin {

// Sign of the connection term in the covariant derivative of a weight-w
// scalar component: D_i c = e_i(c) + kFrameSign * w * mu_i * c. The value is
// pinned by the curvature anchors together with the permutation rule
// C_12 - C_21 = w*R*C; flipping it breaks both checks.
inline constexpr int kFrameSign = -1;

// A planar 3-web {x = const, y = const, f(x,y) = const} in general position
// (f_x != 0, f_y != 0), with its adapted frame e1 = (1/f_x) d/dx,
// e2 = (1/f_y) d/dy, connection scalar mu = -f_xy/(f_x f_y) and curvature
// scalar R = e2(mu) - e1(mu).
class WebChart {
  public:
    explicit WebChart(Expr f) : f_(simplify(std::move(f))) {
        partials_[{0, 0}] = f_;
        fx_ = partial(1, 0);
        fy_ = partial(0, 1);
        mu_ = simplify(mul(num(-1), partial(1, 1), inv(fx_), inv(fy_)));
    }

    const Expr& f() const { return f_; }
    const Expr& fx() const { return fx_; }
    const Expr& fy() const { return fy_; }
    const Expr& mu() const { return mu_; }

    // d^(ix+iy) f / dx^ix dy^iy, cached
    Expr partial(int ix, int iy) const {
        auto key = std::make_pair(ix, iy);
        auto it = partials_.find(key);
        if (it != partials_.end()) return it->second;
        Expr p;
        if (ix > 0)
            p = simplify(diff(partial(ix - 1, iy), 0));
        else
            p = simplify(diff(partial(0, iy - 1), 1));
        partials_[key] = p;
        return p;
    }

    // R = (1/(f_x f_y)) (f_xxy/f_x - f_xyy/f_y + f_xy f_yy/f_y^2 - f_xx f_xy/f_x^2)
    Expr curvature() const {
        Expr fx3 = inv(fx_), fy3 = inv(fy_);
        Expr t1 = mul(partial(2, 1), fx3);
        Expr t2 = mul(num(-1), partial(1, 2), fy3);
        Expr t3 = mul(partial(1, 1), partial(0, 2), pow(fy_, -2));
        Expr t4 = mul(num(-1), partial(2, 0), partial(1, 1), pow(fx_, -2));
        return simplify(mul(inv(fx_), inv(fy_), add({t1, t2, t3, t4})));
    }

    // Independent route: exterior derivative of the connection form on the
    // frame bivector, R = e2(mu) - e1(mu).
    Expr curvature_structural() const {
        return simplify(sub(frame_apply(mu_, 2), frame_apply(mu_, 1)));
    }

    // e_i(c), the plain frame vector field applied to a scalar
    Expr frame_apply(const Expr& c, int i) const {
        if (i == 1) return mul(inv(fx_), diff(c, 0));
        return mul(inv(fy_), diff(c, 1));
    }

    // Covariant derivative of the scalar component of a weight-w horizontal
    // tensor: D_i c = e_i(c) + kFrameSign * w * mu * c.
    Expr frame_derive(const Expr& c, int weight, int i) const {
        Expr d = frame_apply(c, i);
        if (weight != 0) d = add(d, mul(num(kFrameSign * weight), mu_, c));
        return simplify(d);
    }

    // Throws if f_x f_y = 0 at p (web not in general position there).
    void check_point(const Point& p, EvalMode mode = EvalMode::Exact) const {
        Evaluator ev(p, mode);
        if (ev.eval(fx_).is_zero() || ev.eval(fy_).is_zero())
            throw domain_error("web is singular at the requested point (f_x f_y = 0)");
    }

  private:
    Expr f_, fx_, fy_, mu_;
    mutable std::map<std::pair<int, int>, Expr> partials_;
};

// Covariant-derivative ladder of the curvature scalar: R_w for derivative
// words w over {1,2}. Canonical words are sorted ascending, R_{1^a 2^b} =
// D_1^a D_2^b R; weight(R_w) = 2 + |w|.
class CurvLadder {
  public:
    CurvLadder(const WebChart& web, int max_order) : web_(&web), max_order_(max_order) {
        entries_[{0, 0}] = simplify(web.curvature());
        for (int len = 1; len <= max_order; ++len)
            for (int a = 0; a <= len; ++a) entry(a, len - a);
    }

    int max_order() const { return max_order_; }
    const WebChart& web() const { return *web_; }

    // R_{1^a 2^b}
    const Expr& entry(int a, int b) const {
        auto key = std::make_pair(a, b);
        auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;
        Expr e;
        if (a > 0)
            e = web_->frame_derive(entry(a - 1, b), 2 + (a - 1) + b, 1);
        else
            e = web_->frame_derive(entry(0, b - 1), 2 + (b - 1), 2);
        auto [pos, ok] = entries_.emplace(key, std::move(e));
        (void)ok;
        return pos->second;
    }

    // R_w for an arbitrary word over {1,2}, innermost derivative last.
    Expr word(const std::string& w) const {
        Expr e = entry(0, 0);
        int weight = 2;
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            e = web_->frame_derive(e, weight, *it == '1' ? 1 : 2);
            ++weight;
        }
        return e;
    }

    // Numeric binding of every canonical word, one shared evaluation.
    std::map<std::pair<int, int>, NumValue> evaluate(const Point& p, EvalMode mode) const {
        web_->check_point(p, mode);
        Evaluator ev(p, mode);
        std::map<std::pair<int, int>, NumValue> out;
        for (const auto& [key, e] : entries_)
            if (key.first + key.second <= max_order_) out.emplace(key, ev.eval(e));
        return out;
    }

  private:
    const WebChart* web_;
    int max_order_;
    mutable std::map<std::pair<int, int>, Expr> entries_;
};

}  // namespace weblin
