#include <doctest.h>

#include <cmath>
#include <random>

#include "weblin/parse.hpp"
#include "weblin/webchart.hpp"

using namespace weblin;

namespace {

const char* kF1 = "(x+y)*exp(-x)";
const char* kF2 = "log(x) + (1/2)*log((x^2+y^2)/x^2) + arctan(y/x)";

double eval_d(const Expr& e, double x0, double y0) {
    Tape t(std::vector<Expr>{e});
    std::vector<double> out;
    t.eval(x0, y0, out);
    return out[0];
}

}  // namespace

TEST_CASE("curvature anchors are exact") {
    WebChart w1(parse_expr(kF1));
    NumValue r1 = eval(w1.curvature(), rat(0), rat(0));
    CHECK(r1.exact());
    CHECK(r1.rat() == -1);

    WebChart w2(parse_expr(kF2));
    NumValue r2 = eval(w2.curvature(), rat(1), rat(0));
    CHECK(r2.exact());
    CHECK(r2.rat() == 2);
}

TEST_CASE("parallel web has identically zero curvature") {
    WebChart w(parse_expr("x + y"));
    CHECK(is_const(w.curvature(), 0));
    CurvLadder ladder(w, 3);
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; a + b <= 3; ++b) CHECK(is_const(ladder.entry(a, b), 0));
}

TEST_CASE("frame bracket identity holds symbolically") {
    // [e1,e2] = -mu e1 + mu e2 with mu = -f_xy/(f_x f_y); equivalently the
    // coefficient expressions of [e1,e2] + mu e1 - mu e2 simplify to zero.
    for (const char* src : {kF1, "x + y + x*y", "x*y"}) {
        WebChart w(parse_expr(src));
        Expr ox = inv(w.fx()), oy = inv(w.fy());
        // [e1,e2] = (e1(1/fy)) d/dy - (e2(1/fx)) d/dx, coefficients in the frame:
        Expr cx = simplify(mul(num(-1), w.fx(), mul(oy, diff(ox, 1))));   // coefficient of e1
        Expr cy = simplify(mul(w.fy(), mul(ox, diff(oy, 0))));            // coefficient of e2
        CHECK(is_const(simplify(sub(cx, neg(w.mu()))), 0));
        CHECK(is_const(simplify(sub(cy, w.mu())), 0));
        // transversal direction e1 - e2 annihilates df
        Expr ann = simplify(sub(mul(w.fx(), ox), mul(w.fy(), oy)));
        CHECK(is_const(ann, 0));
    }
}

TEST_CASE("curvature two ways") {
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> pt(-0.35, 0.35);
    for (const char* src : {kF1, kF2}) {
        WebChart w(parse_expr(src));
        Expr closed = w.curvature();
        Expr structural = w.curvature_structural();
        int done = 0;
        while (done < 50) {
            double x0 = pt(rng) + (src == kF2 ? 1.0 : 0.0);
            double y0 = pt(rng);
            double a = eval_d(closed, x0, y0), b = eval_d(structural, x0, y0);
            if (!std::isfinite(a) || !std::isfinite(b)) continue;
            CHECK(std::abs(a - b) / std::max(1.0, std::abs(a)) < 1e-9);
            ++done;
        }
    }
}

TEST_CASE("frame_derive on flat scalars and the permutation rule") {
    WebChart w(parse_expr(kF1));
    CHECK(is_const(w.frame_derive(num(1), 0, 1), 0));
    CHECK(is_const(w.frame_derive(num(1), 0, 2), 0));

    // permutation rule D1 D2 c - D2 D1 c = weight * R * c for random scalars
    // built from partials of f, weights 0..3
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> pt(-0.25, 0.25);
    Expr R = w.curvature();
    for (int weight = 0; weight <= 3; ++weight) {
        Expr c = simplify(add(w.partial(1, 0), mul(num(rat(weight + 1, 3)), w.partial(1, 1), w.partial(0, 1))));
        Expr d12 = w.frame_derive(w.frame_derive(c, weight, 2), weight + 1, 1);
        Expr d21 = w.frame_derive(w.frame_derive(c, weight, 1), weight + 1, 2);
        Expr defect = simplify(sub(sub(d12, d21), mul(num(weight), R, c)));
        int done = 0;
        while (done < 10) {
            double x0 = pt(rng), y0 = pt(rng);
            double v = eval_d(defect, x0, y0);
            double scale = std::max(1.0, std::abs(eval_d(d12, x0, y0)));
            if (!std::isfinite(v) || !std::isfinite(scale)) continue;
            CHECK(std::abs(v) / scale < 1e-9);
            ++done;
        }
    }
}

TEST_CASE("double-derivative commutator on the curvature scalar") {
    // R_12 - R_21 - 2 R R = 0 (curvature has weight 2)
    WebChart w(parse_expr(kF1));
    CurvLadder ladder(w, 2);
    Expr defect = simplify(
        sub(sub(ladder.word("12"), ladder.word("21")), mul(num(2), ladder.entry(0, 0), ladder.entry(0, 0))));
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> pt(-0.3, 0.3);
    for (int i = 0; i < 20; ++i) {
        double v = eval_d(defect, pt(rng), pt(rng));
        CHECK(std::abs(v) < 1e-9);
    }
}

TEST_CASE("frame_derive matches a finite-difference oracle along e1") {
    // D_1 R = e1(R) - 2 mu R; e1(R) = (1/f_x) dR/dx approximated centrally.
    WebChart w(parse_expr(kF1));
    CurvLadder ladder(w, 1);
    double h = 1e-6;
    double dRdx = (eval_d(ladder.entry(0, 0), h, 0.0) - eval_d(ladder.entry(0, 0), -h, 0.0)) / (2 * h);
    double fx = eval_d(w.fx(), 0, 0), mu = eval_d(w.mu(), 0, 0), R = eval_d(ladder.entry(0, 0), 0, 0);
    double oracle = dRdx / fx - 2 * mu * R;
    double got = eval_d(ladder.entry(1, 0), 0, 0);
    CHECK(std::abs(oracle - got) < 1e-5);

    // frozen regression constant for Example 1: R_1 at (0,0). By hand:
    // R = -e^{2x}/(1-x-y)^3, mu = e^x/(1-x-y), so e1(R)(0,0) = -5 and
    // R_1 = e1(R) - 2 mu R = -5 + 2 = -3.
    NumValue r1 = eval(ladder.entry(1, 0), rat(0), rat(0));
    CHECK(r1.exact());
    CHECK(r1.rat() == rat(-3));
}

TEST_CASE("ladder evaluation anchors") {
    WebChart w1(parse_expr(kF1));
    CurvLadder l1(w1, 0);
    auto v1 = l1.evaluate(Point{rat(0), rat(0)}, EvalMode::Exact);
    CHECK(v1.at({0, 0}).exact());
    CHECK(v1.at({0, 0}).rat() == -1);

    WebChart w2(parse_expr(kF2));
    CurvLadder l2(w2, 0);
    auto v2 = l2.evaluate(Point{rat(1), rat(0)}, EvalMode::Exact);
    CHECK(v2.at({0, 0}).rat() == 2);

    WebChart wp(parse_expr("x+y"));
    CurvLadder lp(wp, 2);
    for (const auto& [k, v] : lp.evaluate(Point{rat(1, 3), rat(2, 7)}, EvalMode::Exact)) {
        CHECK(v.exact());
        CHECK(v.rat() == 0);
    }
}

TEST_CASE("singular points are rejected") {
    WebChart w(parse_expr(kF1));  // f_x = (1-x-y)e^-x vanishes on x+y=1
    CHECK_THROWS_AS(w.check_point(Point{rat(1, 2), rat(1, 2)}), domain_error);
}
