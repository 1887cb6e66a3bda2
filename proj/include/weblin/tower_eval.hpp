#pragma once

#include "weblin/qpoly.hpp"
#include "weblin/tower_build.hpp"
#include "weblin/webchart.hpp"

namespace weblin {

// raised when the evaluation point has vanishing curvature: the obstruction
// tower does not apply there and the parallelizable branch takes over
struct ParallelizableSignal : std::runtime_error {
    ParallelizableSignal() : std::runtime_error("curvature vanishes: parallelizable branch") {}
};

// numeric binding of the curvature ladder at a point
struct LadderBinding {
    bool exact = true;
    Rat r_q;
    std::array<Rat, detail::kNumWords> w_q;
    Real r_f;
    std::array<Real, detail::kNumWords> w_f;

    NumValue curvature() const { return exact ? NumValue(r_q) : NumValue(r_f); }
};

inline LadderBinding bind_ladder(const CurvLadder& ladder, const Point& p, EvalMode mode) {
    auto vals = ladder.evaluate(p, mode);
    LadderBinding b;
    b.exact = true;
    for (const auto& [k, v] : vals) b.exact = b.exact && v.exact();
    if (b.exact) {
        b.r_q = vals.at({0, 0}).rat();
        for (const auto& [k, v] : vals) {
            if (k.first + k.second == 0) continue;
            b.w_q[static_cast<size_t>(detail::word_id(RWord{k.first, k.second}))] = v.rat();
        }
    } else {
        b.r_f = vals.at({0, 0}).real();
        for (const auto& [k, v] : vals) {
            if (k.first + k.second == 0) continue;
            b.w_f[static_cast<size_t>(detail::word_id(RWord{k.first, k.second}))] = v.real();
        }
    }
    return b;
}

// evaluates the coefficients of an SPoly under the binding; the float path
// runs at the high working precision and rounds once at the end
inline QPoly eval_spoly(const SPoly& p, const LadderBinding& b) {
    if (b.exact) return QPoly(p.eval_coeffs<Rat>(b.r_q, b.w_q));
    auto coeffs = p.eval_coeffs<Real>(b.r_f, b.w_f);
    std::vector<double> d;
    d.reserve(coeffs.size());
    for (const auto& c : coeffs) d.push_back(c.to_double());
    return QPoly(std::move(d));
}

struct TowerValues {
    bool exact = true;
    NumValue curvature;
    QPoly A, B, C, D;
    std::array<QPoly, 7> q;      // scaled to agree with the stored symbolic polynomials
    std::array<QPoly, 4> row_a, row_b, row_c, row_d;
};

// Per-point evaluation: the seven polynomials are assembled from the small
// cached pieces by the same formulas as the symbolic build, so it works on
// a cache-loaded tower without materializing the large polynomials.
inline TowerValues evaluate_tower(const Tower& t, const LadderBinding& b) {
    if (b.curvature().is_zero()) throw ParallelizableSignal();
    TowerValues out;
    out.exact = b.exact;
    out.curvature = b.curvature();

    auto ev = [&](const SPoly& p) { return eval_spoly(p, b); };
    for (int i = 0; i < 4; ++i) {
        out.row_a[static_cast<size_t>(i)] = ev(t.rows[static_cast<size_t>(i)].a);
        out.row_b[static_cast<size_t>(i)] = ev(t.rows[static_cast<size_t>(i)].b);
        out.row_c[static_cast<size_t>(i)] = ev(t.rows[static_cast<size_t>(i)].c);
        out.row_d[static_cast<size_t>(i)] = ev(t.rows[static_cast<size_t>(i)].d);
    }
    QPoly A = ev(t.A), B = ev(t.B), C = ev(t.C), D = ev(t.D);
    out.A = A;
    out.B = B;
    out.C = C;
    out.D = D;

    QPoly dA = A.derivative(), dB = B.derivative(), dD = D.derivative();
    QPoly n1A = ev(t.A.nabla(1)), n2A = ev(t.A.nabla(2));
    QPoly n1B = ev(t.B.nabla(1)), n2B = ev(t.B.nabla(2));
    QPoly n1D = ev(t.D.nabla(1)), n2D = ev(t.D.nabla(2));

    auto parts = towerdetail::phi_parts(t.phi);
    QPoly t0 = ev(parts.t0), t1 = ev(parts.t1), t2 = ev(parts.t2);
    QPoly alpha = ev(t.alpha), beta = ev(t.beta), gamma = ev(t.gamma);
    QPoly alpha_h = ev(t.alpha_h), beta_h = ev(t.beta_h), gamma_h = ev(t.gamma_h);

    NumValue Rv = b.curvature();
    NumValue R1v = b.exact ? NumValue(b.w_q[static_cast<size_t>(detail::word_id(RWord{1, 0}))])
                           : NumValue(b.w_f[static_cast<size_t>(detail::word_id(RWord{1, 0}))]);
    NumValue R2v = b.exact ? NumValue(b.w_q[static_cast<size_t>(detail::word_id(RWord{0, 1}))])
                           : NumValue(b.w_f[static_cast<size_t>(detail::word_id(RWord{0, 1}))]);
    auto scalar = [&](const NumValue& v) {
        return v.exact() ? QPoly(std::vector<Rat>{v.rat()}) : QPoly(std::vector<double>{v.to_double()});
    };
    auto scalar_mul = [&](const NumValue& v, const QPoly& p) { return scalar(v) * p; };
    QPoly s = b.exact ? QPoly(std::vector<Rat>{Rat(0), Rat(1)}) : QPoly(std::vector<double>{0.0, 1.0});

    QPoly AB = A * B, A2 = A * A, B2 = B * B, D2 = D * D;
    QPoly dA_B = dA * B;

    out.q[0] = AB - C * D;
    out.q[1] = (A * dB - dA * B) + (n1B * D - B * n1D) - (n2A * D - A * n2D) - scalar_mul(Rv, s * D2);

    QPoly X21 = dA_B + D * n2A - A * n2D;
    QPoly sub21 = D * X21 - dD * AB;

    QPoly X3 = Rat(2) * dA_B - dB * B + D * (Rat(2) * n2A - n2B) - (Rat(2) * A - B) * n2D;
    QPoly W3 = s * (Rat(2) * A - B) + D * (scalar_mul(Rv, s) + scalar(R2v));
    out.q[2] = (D * X3 - dD * (Rat(2) * AB - B2)) + D2 * W3;

    QPoly X4 = Rat(2) * dA_B - dA * A + D * (Rat(2) * n2A - n1A) - A * (Rat(2) * n2D - n1D);
    QPoly W4 = s * (A - Rat(2) * B) + D * (scalar_mul(Rv, s) + scalar(R1v));
    out.q[3] = (D * X4 - dD * (Rat(2) * AB - A2)) + D2 * W4;

    out.q[4] = Rat(-24) * scalar_mul(Rv, sub21) + D2 * (t1 * A + t2 * B + t0 * D);

    out.q[5] = Rat(24) * scalar_mul(Rv, B2) - Rat(48) * scalar_mul(Rv, AB) + (alpha * A + beta * B) * D +
               gamma * D2;
    out.q[6] = Rat(-24) * scalar_mul(Rv, A2) + Rat(48) * scalar_mul(Rv, AB) + (alpha_h * A + beta_h * B) * D +
               gamma_h * D2;

    for (int i = 0; i < 7; ++i)
        out.q[static_cast<size_t>(i)] = t.q_scale[static_cast<size_t>(i)] * out.q[static_cast<size_t>(i)];
    return out;
}

}  // namespace weblin
