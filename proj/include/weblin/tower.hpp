#pragma once

#include <array>
#include <functional>
#include <iostream>
#include <string>

#include "weblin/spoly.hpp"

namespace weblin {

// The web-independent obstruction tower: the first obstruction phi, the
// second-level pair (psi1, psi2), the linear system S in (s_1, s_2, s_1 s_2)
// obtained by differentiating them, the Cramer determinants (A, B, C, D) of
// its first three rows, and the seven polynomials Q_1..Q_7 in s whose common
// zeros are the admissible bases. Derived once in the abstract
// curvature-word algebra; per-web work is evaluation only.

struct SRow {
    SPoly a, b, c, d;  // a s1 + b s2 + c s1 s2 = d
};

struct ErrataEntry {
    std::string table;      // which published table
    std::string monomial;   // where
    std::string reference;  // printed reading
    std::string derived;    // derivation result
};

struct tower_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Tower {
    JetPoly phi;                  // weight 5, s_21 coefficient -24 R
    JetPoly psi1, psi2;           // weight 6, s_21-free
    SPoly alpha, beta, gamma;     // psi1 = 24R s2^2 - 48R s1 s2 + alpha s1 + beta s2 + gamma
    SPoly alpha_h, beta_h, gamma_h;
    std::array<SRow, 4> rows;
    SPoly A, B, C, D;             // Cramer data of rows 1..3
    std::array<SPoly, 7> Q;       // materialized on build; reassembled from the rows after a cache load
    bool qs_materialized = false;
    std::array<int, 7> q_degree{};
    std::array<Rat, 7> q_scale{Rat(1), Rat(1), Rat(1), Rat(1), Rat(1), Rat(1), Rat(1)};
    Rat phi_p2_ratio;             // scale between the two phi derivations
    std::vector<ErrataEntry> errata;
    std::string pipeline_id;

    static std::array<int, 7> q_degree_caps() { return {18, 15, 23, 23, 24, 17, 17}; }
};

namespace towerdetail {

inline RawPoly p2_residual(int which) {
    // which = 1: 2 s21 - s22 -   s s2 + 2 s s1 + R s + R_2
    // which = 2: 2 s21 - s11 - 2 s s2 +   s s1 + R s + R_1
    RawPoly r = Rat(2) * RawPoly::jet("21");
    r -= RawPoly::jet(which == 1 ? "22" : "11");
    r -= Rat(which == 1 ? 1 : 2) * (RawPoly::jet("") * RawPoly::jet("2"));
    r += Rat(which == 1 ? 2 : 1) * (RawPoly::jet("") * RawPoly::jet("1"));
    r += RawPoly::jet("", RAlg::curvature());
    r += RawPoly{RAlg::word(which == 1 ? RWord{0, 1} : RWord{1, 0})};
    return r;
}

// single rational scale lambda with q == lambda * p, if one exists
inline std::optional<Rat> proportionality(const JetPoly& p, const JetPoly& q) {
    if (p.is_zero()) return q.is_zero() ? std::optional<Rat>(Rat(0)) : std::nullopt;
    if (q.is_zero()) return std::nullopt;
    const auto& [m0, c0] = *p.terms().begin();
    auto it = q.terms().find(m0);
    if (it == q.terms().end()) return std::nullopt;
    // both coefficients must be parallel RAlg elements; compare one monomial
    const auto& [rm0, rc0] = *c0.terms().begin();
    auto jt = it->second.terms().find(rm0);
    if (jt == it->second.terms().end()) return std::nullopt;
    Rat lambda = jt->second / rc0;
    JetPoly diff = q - lambda * p;
    if (!diff.is_zero()) return std::nullopt;
    return lambda;
}

// the s_21 coefficient of p, which must be lambda * R with lambda rational
inline Rat s21_lead_over_R(const JetPoly& p) {
    JetPoly lead = p.coeff_of(0, 0, 1);
    if (lead.size() != 1) throw tower_error("phi: s_21 coefficient is not a single term");
    const auto& [m, c] = *lead.terms().begin();
    if (m.s != 0 || c.size() != 1) throw tower_error("phi: s_21 coefficient has the wrong shape");
    const auto& [rm, rc] = *c.terms().begin();
    RMono expect;
    expect.rexp = 1;
    if (!(rm == expect)) throw tower_error("phi: s_21 coefficient is not rational * R");
    return rc;
}

}  // namespace towerdetail

// First obstruction from the commutator route: the defect of the
// permutation rule on s_21 under the solved third-order reductions. The
// lift of a 3rd-order solution to 4th order exists exactly when this
// vanishes; normalized so the s_21 coefficient is -24 R.
inline JetPoly build_phi() {
    JetPoly s21 = JetPoly::S21();
    JetPoly defect = s21.derive(2).derive(1) - s21.derive(1).derive(2) -
                     Rat(3) * (RAlg::curvature() * s21);
    Rat lead = towerdetail::s21_lead_over_R(defect);
    JetPoly phi = (Rat(-24) / lead) * defect;
    auto w = phi.weight();
    if (w.weight != 5) throw tower_error("phi is not weight-5 homogeneous");
    return phi;
}

// Independent route: the displayed combination of second covariant
// derivatives of the two second-order residuals,
//   nabla_11[R^1] - 2 nabla_12[R^1] + 2 nabla_12[R^2] - nabla_22[R^2],
// with all 4th-order jet words removed by the permutation rule alone (they
// must cancel identically) and the remainder pushed through the prolonged
// system. Returned unnormalized; proportional to build_phi().
inline JetPoly derive_phi_from_p2() {
    using towerdetail::p2_residual;
    RawPoly r1 = p2_residual(1), r2 = p2_residual(2);
    auto dd = [](const RawPoly& p, int i, int j) { return p.derive_raw(j).derive_raw(i); };
    RawPoly comb = dd(r1, 1, 1) - Rat(2) * dd(r1, 1, 2) + Rat(2) * dd(r2, 1, 2) - dd(r2, 2, 2);
    RawPoly sorted = comb.perm_sorted();
    RawPoly len4 = sorted.split_len(4);
    if (!len4.is_zero()) throw tower_error("phi derivation: 4th-order jet words did not cancel");
    return normalize(sorted);
}

struct PsiPair {
    JetPoly psi1, psi2;
};

// Second obstruction pair:
//   psi1 = 24 R [nabla P2]_1 + [nabla phi]_2 - 2 [nabla phi]_1
//   psi2 = 24 R [nabla P2]_2 + [nabla phi]_1 - 2 [nabla phi]_2
// reduced to canonical variables and with s_21 eliminated through phi = 0.
inline PsiPair build_psi(const JetPoly& phi) {
    using towerdetail::p2_residual;
    JetPoly np1 = normalize(p2_residual(1).derive_raw(1));
    JetPoly np2 = normalize(p2_residual(2).derive_raw(2));
    // both normalize to zero: the reduction rules encode the prolonged
    // system, so the residual derivative contributes nothing beyond them
    if (!np1.is_zero() || !np2.is_zero()) throw tower_error("psi: nabla P2 residual did not normalize to zero");

    const RAlg R = RAlg::curvature();
    JetPoly psi1 = Rat(24) * (R * np1) + phi.derive(2) - Rat(2) * phi.derive(1);
    JetPoly psi2 = Rat(24) * (R * np2) + phi.derive(1) - Rat(2) * phi.derive(2);
    psi1 = eliminate_s21(psi1, phi);
    psi2 = eliminate_s21(psi2, phi);
    return {psi1, psi2};
}

// splits psi into its Lemma shape 24R s2^2 - 48R s1 s2 + alpha s1 + beta s2
// + gamma (hatted variant mirrored); throws on any other monomial
struct PsiShape {
    SPoly alpha, beta, gamma;
};

inline PsiShape psi_shape(const JetPoly& psi, bool hatted) {
    PsiShape out;
    const RAlg R = RAlg::curvature();
    for (const auto& [m, c] : psi.terms()) {
        if (m.s21) throw tower_error("psi shape: s_21 survived");
        SPoly part = SPoly::s_power(m.s, c);
        if (m.s1 == 0 && m.s2 == 0) {
            out.gamma += part;
        } else if (m.s1 == 1 && m.s2 == 0) {
            out.alpha += part;
        } else if (m.s1 == 0 && m.s2 == 1) {
            out.beta += part;
        } else if (!hatted && m.s1 == 0 && m.s2 == 2 && m.s == 0) {
            if (!(c == Rat(24) * R)) throw tower_error("psi1: s2^2 coefficient is not 24R");
        } else if (!hatted && m.s1 == 1 && m.s2 == 1 && m.s == 0) {
            if (!(c == Rat(-48) * R)) throw tower_error("psi1: s1 s2 coefficient is not -48R");
        } else if (hatted && m.s1 == 2 && m.s2 == 0 && m.s == 0) {
            if (!(c == Rat(-24) * R)) throw tower_error("psi2: s1^2 coefficient is not -24R");
        } else if (hatted && m.s1 == 1 && m.s2 == 1 && m.s == 0) {
            if (!(c == Rat(48) * R)) throw tower_error("psi2: s1 s2 coefficient is not 48R");
        } else {
            throw tower_error("psi shape: unexpected monomial");
        }
    }
    if (out.alpha.degree() > 2 || out.beta.degree() > 2 || out.gamma.degree() > 3)
        throw tower_error("psi shape: degree bounds violated");
    return out;
}

// Differentiates psi1, psi2 along both frame directions and reduces each to
// the linear form a s1 + b s2 + c s1 s2 = d. Row order: psi1_1, psi1_2,
// psi2_1, psi2_2.
inline std::array<SRow, 4> derive_S(const JetPoly& phi, const JetPoly& psi1, const JetPoly& psi2) {
    SquareEliminator elim(psi1, psi2);
    std::array<JetPoly, 4> raw = {psi1.derive(1), psi1.derive(2), psi2.derive(1), psi2.derive(2)};
    std::array<SRow, 4> rows;
    for (int i = 0; i < 4; ++i) {
        JetPoly reduced = elim.run(eliminate_s21(raw[static_cast<size_t>(i)], phi));
        LinearJetForm f = split_linear_form(reduced);
        rows[static_cast<size_t>(i)] = SRow{f.a, f.b, f.c, f.d};
    }
    return rows;
}

inline JetPoly row_to_jet(const SRow& r) {
    return r.a.to_jet() * JetPoly::S1() + r.b.to_jet() * JetPoly::S2() +
           r.c.to_jet() * (JetPoly::S1() * JetPoly::S2()) - r.d.to_jet();
}

}  // namespace weblin
