#pragma once

#include <fstream>
#include <sstream>

#include "weblin/reference_tables.hpp"
#include "weblin/tower.hpp"

namespace weblin {

inline constexpr const char* kPipelineId = "weblin-tower-1";

namespace towerdetail {

inline void check_degree(const SPoly& p, int cap, const char* what) {
    if (p.degree() > cap) {
        std::ostringstream os;
        os << what << ": degree " << p.degree() << " exceeds cap " << cap;
        throw tower_error(os.str());
    }
}

// every coefficient of s^k must be weight homogeneous of (base - k)
inline void check_weights(const SPoly& p, int base, const char* what) {
    for (int k = 0; k <= p.degree(); ++k) {
        if (p.coeff(k).is_zero()) continue;
        auto w = p.coeff(k).weight();
        if (!w || *w != base - k) {
            std::ostringstream os;
            os << what << ": coefficient of s^" << k << " is not weight " << base - k;
            throw tower_error(os.str());
        }
    }
}

// splits phi as -24R s21 + t1(s) s1 + t2(s) s2 + t0(s)
struct PhiParts {
    SPoly t0, t1, t2;
};

inline PhiParts phi_parts(const JetPoly& phi) {
    PhiParts out;
    for (const auto& [m, c] : phi.terms()) {
        if (m.s21) continue;
        SPoly part = SPoly::s_power(m.s, c);
        if (m.s1 == 1 && m.s2 == 0)
            out.t1 += part;
        else if (m.s1 == 0 && m.s2 == 1)
            out.t2 += part;
        else if (m.s1 == 0 && m.s2 == 0)
            out.t0 += part;
        else
            throw tower_error("phi: unexpected monomial while splitting");
    }
    return out;
}

// content removal and a deterministic sign: the first monomial of the
// leading coefficient gets a positive rational. Returns the factor f with
// stored = f * raw.
inline Rat normalize_poly(SPoly& p) {
    Rat g = p.content();
    if (is_zero(g) || p.is_zero()) return Rat(1);
    p.divide_content(g);
    Rat f = Rat(1) / g;
    const RAlg& lead = p.coeff(p.degree());
    std::vector<std::pair<RMono, Rat>> sorted(lead.terms().begin(), lead.terms().end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    if (sgn(sorted.front().second) < 0) {
        p = -p;
        f = -f;
    }
    return f;
}

}  // namespace towerdetail

// The seven obstruction polynomials assembled from the Cramer data; shared
// between the symbolic build and (through its numeric counterpart in the
// evaluation path) the per-point assembly. All products keep the small
// operand first.
struct QAssembly {
    // inputs
    SPoly A, B, C, D;
    SPoly dA, dB, dD;              // d/ds
    SPoly n1A, n2A, n1B, n1D, n2D, n2B;  // covariant coefficient derivatives
    SPoly alpha, beta, gamma, alpha_h, beta_h, gamma_h;
    SPoly t0, t1, t2;  // phi = -24R s21 + t1 s1 + t2 s2 + t0

    std::array<SPoly, 7> run() const {
        const RAlg R = RAlg::curvature();
        const RAlg R1 = RAlg::word(RWord{1, 0});
        const RAlg R2 = RAlg::word(RWord{0, 1});
        SPoly s = SPoly::s_power(1);
        SPoly AB = A * B;
        SPoly A2 = A * A;
        SPoly B2 = B * B;
        SPoly D2 = D * D;
        SPoly dA_B = dA * B;
        std::array<SPoly, 7> q;

        // Q1: the product constraint F G = H cleared by D^2
        q[0] = AB - C * D;

        // Q2: compatibility s_12 - s_21 = R s of the first-order system
        q[1] = (A * dB - dA * B) + (n1B * D - B * n1D) - (n2A * D - A * n2D) - R * (s * D2);

        // s21 D^3 = D (dA B + D n2A - A n2D) - dD (A B), similarly s22, s11
        SPoly X21 = dA_B + D * n2A - A * n2D;
        SPoly sub21 = D * X21 - dD * AB;

        // Q3 = 2 s21 - s22 - s s2 + 2 s s1 + R s + R_2, cleared by D^3
        SPoly X3 = Rat(2) * dA_B - dB * B + D * (Rat(2) * n2A - n2B) - (Rat(2) * A - B) * n2D;
        SPoly W3 = s * (Rat(2) * A - B) + D * (R * s + SPoly(R2));
        q[2] = (D * X3 - dD * (Rat(2) * AB - B2)) + D2 * W3;

        // Q4 = 2 s21 - s11 - 2 s s2 + s s1 + R s + R_1, cleared by D^3
        SPoly X4 = Rat(2) * dA_B - dA * A + D * (Rat(2) * n2A - n1A) - A * (Rat(2) * n2D - n1D);
        SPoly W4 = s * (A - Rat(2) * B) + D * (R * s + SPoly(R1));
        q[3] = (D * X4 - dD * (Rat(2) * AB - A2)) + D2 * W4;

        // Q5: phi along the solution, cleared by D^3
        q[4] = Rat(-24) * (R * sub21) + D2 * (t1 * A + t2 * B + t0 * D);

        // Q6, Q7: the psi pair along the solution, cleared by D^2
        q[5] = Rat(24) * (R * B2) - Rat(48) * (R * AB) + (alpha * A + beta * B) * D + gamma * D2;
        q[6] = Rat(-24) * (R * A2) + Rat(48) * (R * AB) + (alpha_h * A + beta_h * B) * D + gamma_h * D2;
        return q;
    }
};

inline QAssembly make_q_assembly(const Tower& t) {
    QAssembly qa;
    qa.A = t.A;
    qa.B = t.B;
    qa.C = t.C;
    qa.D = t.D;
    qa.dA = t.A.dds();
    qa.dB = t.B.dds();
    qa.dD = t.D.dds();
    qa.n1A = t.A.nabla(1);
    qa.n2A = t.A.nabla(2);
    qa.n1B = t.B.nabla(1);
    qa.n2B = t.B.nabla(2);
    qa.n1D = t.D.nabla(1);
    qa.n2D = t.D.nabla(2);
    qa.alpha = t.alpha;
    qa.beta = t.beta;
    qa.gamma = t.gamma;
    qa.alpha_h = t.alpha_h;
    qa.beta_h = t.beta_h;
    qa.gamma_h = t.gamma_h;
    auto parts = towerdetail::phi_parts(t.phi);
    qa.t0 = parts.t0;
    qa.t1 = parts.t1;
    qa.t2 = parts.t2;
    return qa;
}

// Builds the seven symbolic polynomials from the cached small data,
// normalizes them and records degrees and normalization factors on the
// tower. The heavy step: minutes of exact arithmetic.
inline void materialize_qs(Tower& t, std::ostream* log = nullptr) {
    auto caps = Tower::q_degree_caps();
    std::array<SPoly, 7> q = make_q_assembly(t).run();
    for (int i = 0; i < 7; ++i) {
        auto& qi = q[static_cast<size_t>(i)];
        t.q_scale[static_cast<size_t>(i)] = towerdetail::normalize_poly(qi);
        towerdetail::check_degree(qi, caps[static_cast<size_t>(i)], "Q");
        int base = 0;
        for (int k = 0; k <= qi.degree(); ++k)
            if (auto cw = qi.coeff_weight(k)) {
                base = *cw + k;
                break;
            }
        towerdetail::check_weights(qi, base, "Q");
        t.q_degree[static_cast<size_t>(i)] = qi.degree();
        if (log) (*log) << "tower: Q" << i + 1 << " degree " << qi.degree() << "\n";
        t.Q[static_cast<size_t>(i)] = std::move(qi);
    }
    t.qs_materialized = true;
}

inline Tower build_tower(std::ostream* log = nullptr, bool with_qs = true) {
    auto note = [&](const std::string& s) {
        if (log) (*log) << "tower: " << s << "\n";
    };
    Tower t;
    t.pipeline_id = kPipelineId;

    t.phi = build_phi();
    JetPoly phi_p2 = derive_phi_from_p2();
    auto lam = towerdetail::proportionality(t.phi, phi_p2);
    if (!lam || is_zero(*lam)) throw tower_error("the two phi derivations are not proportional");
    t.phi_p2_ratio = *lam;
    note("phi derived; residual-route ratio " + rat_str(*lam));

    PsiPair pp = build_psi(t.phi);
    t.psi1 = pp.psi1;
    t.psi2 = pp.psi2;
    if (t.psi1.weight().weight != 6 || t.psi2.weight().weight != 6)
        throw tower_error("psi pair is not weight-6 homogeneous");
    if (!(t.psi2 == t.psi1.mirror())) throw tower_error("psi2 is not the mirror image of psi1");
    PsiShape s1 = psi_shape(t.psi1, false);
    PsiShape s2 = psi_shape(t.psi2, true);
    t.alpha = s1.alpha;
    t.beta = s1.beta;
    t.gamma = s1.gamma;
    t.alpha_h = s2.alpha;
    t.beta_h = s2.beta;
    t.gamma_h = s2.gamma;
    note("psi pair derived");

    t.rows = derive_S(t.phi, t.psi1, t.psi2);
    if (!(row_to_jet(t.rows[2]) == row_to_jet(t.rows[1]).mirror()))
        throw tower_error("row 3 is not the mirror image of row 2");
    if (!(row_to_jet(t.rows[3]) == row_to_jet(t.rows[0]).mirror()))
        throw tower_error("row 4 is not the mirror image of row 1");
    for (int i = 0; i < 4; ++i) {
        const SRow& r = t.rows[static_cast<size_t>(i)];
        using towerdetail::check_degree;
        using towerdetail::check_weights;
        check_degree(r.a, 3, "row a");
        check_degree(r.b, 3, "row b");
        check_degree(r.c, (i == 0 || i == 3) ? 1 : 0, "row c");
        check_degree(r.d, (i == 0 || i == 3) ? 5 : 4, "row d");
        check_weights(r.a, 5, "row a");
        check_weights(r.b, 5, "row b");
        check_weights(r.c, 3, "row c");
        check_weights(r.d, 7, "row d");
    }
    note("system rows derived");

    std::array<std::array<SPoly, 4>, 4> m4;
    for (int i = 0; i < 4; ++i)
        m4[static_cast<size_t>(i)] = {t.rows[static_cast<size_t>(i)].a, t.rows[static_cast<size_t>(i)].b,
                                      t.rows[static_cast<size_t>(i)].c, t.rows[static_cast<size_t>(i)].d};
    if (!det4(m4).is_zero()) throw tower_error("the 4x4 determinant of S is not identically zero");
    note("4x4 determinant vanishes");

    std::array<std::array<SPoly, 3>, 3> m;
    for (int i = 0; i < 3; ++i)
        m[static_cast<size_t>(i)] = {t.rows[static_cast<size_t>(i)].a, t.rows[static_cast<size_t>(i)].b,
                                     t.rows[static_cast<size_t>(i)].c};
    t.D = det3(m);
    auto with_col = [&](int col) {
        auto mc = m;
        for (int i = 0; i < 3; ++i)
            mc[static_cast<size_t>(i)][static_cast<size_t>(col)] = t.rows[static_cast<size_t>(i)].d;
        return det3(mc);
    };
    t.A = with_col(0);
    t.B = with_col(1);
    t.C = with_col(2);
    towerdetail::check_degree(t.D, 7, "D");
    towerdetail::check_degree(t.A, 8, "A");
    towerdetail::check_degree(t.B, 8, "B");
    towerdetail::check_degree(t.C, 11, "C");
    towerdetail::check_weights(t.D, 13, "D");
    towerdetail::check_weights(t.A, 15, "A");
    towerdetail::check_weights(t.B, 15, "B");
    towerdetail::check_weights(t.C, 17, "C");
    note("Cramer determinants: degrees (" + std::to_string(t.A.degree()) + "," + std::to_string(t.B.degree()) +
         "," + std::to_string(t.C.degree()) + "," + std::to_string(t.D.degree()) + ")");

    // errata ledger against the published tables
    auto report = [&](const std::string& table, const std::string& where, const std::string& ref,
                      const std::string& der) { t.errata.push_back(ErrataEntry{table, where, ref, der}); };
    compare_with_reference_jet("eq9_phi", 5, reftables::phi_text(), t.phi, report);
    compare_with_reference("alpha", 4, reftables::alpha_text(), t.alpha, false, report);
    compare_with_reference("beta", 4, reftables::beta_text(), t.beta, false, report);
    compare_with_reference("gamma", 6, reftables::gamma_text(), t.gamma, false, report);
    compare_with_reference("alpha_hat", 4, reftables::alpha_hat_text(), t.alpha_h, false, report);
    compare_with_reference("beta_hat", 4, reftables::beta_hat_text(), t.beta_h, false, report);
    compare_with_reference("gamma_hat", 6, reftables::gamma_hat_text(), t.gamma_h, false, report);
    const char* row_tables[3][4] = {
        {reftables::a1_text(), reftables::b1_text(), reftables::c1_text(), reftables::d1_text()},
        {reftables::a2_text(), reftables::b2_text(), reftables::c2_text(), reftables::d2_text()},
        {reftables::a3_text(), reftables::b3_text(), reftables::c3_text(), reftables::d3_text()},
    };
    for (int i = 0; i < 3; ++i) {
        std::string n = std::to_string(i + 1);
        compare_with_reference("a" + n, 5, row_tables[i][0], t.rows[static_cast<size_t>(i)].a, false, report);
        compare_with_reference("b" + n, 5, row_tables[i][1], t.rows[static_cast<size_t>(i)].b, false, report);
        compare_with_reference("c" + n, 3, row_tables[i][2], t.rows[static_cast<size_t>(i)].c, false, report);
        compare_with_reference("d" + n, 7, row_tables[i][3], t.rows[static_cast<size_t>(i)].d, true, report);
    }
    note("errata ledger: " + std::to_string(t.errata.size()) + " entries");

    if (with_qs) materialize_qs(t, log);
    return t;
}

// ---------------------------------------------------------------------------
// cache: stores everything except the seven large polynomials, which are
// reassembled on demand from the rows; their degrees and normalization
// factors are recorded so evaluation and reports do not need them.

inline void save_tower(const Tower& t, std::ostream& os) {
    os << "weblin-tower-cache v1 pipeline=" << t.pipeline_id << "\n";
    auto jet = [&](const char* name, const JetPoly& p) { os << "@jet " << name << "\n" << p.str() << "\n"; };
    auto spoly = [&](const std::string& name, const SPoly& p) {
        os << "@spoly " << name << "\n" << p.str() << "\n@end\n";
    };
    jet("phi", t.phi);
    jet("psi1", t.psi1);
    jet("psi2", t.psi2);
    os << "@ratio " << rat_str(t.phi_p2_ratio) << "\n";
    os << "@qmeta";
    for (int i = 0; i < 7; ++i)
        os << ' ' << t.q_degree[static_cast<size_t>(i)] << ' ' << rat_str(t.q_scale[static_cast<size_t>(i)]);
    os << "\n";
    spoly("alpha", t.alpha);
    spoly("beta", t.beta);
    spoly("gamma", t.gamma);
    spoly("alpha_hat", t.alpha_h);
    spoly("beta_hat", t.beta_h);
    spoly("gamma_hat", t.gamma_h);
    for (int i = 0; i < 4; ++i) {
        std::string n = std::to_string(i + 1);
        spoly("row" + n + ".a", t.rows[static_cast<size_t>(i)].a);
        spoly("row" + n + ".b", t.rows[static_cast<size_t>(i)].b);
        spoly("row" + n + ".c", t.rows[static_cast<size_t>(i)].c);
        spoly("row" + n + ".d", t.rows[static_cast<size_t>(i)].d);
    }
    spoly("A", t.A);
    spoly("B", t.B);
    spoly("C", t.C);
    spoly("D", t.D);
    for (const auto& e : t.errata)
        os << "@erratum " << e.table << " | " << e.monomial << " | " << e.reference << " | " << e.derived << "\n";
    os << "@done\n";
}

inline Tower load_tower(std::istream& is) {
    Tower t;
    std::string line;
    if (!std::getline(is, line)) throw tower_error("cache: empty file");
    std::string expect = std::string("weblin-tower-cache v1 pipeline=") + kPipelineId;
    if (line != expect) throw tower_error("cache: manifest mismatch");
    t.pipeline_id = kPipelineId;
    bool done = false;
    while (std::getline(is, line)) {
        if (line == "@done") {
            done = true;
            break;
        }
        if (line.rfind("@jet ", 0) == 0) {
            std::string name = line.substr(5);
            std::string body;
            if (!std::getline(is, body)) throw tower_error("cache: truncated jet section");
            JetPoly p = JetPoly::parse(body);
            if (name == "phi")
                t.phi = p;
            else if (name == "psi1")
                t.psi1 = p;
            else if (name == "psi2")
                t.psi2 = p;
            else
                throw tower_error("cache: unknown jet section " + name);
        } else if (line.rfind("@ratio ", 0) == 0) {
            t.phi_p2_ratio = parse_rat(line.substr(7));
        } else if (line.rfind("@qmeta", 0) == 0) {
            std::istringstream qs(line.substr(6));
            for (int i = 0; i < 7; ++i) {
                std::string deg, sc;
                if (!(qs >> deg >> sc)) throw tower_error("cache: short qmeta line");
                t.q_degree[static_cast<size_t>(i)] = std::stoi(deg);
                t.q_scale[static_cast<size_t>(i)] = parse_rat(sc);
            }
        } else if (line.rfind("@spoly ", 0) == 0) {
            std::string name = line.substr(7);
            std::string body, row;
            while (std::getline(is, row) && row != "@end") {
                if (!body.empty()) body += "\n";
                body += row;
            }
            SPoly p = body.empty() ? SPoly() : SPoly::parse(body);
            auto set_row = [&](int i, char part) {
                SRow& r = t.rows[static_cast<size_t>(i)];
                (part == 'a'   ? r.a
                 : part == 'b' ? r.b
                 : part == 'c' ? r.c
                               : r.d) = p;
            };
            if (name == "alpha")
                t.alpha = p;
            else if (name == "beta")
                t.beta = p;
            else if (name == "gamma")
                t.gamma = p;
            else if (name == "alpha_hat")
                t.alpha_h = p;
            else if (name == "beta_hat")
                t.beta_h = p;
            else if (name == "gamma_hat")
                t.gamma_h = p;
            else if (name.rfind("row", 0) == 0 && name.size() == 6)
                set_row(name[3] - '1', name[5]);
            else if (name == "A")
                t.A = p;
            else if (name == "B")
                t.B = p;
            else if (name == "C")
                t.C = p;
            else if (name == "D")
                t.D = p;
            else
                throw tower_error("cache: unknown spoly section " + name);
        } else if (line.rfind("@erratum ", 0) == 0) {
            std::string rest = line.substr(9);
            ErrataEntry e;
            auto next = [&rest]() {
                auto bar = rest.find(" | ");
                std::string tok = bar == std::string::npos ? rest : rest.substr(0, bar);
                rest = bar == std::string::npos ? std::string() : rest.substr(bar + 3);
                return tok;
            };
            e.table = next();
            e.monomial = next();
            e.reference = next();
            e.derived = next();
            t.errata.push_back(std::move(e));
        } else if (!line.empty()) {
            throw tower_error("cache: unexpected line '" + line + "'");
        }
    }
    if (!done) throw tower_error("cache: truncated file");
    t.qs_materialized = false;
    return t;
}

inline bool tower_equal(const Tower& a, const Tower& b, bool with_qs = true) {
    if (!(a.phi == b.phi && a.psi1 == b.psi1 && a.psi2 == b.psi2)) return false;
    for (int i = 0; i < 4; ++i) {
        const SRow &x = a.rows[static_cast<size_t>(i)], &y = b.rows[static_cast<size_t>(i)];
        if (!(x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d)) return false;
    }
    if (!(a.A == b.A && a.B == b.B && a.C == b.C && a.D == b.D)) return false;
    if (with_qs)
        for (int i = 0; i < 7; ++i)
            if (!(a.Q[static_cast<size_t>(i)] == b.Q[static_cast<size_t>(i)])) return false;
    return a.alpha == b.alpha && a.beta == b.beta && a.gamma == b.gamma && a.alpha_h == b.alpha_h &&
           a.beta_h == b.beta_h && a.gamma_h == b.gamma_h && a.phi_p2_ratio == b.phi_p2_ratio &&
           a.q_degree == b.q_degree && a.q_scale == b.q_scale;
}

// Loads the cached tower, rebuilding (and rewriting the cache) when the
// file is missing, unreadable, or carries a different pipeline id.
inline Tower load_or_build_tower(const std::string& cache_path, std::ostream* log = nullptr,
                                 bool force_rebuild = false) {
    if (!force_rebuild && !cache_path.empty()) {
        std::ifstream in(cache_path);
        if (in) {
            try {
                return load_tower(in);
            } catch (const std::exception& e) {
                if (log) (*log) << "tower: cache unusable (" << e.what() << "); rebuilding\n";
            }
        }
    }
    Tower t = build_tower(log);
    if (!cache_path.empty()) {
        std::ofstream out(cache_path);
        if (out) save_tower(t, out);
    }
    return t;
}

}  // namespace weblin
