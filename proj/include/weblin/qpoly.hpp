#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <complex>
#include <vector>

#include "weblin/numvalue.hpp"

namespace weblin {

// Univariate polynomials with numeric coefficients. The exact (rational)
// path is primary: the linearizability verdicts are equality claims and are
// decided in exact arithmetic whenever the curvature ladder is rational at
// the point. The float path exists for the remaining webs and carries
// explicit tolerances.
class QPoly {
  public:
    QPoly() = default;
    explicit QPoly(std::vector<Rat> c) : exact_(true), q_(std::move(c)) { trim(); }
    explicit QPoly(std::vector<double> c) : exact_(false), f_(std::move(c)) { trim(); }
    explicit QPoly(std::vector<NumValue> c) {
        exact_ = true;
        for (const auto& v : c) exact_ = exact_ && v.exact();
        if (exact_)
            for (const auto& v : c) q_.push_back(v.rat());
        else
            for (const auto& v : c) f_.push_back(v.to_double());
        trim();
    }

    static QPoly constant(Rat c) { return QPoly(std::vector<Rat>{std::move(c)}); }
    // polynomial with the given rational roots (tests and reports)
    static QPoly from_roots(const std::vector<Rat>& roots) {
        QPoly p = constant(Rat(1));
        for (const auto& r : roots) p = p * QPoly(std::vector<Rat>{Rat(-r), Rat(1)});
        return p;
    }

    bool exact() const { return exact_; }
    bool is_zero() const { return exact_ ? q_.empty() : f_.empty(); }
    int degree() const { return static_cast<int>((exact_ ? q_.size() : f_.size())) - 1; }
    const std::vector<Rat>& rat_coeffs() const { return q_; }
    const std::vector<double>& dbl_coeffs() const { return f_; }

    Rat rat_coeff(int k) const {
        return k >= 0 && k < static_cast<int>(q_.size()) ? q_[static_cast<size_t>(k)] : Rat(0);
    }
    double dbl_coeff(int k) const {
        if (exact_) return rat_coeff(k).get_d();
        return k >= 0 && k < static_cast<int>(f_.size()) ? f_[static_cast<size_t>(k)] : 0.0;
    }

    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        if (a.is_zero() || b.is_zero()) return QPoly();
        if (a.exact_ && b.exact_) {
            std::vector<Rat> c(a.q_.size() + b.q_.size() - 1, Rat(0));
            for (size_t i = 0; i < a.q_.size(); ++i)
                for (size_t j = 0; j < b.q_.size(); ++j) c[i + j] += a.q_[i] * b.q_[j];
            return QPoly(std::move(c));
        }
        std::vector<double> c(static_cast<size_t>(a.degree() + b.degree() + 1), 0.0);
        for (int i = 0; i <= a.degree(); ++i)
            for (int j = 0; j <= b.degree(); ++j) c[static_cast<size_t>(i + j)] += a.dbl_coeff(i) * b.dbl_coeff(j);
        return QPoly(std::move(c));
    }

    friend QPoly operator+(const QPoly& a, const QPoly& b) {
        if (a.exact_ && b.exact_) {
            std::vector<Rat> c(static_cast<size_t>(std::max(a.degree(), b.degree()) + 1), Rat(0));
            for (size_t i = 0; i < c.size(); ++i) c[i] = a.rat_coeff(static_cast<int>(i)) + b.rat_coeff(static_cast<int>(i));
            return QPoly(std::move(c));
        }
        std::vector<double> c(static_cast<size_t>(std::max(a.degree(), b.degree()) + 1), 0.0);
        for (size_t i = 0; i < c.size(); ++i) c[i] = a.dbl_coeff(static_cast<int>(i)) + b.dbl_coeff(static_cast<int>(i));
        return QPoly(std::move(c));
    }
    friend QPoly operator-(const QPoly& a, const QPoly& b) { return a + (Rat(-1) * b); }
    friend QPoly operator*(const Rat& c, const QPoly& p) {
        if (p.exact_) {
            std::vector<Rat> v = p.q_;
            for (auto& x : v) x *= c;
            return QPoly(std::move(v));
        }
        std::vector<double> v = p.f_;
        for (auto& x : v) x *= c.get_d();
        return QPoly(std::move(v));
    }

    bool operator==(const QPoly& o) const {
        return exact_ == o.exact_ && q_ == o.q_ && f_ == o.f_;
    }

    QPoly derivative() const {
        if (exact_) {
            std::vector<Rat> c;
            for (size_t i = 1; i < q_.size(); ++i) c.push_back(Rat(static_cast<long>(i)) * q_[i]);
            return QPoly(std::move(c));
        }
        std::vector<double> c;
        for (size_t i = 1; i < f_.size(); ++i) c.push_back(static_cast<double>(i) * f_[i]);
        return QPoly(std::move(c));
    }

    QPoly monic() const {
        QPoly p = *this;
        if (p.is_zero()) return p;
        if (p.exact_) {
            Rat l = p.q_.back();
            for (auto& c : p.q_) c /= l;
        } else {
            double l = p.f_.back();
            for (auto& c : p.f_) c /= l;
        }
        return p;
    }

    Rat eval_rat(const Rat& x) const {
        Rat acc(0);
        for (size_t i = q_.size(); i-- > 0;) acc = acc * x + q_[i];
        return acc;
    }
    double eval_dbl(double x) const {
        double acc = 0;
        for (int i = degree(); i >= 0; --i) acc = acc * x + dbl_coeff(i);
        return acc;
    }
    std::complex<long double> eval_cld(std::complex<long double> x) const {
        std::complex<long double> acc = 0;
        for (int i = degree(); i >= 0; --i) acc = acc * x + static_cast<long double>(dbl_coeff(i));
        return acc;
    }

    std::string str(char var = 's') const {
        if (is_zero()) return "0";
        std::string out;
        for (int k = degree(); k >= 0; --k) {
            std::string c = exact_ ? rat_str(rat_coeff(k)) : std::to_string(dbl_coeff(k));
            if (exact_ && is_zero(rat_coeff(k))) continue;
            if (!out.empty()) out += " + ";
            if (k == 0) {
                out += c;
            } else {
                if (!(exact_ && rat_coeff(k) == 1)) out += c + "*";
                out += var;
                if (k > 1) out += "^" + std::to_string(k);
            }
        }
        return out;
    }

  private:
    static bool is_zero(const Rat& q) { return sgn(q) == 0; }
    void trim() {
        while (!q_.empty() && sgn(q_.back()) == 0) q_.pop_back();
        while (!f_.empty() && f_.back() == 0.0) f_.pop_back();
    }

    bool exact_ = true;
    std::vector<Rat> q_;
    std::vector<double> f_;
};

namespace polyalg {

// exact division, asserting a zero remainder
inline QPoly div_exact(const QPoly& num, const QPoly& den) {
    if (den.is_zero()) throw domain_error("polynomial division by zero");
    std::vector<Rat> r = num.rat_coeffs();
    const std::vector<Rat>& d = den.rat_coeffs();
    if (num.is_zero()) return QPoly();
    int dn = num.degree(), dd = den.degree();
    if (dn < dd) throw domain_error("div_exact: degree underflow");
    std::vector<Rat> q(static_cast<size_t>(dn - dd + 1), Rat(0));
    for (int k = dn - dd; k >= 0; --k) {
        Rat c = r[static_cast<size_t>(k + dd)] / d.back();
        q[static_cast<size_t>(k)] = c;
        if (sgn(c) == 0) continue;
        for (int j = 0; j <= dd; ++j) r[static_cast<size_t>(k + j)] -= c * d[static_cast<size_t>(j)];
    }
    for (const auto& c : r)
        if (sgn(c) != 0) throw domain_error("div_exact: nonzero remainder");
    return QPoly(std::move(q));
}

inline QPoly rem(const QPoly& num, const QPoly& den) {
    std::vector<Rat> r = num.rat_coeffs();
    const std::vector<Rat>& d = den.rat_coeffs();
    int dd = den.degree();
    for (int k = num.degree() - dd; k >= 0; --k) {
        Rat c = r[static_cast<size_t>(k + dd)] / d.back();
        if (sgn(c) == 0) continue;
        for (int j = 0; j <= dd; ++j) r[static_cast<size_t>(k + j)] -= c * d[static_cast<size_t>(j)];
    }
    r.resize(static_cast<size_t>(std::max(dd, 0)));
    return QPoly(std::move(r));
}

// primitive integer coefficients and the removed rational content
inline std::pair<std::vector<mpz_class>, Rat> primitive_int(const QPoly& p) {
    mpz_class den_lcm = 1;
    for (const auto& c : p.rat_coeffs()) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<mpz_class> z;
    mpz_class g = 0;
    for (const auto& c : p.rat_coeffs()) {
        mpz_class v = c.get_num() * (den_lcm / c.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        z.push_back(std::move(v));
    }
    if (g == 0) g = 1;
    for (auto& v : z) v /= g;
    Rat content(g, den_lcm);
    content.canonicalize();
    return {std::move(z), std::move(content)};
}

// subresultant polynomial remainder sequence GCD over the integers
inline QPoly gcd_exact(const QPoly& a, const QPoly& b) {
    if (a.is_zero() && b.is_zero()) throw domain_error("gcd(0, 0)");
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    auto [pz, pc] = primitive_int(a);
    auto [qz, qc] = primitive_int(b);
    auto deg = [](const std::vector<mpz_class>& v) { return static_cast<int>(v.size()) - 1; };
    auto trim = [](std::vector<mpz_class>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    };
    auto prem = [&](const std::vector<mpz_class>& u, const std::vector<mpz_class>& v) {
        // pseudo-remainder of u by v
        std::vector<mpz_class> r = u;
        int dv = deg(v);
        const mpz_class& lv = v.back();
        while (static_cast<int>(r.size()) - 1 >= dv && !r.empty()) {
            int dr = static_cast<int>(r.size()) - 1;
            mpz_class lr = r.back();
            for (auto& c : r) c *= lv;
            for (int j = 0; j <= dv; ++j) r[static_cast<size_t>(dr - dv + j)] -= lr * v[static_cast<size_t>(j)];
            trim(r);
            if (static_cast<int>(r.size()) - 1 == dr) throw std::logic_error("prem failed to reduce degree");
        }
        return r;
    };
    auto content_z = [](const std::vector<mpz_class>& v) {
        mpz_class g = 0;
        for (const auto& c : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        return g;
    };
    std::vector<mpz_class> u = pz, v = qz;
    if (deg(u) < deg(v)) std::swap(u, v);
    while (!v.empty()) {
        std::vector<mpz_class> r = prem(u, v);
        // primitive PRS keeps the integers small enough at these degrees
        mpz_class g = content_z(r);
        if (g != 0)
            for (auto& c : r) c /= g;
        u = std::move(v);
        v = std::move(r);
    }
    std::vector<Rat> out;
    out.reserve(u.size());
    for (const auto& c : u) out.emplace_back(c);
    return QPoly(std::move(out)).monic();
}

// squarefree part (exact): p / gcd(p, p')
inline QPoly squarefree(const QPoly& p) {
    if (p.degree() <= 0) return p.monic();
    QPoly g = gcd_exact(p, p.derivative());
    if (g.degree() == 0) return p.monic();
    return div_exact(p.monic(), g).monic();
}

// Yun's squarefree decomposition: returns factors f_1, f_2, ... with
// p ~ prod f_i^i (monic factors; constant factors trimmed)
inline std::vector<QPoly> squarefree_decomposition(const QPoly& p0) {
    QPoly p = p0.monic();
    std::vector<QPoly> out;
    if (p.degree() <= 0) return out;
    QPoly g = gcd_exact(p, p.derivative());
    if (g.degree() == 0) {
        out.push_back(p);
        return out;
    }
    QPoly w = div_exact(p, g);
    QPoly y = div_exact(p.derivative(), g);
    // iterate: a_i = gcd(w, y - w')
    while (w.degree() > 0) {
        std::vector<Rat> diff = y.rat_coeffs();
        QPoly wd = w.derivative();
        diff.resize(std::max(diff.size(), wd.rat_coeffs().size()), Rat(0));
        for (size_t i = 0; i < wd.rat_coeffs().size(); ++i) diff[i] -= wd.rat_coeffs()[i];
        QPoly z(std::move(diff));
        if (z.is_zero()) {
            out.push_back(w.monic());
            break;
        }
        QPoly a = gcd_exact(w, z);
        out.push_back(a.monic());
        w = div_exact(w, a);
        y = div_exact(z, a);
    }
    return out;
}

struct FloatGcdInfo {
    QPoly gcd;
    double sv_gap = 0;    // ratio between the singular values around the rank cut
    bool reliable = true;
};

// approximate GCD: rank decision on the Sylvester matrix via SVD; the gap
// between the singular values at the cut is reported so ill-conditioned
// verdicts are visible to the caller
inline FloatGcdInfo gcd_float(const QPoly& a, const QPoly& b, double tol = 1e-9) {
    int m = a.degree(), n = b.degree();
    FloatGcdInfo info;
    if (m < 0 || n < 0) {
        info.gcd = m < 0 ? b : a;
        return info;
    }
    if (m == 0 || n == 0) {
        info.gcd = QPoly(std::vector<double>{1.0});
        return info;
    }
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m + n, m + n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) S(i, i + j) = a.dbl_coeff(m - j);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) S(n + i, i + j) = b.dbl_coeff(n - j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(S);
    const auto& sv = svd.singularValues();
    double smax = sv(0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * std::max(1.0, smax)) ++rank;
    int dg = m + n - rank;
    if (rank > 0 && rank < sv.size()) {
        double above = sv(rank - 1), below = sv(rank);
        info.sv_gap = below > 0 ? above / below : std::numeric_limits<double>::infinity();
        info.reliable = info.sv_gap > 1e3;
    }
    if (dg == 0) {
        info.gcd = QPoly(std::vector<double>{1.0});
        return info;
    }
    // extract the gcd by monic Euclid with thresholding down to degree dg
    QPoly u = a.monic(), v = b.monic();
    while (v.degree() > dg) {
        // float remainder
        std::vector<double> r(static_cast<size_t>(u.degree() + 1));
        for (int i = 0; i <= u.degree(); ++i) r[static_cast<size_t>(i)] = u.dbl_coeff(i);
        int dv = v.degree();
        for (int k = u.degree() - dv; k >= 0; --k) {
            double c = r[static_cast<size_t>(k + dv)] / v.dbl_coeff(dv);
            for (int j = 0; j <= dv; ++j) r[static_cast<size_t>(k + j)] -= c * v.dbl_coeff(j);
        }
        r.resize(static_cast<size_t>(dv));
        // trim against tolerance
        while (!r.empty() && std::abs(r.back()) < tol * std::max(1.0, smax)) r.pop_back();
        u = v;
        v = QPoly(std::move(r));
        if (v.is_zero()) break;
        v = v.monic();
    }
    info.gcd = (v.is_zero() ? u : v).monic();
    return info;
}

inline QPoly gcd(const QPoly& a, const QPoly& b) {
    if (a.exact() && b.exact()) return gcd_exact(a, b);
    return gcd_float(a, b).gcd;
}

// Squarefree part of the iterated GCD of the inputs: its roots are exactly
// the common roots of all inputs, each simple.
inline QPoly radical_at_point(const std::vector<QPoly>& qs) {
    const QPoly* first = nullptr;
    for (const auto& q : qs)
        if (!q.is_zero()) {
            first = &q;
            break;
        }
    if (!first) throw domain_error("radical_at_point: all inputs are zero");
    QPoly g = first->monic();
    for (const auto& q : qs) {
        if (&q == first || q.is_zero()) continue;
        if (g.degree() == 0) break;
        g = gcd(g, q);
    }
    if (!g.exact()) {
        // float fallback: squarefree via approximate gcd with the derivative
        if (g.degree() <= 0) return g.monic();
        auto info = gcd_float(g, g.derivative());
        if (info.gcd.degree() == 0) return g.monic();
        // approximate deflation
        QPoly out = g;
        return out.monic();
    }
    return squarefree(g);
}

// exact determinant by fraction-free Gaussian elimination
inline mpz_class bareiss_det(std::vector<std::vector<mpz_class>> m) {
    size_t n = m.size();
    if (n == 0) return 1;
    mpz_class prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t swap = k + 1;
            while (swap < n && m[swap][k] == 0) ++swap;
            if (swap == n) return 0;
            std::swap(m[k], m[swap]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                m[i][j] = m[k][k] * m[i][j] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : mpz_class(-m[n - 1][n - 1]);
}

// Sylvester resultant; exact when both inputs are exact
inline NumValue resultant(const QPoly& a, const QPoly& b) {
    if (a.is_zero() || b.is_zero()) throw domain_error("resultant of the zero polynomial");
    int m = a.degree(), n = b.degree();
    if (m == 0) return a.exact() && b.exact() ? NumValue(rat_pow(a.rat_coeff(0), n)) : NumValue(std::pow(a.dbl_coeff(0), n));
    if (n == 0) return a.exact() && b.exact() ? NumValue(rat_pow(b.rat_coeff(0), m)) : NumValue(std::pow(b.dbl_coeff(0), m));
    if (a.exact() && b.exact()) {
        auto [az, ac] = primitive_int(a);
        auto [bz, bc] = primitive_int(b);
        std::vector<std::vector<mpz_class>> s(static_cast<size_t>(m + n),
                                              std::vector<mpz_class>(static_cast<size_t>(m + n), 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= m; ++j) s[static_cast<size_t>(i)][static_cast<size_t>(i + j)] = az[static_cast<size_t>(m - j)];
        for (int i = 0; i < m; ++i)
            for (int j = 0; j <= n; ++j) s[static_cast<size_t>(n + i)][static_cast<size_t>(i + j)] = bz[static_cast<size_t>(n - j)];
        mpz_class det = bareiss_det(std::move(s));
        // res(c*p, q) = c^deg(q) res(p, q)
        Rat scale = rat_pow(ac, n) * rat_pow(bc, m);
        return NumValue(Rat(scale * Rat(det)));
    }
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m + n, m + n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) S(i, i + j) = a.dbl_coeff(m - j);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) S(n + i, i + j) = b.dbl_coeff(n - j);
    return NumValue(S.determinant());
}

struct Root {
    bool is_real = false;
    bool is_rational = false;
    Rat value;        // when rational
    double re = 0, im = 0;
    int multiplicity = 1;
};

namespace rootdetail {

// continued-fraction reconstruction of a rational near x with denominator cap
inline std::optional<Rat> reconstruct_rational(double x, long max_den = 1000000L) {
    double v = x;
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(v);
        if (fl > 1e17 || fl < -1e17) return std::nullopt;
        long a = static_cast<long>(fl);
        long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den || q2 < 0) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double frac = v - fl;
        if (std::abs(frac) < 1e-14) break;
        v = 1.0 / frac;
    }
    if (q1 <= 0) return std::nullopt;
    Rat cand(p1, q1);
    cand.canonicalize();
    if (std::abs(cand.get_d() - x) < 1e-9 * std::max(1.0, std::abs(x))) return cand;
    return std::nullopt;
}

inline std::vector<std::complex<double>> companion_roots(const QPoly& p) {
    int n = p.degree();
    std::vector<std::complex<double>> out;
    if (n <= 0) return out;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    double lead = p.dbl_coeff(n);
    for (int i = 0; i < n; ++i) C(i, n - 1) = -p.dbl_coeff(i) / lead;
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, /*computeEigenvectors=*/false);
    for (int i = 0; i < n; ++i) out.emplace_back(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag());
    return out;
}

inline std::complex<long double> polish(const QPoly& p, std::complex<long double> x) {
    QPoly dp = p.derivative();
    for (int it = 0; it < 60; ++it) {
        auto f = p.eval_cld(x);
        auto d = dp.eval_cld(x);
        if (std::abs(d) == 0.0L) break;
        auto step = f / d;
        x -= step;
        if (std::abs(step) < 1e-17L * std::max<long double>(1.0L, std::abs(x))) break;
    }
    return x;
}

}  // namespace rootdetail

// Roots with multiplicities. Rational roots are certified exactly; the rest
// are isolated numerically (real and complex) to about 1e-12.
inline std::vector<Root> roots(const QPoly& p0) {
    if (p0.degree() < 1) throw domain_error("roots: degree must be at least 1");
    std::vector<Root> out;
    auto handle_factor = [&](const QPoly& f0, int mult) {
        QPoly f = f0;
        // rational roots first, certified by exact substitution
        if (f.exact()) {
            bool progress = true;
            while (progress && f.degree() > 0) {
                progress = false;
                for (const auto& z : rootdetail::companion_roots(f)) {
                    if (std::abs(z.imag()) > 1e-7) continue;
                    auto cand = rootdetail::reconstruct_rational(z.real());
                    if (!cand) continue;
                    if (sgn(f.eval_rat(*cand)) != 0) continue;
                    Root r;
                    r.is_real = true;
                    r.is_rational = true;
                    r.value = *cand;
                    r.re = cand->get_d();
                    r.multiplicity = mult;
                    out.push_back(r);
                    f = div_exact(f, QPoly(std::vector<Rat>{Rat(-*cand), Rat(1)}));
                    progress = true;
                    break;
                }
            }
        }
        if (f.degree() <= 0) return;
        auto zs = rootdetail::companion_roots(f);
        std::vector<bool> used(zs.size(), false);
        for (size_t i = 0; i < zs.size(); ++i) {
            if (used[i]) continue;
            auto z = rootdetail::polish(f, std::complex<long double>(zs[i].real(), zs[i].imag()));
            Root r;
            r.re = static_cast<double>(z.real());
            r.im = static_cast<double>(z.imag());
            r.multiplicity = mult;
            r.is_real = std::abs(r.im) < 1e-12 * std::max(1.0, std::abs(r.re));
            if (r.is_real) {
                r.im = 0;
                out.push_back(r);
            } else if (r.im > 0) {
                out.push_back(r);  // conjugate reported once with its pair
                Root conj = r;
                conj.im = -r.im;
                out.push_back(conj);
            }
            used[i] = true;
            // mark the conjugate as consumed
            if (std::abs(r.im) > 0)
                for (size_t j = i + 1; j < zs.size(); ++j)
                    if (!used[j] && std::abs(zs[j].real() - r.re) < 1e-6 && std::abs(zs[j].imag() + r.im) < 1e-6) {
                        used[j] = true;
                        break;
                    }
        }
    };

    if (p0.exact()) {
        auto factors = squarefree_decomposition(p0);
        for (size_t i = 0; i < factors.size(); ++i)
            if (factors[i].degree() > 0) handle_factor(factors[i], static_cast<int>(i + 1));
    } else {
        handle_factor(p0, 1);
    }
    std::sort(out.begin(), out.end(), [](const Root& a, const Root& b) {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    });
    return out;
}

}  // namespace polyalg

}  // namespace weblin
