#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "weblin/ralg.hpp"

namespace weblin {

// Differential polynomials in the jet variables of the base scalar s. The
// canonical variables are {s, s_1, s_2, s_21}; every other jet word reduces
// through the second-order rules
//   s_12 = s_21 + R s
//   s_22 = 2 s_21 -   s s_2 + 2 s s_1 + R s + R_2
//   s_11 = 2 s_21 - 2 s s_2 +   s s_1 + R s + R_1
// and the third-order reductions solved from their derivatives together with
// the permutation rule. Weights: s -> 1, s_1, s_2 -> 2, s_21 -> 3.

struct JetMono {
    uint8_t s = 0, s1 = 0, s2 = 0, s21 = 0;
    auto operator<=>(const JetMono&) const = default;
    int weight() const { return s + 2 * (s1 + s2) + 3 * s21; }
    bool is_unit() const { return !s && !s1 && !s2 && !s21; }
};

class JetPoly {
  public:
    using Terms = std::map<JetMono, RAlg>;

    JetPoly() = default;
    explicit JetPoly(RAlg c) {
        if (!c.is_zero()) terms_.emplace(JetMono{}, std::move(c));
    }
    explicit JetPoly(Rat c) : JetPoly(RAlg(std::move(c))) {}

    static JetPoly mono(JetMono m, RAlg c = RAlg(Rat(1))) {
        JetPoly p;
        if (!c.is_zero()) p.terms_.emplace(m, std::move(c));
        return p;
    }
    static JetPoly S() { return mono(JetMono{1, 0, 0, 0}); }
    static JetPoly S1() { return mono(JetMono{0, 1, 0, 0}); }
    static JetPoly S2() { return mono(JetMono{0, 0, 1, 0}); }
    static JetPoly S21() { return mono(JetMono{0, 0, 0, 1}); }

    bool is_zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }
    size_t size() const { return terms_.size(); }

    void add_term(const JetMono& m, const RAlg& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    JetPoly& operator+=(const JetPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    JetPoly& operator-=(const JetPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend JetPoly operator+(JetPoly a, const JetPoly& b) { return a += b; }
    friend JetPoly operator-(JetPoly a, const JetPoly& b) { return a -= b; }
    JetPoly operator-() const {
        JetPoly p;
        for (const auto& [m, c] : terms_) p.terms_.emplace(m, -c);
        return p;
    }

    friend JetPoly operator*(const JetPoly& a, const JetPoly& b) {
        JetPoly r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                JetMono m{static_cast<uint8_t>(ma.s + mb.s), static_cast<uint8_t>(ma.s1 + mb.s1),
                          static_cast<uint8_t>(ma.s2 + mb.s2), static_cast<uint8_t>(ma.s21 + mb.s21)};
                r.add_term(m, ca * cb);
            }
        return r;
    }
    friend JetPoly operator*(const RAlg& c, const JetPoly& p) {
        JetPoly r;
        for (const auto& [m, q] : p.terms_) r.add_term(m, c * q);
        return r;
    }
    friend JetPoly operator*(const Rat& c, const JetPoly& p) {
        JetPoly r;
        if (weblin::is_zero(c)) return r;
        for (const auto& [m, q] : p.terms_) r.terms_.emplace(m, c * q);
        return r;
    }

    bool operator==(const JetPoly& o) const { return terms_ == o.terms_; }

    JetPoly pow_nat(int e) const {
        JetPoly acc{Rat(1)};
        for (int i = 0; i < e; ++i) acc = acc * *this;
        return acc;
    }

    // coefficient of s1^b s2^c s21^d, collected as a polynomial in s
    JetPoly coeff_of(uint8_t b, uint8_t c, uint8_t d) const {
        JetPoly out;
        for (const auto& [m, q] : terms_)
            if (m.s1 == b && m.s2 == c && m.s21 == d) out.add_term(JetMono{m.s, 0, 0, 0}, q);
        return out;
    }

    int max_exp_s21() const {
        int e = 0;
        for (const auto& [m, c] : terms_) e = std::max(e, static_cast<int>(m.s21));
        return e;
    }

    JetPoly derive(int dir) const;
    JetPoly mirror() const;

    struct WeightReport {
        std::optional<int> weight;       // set iff homogeneous and nonzero
        std::vector<std::string> offenders;
        bool homogeneous() const { return offenders.empty(); }
    };
    WeightReport weight() const;

    template <class T>
    struct JetBinding {
        T rval;
        std::array<T, detail::kNumWords> wvals;
        T s, s1, s2, s21;
    };

    template <class T>
    T eval(const JetBinding<T>& b) const {
        T acc{};
        for (const auto& [m, c] : terms_) {
            T t = c.eval(b.rval, b.wvals);
            for (int i = 0; i < m.s; ++i) t = t * b.s;
            for (int i = 0; i < m.s1; ++i) t = t * b.s1;
            for (int i = 0; i < m.s2; ++i) t = t * b.s2;
            for (int i = 0; i < m.s21; ++i) t = t * b.s21;
            acc = acc + t;
        }
        return acc;
    }

    std::string str() const;
    static JetPoly parse(const std::string& text);

  private:
    Terms terms_;
};

namespace jetrules {

JetPoly s1_deriv(int dir);
const JetPoly& s21_deriv(int dir);

// canonical form of the jet variable s_w; the head index is the outermost
// derivative: s_{i w'} = D_i(s_{w'})
const JetPoly& reduce_word(const std::string& w);

}  // namespace jetrules

namespace detail_jet {

// Leibniz derivation; when `allow_s21` is false a derivative of s_21 is a
// logic error (used to break the circularity while solving for it).
inline JetPoly derive_impl(const JetPoly& p, int dir, bool allow_s21);

}  // namespace detail_jet

inline JetPoly JetPoly::derive(int dir) const { return detail_jet::derive_impl(*this, dir, true); }

namespace jetrules {

inline const JetPoly& rule12() {
    static const JetPoly r = JetPoly::S21() + RAlg::curvature() * JetPoly::S();
    return r;
}
inline const JetPoly& rule22() {
    static const JetPoly r = Rat(2) * JetPoly::S21() - JetPoly::S() * JetPoly::S2() +
                             Rat(2) * (JetPoly::S() * JetPoly::S1()) + RAlg::curvature() * JetPoly::S() +
                             JetPoly(RAlg::word(RWord{0, 1}));
    return r;
}
inline const JetPoly& rule11() {
    static const JetPoly r = Rat(2) * JetPoly::S21() - Rat(2) * (JetPoly::S() * JetPoly::S2()) +
                             JetPoly::S() * JetPoly::S1() + RAlg::curvature() * JetPoly::S() +
                             JetPoly(RAlg::word(RWord{1, 0}));
    return r;
}

inline JetPoly s1_deriv(int dir) { return dir == 1 ? rule11() : JetPoly::S21(); }
inline JetPoly s2_deriv(int dir) { return dir == 1 ? rule12() : rule22(); }

// Third-order reductions U = s_121 = D_1 s_21 and V = s_221 = D_2 s_21,
// solved from the derivatives of the second-order rules plus the
// permutation relations
//   s_122 = s_212 + 2 R s_2,  s_212 = V + R_2 s + R s_2,  s_211 = U - 2 R s_1.
inline const std::pair<JetPoly, JetPoly>& s21_deriv_pair() {
    static const std::pair<JetPoly, JetPoly> uv = [] {
        const RAlg R = RAlg::curvature();
        const RAlg R1 = RAlg::word(RWord{1, 0});
        const RAlg R2 = RAlg::word(RWord{0, 1});
        JetPoly k1 = detail_jet::derive_impl(rule22() - Rat(2) * JetPoly::S21(), 1, false);
        JetPoly k4 = detail_jet::derive_impl(rule11() - Rat(2) * JetPoly::S21(), 2, false);
        JetPoly rhs = Rat(2) * k1 + k4 - Rat(2) * (R2 * JetPoly::S()) - Rat(6) * (R * JetPoly::S2()) +
                      Rat(2) * (R * JetPoly::S1());
        JetPoly u = rat(-1, 3) * rhs;
        JetPoly v = Rat(2) * u + k1 - R2 * JetPoly::S() - Rat(3) * (R * JetPoly::S2());
        return std::make_pair(std::move(u), std::move(v));
    }();
    return uv;
}

inline const JetPoly& s21_deriv(int dir) {
    return dir == 1 ? s21_deriv_pair().first : s21_deriv_pair().second;
}

inline const JetPoly& reduce_word(const std::string& w) {
    static std::map<std::string, JetPoly> memo;
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    JetPoly r;
    if (w.empty()) {
        r = JetPoly::S();
    } else if (w == "1") {
        r = JetPoly::S1();
    } else if (w == "2") {
        r = JetPoly::S2();
    } else if (w == "21") {
        r = JetPoly::S21();
    } else if (w == "12") {
        r = rule12();
    } else if (w == "22") {
        r = rule22();
    } else if (w == "11") {
        r = rule11();
    } else {
        if (w.size() > 4) throw std::invalid_argument("jet word too long: " + w);
        r = reduce_word(w.substr(1)).derive(w[0] == '1' ? 1 : 2);
    }
    auto [pos, ok] = memo.emplace(w, std::move(r));
    (void)ok;
    return pos->second;
}

}  // namespace jetrules

namespace detail_jet {

inline JetPoly derive_impl(const JetPoly& p, int dir, bool allow_s21) {
    JetPoly out;
    for (const auto& [m, c] : p.terms()) {
        // derivative of the coefficient
        out += RAlg(c).derive(dir) * JetPoly::mono(m);
        // product rule over the four generators
        auto lower = [&](uint8_t JetMono::* field, const JetPoly& dgen) {
            JetMono rest = m;
            rest.*field = static_cast<uint8_t>(rest.*field - 1);
            out += (Rat(static_cast<long>(m.*field)) * c) * (dgen * JetPoly::mono(rest));
        };
        if (m.s) lower(&JetMono::s, dir == 1 ? JetPoly::S1() : JetPoly::S2());
        if (m.s1) lower(&JetMono::s1, jetrules::s1_deriv(dir));
        if (m.s2) lower(&JetMono::s2, jetrules::s2_deriv(dir));
        if (m.s21) {
            if (!allow_s21) throw std::logic_error("derive: s_21 derivative not available here");
            lower(&JetMono::s21, jetrules::s21_deriv(dir));
        }
    }
    return out;
}

}  // namespace detail_jet

inline JetPoly JetPoly::mirror() const {
    // index swap 1 <-> 2 combined with s -> -s and R -> -R; on the canonical
    // generators: s -> -s, s1 -> -s2, s2 -> -s1, s21 -> -s12 = -(s21 + R s)
    JetPoly out;
    const JetPoly ms = -S();
    const JetPoly ms1 = -S2();
    const JetPoly ms2 = -S1();
    const JetPoly ms21 = -(S21() + RAlg::curvature() * S());
    for (const auto& [m, c] : terms_) {
        JetPoly t{c.mirror()};
        for (int i = 0; i < m.s; ++i) t = t * ms;
        for (int i = 0; i < m.s1; ++i) t = t * ms1;
        for (int i = 0; i < m.s2; ++i) t = t * ms2;
        for (int i = 0; i < m.s21; ++i) t = t * ms21;
        out += t;
    }
    return out;
}

inline JetPoly::WeightReport JetPoly::weight() const {
    WeightReport rep;
    for (const auto& [m, c] : terms_) {
        auto cw = c.weight();
        if (!cw) {
            rep.offenders.push_back("inhomogeneous coefficient at jet monomial");
            continue;
        }
        int w = *cw + m.weight();
        if (!rep.weight) {
            rep.weight = w;
        } else if (*rep.weight != w) {
            std::ostringstream os;
            os << "term of weight " << w << " vs " << *rep.weight;
            rep.offenders.push_back(os.str());
        }
    }
    if (!rep.offenders.empty()) rep.weight.reset();
    return rep;
}

inline std::string JetPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << '(' << c.str() << ')';
        auto emit = [&](const char* name, uint8_t e) {
            if (!e) return;
            os << '*' << name;
            if (e > 1) os << '^' << static_cast<int>(e);
        };
        emit("s", m.s);
        emit("s1", m.s1);
        emit("s2", m.s2);
        emit("s21", m.s21);
    }
    return os.str();
}

inline JetPoly JetPoly::parse(const std::string& text) {
    JetPoly out;
    if (text == "0") return out;
    size_t pos = 0;
    auto expect = [&](char c) {
        if (pos >= text.size() || text[pos] != c)
            throw std::invalid_argument("JetPoly::parse: expected '" + std::string(1, c) + "' in " + text);
        ++pos;
    };
    while (pos < text.size()) {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '+')) ++pos;
        if (pos >= text.size()) break;
        expect('(');
        size_t depth = 1, start = pos;
        while (pos < text.size() && depth) {
            if (text[pos] == '(') ++depth;
            if (text[pos] == ')') --depth;
            ++pos;
        }
        RAlg c = RAlg::parse(text.substr(start, pos - start - 1));
        JetMono m;
        while (pos < text.size() && text[pos] == '*') {
            ++pos;
            expect('s');
            uint8_t* slot = &m.s;
            if (pos < text.size() && text[pos] == '2' && pos + 1 < text.size() && text[pos + 1] == '1') {
                slot = &m.s21;
                pos += 2;
            } else if (pos < text.size() && text[pos] == '1') {
                slot = &m.s1;
                ++pos;
            } else if (pos < text.size() && text[pos] == '2') {
                slot = &m.s2;
                ++pos;
            }
            int e = 1;
            if (pos < text.size() && text[pos] == '^') {
                ++pos;
                size_t es = pos;
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
                e = std::stoi(text.substr(es, pos - es));
            }
            *slot = static_cast<uint8_t>(*slot + e);
        }
        out.add_term(m, c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Raw jet polynomials: monomials over arbitrary jet words (strings over
// {1,2}; "" is s itself). This is the input form normalize() accepts, and
// the working form for the obstruction derivation, where reductions must be
// performed by the permutation rule alone.

struct RawMono {
    std::map<std::string, int> jets;  // word -> exponent
    auto operator<=>(const RawMono&) const = default;
};

class RawPoly {
  public:
    using Terms = std::map<RawMono, RAlg>;

    RawPoly() = default;
    explicit RawPoly(RAlg c) {
        if (!c.is_zero()) terms_.emplace(RawMono{}, std::move(c));
    }
    static RawPoly jet(const std::string& word, RAlg c = RAlg(Rat(1))) {
        RawPoly p;
        RawMono m;
        m.jets[word] = 1;
        if (!c.is_zero()) p.terms_.emplace(std::move(m), std::move(c));
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const RawMono& m, const RAlg& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    RawPoly& operator+=(const RawPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    RawPoly& operator-=(const RawPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend RawPoly operator+(RawPoly a, const RawPoly& b) { return a += b; }
    friend RawPoly operator-(RawPoly a, const RawPoly& b) { return a -= b; }
    friend RawPoly operator*(const RawPoly& a, const RawPoly& b) {
        RawPoly r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                RawMono m = ma;
                for (const auto& [w, e] : mb.jets) m.jets[w] += e;
                r.add_term(m, ca * cb);
            }
        return r;
    }
    friend RawPoly operator*(const Rat& c, const RawPoly& p) {
        RawPoly r;
        for (const auto& [m, q] : p.terms_) r.add_term(m, c * q);
        return r;
    }

    // formal derivation: prepend the index to jet words, derive coefficients
    RawPoly derive_raw(int dir) const {
        RawPoly out;
        char head = dir == 1 ? '1' : '2';
        for (const auto& [m, c] : terms_) {
            out.add_term(m, c.derive(dir));
            for (const auto& [w, e] : m.jets) {
                RawMono rest = m;
                if (--rest.jets[w] == 0) rest.jets.erase(w);
                rest.jets[head + w] += 1;
                out.add_term(rest, Rat(static_cast<long>(e)) * c);
            }
        }
        return out;
    }

    // Rewrites every jet word into ascending order (all 1s before 2s) using
    // only the permutation rule: s_{u 21 v} = s_{u 12 v} - (1+|v|) D_u(R s_v).
    RawPoly perm_sorted() const;

    int max_word_len() const {
        int n = 0;
        for (const auto& [m, c] : terms_)
            for (const auto& [w, e] : m.jets) n = std::max<int>(n, static_cast<int>(w.size()));
        return n;
    }

    // Drops every term containing a jet word of the given length; returns
    // the dropped part.
    RawPoly split_len(int len) {
        RawPoly dropped;
        for (auto it = terms_.begin(); it != terms_.end();) {
            bool has = false;
            for (const auto& [w, e] : it->first.jets)
                if (static_cast<int>(w.size()) == len) has = true;
            if (has) {
                dropped.add_term(it->first, it->second);
                it = terms_.erase(it);
            } else {
                ++it;
            }
        }
        return dropped;
    }

  private:
    Terms terms_;
};

namespace detail_jet {

// s_w for a sorted-ascending word as a RawPoly monomial
inline RawPoly sorted_jet(const std::string& w, const RAlg& c) { return RawPoly::jet(w, c); }

// canonical expansion of one raw word into sorted raw words
inline const RawPoly& sort_word(const std::string& w) {
    static std::map<std::string, RawPoly> memo;
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    RawPoly result;
    size_t inv = w.npos;
    for (size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i] == '2' && w[i + 1] == '1') {
            inv = i;
            break;
        }
    if (inv == w.npos) {
        result = RawPoly::jet(w);
    } else {
        std::string u = w.substr(0, inv);
        std::string v = w.substr(inv + 2);
        std::string swapped = u + "12" + v;
        // s_swapped - s_w = (1+|v|) D_u (R s_v)
        RawPoly corr = RawPoly::jet(v, RAlg::curvature());
        for (auto uit = u.rbegin(); uit != u.rend(); ++uit) corr = corr.derive_raw(*uit == '1' ? 1 : 2);
        RawPoly res = sort_word(swapped) - Rat(1 + static_cast<long>(v.size())) * corr;
        // the correction still contains unsorted words of lower order
        result = res.perm_sorted();
    }
    auto [pos, ok] = memo.emplace(w, std::move(result));
    (void)ok;
    return pos->second;
}

}  // namespace detail_jet

inline RawPoly RawPoly::perm_sorted() const {
    RawPoly out;
    for (const auto& [m, c] : terms_) {
        RawPoly t{c};
        for (const auto& [w, e] : m.jets) {
            bool sorted = true;
            for (size_t i = 0; i + 1 < w.size(); ++i)
                if (w[i] == '2' && w[i + 1] == '1') sorted = false;
            RawPoly factor = sorted ? RawPoly::jet(w) : detail_jet::sort_word(w);
            for (int k = 0; k < e; ++k) t = t * factor;
        }
        out += t;
    }
    return out;
}

// Mode-A normalization: every jet word reduced to the canonical variables
// through the full rule set (second-order rules and the solved third-order
// reductions, head-recursively for longer words).
inline JetPoly normalize(const RawPoly& p) {
    JetPoly out;
    for (const auto& [m, c] : p.terms()) {
        JetPoly t{c};
        for (const auto& [w, e] : m.jets) {
            const JetPoly& r = jetrules::reduce_word(w);
            for (int k = 0; k < e; ++k) t = t * r;
        }
        out += t;
    }
    return out;
}

// Substitutes the solution of phi = 0 for s_21. phi must be linear in s_21
// with an invertible (single Laurent monomial) coefficient.
inline JetPoly eliminate_s21(const JetPoly& e, const JetPoly& phi) {
    JetPoly lin, rest;
    for (const auto& [m, c] : phi.terms()) {
        if (m.s21 > 1) throw std::invalid_argument("eliminate_s21: phi not linear in s_21");
        if (m.s21 == 1) {
            JetMono r = m;
            r.s21 = 0;
            lin.add_term(r, c);
        } else {
            rest.add_term(m, c);
        }
    }
    if (lin.size() != 1 || !lin.terms().begin()->first.is_unit())
        throw std::invalid_argument("eliminate_s21: s_21 coefficient is not a scalar monomial");
    const RAlg& b = lin.terms().begin()->second;
    if (b.size() != 1) throw std::invalid_argument("eliminate_s21: s_21 coefficient not invertible");
    const auto& [bm, bc] = *b.terms().begin();
    for (auto e2 : bm.wexp)
        if (e2) throw std::invalid_argument("eliminate_s21: s_21 coefficient contains derivative words");
    RMono invm;
    invm.rexp = static_cast<int16_t>(-bm.rexp);
    RAlg binv = RAlg::monomial(invm, Rat(1) / bc);
    JetPoly sigma = (-binv) * rest;  // s_21 = -rest / b

    JetPoly out;
    for (const auto& [m, c] : e.terms()) {
        JetMono base = m;
        base.s21 = 0;
        JetPoly t = JetPoly::mono(base, c);
        for (int k = 0; k < m.s21; ++k) t = t * sigma;
        out += t;
    }
    return out;
}

// Rewrites e modulo psi1 = 0, psi2 = 0 so that no monomial has s_1 or s_2
// exponent above one (basis {1, s1, s2, s1*s2} over polynomials in s).
// The quadratic parts are s2^2 = 2 s1 s2 + low and s1^2 = 2 s1 s2 + low, so
// plain substitution cycles between s1^j s2^k and s1^(j+1) s2^(k-1); the
// degree-d family is solved as a linear chain instead, anchored at the
// two-cycle {j = d-2, j = d-1}.
class SquareEliminator {
  public:
    SquareEliminator(const JetPoly& psi1, const JetPoly& psi2) {
        e1low_ = extract(psi1, /*s2sq=*/true);
        e2low_ = extract(psi2, /*s2sq=*/false);
    }

    JetPoly run(const JetPoly& e) const {
        if (e.max_exp_s21() > 0) throw std::invalid_argument("eliminate_squares: input contains s_21");
        JetPoly out;
        for (const auto& [m, c] : e.terms()) {
            const JetPoly& red = reduced(m.s1, m.s2);
            out += JetPoly::mono(JetMono{m.s, 0, 0, 0}, c) * red;
        }
        return out;
    }

  private:
    // from 24R s2^2 - 48R s1 s2 + low = 0:  s2^2 = 2 s1 s2 - low/(24R)
    JetPoly extract(const JetPoly& psi, bool s2sq) {
        JetMono lead = s2sq ? JetMono{0, 0, 2, 0} : JetMono{0, 2, 0, 0};
        JetPoly low, cross;
        RAlg cl;
        for (const auto& [m, c] : psi.terms()) {
            if (m == lead) {
                cl = c;
            } else if (m.s1 == 1 && m.s2 == 1 && m.s == 0) {
                cross.add_term(m, c);
            } else {
                if (m.s1 >= 2 || m.s2 >= 2 || m.s21)
                    throw std::invalid_argument("eliminate_squares: psi has unexpected shape");
                low.add_term(m, c);
            }
        }
        if (cl.size() != 1) throw std::invalid_argument("eliminate_squares: leading coefficient not invertible");
        const auto& [bm, bc] = *cl.terms().begin();
        RMono invm;
        invm.rexp = static_cast<int16_t>(-bm.rexp);
        for (auto e2 : bm.wexp)
            if (e2) throw std::invalid_argument("eliminate_squares: leading coefficient has word factors");
        RAlg binv = RAlg::monomial(invm, Rat(1) / bc);
        // square = -(cross + low)/cl ; sanity: cross must reduce to exactly 2 s1 s2
        JetPoly sq = (-binv) * (cross + low);
        JetPoly crosspart = sq.coeff_of(1, 1, 0);
        if (!(crosspart == JetPoly(Rat(2))))
            throw std::invalid_argument("eliminate_squares: cross term is not 2 s1 s2");
        return (-binv) * low;  // the strictly lower-degree remainder
    }

    const JetPoly& reduced(int b, int c) const {
        auto key = std::make_pair(b, c);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        solve_degree(b + c);
        it = memo_.find(key);
        if (it == memo_.end()) throw std::logic_error("eliminate_squares: chain solve missed a monomial");
        return it->second;
    }

    JetPoly reduce_poly(const JetPoly& p) const {
        JetPoly out;
        for (const auto& [m, c] : p.terms()) out += JetPoly::mono(JetMono{m.s, 0, 0, 0}, c) * reduced(m.s1, m.s2);
        return out;
    }

    static JetPoly jet_mono(int b, int c) { return JetPoly::mono(JetMono{0, static_cast<uint8_t>(b), static_cast<uint8_t>(c), 0}); }

    // gamma-route: s1^j s2^k with k >= 2 -> 2 * m(j+1,k-1) + debris(j,k)
    JetPoly debris_gamma(int j, int k) const { return reduce_poly(jet_mono(j, k - 2) * e1low_); }
    // beta-route: j >= 2 -> 2 * m(j-1,k+1) + debris'(j,k)
    JetPoly debris_beta(int j, int k) const { return reduce_poly(jet_mono(j - 2, k) * e2low_); }

    void solve_degree(int d) const {
        if (d < 2) {
            memo_.try_emplace({0, 0}, JetPoly(Rat(1)));
            memo_.try_emplace({1, 0}, JetPoly::S1());
            memo_.try_emplace({0, 1}, JetPoly::S2());
            return;
        }
        if (d == 2) {
            memo_.try_emplace({1, 1}, JetPoly::S1() * JetPoly::S2());
            memo_.try_emplace({0, 2}, Rat(2) * (JetPoly::S1() * JetPoly::S2()) + debris_gamma(0, 2));
            memo_.try_emplace({2, 0}, Rat(2) * (JetPoly::S1() * JetPoly::S2()) + debris_beta(2, 0));
            return;
        }
        // X_j := reduction of s1^j s2^(d-j).
        //   gamma-route (j <= d-2): X_j = 2 X_{j+1} + G_j
        //   beta-route  (j >= 2):   X_j = 2 X_{j-1} + B_j
        // two-cycle at {d-2, d-1}: X_{d-2} = -(2 B_{d-1} + G_{d-2}) / 3
        std::vector<JetPoly> X(static_cast<size_t>(d + 1));
        JetPoly G_dm2 = debris_gamma(d - 2, 2);
        JetPoly B_dm1 = debris_beta(d - 1, 1);
        X[d - 2] = rat(-1, 3) * (Rat(2) * B_dm1 + G_dm2);
        X[d - 1] = Rat(2) * X[d - 2] + B_dm1;
        for (int j = d - 3; j >= 0; --j) X[j] = Rat(2) * X[j + 1] + debris_gamma(j, d - j);
        X[d] = Rat(2) * X[d - 1] + debris_beta(d, 0);
        for (int j = 0; j <= d; ++j) memo_.try_emplace({j, d - j}, X[j]);
        // consistency: monomials with both routes available must agree
        for (int j = 2; j <= d - 2; ++j) {
            JetPoly alt = Rat(2) * X[j - 1] + debris_beta(j, d - j);
            if (!(alt == X[j]))
                throw std::logic_error("eliminate_squares: the two substitution routes disagree");
        }
    }

    JetPoly e1low_, e2low_;
    mutable std::map<std::pair<int, int>, JetPoly> memo_;
};

inline JetPoly eliminate_squares(const JetPoly& e, const JetPoly& psi1, const JetPoly& psi2) {
    return SquareEliminator(psi1, psi2).run(e);
}

}  // namespace weblin
