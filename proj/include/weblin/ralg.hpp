#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "weblin/rational.hpp"

namespace weblin {

// Abstract algebra of the curvature scalar R and its covariant-derivative
// words R_w, w over {1,2}. R itself is the one invertible symbol (Laurent
// exponents); words are kept canonical with all 1s before 2s, so the symbol
// set is R_{1^a 2^b} with 1 <= a+b <= 6. Derivations D_1, D_2 act by
// prepending an index, using the commutation rule
//   D_1 D_2 C - D_2 D_1 C = weight(C) * R * C,   weight(R_w) = 2 + |w|,
// to restore canonical order.

inline constexpr int kMaxWordLen = 6;

struct RWord {
    int a = 0, b = 0;  // R_{1^a 2^b}

    int len() const { return a + b; }
    int weight() const { return 2 + a + b; }
    std::string str() const { return std::string(static_cast<size_t>(a), '1') + std::string(static_cast<size_t>(b), '2'); }
    auto operator<=>(const RWord&) const = default;
};

namespace detail {

inline const std::vector<RWord>& word_table() {
    static const std::vector<RWord> t = [] {
        std::vector<RWord> v;
        for (int len = 1; len <= kMaxWordLen; ++len)
            for (int a = len; a >= 0; --a) v.push_back(RWord{a, len - a});
        return v;
    }();
    return t;
}

inline int word_id(const RWord& w) {
    // ids are grouped by length; within a length, descending in a
    int base = 0;
    for (int len = 1; len < w.len(); ++len) base += len + 1;
    return base + (w.len() - w.a);
}

inline constexpr int kNumWords = 2 + 3 + 4 + 5 + 6 + 7;  // 27

}  // namespace detail

struct RMono {
    int16_t rexp = 0;                                  // exponent of R (may be negative)
    std::array<uint8_t, detail::kNumWords> wexp{};     // exponents of canonical words

    bool operator==(const RMono&) const = default;
    bool operator<(const RMono& o) const {
        if (rexp != o.rexp) return rexp < o.rexp;
        return wexp < o.wexp;
    }

    int weight() const {
        int w = 2 * rexp;
        const auto& tab = detail::word_table();
        for (size_t i = 0; i < wexp.size(); ++i)
            if (wexp[i]) w += static_cast<int>(wexp[i]) * tab[i].weight();
        return w;
    }
    bool is_unit() const {
        if (rexp) return false;
        for (auto e : wexp)
            if (e) return false;
        return true;
    }
};

struct RMonoHash {
    size_t operator()(const RMono& m) const {
        uint64_t h = 0xcbf29ce484222325ull ^ static_cast<uint16_t>(m.rexp);
        for (auto e : m.wexp) h = (h ^ e) * 0x100000001b3ull;
        return static_cast<size_t>(h);
    }
};

class RAlg {
  public:
    using Terms = std::unordered_map<RMono, Rat, RMonoHash>;

    RAlg() = default;
    explicit RAlg(Rat c) {
        if (!weblin::is_zero(c)) terms_.emplace(RMono{}, std::move(c));
    }
    explicit RAlg(long c) : RAlg(Rat(c)) {}

    static RAlg curvature(int rexp = 1) {
        RAlg r;
        RMono m;
        m.rexp = static_cast<int16_t>(rexp);
        r.terms_.emplace(m, Rat(1));
        return r;
    }
    static RAlg word(const RWord& w) {
        RAlg r;
        RMono m;
        m.wexp[detail::word_id(w)] = 1;
        r.terms_.emplace(m, Rat(1));
        return r;
    }
    static RAlg monomial(RMono m, Rat c) {
        RAlg r;
        if (!weblin::is_zero(c)) r.terms_.emplace(std::move(m), std::move(c));
        return r;
    }

    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    const Terms& terms() const { return terms_; }

    void add_term(const RMono& m, const Rat& c) {
        if (weblin::is_zero(c)) return;
        auto [it, fresh] = terms_.try_emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (weblin::is_zero(it->second)) terms_.erase(it);
        }
    }

    RAlg& operator+=(const RAlg& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    RAlg& operator-=(const RAlg& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, Rat(-c));
        return *this;
    }
    friend RAlg operator+(RAlg a, const RAlg& b) { return a += b; }
    friend RAlg operator-(RAlg a, const RAlg& b) { return a -= b; }
    RAlg operator-() const {
        RAlg r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, Rat(-c));
        return r;
    }

    // *this += a * b, without an intermediate product element
    void accumulate_product(const RAlg& a, const RAlg& b) {
        const RAlg& outer = a.terms_.size() <= b.terms_.size() ? a : b;
        const RAlg& inner = a.terms_.size() <= b.terms_.size() ? b : a;
        static thread_local Rat scratch;
        for (const auto& [ma, ca] : outer.terms_)
            for (const auto& [mb, cb] : inner.terms_) {
                RMono m = ma;
                m.rexp = static_cast<int16_t>(m.rexp + mb.rexp);
                for (size_t i = 0; i < m.wexp.size(); ++i) m.wexp[i] = static_cast<uint8_t>(m.wexp[i] + mb.wexp[i]);
                auto [it, fresh] = terms_.try_emplace(m);
                mpq_mul(scratch.get_mpq_t(), ca.get_mpq_t(), cb.get_mpq_t());
                if (fresh) {
                    it->second = scratch;
                } else {
                    mpq_add(it->second.get_mpq_t(), it->second.get_mpq_t(), scratch.get_mpq_t());
                    if (sgn(it->second) == 0) terms_.erase(it);
                }
            }
    }

    friend RAlg operator*(const RAlg& a, const RAlg& b) {
        RAlg r;
        r.terms_.reserve(std::max(a.terms_.size(), b.terms_.size()) * 2 + 4);
        r.accumulate_product(a, b);
        return r;
    }
    RAlg& operator*=(const RAlg& o) { return *this = *this * o; }

    friend RAlg operator*(const Rat& c, const RAlg& a) {
        RAlg r;
        if (weblin::is_zero(c)) return r;
        for (const auto& [m, q] : a.terms_) r.terms_.emplace(m, c * q);
        return r;
    }

    bool operator==(const RAlg& o) const {
        if (terms_.size() != o.terms_.size()) return false;
        for (const auto& [m, c] : terms_) {
            auto it = o.terms_.find(m);
            if (it == o.terms_.end() || it->second != c) return false;
        }
        return true;
    }

    // common weight of all terms, or nullopt if inhomogeneous (or zero)
    std::optional<int> weight() const {
        std::optional<int> w;
        for (const auto& [m, c] : terms_) {
            int mw = m.weight();
            if (!w)
                w = mw;
            else if (*w != mw)
                return std::nullopt;
        }
        return w;
    }

    // rational content: gcd of all coefficients (0 for the zero element)
    Rat content() const {
        Rat g(0);
        for (const auto& [m, c] : terms_) g = rat_gcd(g, c);
        return g;
    }

    RAlg derive(int dir) const;
    RAlg mirror() const;

    template <class T>
    T eval(const T& rval, const std::array<T, detail::kNumWords>& wvals) const {
        T acc{};
        bool first = true;
        for (const auto& [m, c] : terms_) {
            T t = value_of<T>(c);
            if (m.rexp) t = t * pow_of(rval, m.rexp);
            for (size_t i = 0; i < m.wexp.size(); ++i)
                if (m.wexp[i]) t = t * pow_of(wvals[i], m.wexp[i]);
            if (first) {
                acc = t;
                first = false;
            } else {
                acc = acc + t;
            }
        }
        return acc;
    }

    std::string str() const;
    static RAlg parse(const std::string& text);

  private:
    template <class T>
    static T value_of(const Rat& q) {
        if constexpr (std::is_same_v<T, double>)
            return q.get_d();
        else if constexpr (std::is_same_v<T, Rat>)
            return q;
        else
            return T(q);
    }
    static double pow_of(double b, int e) { return std::pow(b, e); }
    static Rat pow_of(const Rat& b, int e) { return rat_pow(b, e); }
    template <class T>
    static T pow_of(const T& b, int e) {
        return b.pow_int(e);
    }

    Terms terms_;
};

namespace detail {

// R_{1^a 2^b}, reading (0,0) as R itself
inline RAlg word_or_R(int a, int b) {
    if (a == 0 && b == 0) return RAlg::curvature();
    return RAlg::word(RWord{a, b});
}

// canonical expansion of D_2 R_{1^a 2^b}
inline const RAlg& derive2_of(int a, int b) {
    static std::map<std::pair<int, int>, RAlg> memo;
    auto key = std::make_pair(a, b);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    RAlg result;
    if (a == 0) {
        result = RAlg::word(RWord{0, b + 1});
    } else {
        // D2 D1 X = D1 D2 X - weight(X) R X with X = R_{1^(a-1) 2^b}
        result = derive2_of(a - 1, b).derive(1) - Rat(1 + a + b) * (RAlg::curvature() * word_or_R(a - 1, b));
    }
    auto [pos, ok] = memo.emplace(key, std::move(result));
    (void)ok;
    return pos->second;
}

}  // namespace detail

inline RAlg RAlg::derive(int dir) const {
    RAlg out;
    const auto& tab = detail::word_table();
    for (const auto& [m, c] : terms_) {
        // chain rule on the R^k factor
        if (m.rexp != 0) {
            RMono rest = m;
            rest.rexp = static_cast<int16_t>(rest.rexp - 1);
            RAlg dr = dir == 1 ? RAlg::word(RWord{1, 0}) : RAlg::word(RWord{0, 1});
            out += (c * Rat(m.rexp)) * (dr * RAlg::monomial(rest, Rat(1)));
        }
        // product rule over the word factors
        for (size_t i = 0; i < m.wexp.size(); ++i) {
            if (!m.wexp[i]) continue;
            RMono rest = m;
            rest.wexp[i] = static_cast<uint8_t>(rest.wexp[i] - 1);
            const RWord& w = tab[i];
            if (w.len() >= kMaxWordLen) throw std::logic_error("RAlg::derive: word length cap exceeded");
            RAlg dw = dir == 1 ? RAlg::word(RWord{w.a + 1, w.b}) : detail::derive2_of(w.a, w.b);
            out += (c * Rat(static_cast<long>(m.wexp[i]))) * (dw * RAlg::monomial(rest, Rat(1)));
        }
    }
    return out;
}

// canonical expansion of R_w for an arbitrary word over {1,2}, by folding
// the derivations right to left over R itself
inline RAlg canon_word(const std::string& w) {
    RAlg cur = RAlg::curvature(1);
    for (auto it = w.rbegin(); it != w.rend(); ++it) cur = cur.derive(*it == '1' ? 1 : 2);
    return cur;
}

inline RAlg RAlg::mirror() const {
    static std::array<RAlg, detail::kNumWords> mimg = [] {
        std::array<RAlg, detail::kNumWords> out;
        const auto& tab = detail::word_table();
        for (size_t i = 0; i < out.size(); ++i) {
            std::string sw(static_cast<size_t>(tab[i].a), '2');
            sw += std::string(static_cast<size_t>(tab[i].b), '1');
            out[i] = -canon_word(sw);
        }
        return out;
    }();
    RAlg out;
    for (const auto& [m, c] : terms_) {
        RMono rm;
        rm.rexp = m.rexp;
        Rat coef = (m.rexp % 2 == 0) ? c : Rat(-c);
        RAlg t = RAlg::monomial(rm, coef);
        for (size_t i = 0; i < m.wexp.size(); ++i)
            for (int e = 0; e < m.wexp[i]; ++e) t *= mimg[i];
        out += t;
    }
    return out;
}

inline std::string RAlg::str() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<RMono, Rat>> sorted(terms_.begin(), terms_.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::ostringstream os;
    const auto& tab = detail::word_table();
    bool first = true;
    for (const auto& [m, c] : sorted) {
        if (!first) os << " + ";
        first = false;
        os << rat_str(c);
        if (m.rexp) os << "*R^" << m.rexp;
        for (size_t i = 0; i < m.wexp.size(); ++i) {
            if (!m.wexp[i]) continue;
            os << "*R" << tab[i].str();
            if (m.wexp[i] > 1) os << '^' << static_cast<int>(m.wexp[i]);
        }
    }
    return os.str();
}

inline RAlg RAlg::parse(const std::string& text) {
    RAlg out;
    if (text == "0") return out;
    size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && text[pos] == ' ') ++pos;
    };
    while (pos < text.size()) {
        skip_ws();
        int sign = 1;
        if (text[pos] == '+' || text[pos] == '-') {
            sign = text[pos] == '-' ? -1 : 1;
            ++pos;
            skip_ws();
        }
        size_t start = pos;
        while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/')) ++pos;
        if (pos == start) throw std::invalid_argument("RAlg::parse: expected coefficient in '" + text + "'");
        Rat c = parse_rat(text.substr(start, pos - start));
        if (sign < 0) c = -c;
        RMono m;
        while (pos < text.size() && text[pos] == '*') {
            ++pos;
            if (pos >= text.size() || text[pos] != 'R') throw std::invalid_argument("RAlg::parse: expected R factor");
            ++pos;
            if (pos < text.size() && text[pos] == '^') {
                // bare R power
                ++pos;
                size_t es = pos;
                if (pos < text.size() && text[pos] == '-') ++pos;
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
                m.rexp = static_cast<int16_t>(m.rexp + std::stoi(text.substr(es, pos - es)));
                continue;
            }
            int a = 0, b = 0;
            size_t ws = pos;
            while (pos < text.size() && (text[pos] == '1' || text[pos] == '2')) {
                if (text[pos] == '1')
                    ++a;
                else
                    ++b;
                ++pos;
            }
            if (pos == ws) {
                m.rexp = static_cast<int16_t>(m.rexp + 1);  // plain R
                continue;
            }
            int e = 1;
            if (pos < text.size() && text[pos] == '^') {
                ++pos;
                size_t es = pos;
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
                e = std::stoi(text.substr(es, pos - es));
            }
            // the digits must already be canonical (sorted ascending)
            RWord rw{a, b};
            bool sorted = true;
            {
                bool seen2 = false;
                for (size_t k = ws; k < ws + static_cast<size_t>(a + b); ++k) {
                    if (text[k] == '2') seen2 = true;
                    if (text[k] == '1' && seen2) sorted = false;
                }
            }
            if (!sorted) throw std::invalid_argument("RAlg::parse: non-canonical word in '" + text + "'");
            m.wexp[detail::word_id(rw)] = static_cast<uint8_t>(m.wexp[detail::word_id(rw)] + e);
        }
        out.add_term(m, c);
        skip_ws();
        if (pos < text.size()) {
            if (text[pos] == '+') {
                ++pos;
            } else if (text[pos] == '-') {
                // leave for sign handling at loop head
            } else {
                throw std::invalid_argument("RAlg::parse: unexpected character in '" + text + "'");
            }
        }
    }
    return out;
}

}  // namespace weblin
