#pragma once

#include <array>
#include <sstream>
#include <vector>

#include "weblin/jetpoly.hpp"
#include "weblin/ralg.hpp"

namespace weblin {

// Univariate polynomial in the base invariant s with coefficients in the
// curvature-word algebra. Trailing zeros are trimmed, so degree() is exact
// for the stored form.
class SPoly {
  public:
    SPoly() = default;
    explicit SPoly(RAlg c) { coeffs_.push_back(std::move(c)); trim(); }
    explicit SPoly(Rat c) : SPoly(RAlg(std::move(c))) {}

    static SPoly s_power(int k, RAlg c = RAlg(Rat(1))) {
        SPoly p;
        p.coeffs_.assign(static_cast<size_t>(k + 1), RAlg());
        p.coeffs_.back() = std::move(c);
        p.trim();
        return p;
    }

    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const RAlg& coeff(int k) const {
        static const RAlg zero;
        return k >= 0 && k < static_cast<int>(coeffs_.size()) ? coeffs_[static_cast<size_t>(k)] : zero;
    }
    void set_coeff(int k, RAlg c) {
        if (static_cast<int>(coeffs_.size()) <= k) coeffs_.resize(static_cast<size_t>(k + 1));
        coeffs_[static_cast<size_t>(k)] = std::move(c);
        trim();
    }

    SPoly& operator+=(const SPoly& o) {
        if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        trim();
        return *this;
    }
    SPoly& operator-=(const SPoly& o) {
        if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        trim();
        return *this;
    }
    friend SPoly operator+(SPoly a, const SPoly& b) { return a += b; }
    friend SPoly operator-(SPoly a, const SPoly& b) { return a -= b; }
    SPoly operator-() const {
        SPoly p = *this;
        for (auto& c : p.coeffs_) c = -c;
        return p;
    }

    friend SPoly operator*(const SPoly& a, const SPoly& b) {
        SPoly r;
        if (a.is_zero() || b.is_zero()) return r;
        r.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, RAlg());
        for (size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].is_zero()) continue;
            for (size_t j = 0; j < b.coeffs_.size(); ++j) {
                if (b.coeffs_[j].is_zero()) continue;
                r.coeffs_[i + j].accumulate_product(a.coeffs_[i], b.coeffs_[j]);
            }
        }
        r.trim();
        return r;
    }
    friend SPoly operator*(const RAlg& c, const SPoly& p) {
        SPoly r = p;
        for (auto& q : r.coeffs_) q = c * q;
        r.trim();
        return r;
    }
    friend SPoly operator*(const Rat& c, const SPoly& p) {
        SPoly r = p;
        for (auto& q : r.coeffs_) q = c * q;
        r.trim();
        return r;
    }

    bool operator==(const SPoly& o) const { return coeffs_ == o.coeffs_; }

    // d/ds
    SPoly dds() const {
        SPoly r;
        if (coeffs_.size() <= 1) return r;
        r.coeffs_.resize(coeffs_.size() - 1);
        for (size_t i = 1; i < coeffs_.size(); ++i) r.coeffs_[i - 1] = Rat(static_cast<long>(i)) * coeffs_[i];
        r.trim();
        return r;
    }

    // coefficientwise covariant derivative D_i
    SPoly nabla(int dir) const {
        SPoly r = *this;
        for (auto& c : r.coeffs_) c = c.derive(dir);
        r.trim();
        return r;
    }

    SPoly mirror_coeffs() const {
        SPoly r = *this;
        for (auto& c : r.coeffs_) c = c.mirror();
        r.trim();
        return r;
    }

    // swaps s -> -s
    SPoly flip_s() const {
        SPoly r = *this;
        for (size_t i = 1; i < r.coeffs_.size(); i += 2) r.coeffs_[i] = -r.coeffs_[i];
        return r;
    }

    std::optional<int> coeff_weight(int k) const { return coeff(k).weight(); }

    Rat content() const {
        Rat g(0);
        for (const auto& c : coeffs_) g = rat_gcd(g, c.content());
        return g;
    }
    void divide_content(const Rat& g) {
        if (weblin::is_zero(g)) return;
        Rat inv = Rat(1) / g;
        for (auto& c : coeffs_) c = inv * c;
    }

    JetPoly to_jet() const {
        JetPoly out;
        for (size_t i = 0; i < coeffs_.size(); ++i)
            out += JetPoly::mono(JetMono{static_cast<uint8_t>(i), 0, 0, 0}, coeffs_[i]);
        return out;
    }

    template <class T>
    std::vector<T> eval_coeffs(const T& rval, const std::array<T, detail::kNumWords>& wvals) const {
        std::vector<T> out(coeffs_.size());
        for (size_t i = 0; i < coeffs_.size(); ++i) out[i] = coeffs_[i].eval(rval, wvals);
        return out;
    }

    std::string str() const {
        if (coeffs_.empty()) return "0";
        std::ostringstream os;
        for (size_t i = 0; i < coeffs_.size(); ++i) {
            if (i) os << "\n";
            os << "s^" << i << ": " << coeffs_[i].str();
        }
        return os.str();
    }
    static SPoly parse(const std::string& text) {
        SPoly p;
        if (text == "0") return p;
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            auto colon = line.find(": ");
            if (line.rfind("s^", 0) != 0 || colon == std::string::npos)
                throw std::invalid_argument("SPoly::parse: bad line '" + line + "'");
            int k = std::stoi(line.substr(2, colon - 2));
            p.set_coeff(k, RAlg::parse(line.substr(colon + 2)));
        }
        return p;
    }

  private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    std::vector<RAlg> coeffs_;  // coeffs_[k] multiplies s^k
};

// extracts a JetPoly of shape a*s1 + b*s2 + c*s1*s2 + (-d) into SPoly rows
struct LinearJetForm {
    SPoly a, b, c, d;
};

inline LinearJetForm split_linear_form(const JetPoly& p) {
    LinearJetForm f;
    for (const auto& [m, q] : p.terms()) {
        if (m.s21) throw std::invalid_argument("split_linear_form: s_21 present");
        SPoly part = SPoly::s_power(m.s, q);
        if (m.s1 == 1 && m.s2 == 0)
            f.a += part;
        else if (m.s1 == 0 && m.s2 == 1)
            f.b += part;
        else if (m.s1 == 1 && m.s2 == 1)
            f.c += part;
        else if (m.s1 == 0 && m.s2 == 0)
            f.d -= part;
        else
            throw std::invalid_argument("split_linear_form: monomial outside {1, s1, s2, s1 s2}");
    }
    return f;
}

inline SPoly det3(const std::array<std::array<SPoly, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline SPoly det4(const std::array<std::array<SPoly, 4>, 4>& m) {
    SPoly acc;
    for (int j = 0; j < 4; ++j) {
        std::array<std::array<SPoly, 3>, 3> minor;
        for (int r = 1; r < 4; ++r) {
            int cc = 0;
            for (int c = 0; c < 4; ++c) {
                if (c == j) continue;
                minor[r - 1][cc++] = m[r][c];
            }
        }
        SPoly term = m[0][j] * det3(minor);
        if (j % 2)
            acc -= term;
        else
            acc += term;
    }
    return acc;
}

}  // namespace weblin
