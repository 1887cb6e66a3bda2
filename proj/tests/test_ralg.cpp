#include <doctest.h>

#include <random>

#include "weblin/ralg.hpp"

using namespace weblin;

namespace {

RAlg R() { return RAlg::curvature(); }
RAlg Rw(int a, int b) { return RAlg::word(RWord{a, b}); }

std::array<Rat, detail::kNumWords> random_binding(std::mt19937& rng) {
    std::uniform_int_distribution<int> n(-6, 6), d(1, 4);
    std::array<Rat, detail::kNumWords> vals;
    for (auto& v : vals) v = rat(n(rng), d(rng));
    return vals;
}

Rat random_nonzero(std::mt19937& rng) {
    std::uniform_int_distribution<int> n(1, 7), d(1, 4), s(0, 1);
    Rat v = rat(n(rng), d(rng));
    return s(rng) ? v : Rat(-v);
}

}  // namespace

TEST_CASE("word commutation: R_21 = R_12 - 2 R^2") {
    RAlg r21 = canon_word("21");
    RAlg expect = Rw(1, 1) - Rat(2) * (R() * R());
    CHECK(r21 == expect);
}

TEST_CASE("derive acts by prepending the index") {
    CHECK(Rw(1, 0).derive(1) == Rw(2, 0));
    CHECK(Rw(0, 1).derive(1) == Rw(1, 1));
    // D_2 R_1 = R_21 = R_12 - 2 R^2
    CHECK(Rw(1, 0).derive(2) == Rw(1, 1) - Rat(2) * (R() * R()));
    // chain rule on the Laurent part: D_2 R^-1 = -R^-2 R_2
    RAlg rinv = RAlg::curvature(-1);
    CHECK(rinv.derive(2) == -(RAlg::curvature(-2) * Rw(0, 1)));
}

TEST_CASE("weights") {
    CHECK(R().weight() == 2);
    CHECK(Rw(2, 1).weight() == 5);
    CHECK((RAlg::curvature(-1) * Rw(1, 1) * Rw(1, 1)).weight() == 6);
    CHECK(!(R() + Rw(1, 0)).weight().has_value());
    CHECK((R() * R() - Rat(3) * Rw(1, 1)).weight() == 4);
}

TEST_CASE("permutation rule holds under random numeric bindings") {
    // For any canonical word object X: D1 D2 X - D2 D1 X = weight(X) R X.
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        std::uniform_int_distribution<int> pick(0, 11);
        const auto& tab = detail::word_table();
        RWord w = tab[static_cast<size_t>(pick(rng))];
        if (w.len() > 4) continue;
        RAlg x = RAlg::word(w);
        RAlg lhs = x.derive(2).derive(1) - x.derive(1).derive(2);
        RAlg rhs = Rat(w.weight()) * (R() * x);
        RAlg defect = lhs - rhs;
        auto vals = random_binding(rng);
        Rat rv = random_nonzero(rng);
        CHECK(defect.eval<Rat>(rv, vals) == 0);
    }
}

TEST_CASE("mirror map") {
    // involution that swaps 1<->2 and negates R
    CHECK(R().mirror() == -R());
    CHECK(Rw(1, 0).mirror() == -Rw(0, 1));
    // M(R_12) = -R_21 = -(R_12 - 2R^2)
    CHECK(Rw(1, 1).mirror() == -(Rw(1, 1) - Rat(2) * (R() * R())));
    std::mt19937 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        std::uniform_int_distribution<int> pick(0, 8);
        RAlg x = RAlg::word(detail::word_table()[static_cast<size_t>(pick(rng))]) * RAlg::curvature(trial % 3 - 1);
        CHECK(x.mirror().mirror() == x);
    }
}

TEST_CASE("serialization round trip") {
    std::mt19937 rng(91);
    std::uniform_int_distribution<int> pick(0, detail::kNumWords - 1), n(-5, 5), d(1, 3), rx(-2, 2);
    for (int trial = 0; trial < 50; ++trial) {
        RAlg x;
        for (int t = 0; t < 5; ++t) {
            RMono m;
            m.rexp = static_cast<int16_t>(rx(rng));
            m.wexp[static_cast<size_t>(pick(rng))] += 1;
            m.wexp[static_cast<size_t>(pick(rng))] += 1;
            Rat c = rat(n(rng), d(rng));
            x += RAlg::monomial(m, c);
        }
        CHECK(RAlg::parse(x.str()) == x);
    }
    CHECK(RAlg::parse("0") == RAlg());
    CHECK(RAlg::parse("3/4*R^-2*R112") == Rat(3, 4) * (RAlg::curvature(-2) * Rw(2, 1)));
}

TEST_CASE("content") {
    RAlg x = Rat(6) * R() + Rat(-9) * Rw(1, 0);
    CHECK(x.content() == 3);
}
