#include <doctest.h>

#include <cmath>
#include <random>

#include "sawmap/errors.hpp"
#include "sawmap/saw_map.hpp"
#include "sawmap/validate.hpp"
#include "support.hpp"

using namespace sawmap;

namespace {

TabulatedSequences tm1_with(int index, double value, char which)
{
    std::vector<double> r{1.0, 0.3, 0.12, 0.05};
    std::vector<double> q{0.5, 0.2, 0.08};
    std::vector<double> p{0.9, 0.8, 0.45, 0.3};
    if (which == 'p') {
        p[static_cast<std::size_t>(index)] = value;
    } else if (which == 'r') {
        r[static_cast<std::size_t>(index)] = value;
    }
    return TabulatedSequences(r, q, p);
}

} // namespace

TEST_CASE("TM1 validates with k* = 1")
{
    const auto seqs = testing::load("tm1.json");
    const auto rep = validate(*seqs, 3);
    CHECK_MESSAGE(rep.ok(), rep.summary());
    REQUIRE(rep.k_star);
    CHECK(*rep.k_star == 1);
    CHECK_FALSE(rep.k_star_boundary);
    CHECK(seqs->alpha(1) == doctest::Approx(8.0));
    CHECK(seqs->alpha(2) == doctest::Approx(11.25));
    CHECK(seqs->beta(1) == doctest::Approx(4.0));
    CHECK(seqs->beta(2) == doctest::Approx(5.625));
}

TEST_CASE("ordering violations are reported with their index")
{
    SUBCASE("p_0 above r_0")
    {
        const auto rep = validate(tm1_with(0, 1.1, 'p'), 3);
        CHECK(rep.has("p_0 < r_0"));
        bool at_zero = false;
        for (const auto& v : rep.violations) {
            at_zero |= v.rule == "p_0 < r_0" && v.index == 0;
        }
        CHECK(at_zero);
    }
    SUBCASE("p_1 below r_1")
    {
        const auto rep = validate(tm1_with(1, 0.25, 'p'), 3);
        bool found = false;
        for (const auto& v : rep.violations) {
            found |= v.rule == "p_k > r_k" && v.index == 1;
        }
        CHECK(found);
    }
}

TEST_CASE("malformed input is distinct from invariant violations")
{
    CHECK_THROWS_AS(TabulatedSequences({}, {}, {}), MalformedInputError);
    CHECK_THROWS_AS(TabulatedSequences({1.0, 0.3}, {0.5, 0.2}, {0.9, 0.8}), MalformedInputError);
    CHECK_THROWS_AS(TabulatedSequences({1.0, NAN}, {0.5}, {0.9, 0.8}), MalformedInputError);
    CHECK_THROWS_AS(TabulatedSequences::from_json_file(testing::fixture("malformed.json")),
                    MalformedInputError);
    CHECK_THROWS_AS(TabulatedSequences::from_json_string("{\"r\": [1, 2"), MalformedInputError);
    CHECK_THROWS_AS(TabulatedSequences::from_json_string("{\"r\": [1], \"q\": []}"),
                    MalformedInputError);
    CHECK_THROWS_AS(validate(*testing::load("tm1.json"), 1), PreconditionError);
    CHECK_THROWS_AS(validate(*testing::load("tm1.json"), 4), PreconditionError);
}

TEST_CASE("make_saw_map rejects invalid tables")
{
    auto bad = std::make_shared<const TabulatedSequences>(tm1_with(0, 1.1, 'p'));
    try {
        (void)make_saw_map(bad, 3);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.report().has("p_0 < r_0"));
    }
}

TEST_CASE("eval on TM1")
{
    const auto T = testing::tm1();
    CHECK(T.eval(0.0) == 0.0);
    CHECK(T.eval(1e-301) == 0.0);
    CHECK(T.eval(0.3) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(T.eval(0.25) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(T.eval(0.8) == doctest::Approx(0.54).epsilon(1e-15));
    CHECK(T.eval(1.0) == doctest::Approx(0.9).epsilon(1e-15));
    for (int k = 1; k <= 3; ++k) {
        CHECK(T.eval(T.sequences().q(k)) == 0.0);
    }
    for (int k = 1; k <= 2; ++k) {
        CHECK(T.eval(T.sequences().r(k)) == doctest::Approx(T.sequences().p(k)).epsilon(1e-15));
    }
    // r_3 lies below q_3, the deepest tabulated breakpoint.
    CHECK_THROWS_AS(T.eval(0.05), TruncationError);
    CHECK_THROWS_AS(T.eval(-0.1), DomainError);
    CHECK_THROWS_AS(T.eval(1.01), DomainError);
    try {
        (void)T.eval(0.01);
        FAIL("expected TruncationError");
    } catch (const TruncationError& e) {
        CHECK(e.needed_depth() == 4);
    }
}

TEST_CASE("locate_piece and breakpoint ties")
{
    const auto T = testing::tm1();
    CHECK(T.locate_piece(0.25) == PieceIndex{1, Branch::rising});
    CHECK(T.locate_piece(0.4) == PieceIndex{1, Branch::falling});
    CHECK(T.locate_piece(0.5) == PieceIndex{0, Branch::rising});
    CHECK(T.locate_piece(0.2) == PieceIndex{1, Branch::rising});
    CHECK(T.locate_piece(0.3) == PieceIndex{1, Branch::rising});
    CHECK(T.locate_piece(0.08) == PieceIndex{2, Branch::rising});
    CHECK_THROWS_AS(T.locate_piece(0.0), DomainError);
}

TEST_CASE("fixed points of TM1")
{
    const auto T = testing::tm1();
    const auto f1 = T.fixed_points(1);
    CHECK(f1.rising == doctest::Approx(8.0 * 0.2 / 7.0).epsilon(1e-14));
    CHECK(f1.falling == doctest::Approx(0.4).epsilon(1e-14));
    const auto f2 = T.fixed_points(2);
    CHECK(f2.rising == doctest::Approx(11.25 * 0.08 / 10.25).epsilon(1e-14));
    for (int k = 1; k <= 2; ++k) {
        const auto f = T.fixed_points(k);
        CHECK(std::abs(T.eval(f.rising) - f.rising) <= 1e-12 * std::max(1.0, f.rising));
        CHECK(std::abs(T.eval(f.falling) - f.falling) <= 1e-12 * std::max(1.0, f.falling));
        CHECK(T.sequences().q(k + 1) < f.rising);
        CHECK(f.rising < T.sequences().r(k));
        CHECK(T.sequences().r(k) < f.falling);
        CHECK(f.falling < T.sequences().q(k));
    }
    CHECK_THROWS_AS(T.fixed_points(0), DomainError);
}

TEST_CASE("single affine piece: alpha = 2, q_{k+1} = 0.25 gives e = 0.5")
{
    // Two-level table whose k = 1 rising piece has slope 2 from 0.25.
    const TabulatedSequences s({2.0, 0.7, 0.1}, {1.5, 0.25}, {1.9, 0.9, 0.2});
    CHECK(s.alpha(1) == doctest::Approx(2.0));
    CHECK(rising_fixed_point(s, 1) == doctest::Approx(0.5));
}

TEST_CASE("k* on TM1 and TM2")
{
    CHECK(compute_k_star(*testing::load("tm1.json"), 3).k_star == 1);
    const auto tm2 = testing::load("tm2.json");
    const auto rep = validate(*tm2, 4);
    CHECK_MESSAGE(rep.ok(), rep.summary());
    CHECK(compute_k_star(*tm2, 4).k_star == 2);
    const auto T = testing::tm2();
    CHECK(T.k_star() == 2);
    CHECK(T.sequences().p(2) < T.fixed_points(1).rising);
    CHECK(T.sequences().p(3) > T.fixed_points(2).rising);
}

TEST_CASE("k* undetermined")
{
    // p_k stays below e_{k-1} throughout.
    const TabulatedSequences s({1.0, 0.6, 0.3}, {0.8, 0.4}, {0.95, 0.5, 0.1});
    CHECK_THROWS_WITH_AS(compute_k_star(s, 2), doctest::Contains("k* undetermined at depth"),
                         DomainError);
}

TEST_CASE("interval family of TM1")
{
    const auto T = testing::tm1();
    const auto fam = T.intervals();
    CHECK(fam.j_star.lo == 0.0);
    CHECK(fam.j_star.hi == 0.8);
    REQUIRE(fam.J.size() == 1);
    CHECK(fam.J[0].lo == doctest::Approx(0.228571).epsilon(1e-6));
    CHECK(fam.J[0].hi == 0.8);
    CHECK(fam.G[0].lo == doctest::Approx(0.54).epsilon(1e-14));
    CHECK(fam.G[0].hi == 0.8);
}

TEST_CASE("crossings of TM1")
{
    const auto T = testing::tm1();
    const auto c = T.crossings(1);
    const double e1 = T.fixed_points(1).rising;
    CHECK(c.f == doctest::Approx(0.3 + (0.8 - e1) / 4.0).epsilon(1e-14));
    CHECK(c.f == doctest::Approx(0.442857).epsilon(1e-6));
    CHECK(c.g == doctest::Approx(0.626984).epsilon(1e-6));
    CHECK(std::abs(T.eval(c.f) - e1) <= 1e-12);
    CHECK(std::abs(T.eval(c.g) - e1) <= 1e-12);
    // 1/alpha + 1/beta = 0.375 < 1 goes with f_1 < p_1.
    CHECK(1.0 / 8.0 + 1.0 / 4.0 < 1.0);
    CHECK(c.f < 0.8);
    CHECK_THROWS_AS(T.crossings(2), DomainError);
}

TEST_CASE("fixed-point ordering and residuals on the extended table")
{
    const auto T = testing::tm1_extended();
    const auto& s = T.sequences();
    for (int k = 1; k + 1 <= *s.depth(); ++k) {
        const auto f = T.fixed_points(k);
        CHECK(s.q(k + 1) < f.rising);
        CHECK(f.rising < s.r(k));
        CHECK(s.r(k) < f.falling);
        CHECK(f.falling < s.q(k));
        CHECK(std::abs(T.eval(f.rising) - f.rising) <= 1e-12 * std::max(1.0, f.rising));
        CHECK(std::abs(T.eval(f.falling) - f.falling) <= 1e-12 * std::max(1.0, f.falling));
        CHECK(s.beta(k + 1) > s.beta(k));
        if (k + 2 <= *s.depth()) {
            CHECK(s.alpha(k + 1) > s.alpha(k));
        }
    }
}

TEST_CASE("J* is invariant under sampling")
{
    for (const auto& T : {testing::tm1(), testing::tm2(), testing::tm1_extended()}) {
        const auto js = T.j_star();
        std::mt19937_64 rng(7);
        // Above the deepest tabulated breakpoint.
        const double floor = T.sequences().q(*T.sequences().depth());
        std::uniform_real_distribution<double> u(floor, js.hi);
        int outside = 0;
        for (int i = 0; i < 10000; ++i) {
            if (!js.contains(T.eval(u(rng)))) {
                ++outside;
            }
        }
        CHECK(outside == 0);
    }
}

TEST_CASE("eval is affine on every piece")
{
    const auto T = testing::tm1_extended(20);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 19; ++k) {
        for (auto br : {Branch::rising, Branch::falling}) {
            if (k == 0 && br == Branch::falling) {
                continue;
            }
            const auto pc = T.piece({k, br});
            const double ya = T.eval(pc.domain.lo);
            const double yb = T.eval(pc.domain.hi);
            for (int i = 0; i < 50; ++i) {
                const double t = u(rng);
                const double x = pc.domain.lo + t * (pc.domain.hi - pc.domain.lo);
                const double expect = ya + (yb - ya) * (x - pc.domain.lo) / pc.domain.length();
                CHECK(std::abs(T.eval(x) - expect) <= 8e-16 * std::max(std::abs(ya), std::abs(yb)));
            }
        }
    }
}

TEST_CASE("crossings: slope sum sign matches f_k - p_k")
{
    for (const auto& T : {testing::tm1(), testing::tm2()}) {
        for (int k = 1; k <= T.k_star(); ++k) {
            const auto& s = T.sequences();
            const double sum = 1.0 / s.alpha(k) + 1.0 / s.beta(k) - 1.0;
            const double d = T.crossings(k).f - s.p(k);
            if (std::abs(sum) > 1e-12) {
                CHECK((sum > 0) == (d > 0));
            }
        }
    }
}
