#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sawmap/errors.hpp"
#include "sawmap/pnm.hpp"
#include "sawmap/sweep.hpp"

using namespace sawmap;
using namespace sawmap::sweep;

namespace {

const Grid& small_grid()
{
    static const Grid grid = run_sweep({1.0, 3.0, 24}, {-1.0, 0.0, 24}, 4);
    return grid;
}

} // namespace

TEST_CASE("axis ranges")
{
    const auto r = AxisRange::parse("1:3:200");
    CHECK(r.lo == 1.0);
    CHECK(r.hi == 3.0);
    CHECK(r.n == 200);
    CHECK(r.center(0) == doctest::Approx(1.005));
    CHECK(r.center(199) == doctest::Approx(2.995));
    CHECK(AxisRange::parse("-1:0:4").center(3) == doctest::Approx(-0.125));
    CHECK_THROWS_AS(AxisRange::parse("1:3"), MalformedInputError);
    CHECK_THROWS_AS(AxisRange::parse("1:3:0"), MalformedInputError);
    CHECK_THROWS_AS(AxisRange::parse("3:1:10"), MalformedInputError);
    CHECK_THROWS_AS(AxisRange::parse("1:3:4001"), MalformedInputError);
    CHECK_THROWS_AS(AxisRange::parse("a:3:10"), MalformedInputError);
}

TEST_CASE("flags")
{
    CHECK(flags_to_string(0) == "");
    const std::uint32_t f = kss_equality | failed | domain_capped;
    CHECK(flags_from_string(flags_to_string(f)) == f);
    for (std::uint32_t bit = 1; bit <= domain_capped; bit <<= 1) {
        CHECK(flags_from_string(flags_to_string(bit)) == bit);
    }
    CHECK_THROWS_AS(flags_from_string("no_such_flag"), MalformedInputError);
}

TEST_CASE("palette")
{
    CHECK(palette::kstar_gray(1) == 255);
    CHECK(palette::kstar_gray(2) == 192);
    CHECK(palette::kstar_gray(3) == 128);
    CHECK(palette::kstar_gray(4) == 64);
    CHECK(palette::kstar_gray(5) == 0);
    CHECK(palette::kstar_gray(12) == 0);

    CellRecord c;
    c.type_J1 = classify::Type::I;
    CHECK(palette::j1_color(c) == palette::light_gray);
    c.type_J1 = classify::Type::II;
    c.N_J1 = 0;
    CHECK(palette::j1_color(c) == palette::yellow);
    c.N_J1 = 1;
    CHECK(palette::j1_color(c) == palette::red);
    c.N_J1 = 2;
    CHECK(palette::j1_color(c) == palette::magenta);
    c.type_J1 = classify::Type::III;
    c.N_J1.reset();
    CHECK(palette::j1_color(c) == palette::black);
    c.flags = beta_eq_1;
    CHECK(palette::j1_color(c) == palette::blue);
}

TEST_CASE("single cells")
{
    const auto a = classify_cell(2.0, -0.8);
    CHECK(a.k_star == 1);
    CHECK(a.type_J1 == classify::Type::I);
    CHECK(a.in_domain_D);
    CHECK(a.flags == 0);

    const auto b = classify_cell(2.0, -0.4);
    CHECK_FALSE(b.in_domain_D);
    CHECK(b.type_J1 != classify::Type::I);

    const auto eq = classify_cell(2.0, -0.5);
    CHECK((eq.flags & kss_equality) != 0);

    const auto bad = classify_cell(0.5, -0.5);
    CHECK((bad.flags & failed) != 0);
    CHECK_FALSE(bad.error.empty());
}

TEST_CASE("grid layout")
{
    const auto& g = small_grid();
    CHECK(g.cells.size() == 24u * 24u);
    CHECK(g.at(0, 0).lambda > g.at(23, 0).lambda);
    CHECK(g.at(0, 0).sigma < g.at(0, 23).sigma);
    CHECK(g.at(5, 7).sigma == g.sigma.center(7));
    CHECK(g.at(5, 7).lambda == g.lambda.center(24 - 1 - 5));
    for (const auto& c : g.cells) {
        CHECK(((c.flags & failed) == 0 || !c.error.empty()));
        CHECK((c.type_J1.has_value() || (c.flags & failed) != 0));
    }
}

TEST_CASE("sweep findings on a coarse grid")
{
    const auto& g = small_grid();
    bool one = false;
    bool two = false;
    for (const auto& c : g.cells) {
        if (c.flags & kstar_flag_mask) {
            continue;
        }
        CHECK((c.flags & tail_not_type3) == 0);
        if (c.type_J1 == classify::Type::II && !(c.flags & j1_flag_mask)) {
            REQUIRE(c.N_J1);
            CHECK(*c.N_J1 <= 1);
            one = one || *c.N_J1 == 0;
            two = two || *c.N_J1 == 1;
        }
        if (!(c.flags & j1_flag_mask) && c.d_margin >= 1e-8 && std::abs(c.beta_1 - 1) >= 1e-8) {
            CHECK(c.in_domain_D == (c.type_J1 == classify::Type::I));
        }
    }
    CHECK(one);
    CHECK(two);
    // k* grows toward sigma -> 1, lambda -> -1.
    int corner = 0;
    int opposite = 0;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            corner = std::max(corner, g.at(23 - r, c).k_star);
            opposite = std::max(opposite, g.at(r, 23 - c).k_star);
        }
    }
    CHECK(corner > opposite);
}

TEST_CASE("csv round trip and rendering from csv")
{
    const auto& g = small_grid();
    const std::string csv = to_csv(g);
    CHECK(csv.rfind(std::string(csv_header) + "\n", 0) == 0);
    std::istringstream in(csv);
    const Grid back = grid_from_csv(in);
    REQUIRE(back.rows() == g.rows());
    REQUIRE(back.cols() == g.cols());
    CHECK(to_csv(back) == csv);
    CHECK(pnm::encode(render_kstar(back)) == pnm::encode(render_kstar(g)));
    CHECK(pnm::encode(render_j1type(back, true)) == pnm::encode(render_j1type(g, true)));
    CHECK(pnm::encode(render_j1type(back, false)) == pnm::encode(render_j1type(g, false)));
}

TEST_CASE("rendered images")
{
    const auto& g = small_grid();
    const auto gray = render_kstar(g);
    CHECK(gray.width == 24);
    CHECK(gray.height == 24);
    const std::string enc = pnm::encode(gray);
    CHECK(enc.rfind("P5\n24 24\n255\n", 0) == 0);
    CHECK(enc.size() == std::string("P5\n24 24\n255\n").size() + 24 * 24);

    const auto a = render_j1type(g, true);
    const auto b = render_j1type(g, false);
    for (int r = 0; r < 24; ++r) {
        for (int c = 0; c < 24; ++c) {
            const auto& cell = g.at(r, c);
            if (cell.flags & failed) {
                continue;
            }
            if (cell.k_star >= 2) {
                CHECK(b.get(r, c) == palette::white);
            } else {
                CHECK(a.get(r, c) == palette::white);
            }
        }
    }
    CHECK(pnm::encode(a).rfind("P6\n24 24\n255\n", 0) == 0);
}

TEST_CASE("deterministic across thread counts")
{
    const AxisRange s{1.0, 3.0, 16};
    const AxisRange l{-1.0, 0.0, 12};
    const auto one = run_sweep(s, l, 1);
    const auto eight = run_sweep(s, l, 8);
    CHECK(to_csv(one) == to_csv(eight));
    CHECK(pnm::encode(render_kstar(one)) == pnm::encode(render_kstar(eight)));
}

TEST_CASE("thread resolution")
{
    CHECK(resolve_threads(3) == 3);
    CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("pnm round trip")
{
    pnm::GrayImage g(3, 2, 7);
    g.at(1, 2) = 200;
    const std::string path = "sweep_test_roundtrip.pgm";
    pnm::write(path, g);
    const auto back = pnm::read_pgm(path);
    CHECK(back.width == 3);
    CHECK(back.height == 2);
    CHECK(back.pixels == g.pixels);

    pnm::RgbImage c(2, 2);
    c.set(0, 1, palette::red);
    const std::string cpath = "sweep_test_roundtrip.ppm";
    pnm::write(cpath, c);
    const auto cb = pnm::read_ppm(cpath);
    CHECK(cb.get(0, 1) == palette::red);
    CHECK(cb.get(1, 1) == palette::white);
    std::remove(path.c_str());
    std::remove(cpath.c_str());
}
