// Command-line front end: analysis at one (sigma, lambda), parameter-plane
// sweeps, orbit dumps, tabulated maps and consistency reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sawmap/classify.hpp"
#include "sawmap/dynamics.hpp"
#include "sawmap/errors.hpp"
#include "sawmap/pnm.hpp"
#include "sawmap/saw_map.hpp"
#include "sawmap/sweep.hpp"
#include "sawmap/twod.hpp"
#include "sawmap/validate.hpp"

namespace {

using nlohmann::json;
using namespace sawmap;

enum Exit { ok = 0, usage = 1, validation = 2, consistency = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    double sigma = 0.0;
    double lambda = 0.0;
    std::string sigma_range = "1:3:200";
    std::string lambda_range = "-1:0:200";
    int depth = 8;
    double x0 = 0.0;
    double s0 = 0.0;
    int steps = 10;
    std::string out;
    int threads = 0;
    double tolerance = 1e-12;
    int samples = 100;
    std::uint64_t seed = 1;
    std::string kind;
    std::string config;
    std::optional<double> x;
    std::string csv;
};

twod::Params params_of(const Options& o)
{
    if (!twod::Params::admissible(o.sigma, o.lambda)) {
        throw UsageError("(sigma, lambda) = (" + std::to_string(o.sigma) + ", "
                         + std::to_string(o.lambda) + ") outside the admissible region "
                         + twod::admissible_region);
    }
    return twod::Params::make(o.sigma, o.lambda);
}

std::ostream& output(const Options& o, std::ofstream& file)
{
    if (o.out.empty() || o.out == "-") {
        return std::cout;
    }
    file.open(o.out);
    if (!file) {
        throw UsageError("cannot open " + o.out + " for writing");
    }
    return file;
}

json interval_json(const Interval& iv)
{
    return json::array({iv.lo, iv.hi});
}

json type_json(double alpha, double beta)
{
    const auto t = classify::classify_interval(alpha, beta);
    json j{{"alpha", alpha}, {"beta", beta}, {"type", classify::to_string(t.tag)},
           {"boundary", classify::to_string(t.boundary)},
           {"slope_sum", 1.0 / alpha + 1.0 / beta}};
    return j;
}

json attractor_json(const classify::AttractorStructure& s)
{
    json A = json::array();
    for (const auto& iv : s.A) {
        A.push_back(interval_json(iv));
    }
    return {{"N", s.N}, {"A", A}, {"sigma", s.sigma}, {"skeleton", s.skeleton}};
}

json map_json(const SawMap& map, int depth)
{
    const auto& s = map.sequences();
    json seq{{"q", json::array()}, {"r", json::array()}, {"p", json::array()}};
    for (int k = 0; k <= depth; ++k) {
        seq["r"].push_back(s.r(k));
        seq["p"].push_back(s.p(k));
        if (k >= 1) {
            seq["q"].push_back(s.q(k));
        }
    }
    json per_k = json::array();
    for (int k = 1; k <= map.k_star(); ++k) {
        json j = type_json(s.alpha(k), s.beta(k));
        j["k"] = k;
        j["J"] = interval_json(map.J(k));
        j["G"] = interval_json(map.G(k));
        const auto fp = map.fixed_points(k);
        j["e"] = fp.rising;
        j["e_hat"] = fp.falling;
        per_k.push_back(j);
    }
    json out{{"k_star", map.k_star()},
             {"k_star_boundary", map.k_star_result().boundary},
             {"j_star", interval_json(map.j_star())},
             {"sequences", seq},
             {"intervals", per_k}};
    const int ks = map.k_star();
    const double sum = 1.0 / s.alpha(ks) + 1.0 / s.beta(ks);
    out["j_star_expanding"] = sum < 1.0;

    const auto t1 = classify::classify_interval(s.alpha(1), s.beta(1));
    if (t1.tag == classify::Type::II && !t1.flagged()) {
        out["attractor_J1"] = attractor_json(classify::attractor_intervals(map, 1));
    }
    return out;
}

int cmd_analyze(const Options& o)
{
    const auto params = params_of(o);
    const auto seqs = twod::closed_form_sequences(params);
    MapOptions mo;
    mo.tolerance = o.tolerance;
    const SawMap map(seqs, mo);
    const int depth = std::max({2, o.depth, map.k_star() + 1, map.k_star_result().checked_depth});
    const auto report = validate(*seqs, depth, o.tolerance);

    json out = map_json(map, o.depth);
    out["sigma"] = params.sigma;
    out["lambda"] = params.lambda;
    out["k_double_star"] = seqs->k_double_star().k;
    out["k_double_star_equality"] = seqs->k_double_star().equality;
    out["r0_rule"] = seqs->canonical_top() ? "r_0 = q_1 + 2 p_1 / |lambda|, p_0 = 2 p_1"
                                           : "r_0, p_0 from the shifted sequences at k** - 1";
    out["validation"] = report.ok() ? "ok" : report.summary();
    const auto d = classify::domain_D_membership(params.sigma, params.lambda);
    out["in_domain_D"] = d.inside;
    if (d.witness) {
        out["domain_D_witness"] = *d.witness;
    }
    const auto t1 = classify::classify_interval(seqs->alpha(1), seqs->beta(1));
    out["type_J1"] = classify::to_string(t1.tag);
    const auto cons = twod::consistency_check(map, params, o.samples, o.seed);
    out["consistency_max_rel_dev"] = cons.max_rel_dev;
    out["consistency_samples"] = o.samples;

    std::ofstream file;
    output(o, file) << out.dump(2) << '\n';
    if (!report.ok()) {
        std::cerr << report.summary();
        return validation;
    }
    return ok;
}

int cmd_sweep(const Options& o)
{
    if (o.kind != "kstar" && o.kind != "j1type") {
        throw UsageError("sweep kind must be kstar or j1type");
    }
    sweep::AxisRange sr;
    sweep::AxisRange lr;
    try {
        sr = sweep::AxisRange::parse(o.sigma_range);
        lr = sweep::AxisRange::parse(o.lambda_range);
    } catch (const MalformedInputError& e) {
        throw UsageError(e.what());
    }
    if (sr.lo < 1.0 || lr.lo < -1.0 || lr.hi > 0.0) {
        throw UsageError(std::string("sweep ranges must lie within ") + twod::admissible_region);
    }
    const auto grid = sweep::run_sweep(sr, lr, o.threads);
    const std::string prefix = o.out.empty() ? "sweep_" + o.kind : o.out;

    auto write_text = [](const std::string& path, const std::string& text) {
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            throw UsageError("cannot open " + path + " for writing");
        }
        f << text;
    };
    write_text(prefix + ".csv", sweep::to_csv(grid));
    if (o.kind == "kstar") {
        pnm::write(prefix + ".pgm", sweep::render_kstar(grid));
    } else {
        pnm::write(prefix + "_a.ppm", sweep::render_j1type(grid, true));
        pnm::write(prefix + "_b.ppm", sweep::render_j1type(grid, false));
    }

    int flagged = 0;
    int failed = 0;
    int max_k = 0;
    for (const auto& c : grid.cells) {
        flagged += c.flags != 0;
        failed += (c.flags & sweep::failed) != 0;
        max_k = std::max(max_k, c.k_star);
    }
    std::cout << "cells " << grid.cells.size() << ", flagged " << flagged << ", failed " << failed
              << ", max k* " << max_k << '\n';
    return ok;
}

int cmd_orbit(const Options& o)
{
    const auto params = params_of(o);
    if (!(o.s0 >= -1.0 && o.s0 <= 1.0)) {
        throw UsageError("initial state outside the strip -1 <= s <= 1");
    }
    if (o.steps < 0) {
        throw UsageError("--steps must be >= 0");
    }
    const auto traj = twod::trajectory(params, {o.x0, o.s0}, o.steps);
    const double c = params.shift();
    const double slack = twod::hit_slack * std::max(1.0, c);
    std::ofstream file;
    auto& out = output(o, file);
    out << "n,x,s,hit\n";
    char buf[96];
    for (std::size_t n = 0; n < traj.size(); ++n) {
        const auto& st = traj[n];
        const char* hit = "";
        if (st.s == 1.0 && st.x >= c - slack) {
            hit = "l+";
        } else if (st.s == -1.0 && st.x <= -c + slack) {
            hit = "l-";
        }
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,", n, st.x, st.s);
        out << buf << hit << '\n';
    }
    return ok;
}

int cmd_sawmap(const Options& o)
{
    auto seqs = std::make_shared<const TabulatedSequences>(
        TabulatedSequences::from_json_file(o.config));
    const int depth = *seqs->depth();
    MapOptions mo;
    mo.tolerance = o.tolerance;
    if (depth < 2) {
        throw ValidationError(ValidationReport{{{"depth >= 2", depth, "table too short"}}, {},
                                               false, false, depth});
    }
    const auto map = make_saw_map(seqs, depth, mo);
    if (o.x) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", map.eval(*o.x));
        std::cout << buf << '\n';
        return ok;
    }
    json out = map_json(map, depth);
    out["validation"] = "ok";
    std::ofstream file;
    output(o, file) << out.dump(2) << '\n';
    return ok;
}

int cmd_consistency(const Options& o)
{
    const auto params = params_of(o);
    const auto report = twod::consistency_check(params, o.samples, o.seed);
    std::ofstream file;
    auto& out = output(o, file);
    out << "x,T_analytic,T_simulated,rel_dev\n";
    char buf[128];
    for (const auto& s : report.samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.3e\n", s.x, s.analytic, s.simulated,
                      s.rel_dev);
        out << buf;
    }
    std::cerr << "max relative deviation " << report.max_rel_dev << '\n';
    return ok;
}

int cmd_render(const Options& o)
{
    std::ifstream in(o.csv);
    if (!in) {
        throw UsageError("cannot open " + o.csv);
    }
    const auto grid = sweep::grid_from_csv(in);
    const std::string prefix = o.out.empty() ? "render_" + o.kind : o.out;
    if (o.kind == "kstar") {
        pnm::write(prefix + ".pgm", sweep::render_kstar(grid));
    } else if (o.kind == "j1type") {
        pnm::write(prefix + "_a.ppm", sweep::render_j1type(grid, true));
        pnm::write(prefix + "_b.ppm", sweep::render_j1type(grid, false));
    } else {
        throw UsageError("render kind must be kstar or j1type");
    }
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Saw maps, their invariant intervals, and the two-dimensional saturation system"};
    app.require_subcommand(1);
    Options o;

    auto add_params = [&](CLI::App* sub) {
        sub->add_option("--sigma", o.sigma, "sigma > 1")->required();
        sub->add_option("--lambda", o.lambda, "-1 < lambda < 0")->required();
    };

    auto* analyze = app.add_subcommand("analyze", "analyze the saw map at (sigma, lambda)");
    add_params(analyze);
    analyze->add_option("--depth", o.depth, "number of sequence values to report")
        ->check(CLI::Range(2, 10000));
    analyze->add_option("--tolerance", o.tolerance, "relative tolerance");
    analyze->add_option("--samples", o.samples, "consistency samples")->check(CLI::Range(0, 1000000));
    analyze->add_option("--seed", o.seed, "sampling seed");
    analyze->add_option("--out", o.out, "output file (default stdout)");

    auto* sw = app.add_subcommand("sweep", "classify a (sigma, lambda) grid");
    sw->add_option("kind", o.kind, "kstar or j1type")->required();
    sw->add_option("--sigma-range", o.sigma_range, "lo:hi:n");
    sw->add_option("--lambda-range", o.lambda_range, "lo:hi:n");
    sw->add_option("--out", o.out, "output prefix");
    sw->add_option("--threads", o.threads, "worker threads (default SAWMAP_THREADS or all cores)")
        ->check(CLI::Range(0, 1024));

    auto* orb = app.add_subcommand("orbit", "dump a trajectory of the two-dimensional system");
    add_params(orb);
    orb->add_option("--x0", o.x0, "initial x");
    orb->add_option("--s0", o.s0, "initial s in [-1, 1]");
    orb->add_option("--steps", o.steps, "number of steps");
    orb->add_option("--out", o.out, "output CSV (default stdout)");

    auto* sm = app.add_subcommand("sawmap", "evaluate or analyze a tabulated saw map");
    sm->add_option("--config", o.config, "JSON {r, q, p}")->required();
    sm->add_option("--x", o.x, "evaluate T(x) instead of analyzing");
    sm->add_option("--tolerance", o.tolerance, "relative tolerance");
    sm->add_option("--out", o.out, "output file (default stdout)");

    auto* cons = app.add_subcommand("consistency", "compare the closed-form map with simulation");
    add_params(cons);
    cons->add_option("--samples", o.samples, "number of samples")->check(CLI::Range(1, 10000000));
    cons->add_option("--seed", o.seed, "sampling seed");
    cons->add_option("--out", o.out, "output CSV (default stdout)");

    auto* rd = app.add_subcommand("render", "render images from a sweep CSV");
    rd->add_option("kind", o.kind, "kstar or j1type")->required();
    rd->add_option("--csv", o.csv, "sweep CSV")->required();
    rd->add_option("--out", o.out, "output prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*analyze) {
            return cmd_analyze(o);
        }
        if (*sw) {
            return cmd_sweep(o);
        }
        if (*orb) {
            return cmd_orbit(o);
        }
        if (*sm) {
            return cmd_sawmap(o);
        }
        if (*cons) {
            return cmd_consistency(o);
        }
        if (*rd) {
            return cmd_render(o);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const ValidationError& e) {
        std::cerr << e.what();
        return validation;
    } catch (const MalformedInputError& e) {
        std::cerr << "malformed input: " << e.what() << '\n';
        return validation;
    } catch (const InternalConsistencyError& e) {
        std::cerr << "internal consistency error: " << e.what() << '\n';
        return consistency;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return consistency;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    }
    return usage;
}
