#ifndef SAWMAP_DYNAMICS_HPP
#define SAWMAP_DYNAMICS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sawmap/interval.hpp"
#include "sawmap/saw_map.hpp"

namespace sawmap::dynamics {

enum class EventKind { entered_j_star, entered_J, entered_lambda, dropped_below_e };

const char* to_string(EventKind kind) noexcept;

struct OrbitEvent {
    EventKind kind;
    int step = 0;
    int k = 0; // interval index for entered_J / dropped_below_e / entered_lambda
};

struct OrbitRecord {
    std::vector<double> points;
    // Piece of each point; empty at x = 0.
    std::vector<std::optional<PieceIndex>> pieces;
    std::vector<OrbitEvent> events;
    // Steps at which the point sat exactly on a breakpoint (rising side used).
    std::vector<int> breakpoint_steps;

    std::optional<int> first(EventKind kind, int k = 0) const;
};

// Tolerance for "entered the attractor".
constexpr double lambda_enter_tolerance = 1e-12;
constexpr double lambda_stay_tolerance = 1e-9;

// n + 1 points starting at x0. Events are recorded once each: first entry into
// J*, into each J_k, first drop below e_k after visiting J_k, and, when
// `lambda` is given, first approach within lambda_enter_tolerance of it.
OrbitRecord orbit(const SawMap& map, double x0, int n, std::span<const Interval> lambda = {},
                  int lambda_k = 0);

// Number of steps, or nullopt on timeout.
using StepCount = std::optional<std::int64_t>;

// Least n <= cap with T^n(x0) in J* or some J_k, k <= k*.
StepCount entry_time(const SawMap& map, double x0, std::int64_t cap);

// Least n <= cap with T^n(x0) < e_k. Requires J_k of type III, k <= k* - 1,
// x0 in J_k. The fixed point x0 = e_k never escapes.
StepCount escape_time_type3(const SawMap& map, int k, double x0, std::int64_t cap);

// Least n <= cap with |T^n(x0) - ê_k| <= tol. Requires J_k of type I and
// x0 in J_k, x0 != e_k.
StepCount converge_type1(const SawMap& map, int k, double x0, double tol, std::int64_t cap);

struct Absorption {
    StepCount entered;      // first step within the enter tolerance
    bool stayed = false;    // the following `stay` iterates remained close
    double max_excursion = 0.0;
};

double distance_to_union(std::span<const Interval> sets, double x) noexcept;

// Entry into the closure of the union of `lambda` within `cap` steps, then
// `stay` further iterates checked against lambda_stay_tolerance.
Absorption absorb_into_lambda(const SawMap& map, std::span<const Interval> lambda, double x0,
                              std::int64_t cap, std::int64_t stay);

struct PreimageNode {
    double x = 0.0;
    int level = 0;      // T^level(x) = 0
    int parent = -1;    // node holding T(x); -1 for the root 0
    PieceIndex piece{}; // piece inverted to reach x
};

struct PreimageTree {
    int depth = 0;
    int piece_limit = 0;
    std::vector<PreimageNode> nodes; // sorted by level, then x
    bool truncated = false;
    double max_residual = 0.0;
};

// Points of J* reaching 0 in at most `depth` steps, obtained by inverting
// the pieces with index k <= piece_limit (and within the tabulated depth).
// Stops with truncated = true once max_nodes is reached. Every node is
// verified by forward iteration along its recorded pieces; a residual above
// 1e-10 is an InternalConsistencyError.
PreimageTree preimage_tree(const SawMap& map, int depth, std::size_t max_nodes,
                           int piece_limit = 64);

struct ExpansionEstimate {
    double value = 0.0;          // mean log |T'| along the orbit
    int steps = 0;               // terms in the mean
    std::vector<int> breakpoint_steps;
    bool reached_zero = false;   // orbit hit 0; mean taken over the steps before
};

ExpansionEstimate expansion_estimate(const SawMap& map, double x0, int n);

// Two-piece tent F(x) = alpha x on [0, 1], alpha - beta (x - 1) on
// [1, 1 + alpha/beta]; length of F([a, b]).
double tent_image_length(double alpha, double beta, double a, double b);
double tent_domain_end(double alpha, double beta);

struct TentExpansionResult {
    bool passed = true;
    int trials = 0;
    int failures = 0;
    double worst_margin = 0.0; // min of |F([a,b])| - (b - a) alpha beta / (alpha + beta)
};

constexpr double tent_expansion_slack = 1e-12;

// One trial: |F([a, b])| >= (b - a) alpha beta / (alpha + beta) - slack.
bool tent_expansion_trial(double alpha, double beta, double a, double b, double* margin = nullptr);

// Random subintervals of the tent's domain. Requires 1/alpha + 1/beta < 1.
TentExpansionResult tent_expansion_check(double alpha, double beta, int trials, std::uint64_t seed = 1);

// Fraction of `bins` equal bins of `region` visited by the orbit of x0
// (x0 included, n further points).
double coverage_histogram(const SawMap& map, const Interval& region, double x0, std::int64_t n,
                          int bins);

struct PeriodicPoint {
    std::optional<double> x;
    bool degenerate = false; // slope product equal to 1
    double residual = 0.0;
};

// Fixed point of the composition of the given pieces, accepted iff each
// iterate lies in its prescribed piece and |T^n(x) - x| <= 1e-10.
PeriodicPoint periodic_orbit_from_itinerary(const SawMap& map,
                                            std::span<const PieceIndex> itinerary);

} // namespace sawmap::dynamics

#endif
