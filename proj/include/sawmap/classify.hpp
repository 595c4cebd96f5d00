#ifndef SAWMAP_CLASSIFY_HPP
#define SAWMAP_CLASSIFY_HPP

#include <optional>
#include <vector>

#include "sawmap/interval.hpp"
#include "sawmap/saw_map.hpp"

namespace sawmap::classify {

// I: stable fixed point; II: invariant interval carrying an attractor made of
// 2^N subintervals; III: expanding, with an invariant Cantor repeller.
enum class Type { I, II, III };

enum class Boundary { none, beta_eq_1, sum_eq_1 };

struct IntervalType {
    Type tag = Type::I;
    Boundary boundary = Boundary::none;

    bool flagged() const noexcept { return boundary != Boundary::none; }
};

const char* to_string(Type t) noexcept;
const char* to_string(Boundary b) noexcept;

constexpr double boundary_epsilon = 1e-12;

// beta <= 1 -> I; beta > 1 and 1/alpha + 1/beta >= 1 -> II; otherwise III.
// Equalities within eps are flagged; the tag still follows the inequalities.
IntervalType classify_interval(double alpha, double beta, double eps = boundary_epsilon);

// Slope pairs of the successive squared restrictions:
// xi_0 = alpha, nu_0 = beta, xi_{i+1} = nu_i^2, nu_{i+1} = xi_i * nu_i.
struct RenormTrace {
    std::vector<double> xi;
    std::vector<double> nu;
    int j = 1;                // first level with 1/xi + 1/nu <= 1
    bool boundary = false;    // that level sum equals 1 within eps

    int N() const noexcept { return j - 1; }
};

RenormTrace renorm_index(double alpha, double beta, int max_iter = 64);

// Left-to-right order of the attractor intervals: entry m is the orbit
// index of the m-th interval from the left. Built by doubling from (1).
std::vector<int> sigma_permutation(int N);

// Unimodal two-piece map: rises with slope `rise` up to (apex, peak), then
// falls with slope -`fall`.
struct SkewTent {
    double apex = 0.0;
    double peak = 0.0;
    double rise = 0.0;
    double fall = 0.0;

    double operator()(double x) const noexcept
    {
        return x <= apex ? peak - rise * (apex - x) : peak - fall * (x - apex);
    }

    double rising_fixed_point() const noexcept { return (rise * apex - peak) / (rise - 1.0); }
    double falling_fixed_point() const noexcept { return (peak + fall * apex) / (1.0 + fall); }

    // Square of the map restricted to [falling fixed point, peak]; same
    // shape, slopes (fall^2, rise*fall), same peak value.
    SkewTent renormalized() const noexcept
    {
        return {apex + (peak - apex) / fall, peak, fall * fall, rise * fall};
    }
};

// Restriction of T to J_k as a skew tent.
SkewTent tent_of(const SawMap& map, int k);

// Extrema of the squared map on each level: rising-side and falling-side
// preimages of the apex (T^2 attains the peak there).
struct LevelPartition {
    double u = 0.0;
    double v = 0.0;
};

struct AttractorStructure {
    int N = 0;
    // Open intervals in orbit order: T maps A[i] onto A[i+1], A[last] onto A[0].
    // A[0] has the peak as its right endpoint.
    std::vector<Interval> A;
    // sigma[m] = 1-based orbit index of the m-th interval from the left.
    std::vector<int> sigma;
    // Skeleton: N unstable periodic orbits, periods 1, 2, ..., 2^{N-1},
    // each sorted increasingly.
    std::vector<std::vector<double>> skeleton;
    std::vector<SkewTent> levels;
    std::vector<LevelPartition> partition;
};

// Recursive construction, cross-checked against the critical orbit of the
// peak under `tent` itself. Throws PreconditionError if not type II and
// InternalConsistencyError if the two derivations disagree.
AttractorStructure attractor_intervals(const SkewTent& tent);

// Same construction for J_k, cross-checked with the saw map itself.
AttractorStructure attractor_intervals(const SawMap& map, int k);

// Periodic skeleton, period 2^i for i = 0..N-1. Empty for N = 0.
std::vector<std::vector<double>> skeleton_orbits(const SkewTent& tent);
std::vector<std::vector<double>> skeleton_orbits(const SawMap& map, int k);

struct DomainMembership {
    bool inside = false;
    std::optional<int> witness;
    bool capped = false;
    // Smallest relative distance of -1/lambda to a bound of the sandwich.
    double margin = 0.0;
};

// (sigma, lambda) lies in D iff (sigma^i - 1)/(sigma - 1) <= -1/lambda < sigma^i
// for some i >= 1. Requires sigma > 1, -1 < lambda < 0.
DomainMembership domain_D_membership(double sigma, double lambda, int max_i = 10'000);

} // namespace sawmap::classify

#endif
