#ifndef SAWMAP_SAW_MAP_HPP
#define SAWMAP_SAW_MAP_HPP

#include <memory>
#include <vector>

#include "sawmap/interval.hpp"
#include "sawmap/sequences.hpp"

namespace sawmap {

struct MapOptions {
    double tolerance = 1e-12;
    int max_depth = SawSequences::max_descent;
};

enum class Branch { rising, falling };

// Linear segment of T: rising means [q_{k+1}, r_k], falling means [r_k, q_k].
struct PieceIndex {
    int k = 0;
    Branch branch = Branch::rising;

    friend bool operator==(const PieceIndex&, const PieceIndex&) = default;
};

// T(x) = slope * (x - root) on [lo, hi]; root is the endpoint where T vanishes.
struct Piece {
    PieceIndex index;
    Interval domain;
    double slope = 0.0;
    double root = 0.0;

    double operator()(double x) const noexcept { return slope * (x - root); }
};

struct FixedPoints {
    double rising;  // e_k in (q_{k+1}, r_k)
    double falling; // ê_k in (r_k, q_k)
};

// f_k: first point right of e_k mapped back onto e_k;
// g_k: next such point, on the rising piece left of q_{k-1}'s peak.
struct Crossings {
    double f;
    double g;
};

struct IntervalFamily {
    Interval j_star;
    std::vector<Interval> J; // J[k-1] = [e_k, p_k], 1 <= k <= k*
    std::vector<Interval> G; // G[k-1] = [T(p_k), p_k]
};

struct KStarResult {
    int k_star = 0;
    // Some comparison p_k vs e_{k-1} was decided within tolerance.
    bool boundary = false;
    // Index up to which the definition was checked explicitly.
    int checked_depth = 0;
};

// e_k from the rising piece [q_{k+1}, r_k]; e_0 uses the top piece.
double rising_fixed_point(const SawSequences& seqs, int k);

// Least k* such that p_k < e_{k-1} for 2 <= k <= k* and p_k > e_{k-1}
// for every k > k*. The tail is checked up to max_depth, or for closed-form
// sequences until r_{k-1} <= lim p_k, after which it holds automatically.
// Throws DomainError("k* undetermined ...") when no such index exists.
KStarResult compute_k_star(const SawSequences& seqs, int max_depth, double tolerance = 1e-12);

// Piecewise-linear saw map over shared immutable sequence data.
// Construction computes k*; full invariant checking is done by validate().
class SawMap {
public:
    explicit SawMap(std::shared_ptr<const SawSequences> seqs, MapOptions options = {});

    const SawSequences& sequences() const noexcept { return *seqs_; }
    std::shared_ptr<const SawSequences> sequences_ptr() const noexcept { return seqs_; }
    const MapOptions& options() const noexcept { return options_; }

    int k_star() const noexcept { return k_star_.k_star; }
    const KStarResult& k_star_result() const noexcept { return k_star_; }

    // Domain J = [0, r_0].
    Interval domain() const { return {0.0, seqs_->r(0)}; }

    double eval(double x) const;
    double operator()(double x) const { return eval(x); }

    PieceIndex locate_piece(double x) const;
    Piece piece(PieceIndex index) const;
    Piece piece_at(double x) const { return piece(locate_piece(x)); }

    FixedPoints fixed_points(int k) const;
    Crossings crossings(int k) const;

    Interval j_star() const { return {0.0, seqs_->p(k_star())}; }
    Interval J(int k) const;
    Interval G(int k) const;
    IntervalFamily intervals() const;

    // Values below this are treated as 0.
    static constexpr double zero_floor = 1e-300;

private:
    void check_domain(double x) const;

    std::shared_ptr<const SawSequences> seqs_;
    MapOptions options_;
    KStarResult k_star_;
};

} // namespace sawmap

#endif
