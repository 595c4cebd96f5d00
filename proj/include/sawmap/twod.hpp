#ifndef SAWMAP_TWOD_HPP
#define SAWMAP_TWOD_HPP

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sawmap/errors.hpp"
#include "sawmap/saw_map.hpp"
#include "sawmap/sequences.hpp"

namespace sawmap::twod {

#if defined(__SIZEOF_FLOAT128__)
__extension__ typedef __float128 WideReal;
#else
typedef long double WideReal;
#endif

// (sigma, lambda) with sigma > 1, -1 < lambda < 0.
struct Params {
    double sigma = 2.0;
    double lambda = -0.5;

    // Throws DomainError naming the admissible region.
    static Params make(double sigma, double lambda);
    static bool admissible(double sigma, double lambda) noexcept;

    // (sigma - lambda) / (1 - lambda): x-coordinate of the equilibrium at s = 1.
    double shift() const noexcept { return (sigma - lambda) / (1.0 - lambda); }
};

extern const char* const admissible_region;

// Point of the strip -1 <= s <= 1.
struct State {
    double x = 0.0;
    double s = 0.0;

    friend bool operator==(const State&, const State&) = default;
};

template <class Real>
Real saturation(Real x) noexcept
{
    if (x <= Real(-1)) {
        return Real(-1);
    }
    if (x >= Real(1)) {
        return Real(1);
    }
    return x;
}

template <class Real>
void step_inplace(Real sigma, Real lambda, Real& x, Real& s) noexcept
{
    const Real xn = lambda * x + (sigma - lambda) * s;
    s = saturation(s + xn - x);
    x = xn;
}

// x' = lambda x + (sigma - lambda) s, s' = Phi(s + x' - x).
State step(const Params& params, const State& state);

std::vector<State> trajectory(const Params& params, const State& start, int steps);

// s_0 = s0, s_{n+1} = Phi(s_n + x_{n+1} - x_n). Output has the length of xs.
std::vector<double> stop_apply(double s0, std::span<const double> xs);

template <class Real>
struct Hit {
    Real fx{};          // f(x) = -(x-coordinate of the hit)
    std::int64_t steps = 0;
};

constexpr std::int64_t max_hit_steps = 1'000'000;
constexpr double hit_slack = 1e-12;

// First point of the orbit of (x, 1) on the closed half-line
// {s = -1, x <= -shift}. Requires x > shift.
template <class Real>
Hit<Real> first_hit(const Params& params, Real x)
{
    const Real sigma = params.sigma;
    const Real lambda = params.lambda;
    const Real c = (sigma - lambda) / (Real(1) - lambda);
    if (!(x > c)) {
        throw DomainError("first_hit requires x > (sigma - lambda)/(1 - lambda)");
    }
    const Real bound = -c + Real(hit_slack) * (c > Real(1) ? c : Real(1));
    Real s = 1;
    for (std::int64_t n = 1; n <= max_hit_steps; ++n) {
        step_inplace(sigma, lambda, x, s);
        if (s == Real(-1) && x <= bound) {
            return {-x, n};
        }
    }
    throw ConvergenceError("first_hit: no hit within " + std::to_string(max_hit_steps) + " steps");
}

// Powers sigma^m together with G_m = 1 + sigma + ... + sigma^{m-1},
// computed from m log(sigma) without subtractive cancellation.
struct Power {
    double a = 1.0;
    double g = 0.0;
};

Power power(double sigma, std::int64_t m);

// Hatted breakpoints of f (the first-hit map), k >= 1.
double q_hat(const Params& params, int k);
double r_hat(const Params& params, int k);
double p_hat(const Params& params, int k);

struct KDoubleStar {
    int k = 1;
    bool equality = false;
};

// Least k with f(r̂_k) >= r̂_k, equivalently sigma^k |lambda| >= 1.
KDoubleStar k_double_star(const Params& params, int cap = 100'000'000);

// Saw-map sequences of the first-hit map, shifted by k** - 1 in the index and
// by -shift in value. When k** = 1 the top piece has slope |lambda| and
// r_0 = q_1 + 2 p_1 / |lambda| so that p_0 = 2 p_1.
class ClosedFormSequences final : public SawSequences {
public:
    explicit ClosedFormSequences(Params params, int k_double_star_cap = 100'000'000);

    SequenceKind kind() const noexcept override { return SequenceKind::closed_form; }
    std::optional<int> depth() const noexcept override { return std::nullopt; }

    double q(int k) const override;
    double r(int k) const override;
    double p(int k) const override;
    std::optional<double> p_limit() const noexcept override { return p_limit_; }

    const Params& params() const noexcept { return params_; }
    const KDoubleStar& k_double_star() const noexcept { return kss_; }
    bool canonical_top() const noexcept { return kss_.k == 1; }

    // Index of f's sequences matching k.
    std::int64_t hat_index(int k) const noexcept { return std::int64_t{k} + kss_.k - 1; }

    // Slopes from the closed-form sums, k >= 0 for alpha and k >= 1 for beta.
    double alpha_closed(int k) const;
    double beta_closed(int k) const;

protected:
    int bracket_hint(double x) const override;

private:
    double q_at(std::int64_t m) const;
    double r_at(std::int64_t m) const;
    double p_at(std::int64_t m) const;

    Params params_;
    KDoubleStar kss_;
    double p_limit_;
};

std::shared_ptr<const ClosedFormSequences> closed_form_sequences(const Params& params);

SawMap make_closed_form_map(const Params& params, MapOptions options = {});

// T(x) of the shifted first-hit map by direct simulation in extended
// precision. Requires x > 0 inside the domain of the closed-form map.
double simulated_T(const Params& params, double x);
std::int64_t simulated_steps(const Params& params, double x);

double analytic_T(const SawMap& map, double x);

struct ConsistencySample {
    double x = 0.0;
    double analytic = 0.0;
    double simulated = 0.0;
    double rel_dev = 0.0;
};

struct ConsistencyReport {
    std::vector<ConsistencySample> samples;
    double max_rel_dev = 0.0;
};

// Deviation |a - b| / max(|a|, |b|, p) with p the peak of the sampled piece.
double relative_deviation(double analytic, double simulated, double peak) noexcept;

constexpr double sample_floor = 1e-6;

// Compares analytic_T with simulated_T at n points log-uniform in
// [sample_floor * r_0, r_0].
ConsistencyReport consistency_check(const Params& params, int n, std::uint64_t seed = 1);
ConsistencyReport consistency_check(const SawMap& map, const Params& params, int n,
                                    std::uint64_t seed = 1);

} // namespace sawmap::twod

#endif
