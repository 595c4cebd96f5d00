#ifndef SAWMAP_SEQUENCES_HPP
#define SAWMAP_SEQUENCES_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sawmap {

enum class SequenceKind { tabulated, closed_form };

// Breakpoint data of a saw map:
//
//   r_0 > q_1 > r_1 > q_2 > r_2 > ... > 0,   p_0 > p_1 > ... > 0,
//
// with T(q_k) = 0, T(r_k) = p_k, and T affine on [q_{k+1}, r_k] (rising)
// and [r_k, q_k] (falling). The top piece [q_1, r_0] only rises.
//
// Indices follow the usual convention: q is defined for k >= 1, r and p
// for k >= 0. Accessors throw TruncationError beyond the available depth.
class SawSequences {
public:
    virtual ~SawSequences() = default;

    virtual SequenceKind kind() const noexcept = 0;

    // Deepest k for which q_k, r_k and p_k all exist; nullopt if unbounded.
    virtual std::optional<int> depth() const noexcept = 0;

    virtual double q(int k) const = 0;
    virtual double r(int k) const = 0;
    virtual double p(int k) const = 0;

    // lim p_k when available in closed form. Used to terminate tail checks.
    virtual std::optional<double> p_limit() const noexcept { return std::nullopt; }

    // Slope magnitude on [q_{k+1}, r_k]; k = 0 is the top piece [q_1, r_0].
    double alpha(int k) const { return p(k) / (r(k) - q(k + 1)); }

    // Slope magnitude on [r_k, q_k], k >= 1.
    double beta(int k) const { return p(k) / (q(k) - r(k)); }

    // Index k with q_{k+1} <= x < q_k (q_0 taken as +infinity), for
    // 0 < x <= r_0. Throws TruncationError when x lies below the deepest
    // tabulated breakpoint and ConvergenceError past the descent cap.
    int bracket(double x) const;

    static constexpr int max_descent = 1'000'000;

protected:
    // Starting guess for bracket(); corrected by local comparisons.
    virtual int bracket_hint(double) const { return 0; }
};

// Finite table: r[0..K], q[1..K], p[0..K].
class TabulatedSequences final : public SawSequences {
public:
    // q is passed without the unused q_0 slot: q[0] holds q_1.
    TabulatedSequences(std::vector<double> r, std::vector<double> q, std::vector<double> p);

    // {"r": [...], "q": [...], "p": [...]}
    static TabulatedSequences from_json(std::istream& in);
    static TabulatedSequences from_json_string(const std::string& text);
    static TabulatedSequences from_json_file(const std::string& path);

    SequenceKind kind() const noexcept override { return SequenceKind::tabulated; }
    std::optional<int> depth() const noexcept override { return static_cast<int>(q_.size()); }

    double q(int k) const override;
    double r(int k) const override;
    double p(int k) const override;

    const std::vector<double>& r_values() const noexcept { return r_; }
    const std::vector<double>& q_values() const noexcept { return q_; }
    const std::vector<double>& p_values() const noexcept { return p_; }

protected:
    int bracket_hint(double x) const override;

private:
    std::vector<double> r_;
    std::vector<double> q_;
    std::vector<double> p_;
};

} // namespace sawmap

#endif
