#ifndef SAWMAP_SWEEP_HPP
#define SAWMAP_SWEEP_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sawmap/classify.hpp"
#include "sawmap/pnm.hpp"

namespace sawmap::sweep {

// lo:hi:n, sampled at cell centers lo + (i + 1/2) (hi - lo) / n.
struct AxisRange {
    double lo = 0.0;
    double hi = 1.0;
    int n = 1;

    static AxisRange parse(const std::string& text);
    double center(int i) const noexcept { return lo + (i + 0.5) * (hi - lo) / n; }
};

constexpr int max_resolution = 4000;

enum Flag : std::uint32_t {
    kss_equality = 1u << 0,
    kstar_boundary = 1u << 1,
    beta_eq_1 = 1u << 2,
    sum_eq_1 = 1u << 3,
    renorm_boundary = 1u << 4,
    tail_not_type3 = 1u << 5,
    invalid_map = 1u << 6,
    failed = 1u << 7,
    attractor_mismatch = 1u << 8,
    domain_capped = 1u << 9,
};

std::string flags_to_string(std::uint32_t flags);
std::uint32_t flags_from_string(const std::string& text);

// Flags that make a cell unusable for the k* figure / the J_1 figure.
constexpr std::uint32_t kstar_flag_mask = kss_equality | kstar_boundary | invalid_map | failed;
constexpr std::uint32_t j1_flag_mask = kss_equality | kstar_boundary | beta_eq_1 | sum_eq_1
    | renorm_boundary | invalid_map | failed | attractor_mismatch;

struct CellRecord {
    double sigma = 0.0;
    double lambda = 0.0;
    int k_star = 0;
    std::optional<classify::Type> type_J1;
    std::optional<int> N_J1;
    bool in_domain_D = false;
    std::uint32_t flags = 0;

    // Not serialized: diagnostics for acceptance comparisons.
    double beta_1 = 0.0;
    double d_margin = 0.0;
    std::string error;
};

CellRecord classify_cell(double sigma, double lambda);

struct Grid {
    AxisRange sigma;
    AxisRange lambda;
    // Row-major; row 0 holds the largest lambda, sigma increases along a row.
    std::vector<CellRecord> cells;

    int rows() const noexcept { return lambda.n; }
    int cols() const noexcept { return sigma.n; }
    const CellRecord& at(int row, int col) const
    {
        return cells[static_cast<std::size_t>(row) * static_cast<std::size_t>(sigma.n)
                     + static_cast<std::size_t>(col)];
    }
};

// Threads <= 0 selects SAWMAP_THREADS, falling back to hardware concurrency.
int resolve_threads(int requested);

Grid run_sweep(const AxisRange& sigma, const AxisRange& lambda, int threads);

extern const char* const csv_header;

void write_csv(std::ostream& out, const Grid& grid);
std::string to_csv(const Grid& grid);
std::vector<CellRecord> read_csv(std::istream& in);
// Rebuilds the grid layout (row-major, rows of equal lambda) from CSV rows.
Grid grid_from_csv(std::istream& in);

pnm::GrayImage render_kstar(const Grid& grid);

// Panel a: cells with k* >= 2; panel b: cells with k* = 1; others white.
pnm::RgbImage render_j1type(const Grid& grid, bool panel_a);

namespace palette {
constexpr std::uint8_t kstar_flagged = 96;
std::uint8_t kstar_gray(int k_star) noexcept;

constexpr pnm::Rgb white{255, 255, 255};
constexpr pnm::Rgb light_gray{192, 192, 192};
constexpr pnm::Rgb yellow{255, 215, 0};
constexpr pnm::Rgb red{220, 20, 60};
constexpr pnm::Rgb black{0, 0, 0};
constexpr pnm::Rgb blue{30, 144, 255};
constexpr pnm::Rgb magenta{255, 0, 255};
pnm::Rgb j1_color(const CellRecord& cell) noexcept;
} // namespace palette

} // namespace sawmap::sweep

#endif
