#include "sawmap/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "sawmap/errors.hpp"
#include "sawmap/twod.hpp"
#include "sawmap/validate.hpp"

namespace sawmap::sweep {

AxisRange AxisRange::parse(const std::string& text)
{
    AxisRange out;
    char c1 = 0;
    char c2 = 0;
    std::istringstream in(text);
    if (!(in >> out.lo >> c1 >> out.hi >> c2 >> out.n) || c1 != ':' || c2 != ':') {
        throw MalformedInputError("range must be lo:hi:n, got \"" + text + "\"");
    }
    std::string rest;
    if (in >> rest) {
        throw MalformedInputError("trailing characters in range \"" + text + "\"");
    }
    if (!(out.hi > out.lo) || out.n < 1 || out.n > max_resolution) {
        throw MalformedInputError("range needs lo < hi and 1 <= n <= "
                                  + std::to_string(max_resolution));
    }
    return out;
}

namespace {

struct FlagName {
    std::uint32_t bit;
    const char* name;
};

constexpr FlagName flag_names[] = {
    {kss_equality, "kss_equality"},
    {kstar_boundary, "kstar_boundary"},
    {beta_eq_1, "beta_eq_1"},
    {sum_eq_1, "sum_eq_1"},
    {renorm_boundary, "renorm_boundary"},
    {tail_not_type3, "tail_not_type3"},
    {invalid_map, "invalid_map"},
    {failed, "failed"},
    {attractor_mismatch, "attractor_mismatch"},
    {domain_capped, "domain_capped"},
};

} // namespace

std::string flags_to_string(std::uint32_t flags)
{
    std::string out;
    for (const auto& f : flag_names) {
        if (flags & f.bit) {
            if (!out.empty()) {
                out += '|';
            }
            out += f.name;
        }
    }
    return out;
}

std::uint32_t flags_from_string(const std::string& text)
{
    std::uint32_t flags = 0;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, '|')) {
        if (token.empty()) {
            continue;
        }
        bool known = false;
        for (const auto& f : flag_names) {
            if (token == f.name) {
                flags |= f.bit;
                known = true;
            }
        }
        if (!known) {
            throw MalformedInputError("unknown flag \"" + token + "\"");
        }
    }
    return flags;
}

CellRecord classify_cell(double sigma, double lambda)
{
    CellRecord cell;
    cell.sigma = sigma;
    cell.lambda = lambda;
    try {
        const auto params = twod::Params::make(sigma, lambda);
        const auto seqs = twod::closed_form_sequences(params);
        if (seqs->k_double_star().equality) {
            cell.flags |= kss_equality;
        }
        const SawMap map(seqs);
        cell.k_star = map.k_star();
        if (map.k_star_result().boundary) {
            cell.flags |= kstar_boundary;
        }
        if (!validate(*seqs, std::max(cell.k_star + 3, map.k_star_result().checked_depth)).ok()) {
            cell.flags |= invalid_map;
        }

        const double a1 = seqs->alpha(1);
        const double b1 = seqs->beta(1);
        cell.beta_1 = b1;
        const auto t1 = classify::classify_interval(a1, b1);
        cell.type_J1 = t1.tag;
        if (t1.boundary == classify::Boundary::beta_eq_1) {
            cell.flags |= beta_eq_1;
        } else if (t1.boundary == classify::Boundary::sum_eq_1) {
            cell.flags |= sum_eq_1;
        }
        for (int k = 2; k <= cell.k_star; ++k) {
            if (classify::classify_interval(seqs->alpha(k), seqs->beta(k)).tag
                != classify::Type::III) {
                cell.flags |= tail_not_type3;
            }
        }
        if (t1.tag == classify::Type::II && !t1.flagged()) {
            const auto trace = classify::renorm_index(a1, b1);
            cell.N_J1 = trace.N();
            if (trace.boundary) {
                cell.flags |= renorm_boundary;
            } else {
                try {
                    (void)classify::attractor_intervals(map, 1);
                } catch (const InternalConsistencyError&) {
                    cell.flags |= attractor_mismatch;
                }
            }
        }

        const auto d = classify::domain_D_membership(sigma, lambda);
        cell.in_domain_D = d.inside;
        cell.d_margin = d.margin;
        if (d.capped) {
            cell.flags |= domain_capped;
        }
    } catch (const std::exception& e) {
        cell.flags |= failed;
        cell.error = e.what();
    }
    return cell;
}

int resolve_threads(int requested)
{
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("SAWMAP_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 1024) {
            return static_cast<int>(v);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

Grid run_sweep(const AxisRange& sigma, const AxisRange& lambda, int threads)
{
    Grid grid;
    grid.sigma = sigma;
    grid.lambda = lambda;
    grid.cells.resize(static_cast<std::size_t>(sigma.n) * static_cast<std::size_t>(lambda.n));

    std::atomic<int> next_row{0};
    auto worker = [&] {
        for (int row = next_row++; row < lambda.n; row = next_row++) {
            const double l = lambda.center(lambda.n - 1 - row);
            for (int col = 0; col < sigma.n; ++col) {
                grid.cells[static_cast<std::size_t>(row) * static_cast<std::size_t>(sigma.n)
                           + static_cast<std::size_t>(col)]
                    = classify_cell(sigma.center(col), l);
            }
        }
    };
    const int n = std::min(resolve_threads(threads), lambda.n);
    std::vector<std::thread> pool;
    for (int i = 1; i < n; ++i) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    return grid;
}

const char* const csv_header = "sigma,lambda,k_star,type_J1,N_J1,in_domain_D,flags";

void write_csv(std::ostream& out, const Grid& grid)
{
    out << csv_header << '\n';
    char buf[64];
    for (const auto& c : grid.cells) {
        std::snprintf(buf, sizeof buf, "%.17g", c.sigma);
        out << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", c.lambda);
        out << buf << ',' << c.k_star << ',';
        if (c.type_J1) {
            out << classify::to_string(*c.type_J1);
        }
        out << ',';
        if (c.N_J1) {
            out << *c.N_J1;
        }
        out << ',' << (c.in_domain_D ? 1 : 0) << ',' << flags_to_string(c.flags) << '\n';
    }
}

std::string to_csv(const Grid& grid)
{
    std::ostringstream out;
    write_csv(out, grid);
    return out.str();
}

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double parse_double(const std::string& s)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') {
        throw MalformedInputError("bad number \"" + s + "\" in CSV");
    }
    return v;
}

int parse_int(const std::string& s)
{
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0') {
        throw MalformedInputError("bad integer \"" + s + "\" in CSV");
    }
    return static_cast<int>(v);
}

} // namespace

std::vector<CellRecord> read_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != csv_header) {
        throw MalformedInputError("CSV header mismatch");
    }
    std::vector<CellRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto f = split(line);
        if (f.size() != 7) {
            throw MalformedInputError("CSV row with " + std::to_string(f.size()) + " fields");
        }
        CellRecord c;
        c.sigma = parse_double(f[0]);
        c.lambda = parse_double(f[1]);
        c.k_star = parse_int(f[2]);
        if (f[3] == "I") {
            c.type_J1 = classify::Type::I;
        } else if (f[3] == "II") {
            c.type_J1 = classify::Type::II;
        } else if (f[3] == "III") {
            c.type_J1 = classify::Type::III;
        } else if (!f[3].empty()) {
            throw MalformedInputError("bad type \"" + f[3] + "\" in CSV");
        }
        if (!f[4].empty()) {
            c.N_J1 = parse_int(f[4]);
        }
        c.in_domain_D = parse_int(f[5]) != 0;
        c.flags = flags_from_string(f[6]);
        out.push_back(std::move(c));
    }
    return out;
}

Grid grid_from_csv(std::istream& in)
{
    Grid grid;
    grid.cells = read_csv(in);
    if (grid.cells.empty()) {
        throw MalformedInputError("CSV has no rows");
    }
    int cols = 0;
    while (cols < static_cast<int>(grid.cells.size())
           && grid.cells[static_cast<std::size_t>(cols)].lambda == grid.cells.front().lambda) {
        ++cols;
    }
    if (grid.cells.size() % static_cast<std::size_t>(cols) != 0) {
        throw MalformedInputError("CSV rows do not form a rectangular grid");
    }
    grid.sigma.n = cols;
    grid.lambda.n = static_cast<int>(grid.cells.size() / static_cast<std::size_t>(cols));
    return grid;
}

namespace palette {

std::uint8_t kstar_gray(int k_star) noexcept
{
    switch (k_star) {
    case 1:
        return 255;
    case 2:
        return 192;
    case 3:
        return 128;
    case 4:
        return 64;
    default:
        return 0;
    }
}

pnm::Rgb j1_color(const CellRecord& cell) noexcept
{
    if ((cell.flags & j1_flag_mask) || !cell.type_J1) {
        return blue;
    }
    switch (*cell.type_J1) {
    case classify::Type::I:
        return light_gray;
    case classify::Type::II:
        if (!cell.N_J1) {
            return blue;
        }
        return *cell.N_J1 == 0 ? yellow : *cell.N_J1 == 1 ? red : magenta;
    case classify::Type::III:
        return black;
    }
    return blue;
}

} // namespace palette

pnm::GrayImage render_kstar(const Grid& grid)
{
    pnm::GrayImage img(grid.cols(), grid.rows());
    for (int row = 0; row < grid.rows(); ++row) {
        for (int col = 0; col < grid.cols(); ++col) {
            const auto& c = grid.at(row, col);
            img.at(row, col) = (c.flags & kstar_flag_mask) ? palette::kstar_flagged
                                                           : palette::kstar_gray(c.k_star);
        }
    }
    return img;
}

pnm::RgbImage render_j1type(const Grid& grid, bool panel_a)
{
    pnm::RgbImage img(grid.cols(), grid.rows(), palette::white);
    for (int row = 0; row < grid.rows(); ++row) {
        for (int col = 0; col < grid.cols(); ++col) {
            const auto& c = grid.at(row, col);
            const bool in_panel
                = (c.flags & failed) || (panel_a ? c.k_star >= 2 : c.k_star == 1);
            if (in_panel) {
                img.set(row, col, palette::j1_color(c));
            }
        }
    }
    return img;
}

} // namespace sawmap::sweep
