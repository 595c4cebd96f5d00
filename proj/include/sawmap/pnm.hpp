#ifndef SAWMAP_PNM_HPP
#define SAWMAP_PNM_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace sawmap::pnm {

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // row-major, top row first

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 255);
    std::uint8_t& at(int row, int col);
};

using Rgb = std::array<std::uint8_t, 3>;

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // row-major RGB triples

    RgbImage() = default;
    RgbImage(int w, int h, Rgb fill = {255, 255, 255});
    void set(int row, int col, Rgb c);
    Rgb get(int row, int col) const;
};

// Binary P5 / P6 with maxval 255.
std::string encode(const GrayImage& img);
std::string encode(const RgbImage& img);

void write(const std::string& path, const GrayImage& img);
void write(const std::string& path, const RgbImage& img);

GrayImage read_pgm(const std::string& path);
RgbImage read_ppm(const std::string& path);

} // namespace sawmap::pnm

#endif
