#include "sawmap/pnm.hpp"

#include <fstream>
#include <sstream>

#include "sawmap/errors.hpp"

namespace sawmap::pnm {

GrayImage::GrayImage(int w, int h, std::uint8_t fill)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill)
{
}

std::uint8_t& GrayImage::at(int row, int col)
{
    return pixels[static_cast<std::size_t>(row) * static_cast<std::size_t>(width)
                  + static_cast<std::size_t>(col)];
}

RgbImage::RgbImage(int w, int h, Rgb fill)
    : width(w), height(h), pixels(3 * static_cast<std::size_t>(w) * static_cast<std::size_t>(h))
{
    for (std::size_t i = 0; i < pixels.size(); i += 3) {
        pixels[i] = fill[0];
        pixels[i + 1] = fill[1];
        pixels[i + 2] = fill[2];
    }
}

void RgbImage::set(int row, int col, Rgb c)
{
    const std::size_t i
        = 3 * (static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col));
    pixels[i] = c[0];
    pixels[i + 1] = c[1];
    pixels[i + 2] = c[2];
}

Rgb RgbImage::get(int row, int col) const
{
    const std::size_t i
        = 3 * (static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col));
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
}

namespace {

std::string encode_raw(const char* magic, int w, int h, const std::vector<std::uint8_t>& px)
{
    std::string out = std::string(magic) + "\n" + std::to_string(w) + " " + std::to_string(h)
        + "\n255\n";
    out.append(reinterpret_cast<const char*>(px.data()), px.size());
    return out;
}

void write_file(const std::string& path, const std::string& bytes)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DomainError("cannot open " + path + " for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw DomainError("failed writing " + path);
    }
}

std::vector<std::uint8_t> read_raw(const std::string& path, const char* magic, int channels,
                                   int& w, int& h)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw MalformedInputError("cannot open " + path);
    }
    std::string m;
    int maxval = 0;
    in >> m >> w >> h >> maxval;
    if (m != magic || w <= 0 || h <= 0 || maxval != 255) {
        throw MalformedInputError(path + ": unsupported image header");
    }
    in.get();
    std::vector<std::uint8_t> px(static_cast<std::size_t>(channels) * static_cast<std::size_t>(w)
                                 * static_cast<std::size_t>(h));
    in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
    if (!in) {
        throw MalformedInputError(path + ": truncated pixel data");
    }
    return px;
}

} // namespace

std::string encode(const GrayImage& img)
{
    return encode_raw("P5", img.width, img.height, img.pixels);
}

std::string encode(const RgbImage& img)
{
    return encode_raw("P6", img.width, img.height, img.pixels);
}

void write(const std::string& path, const GrayImage& img)
{
    write_file(path, encode(img));
}

void write(const std::string& path, const RgbImage& img)
{
    write_file(path, encode(img));
}

GrayImage read_pgm(const std::string& path)
{
    GrayImage img;
    img.pixels = read_raw(path, "P5", 1, img.width, img.height);
    return img;
}

RgbImage read_ppm(const std::string& path)
{
    RgbImage img;
    img.pixels = read_raw(path, "P6", 3, img.width, img.height);
    return img;
}

} // namespace sawmap::pnm
