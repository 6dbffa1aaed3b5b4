#pragma once

#include "inkbot/types.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace inkbot {

/// Raster with ink intensity in [0,1] (1 = ink) and a per-pixel bitmask of
/// ContourFamily values that produced the pixel.
struct ContourImage {
    int width = 0;
    int height = 0;
    std::vector<float> intensity;
    std::vector<std::uint8_t> tags;

    ContourImage() = default;
    ContourImage(int w, int h);

    bool inside(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
    float& at(int x, int y) { return intensity[static_cast<size_t>(y) * width + x]; }
    float at(int x, int y) const { return intensity[static_cast<size_t>(y) * width + x]; }
    std::uint8_t& tag(int x, int y) { return tags[static_cast<size_t>(y) * width + x]; }
    std::uint8_t tag(int x, int y) const { return tags[static_cast<size_t>(y) * width + x]; }

    /// Pixels with intensity >= threshold.
    size_t count_foreground(float threshold = 0.5f) const;

    /// Throws InvalidInput on size mismatch, intensity outside [0,1], or a
    /// tagged pixel with zero intensity.
    void validate() const;

    bool operator==(const ContourImage&) const = default;
};

/// Binary mask helper used by the raster algorithms.
struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> px;

    BinaryImage() = default;
    BinaryImage(int w, int h) : width(w), height(h), px(static_cast<size_t>(w) * h, 0) {}

    bool inside(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
    bool get(int x, int y) const { return inside(x, y) && px[static_cast<size_t>(y) * width + x]; }
    void set(int x, int y, bool v) { px[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
    size_t count() const;

    bool operator==(const BinaryImage&) const = default;
};

BinaryImage threshold(const ContourImage& img, float t);
ContourImage to_contour_image(const BinaryImage& mask);

/// 8-connected component labels (0 = background, 1..n) and the count n.
std::vector<int> label_components(const BinaryImage& mask, int& count);

/// PNG files hold paper-like gray: 255 is blank paper, 0 full ink, i.e.
/// gray = round(255 * (1 - intensity)). Tags are not stored.
void write_png(const ContourImage& img, const std::filesystem::path& path);
ContourImage read_png(const std::filesystem::path& path);

/// Raw 8-bit single-channel PNG I/O.
void write_gray8_png(const std::filesystem::path& path, int width, int height,
                     const std::vector<std::uint8_t>& gray);
std::vector<std::uint8_t> read_gray8_png(const std::filesystem::path& path, int& width, int& height);

}  // namespace inkbot
