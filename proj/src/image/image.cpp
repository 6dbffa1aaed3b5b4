#include "inkbot/image/image.hpp"

#include <algorithm>
#include <cmath>

namespace inkbot {

ContourImage::ContourImage(int w, int h)
    : width(w), height(h), intensity(static_cast<size_t>(w) * h, 0.0f), tags(static_cast<size_t>(w) * h, 0) {
    if (w < 0 || h < 0) throw InvalidInput("image dimensions must be non-negative");
}

size_t ContourImage::count_foreground(float threshold) const {
    return static_cast<size_t>(
        std::count_if(intensity.begin(), intensity.end(), [&](float v) { return v >= threshold; }));
}

void ContourImage::validate() const {
    const size_t n = static_cast<size_t>(width) * height;
    if (intensity.size() != n || tags.size() != n) throw InvalidInput("contour image: buffer size mismatch");
    for (size_t i = 0; i < n; ++i) {
        if (!(intensity[i] >= 0.0f && intensity[i] <= 1.0f))
            throw InvalidInput("contour image: intensity outside [0,1] at pixel " + std::to_string(i));
        if (tags[i] && intensity[i] <= 0.0f)
            throw InvalidInput("contour image: tagged pixel without ink at pixel " + std::to_string(i));
    }
}

size_t BinaryImage::count() const {
    return static_cast<size_t>(std::count(px.begin(), px.end(), std::uint8_t{1}));
}

BinaryImage threshold(const ContourImage& img, float t) {
    BinaryImage out(img.width, img.height);
    for (size_t i = 0; i < img.intensity.size(); ++i) out.px[i] = img.intensity[i] >= t ? 1 : 0;
    return out;
}

ContourImage to_contour_image(const BinaryImage& mask) {
    ContourImage out(mask.width, mask.height);
    for (size_t i = 0; i < mask.px.size(); ++i) out.intensity[i] = mask.px[i] ? 1.0f : 0.0f;
    return out;
}

std::vector<int> label_components(const BinaryImage& mask, int& count) {
    std::vector<int> label(mask.px.size(), 0);
    count = 0;
    std::vector<int> stack;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            const size_t i = static_cast<size_t>(y) * mask.width + x;
            if (!mask.px[i] || label[i]) continue;
            ++count;
            label[i] = count;
            stack.assign(1, static_cast<int>(i));
            while (!stack.empty()) {
                const int cur = stack.back();
                stack.pop_back();
                const int cx = cur % mask.width, cy = cur / mask.width;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx, ny = cy + dy;
                        if (!mask.get(nx, ny)) continue;
                        const size_t j = static_cast<size_t>(ny) * mask.width + nx;
                        if (label[j]) continue;
                        label[j] = count;
                        stack.push_back(static_cast<int>(j));
                    }
            }
        }
    return label;
}

void write_png(const ContourImage& img, const std::filesystem::path& path) {
    std::vector<std::uint8_t> gray(img.intensity.size());
    for (size_t i = 0; i < gray.size(); ++i) {
        const float v = std::clamp(img.intensity[i], 0.0f, 1.0f);
        gray[i] = static_cast<std::uint8_t>(std::lround(255.0f * (1.0f - v)));
    }
    write_gray8_png(path, img.width, img.height, gray);
}

ContourImage read_png(const std::filesystem::path& path) {
    int w = 0, h = 0;
    const auto gray = read_gray8_png(path, w, h);
    ContourImage img(w, h);
    for (size_t i = 0; i < gray.size(); ++i) img.intensity[i] = 1.0f - gray[i] / 255.0f;
    return img;
}

}  // namespace inkbot
