#pragma once

#include "inkbot/mapping/calibration.hpp"
#include "inkbot/mapping/mapping.hpp"
#include "inkbot/styles/styles.hpp"
#include "inkbot/trajectory/program.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace inkbot {

constexpr int kBristleRings = 8;

/// Simulated rice paper covering a robot-frame rectangle. Pixel (i, j)
/// covers mm [origin + i / res, origin + (i + 1) / res) on x and y.
struct CanvasRaster {
    double px_per_mm = 10;
    Vec2 origin_mm = Vec2::Zero();
    int width = 0;
    int height = 0;
    std::vector<float> density;

    CanvasRaster() = default;
    CanvasRaster(int w, int h, double res, const Vec2& origin)
        : px_per_mm(res), origin_mm(origin), width(w), height(h), density(static_cast<size_t>(w) * h, 0.0f) {}

    bool inside(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
    float at(int x, int y) const { return density[static_cast<size_t>(y) * width + x]; }
    float& at(int x, int y) { return density[static_cast<size_t>(y) * width + x]; }
    Vec2 to_px(const Vec2& mm) const { return (mm - origin_mm) * px_per_mm; }
    Vec2 to_mm(const Vec2& px) const { return px / px_per_mm + origin_mm; }
    double total() const;
    void validate() const;
    bool operator==(const CanvasRaster&) const = default;
};

/// Canvas covering the paper rectangle of a frame.
CanvasRaster make_canvas(const WorkspaceFrame& frame, double px_per_mm = 10);

/// Gray PNG, gray = round(255 (1 - density)).
void write_canvas_png(const CanvasRaster& canvas, const std::filesystem::path& path);
std::vector<std::uint8_t> canvas_gray(const CanvasRaster& canvas);

struct BrushState {
    std::array<double, kBristleRings> reservoir{};  // fraction of a ring's volume
    std::array<double, kBristleRings> loaded{};     // level right after the last dip
    std::array<double, kBristleRings> jitter{};     // depletion multipliers
    double shade = 0;                               // 0 thick black ink, 1 water
    Vec3 position = Vec3::Zero();
    double descent = 0;

    /// Fully loaded black brush.
    static BrushState full();
    void validate() const;
};

struct SimulatorParams {
    /// Ink held by a full brush, in mm^2 of full-density deposit.
    double full_volume = 1500;
    double light_shade = 0.75;
    double scrape_keep = 0.75;
    double jitter_max = 1.4;
    /// Deposit of a nearly empty ring relative to a freshly loaded one.
    double min_deposit = 0.3;
    double stamp_spacing_px = 0.5;
    std::uint64_t seed = 1;

    void validate() const;
    bool operator==(const SimulatorParams&) const = default;
};

/// Runs a program: dips load the rings, scrapes drain a fixed fraction and
/// draw segments stamp circular footprints along the path. Plain strokes
/// draw with full black ink and do not drain the brush.
void execute_program(const RobotProgram& program, BrushState& brush, CanvasRaster& canvas, const StyleParams& style,
                     const CalibrationModel& model, const SimulatorParams& params = {});

}  // namespace inkbot
