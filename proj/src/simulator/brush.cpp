#include "inkbot/simulator/brush.hpp"

#include "inkbot/image/image.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace inkbot {

double CanvasRaster::total() const {
    double s = 0;
    for (float d : density) s += d;
    return s;
}

void CanvasRaster::validate() const {
    if (!(px_per_mm > 0)) throw InvalidInput("canvas: resolution must be positive");
    if (width <= 0 || height <= 0 || density.size() != static_cast<size_t>(width) * height)
        throw InvalidInput("canvas: size mismatch");
    for (float d : density)
        if (!(d >= 0.0f && d <= 1.0f)) throw InvalidInput("canvas: density outside [0, 1]");
}

CanvasRaster make_canvas(const WorkspaceFrame& frame, double px_per_mm) {
    const Vec2 ext = frame.paper_max - frame.paper_min;
    return CanvasRaster(static_cast<int>(std::ceil(ext.x() * px_per_mm)), static_cast<int>(std::ceil(ext.y() * px_per_mm)),
                        px_per_mm, frame.paper_min);
}

std::vector<std::uint8_t> canvas_gray(const CanvasRaster& canvas) {
    std::vector<std::uint8_t> gray(canvas.density.size());
    for (size_t i = 0; i < gray.size(); ++i)
        gray[i] = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - std::clamp(canvas.density[i], 0.0f, 1.0f))));
    return gray;
}

void write_canvas_png(const CanvasRaster& canvas, const std::filesystem::path& path) {
    write_gray8_png(path, canvas.width, canvas.height, canvas_gray(canvas));
}

BrushState BrushState::full() {
    BrushState b;
    b.reservoir.fill(1.0);
    b.loaded.fill(1.0);
    b.jitter.fill(1.0);
    return b;
}

void BrushState::validate() const {
    for (double r : reservoir)
        if (!(r >= 0 && r <= 1)) throw InvalidInput("brush: reservoir outside [0, 1]");
    if (!(shade >= 0 && shade <= 1)) throw InvalidInput("brush: shade outside [0, 1]");
}

void SimulatorParams::validate() const {
    if (!(full_volume > 0)) throw InvalidInput("simulator: full volume must be positive");
    if (!(light_shade >= 0 && light_shade <= 1)) throw InvalidInput("simulator: light shade outside [0, 1]");
    if (!(scrape_keep >= 0 && scrape_keep <= 1)) throw InvalidInput("simulator: scrape fraction outside [0, 1]");
    if (!(jitter_max >= 1)) throw InvalidInput("simulator: jitter max must be >= 1");
    if (!(min_deposit > 0 && min_deposit <= 1)) throw InvalidInput("simulator: min deposit outside (0, 1]");
    if (!(stamp_spacing_px > 0 && stamp_spacing_px <= 0.5)) throw InvalidInput("simulator: stamp spacing must be in (0, 0.5] px");
}

namespace {

class Stamper {
public:
    Stamper(CanvasRaster& canvas, BrushState& brush, const SimulatorParams& params)
        : canvas_(canvas), brush_(brush), params_(params) {}

    void stamp(const Vec2& mm, double width_mm, bool plain) {
        if (width_mm <= 0) return;
        const double res = canvas_.px_per_mm;
        const double radius = 0.5 * width_mm;
        const Vec2 c = canvas_.to_px(mm);
        const double rpx = radius * res;
        // one-pixel coverage ramp centred on the rim so the 0.5 level sits
        // on the footprint edge
        const double reach = rpx + 0.5;
        const int x0 = std::max(0, static_cast<int>(std::floor(c.x() - reach)));
        const int x1 = std::min(canvas_.width - 1, static_cast<int>(std::ceil(c.x() + reach)));
        const int y0 = std::max(0, static_cast<int>(std::floor(c.y() - reach)));
        const int y1 = std::min(canvas_.height - 1, static_cast<int>(std::ceil(c.y() + reach)));
        const double darkness = 1.0 - brush_.shade;
        std::array<double, kBristleRings> used{};
        float ink_ring[kBristleRings];
        for (int k = 0; k < kBristleRings; ++k) {
            if (plain) {
                ink_ring[k] = 1.0f;
            } else if (brush_.reservoir[k] <= 0 || brush_.loaded[k] <= 0) {
                ink_ring[k] = 0.0f;
            } else {
                const double fill = std::min(1.0, brush_.reservoir[k] / brush_.loaded[k]);
                ink_ring[k] = static_cast<float>(darkness * (params_.min_deposit + (1 - params_.min_deposit) * fill));
            }
        }
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const double r = std::hypot(x + 0.5 - c.x(), y + 0.5 - c.y());
                if (r >= reach) continue;
                const int k = std::min(kBristleRings - 1, static_cast<int>(kBristleRings * std::min(r, rpx) / rpx));
                const float v = ink_ring[k] * static_cast<float>(std::min(1.0, reach - r));
                float& d = canvas_.at(x, y);
                if (v > d) {
                    used[k] += v - d;
                    d = v;
                }
            }
        if (plain) return;
        const double px_area = 1.0 / (res * res);
        const double ring_volume = params_.full_volume / kBristleRings;
        for (int k = 0; k < kBristleRings; ++k)
            brush_.reservoir[k] = std::max(0.0, brush_.reservoir[k] - used[k] * px_area / ring_volume * brush_.jitter[k]);
    }

private:
    CanvasRaster& canvas_;
    BrushState& brush_;
    const SimulatorParams& params_;
};

}  // namespace

void execute_program(const RobotProgram& program, BrushState& brush, CanvasRaster& canvas, const StyleParams& style,
                     const CalibrationModel& model, const SimulatorParams& params) {
    params.validate();
    style.validate();
    canvas.validate();
    brush.validate();

    for (const auto& seg : program.segments) {
        if (seg.role != SegmentRole::Draw) continue;
        if (seg.descent.size() != seg.waypoints.size())
            throw InvalidInput("program: draw segment needs one descent per waypoint");
        for (const Vec3& p : seg.waypoints) {
            const Vec2 q = canvas.to_px(p.head<2>());
            if (q.x() < 0 || q.y() < 0 || q.x() > canvas.width || q.y() > canvas.height)
                throw InvalidInput("program: draw position (" + std::to_string(p.x()) + ", " + std::to_string(p.y()) +
                                   ") outside the canvas");
        }
    }

    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> jitter(1.0, params.jitter_max);
    Stamper stamper(canvas, brush, params);
    // A thick-stone dip right after light-ink soaking mixes into the wet
    // brush; otherwise the brush is taken as dry before the dip.
    bool soaked = false;

    for (const auto& seg : program.segments) {
        if (seg.action) {
            const BrushAction& a = *seg.action;
            if (a.kind == ActionKind::Dip) {
                const double lambda = std::clamp(a.dip_depth / style.brush_length, 0.0, 1.0);
                if (a.stone == 0) {
                    brush.reservoir.fill(1.0);
                    brush.shade = params.light_shade;
                    soaked = true;
                } else {
                    const double ink = lambda * (1.0 - std::exp(-style.c3 * a.dip_duration));
                    const double dark = lambda * (1.0 - std::exp(-style.c1 * a.dip_duration));
                    for (double& r : brush.reservoir) r = soaked ? std::max(r, ink) : ink;
                    brush.shade = soaked ? brush.shade * (1.0 - dark) : 0.0;
                    soaked = false;
                }
                brush.loaded = brush.reservoir;
                for (double& j : brush.jitter) j = jitter(rng);
            } else if (a.kind == ActionKind::Scrape) {
                for (double& r : brush.reservoir) r *= params.scrape_keep;
            }
        }
        if (!seg.waypoints.empty()) brush.position = seg.waypoints.back();
        if (seg.role != SegmentRole::Draw) continue;

        const bool plain = seg.style == StyleHint::Plain;
        const double step_mm = params.stamp_spacing_px / canvas.px_per_mm;
        for (size_t i = 0; i + 1 < seg.waypoints.size() || i == 0; ++i) {
            const Vec2 a = seg.waypoints[i].head<2>();
            const size_t j = std::min(i + 1, seg.waypoints.size() - 1);
            const Vec2 b = seg.waypoints[j].head<2>();
            const double len = (b - a).norm();
            const int n = std::max(1, static_cast<int>(std::ceil(len / step_mm)));
            for (int s = (i == 0 ? 0 : 1); s <= n; ++s) {
                const double u = static_cast<double>(s) / n;
                const double d = (1 - u) * seg.descent[i] + u * seg.descent[j];
                brush.descent = d;
                stamper.stamp(a + u * (b - a), footprint_width(d + model.h_tip, model), plain);
            }
            if (j == i) break;
        }
    }
}

}  // namespace inkbot
