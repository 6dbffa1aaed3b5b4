#include "inkbot/simplify/simplify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <queue>

namespace inkbot {

void SimplifierConfig::validate() const {
    if (blur_sigma < 0 || min_component_area < 0 || prune_branch_length < 0 || gap_close_radius < 0)
        throw InvalidInput("simplifier config: values must be non-negative");
    if (!(binarize_threshold > 0 && binarize_threshold < 1))
        throw InvalidInput("simplifier config: binarizeThreshold must be in (0,1)");
}

namespace raster {

namespace {

// ring order P2..P9 of Zhang-Suen: N, NE, E, SE, S, SW, W, NW
constexpr std::array<int, 8> kRx{0, 1, 1, 1, 0, -1, -1, -1};
constexpr std::array<int, 8> kRy{-1, -1, 0, 1, 1, 1, 0, -1};

std::array<bool, 8> ring(const BinaryImage& img, int x, int y) {
    std::array<bool, 8> r{};
    for (int k = 0; k < 8; ++k) r[k] = img.get(x + kRx[k], y + kRy[k]);
    return r;
}

// Removing p keeps its foreground neighbours 8-connected to each other.
bool locally_simple(const std::array<bool, 8>& r) {
    int seen = 0, comps = 0;
    std::array<bool, 8> visited{};
    for (int s = 0; s < 8; ++s) {
        if (!r[s] || visited[s]) continue;
        ++comps;
        std::array<int, 8> stack{};
        int top = 0;
        stack[top++] = s;
        visited[s] = true;
        while (top) {
            const int a = stack[--top];
            ++seen;
            for (int b = 0; b < 8; ++b) {
                if (!r[b] || visited[b]) continue;
                if (std::max(std::abs(kRx[a] - kRx[b]), std::abs(kRy[a] - kRy[b])) <= 1) {
                    visited[b] = true;
                    stack[top++] = b;
                }
            }
        }
    }
    return comps == 1 && seen >= 2;
}

void remove_staircase(BinaryImage& img);

}  // namespace

int neighbour_count(const BinaryImage& img, int x, int y) {
    int n = 0;
    for (int k = 0; k < 8; ++k) n += img.get(x + kRx[k], y + kRy[k]);
    return n;
}

void draw_line(BinaryImage& img, int x0, int y0, int x1, int y1) {
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        if (img.inside(x0, y0)) img.set(x0, y0, true);
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

std::vector<float> gaussian_blur(const ContourImage& img, double sigma) {
    if (sigma <= 0) return img.intensity;
    const int r = static_cast<int>(std::ceil(3 * sigma));
    std::vector<double> k(2 * r + 1);
    for (int i = -r; i <= r; ++i) k[i + r] = std::exp(-0.5 * i * i / (sigma * sigma));
    const double sum = std::accumulate(k.begin(), k.end(), 0.0);
    for (double& v : k) v /= sum;

    const int w = img.width, h = img.height;
    std::vector<float> tmp(img.intensity.size()), out(img.intensity.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0;
            for (int i = -r; i <= r; ++i) acc += k[i + r] * img.at(std::clamp(x + i, 0, w - 1), y);
            tmp[static_cast<size_t>(y) * w + x] = static_cast<float>(acc);
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0;
            for (int i = -r; i <= r; ++i) acc += k[i + r] * tmp[static_cast<size_t>(std::clamp(y + i, 0, h - 1)) * w + x];
            out[static_cast<size_t>(y) * w + x] = static_cast<float>(acc);
        }
    return out;
}

BinaryImage thin(const BinaryImage& in) {
    BinaryImage img = in;
    std::vector<std::pair<int, int>> kill;
    for (bool changed = true; changed;) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            kill.clear();
            for (int y = 0; y < img.height; ++y)
                for (int x = 0; x < img.width; ++x) {
                    if (!img.get(x, y)) continue;
                    const auto r = ring(img, x, y);
                    const int b = static_cast<int>(std::count(r.begin(), r.end(), true));
                    if (b < 2 || b > 6) continue;
                    int a = 0;
                    for (int k = 0; k < 8; ++k) a += !r[k] && r[(k + 1) % 8];
                    if (a != 1) continue;
                    // r[0]=N r[2]=E r[4]=S r[6]=W
                    if (pass == 0 && ((r[0] && r[2] && r[4]) || (r[2] && r[4] && r[6]))) continue;
                    if (pass == 1 && ((r[0] && r[2] && r[6]) || (r[0] && r[4] && r[6]))) continue;
                    kill.push_back({x, y});
                }
            for (auto [x, y] : kill) img.set(x, y, false);
            changed |= !kill.empty();
        }
    }
    remove_staircase(img);
    return img;
}

BinaryImage thin_ordered(const BinaryImage& in, const std::vector<float>& weight) {
    if (weight.size() != in.px.size()) throw InvalidInput("thin: weight size mismatch");
    BinaryImage img = in;
    auto removable = [&](int x, int y) {
        if (!img.get(x, y)) return false;
        const auto r = ring(img, x, y);
        const bool border = !r[0] || !r[2] || !r[4] || !r[6];
        return border && std::count(r.begin(), r.end(), true) >= 2 && locally_simple(r);
    };
    // lowest weight first across the whole image; ties by pixel index
    using Item = std::pair<float, size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (removable(x, y)) {
                const size_t i = static_cast<size_t>(y) * img.width + x;
                queue.push({weight[i], i});
            }
    while (!queue.empty()) {
        const size_t i = queue.top().second;
        queue.pop();
        const int x = static_cast<int>(i % img.width), y = static_cast<int>(i / img.width);
        if (!removable(x, y)) continue;
        img.set(x, y, false);
        for (int k = 0; k < 8; ++k) {
            const int qx = x + kRx[k], qy = y + kRy[k];
            if (!removable(qx, qy)) continue;
            const size_t j = static_cast<size_t>(qy) * img.width + qx;
            queue.push({weight[j], j});
        }
    }
    remove_staircase(img);
    return img;
}

namespace {

void remove_staircase(BinaryImage& img) {
    // staircase corners: p with two orthogonal 4-neighbours whose removal
    // keeps the neighbourhood connected
    for (bool changed = true; changed;) {
        changed = false;
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                if (!img.get(x, y)) continue;
                const auto r = ring(img, x, y);
                const bool corner = (r[0] && r[2]) || (r[2] && r[4]) || (r[4] && r[6]) || (r[6] && r[0]);
                if (!corner || !locally_simple(r)) continue;
                img.set(x, y, false);
                changed = true;
            }
    }
}

}  // namespace

BinaryImage remove_small_components(const BinaryImage& in, double min_area) {
    int count = 0;
    const auto label = label_components(in, count);
    std::vector<size_t> area(count + 1, 0);
    for (int l : label) ++area[l];
    BinaryImage out = in;
    for (size_t i = 0; i < label.size(); ++i)
        if (label[i] && static_cast<double>(area[label[i]]) < min_area) out.px[i] = 0;
    return out;
}

BinaryImage prune_branches(const BinaryImage& in, double min_length) {
    BinaryImage img = in;
    if (min_length <= 0) return img;
    std::vector<std::pair<int, int>> path;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            if (!img.get(x, y) || neighbour_count(img, x, y) != 1) continue;
            // walk from the endpoint until a junction or another endpoint
            path.assign(1, {x, y});
            double length = 0;
            int px = -1, py = -1, cx = x, cy = y;
            bool hit_junction = false;
            while (true) {
                int nx = -1, ny = -1, options = 0;
                for (int k = 0; k < 8; ++k) {
                    const int qx = cx + kRx[k], qy = cy + kRy[k];
                    if (!img.get(qx, qy) || (qx == px && qy == py)) continue;
                    bool on_path = false;
                    for (const auto& p : path) on_path |= p.first == qx && p.second == qy;
                    if (on_path) continue;
                    ++options;
                    nx = qx;
                    ny = qy;
                }
                if (options == 0) break;
                if (options > 1 || neighbour_count(img, nx, ny) > 2) {
                    hit_junction = true;
                    if (options == 1) length += std::hypot(nx - cx, ny - cy);
                    break;
                }
                length += std::hypot(nx - cx, ny - cy);
                px = cx;
                py = cy;
                cx = nx;
                cy = ny;
                path.push_back({cx, cy});
                if (length >= min_length) break;
            }
            if (hit_junction && length < min_length)
                for (auto [qx, qy] : path) img.set(qx, qy, false);
        }
    return img;
}

BinaryImage extend_endpoints(const BinaryImage& in, const BinaryImage& support, int max_steps) {
    BinaryImage img = in;
    std::vector<std::pair<int, int>> ends;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (img.get(x, y) && neighbour_count(img, x, y) == 1) ends.push_back({x, y});
    for (auto [ex, ey] : ends) {
        // direction from a few pixels back along the skeleton
        int px = -1, py = -1, cx = ex, cy = ey;
        for (int i = 0; i < 4; ++i) {
            int nx = -1, ny = -1;
            for (int k = 0; k < 8; ++k) {
                const int qx = cx + kRx[k], qy = cy + kRy[k];
                if (img.get(qx, qy) && !(qx == px && qy == py) && !(qx == ex && qy == ey)) {
                    nx = qx;
                    ny = qy;
                    break;
                }
            }
            if (nx < 0 || neighbour_count(img, nx, ny) > 2) break;
            px = cx;
            py = cy;
            cx = nx;
            cy = ny;
        }
        double dx = ex - cx, dy = ey - cy;
        const double m = std::max(std::abs(dx), std::abs(dy));
        if (m == 0) continue;
        dx /= m;
        dy /= m;
        int lx = ex, ly = ey;
        for (int k = 1; k <= max_steps; ++k) {
            const int qx = static_cast<int>(std::lround(ex + k * dx)), qy = static_cast<int>(std::lround(ey + k * dy));
            if (!support.get(qx, qy) || img.get(qx, qy)) break;
            // stop before touching another part of the skeleton
            bool touches = false;
            for (int j = 0; j < 8; ++j) {
                const int rx = qx + kRx[j], ry = qy + kRy[j];
                if (img.get(rx, ry) && std::max(std::abs(rx - lx), std::abs(ry - ly)) > 1) touches = true;
            }
            if (touches) break;
            img.set(qx, qy, true);
            lx = qx;
            ly = qy;
        }
    }
    return img;
}

BinaryImage bridge_endpoints(const BinaryImage& in, double radius) {
    BinaryImage img = in;
    if (radius <= 0) return img;
    int count = 0;
    const auto label = label_components(img, count);
    std::vector<int> parent(count + 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };

    std::vector<std::pair<int, int>> ends;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (img.get(x, y) && neighbour_count(img, x, y) <= 1) ends.push_back({x, y});

    struct Cand {
        double d;
        int a, b;
    };
    std::vector<Cand> cands;
    for (size_t i = 0; i < ends.size(); ++i)
        for (size_t j = i + 1; j < ends.size(); ++j) {
            const double d = std::hypot(ends[i].first - ends[j].first, ends[i].second - ends[j].second);
            if (d <= radius) cands.push_back({d, static_cast<int>(i), static_cast<int>(j)});
        }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& l, const Cand& r) { return l.d < r.d; });
    std::vector<char> used(ends.size(), 0);
    for (const auto& c : cands) {
        if (used[c.a] || used[c.b]) continue;
        const auto [ax, ay] = ends[c.a];
        const auto [bx, by] = ends[c.b];
        const int la = find(label[static_cast<size_t>(ay) * img.width + ax]);
        const int lb = find(label[static_cast<size_t>(by) * img.width + bx]);
        if (la == lb) continue;
        draw_line(img, ax, ay, bx, by);
        parent[la] = lb;
        used[c.a] = used[c.b] = 1;
    }
    return img;
}

}  // namespace raster

ContourImage simplify(const ContourImage& img, const SimplifierConfig& cfg) {
    cfg.validate();
    ContourImage blurred(img.width, img.height);
    blurred.intensity = raster::gaussian_blur(img, cfg.blur_sigma);
    const BinaryImage support = threshold(img, static_cast<float>(cfg.binarize_threshold));
    BinaryImage mask = threshold(blurred, static_cast<float>(cfg.binarize_threshold));
    // peel order: input ink first, blurred ridge as tie-breaker, so a clean
    // skeleton passes through unchanged
    std::vector<float> weight(img.intensity.size());
    for (size_t i = 0; i < weight.size(); ++i) weight[i] = img.intensity[i] + blurred.intensity[i];
    mask = raster::thin_ordered(mask, weight);
    // thinning eats into line ends; grow them back over the input strokes
    mask = raster::extend_endpoints(mask, support, static_cast<int>(std::ceil(3 * cfg.blur_sigma)) + 2);
    mask = raster::remove_small_components(mask, cfg.min_component_area);
    mask = raster::prune_branches(mask, cfg.prune_branch_length);
    mask = raster::bridge_endpoints(mask, cfg.gap_close_radius);
    mask = raster::thin_ordered(mask, weight);
    return to_contour_image(mask);
}

double precision_against_reference(const ContourImage& output, const ContourImage& reference) {
    if (output.width != reference.width || output.height != reference.height)
        throw InvalidInput("precision: image dimensions differ (" + std::to_string(output.width) + "x" +
                           std::to_string(output.height) + " vs " + std::to_string(reference.width) + "x" +
                           std::to_string(reference.height) + ")");
    const BinaryImage ref = threshold(reference, 0.5f);
    size_t predicted = 0, hit = 0;
    for (int y = 0; y < output.height; ++y)
        for (int x = 0; x < output.width; ++x) {
            if (output.at(x, y) < 0.5f) continue;
            ++predicted;
            bool near = false;
            for (int dy = -1; dy <= 1 && !near; ++dy)
                for (int dx = -1; dx <= 1 && !near; ++dx) near = ref.get(x + dx, y + dy);
            hit += near;
        }
    return predicted ? static_cast<double>(hit) / predicted : 0.0;
}

ContourImage simplify_external(const ContourImage& img, const std::string& command,
                               const std::filesystem::path& work_dir) {
    if (command.empty()) throw InvalidInput("external simplifier: no command given");
    std::filesystem::create_directories(work_dir);
    const auto in = work_dir / "simplify_in.png";
    const auto out = work_dir / "simplify_out.png";
    std::filesystem::remove(out);
    write_png(img, in);
    const std::string cmd = command + " '" + in.string() + "' '" + out.string() + "'";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) throw std::runtime_error("external simplifier failed with status " + std::to_string(rc));
    if (!std::filesystem::exists(out)) throw std::runtime_error("external simplifier wrote no output");
    ContourImage res = read_png(out);
    if (res.width != img.width || res.height != img.height)
        throw std::runtime_error("external simplifier changed the image size");
    return res;
}

SimplifierFn make_simplifier(const std::string& kind, const SimplifierConfig& cfg, const std::string& command,
                             const std::filesystem::path& work_dir) {
    if (kind == "classic") return [cfg](const ContourImage& img) { return simplify(img, cfg); };
    if (kind == "external") {
        const auto dir = work_dir.empty() ? std::filesystem::temp_directory_path() / "inkbot_simplify" : work_dir;
        return [command, dir](const ContourImage& img) { return simplify_external(img, command, dir); };
    }
    throw InvalidInput("unknown simplifier '" + kind + "' (expected classic or external)");
}

}  // namespace inkbot
