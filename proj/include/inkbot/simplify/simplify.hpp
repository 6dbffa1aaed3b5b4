#pragma once

#include "inkbot/image/image.hpp"

#include <filesystem>
#include <functional>
#include <string>

namespace inkbot {

struct SimplifierConfig {
    double blur_sigma = 1.0;
    double binarize_threshold = 0.25;
    double min_component_area = 25;
    double prune_branch_length = 8;
    double gap_close_radius = 4;

    void validate() const;
};

/// Classical raster simplifier: blur, binarize, thin, drop small components,
/// prune short branches, bridge nearby endpoints. Output is binary with
/// 1-px wide 8-connected skeletons.
ContourImage simplify(const ContourImage& img, const SimplifierConfig& cfg = {});

/// True-positive fraction of the output foreground against the reference
/// foreground dilated by one pixel. Empty output gives 0.
double precision_against_reference(const ContourImage& output, const ContourImage& reference);

/// Any raster-to-raster simplifier.
using SimplifierFn = std::function<ContourImage(const ContourImage&)>;

/// Runs `command in.png out.png` and reads the result back. Throws when the
/// command fails or returns an image of a different size.
ContourImage simplify_external(const ContourImage& img, const std::string& command,
                               const std::filesystem::path& work_dir);

/// "classic" or "external"; `command` is only used for the latter.
SimplifierFn make_simplifier(const std::string& kind, const SimplifierConfig& cfg,
                             const std::string& command = {}, const std::filesystem::path& work_dir = {});

namespace raster {

std::vector<float> gaussian_blur(const ContourImage& img, double sigma);
/// Zhang-Suen thinning followed by removal of staircase pixels, so no 2x2
/// block of foreground survives.
BinaryImage thin(const BinaryImage& in);
/// Repeatedly removes the lowest-weight simple border pixel so the skeleton
/// follows the weight ridge, then removes staircase pixels. End pixels are
/// kept.
BinaryImage thin_ordered(const BinaryImage& in, const std::vector<float>& weight);
BinaryImage remove_small_components(const BinaryImage& in, double min_area);
BinaryImage prune_branches(const BinaryImage& in, double min_length);
/// Grows each skeleton end pixel by pixel along its direction while it stays
/// on `support`, at most max_steps pixels.
BinaryImage extend_endpoints(const BinaryImage& in, const BinaryImage& support, int max_steps);
BinaryImage bridge_endpoints(const BinaryImage& in, double radius);
int neighbour_count(const BinaryImage& img, int x, int y);
/// Draws a Bresenham line of foreground pixels.
void draw_line(BinaryImage& img, int x0, int y0, int x1, int y1);

}  // namespace raster

}  // namespace inkbot
