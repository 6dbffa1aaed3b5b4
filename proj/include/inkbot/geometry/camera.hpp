#pragma once

#include "inkbot/types.hpp"

namespace inkbot {

struct Viewpoint {
    Vec3 eye{0, 0, 5};
    Vec3 target{0, 0, 0};
    Vec3 up{0, 1, 0};
    double fov_y_deg = 40.0;
    int image_width = 512;
    int image_height = 512;

    /// Throws InvalidInput when eye == target, fov outside (0, 180), image
    /// smaller than 16 px, or up parallel to the view axis.
    void validate() const;
    bool operator==(const Viewpoint&) const = default;
};

/// Pinhole camera derived from a Viewpoint. Pixel coordinates have the
/// origin at the top-left corner with y pointing down; pixel (i, j) covers
/// [i, i+1) x [j, j+1).
class Camera {
public:
    explicit Camera(const Viewpoint& view);

    /// (x_px, y_px, depth) where depth is the distance along the view axis.
    Vec3 project(const Vec3& world) const;
    double depth(const Vec3& world) const { return (world - eye_).dot(forward_); }

    /// Unit vector from a surface point towards the eye.
    Vec3 to_eye(const Vec3& world) const { return (eye_ - world).normalized(); }

    const Vec3& eye() const { return eye_; }
    const Vec3& forward() const { return forward_; }
    int width() const { return width_; }
    int height() const { return height_; }
    double near_plane() const { return near_; }

private:
    Vec3 eye_, forward_, right_, up_;
    double focal_px_;
    int width_, height_;
    double near_;
};

}  // namespace inkbot
