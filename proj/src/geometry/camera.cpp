#include "inkbot/geometry/camera.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>

namespace inkbot {

void Viewpoint::validate() const {
    if ((eye - target).norm() <= 0.0) throw InvalidInput("viewpoint: eye equals target");
    if (!(fov_y_deg > 0.0 && fov_y_deg < 180.0)) throw InvalidInput("viewpoint: fovY must be in (0, 180)");
    if (image_width < 16 || image_height < 16) throw InvalidInput("viewpoint: image must be at least 16x16");
    if (up.norm() <= 0.0) throw InvalidInput("viewpoint: up vector is zero");
    const Vec3 f = (target - eye).normalized();
    if (f.cross(up.normalized()).norm() < 1e-9) throw InvalidInput("viewpoint: up is parallel to view axis");
}

Camera::Camera(const Viewpoint& view) {
    view.validate();
    eye_ = view.eye;
    forward_ = (view.target - view.eye).normalized();
    right_ = forward_.cross(view.up).normalized();
    up_ = right_.cross(forward_);
    width_ = view.image_width;
    height_ = view.image_height;
    focal_px_ = 0.5 * height_ / std::tan(0.5 * view.fov_y_deg * std::numbers::pi / 180.0);
    near_ = 1e-3 * (view.target - view.eye).norm();
}

Vec3 Camera::project(const Vec3& world) const {
    const Vec3 d = world - eye_;
    const double z = d.dot(forward_);
    const double x = d.dot(right_);
    const double y = d.dot(up_);
    return {0.5 * width_ + focal_px_ * x / z, 0.5 * height_ - focal_px_ * y / z, z};
}

}  // namespace inkbot
