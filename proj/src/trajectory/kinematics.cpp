#include "inkbot/trajectory/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace inkbot {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

void ArmModel::validate() const {
    if (!(l1 > 0 && l2 > 0)) throw InvalidInput("arm: link lengths must be positive");
    for (const auto& l : limits)
        if (!(l.lo < l.hi)) throw InvalidInput("arm: joint limits out of order");
    if (!(v_max > 0 && a_max > 0)) throw InvalidInput("arm: vMax and aMax must be positive");
    if (!(draw_speed >= 50 && draw_speed <= 120)) throw InvalidInput("arm: draw speed must be within [50, 120] mm/s");
    if (!(travel_speed > 0 && travel_speed <= v_max)) throw InvalidInput("arm: travel speed must be in (0, vMax]");
}

Vec3 forward_kinematics(const ArmModel& arm, const JointPose& j) {
    const double s = j.shoulder * kDeg, e = (j.shoulder + j.elbow) * kDeg, b = j.base * kDeg;
    const double r = arm.l1 * std::cos(s) + arm.l2 * std::cos(e);
    const double z = arm.base_height + arm.l1 * std::sin(s) + arm.l2 * std::sin(e);
    return {r * std::cos(b), r * std::sin(b), z};
}

Eigen::Matrix3d jacobian(const ArmModel& arm, const JointPose& j) {
    const double s = j.shoulder * kDeg, e = (j.shoulder + j.elbow) * kDeg, b = j.base * kDeg;
    const double r = arm.l1 * std::cos(s) + arm.l2 * std::cos(e);
    const double dr_ds = -arm.l1 * std::sin(s) - arm.l2 * std::sin(e);
    const double dr_de = -arm.l2 * std::sin(e);
    const double dz_ds = arm.l1 * std::cos(s) + arm.l2 * std::cos(e);
    const double dz_de = arm.l2 * std::cos(e);
    Eigen::Matrix3d J;
    J << -r * std::sin(b), dr_ds * std::cos(b), dr_de * std::cos(b),
          r * std::cos(b), dr_ds * std::sin(b), dr_de * std::sin(b),
          0.0, dz_ds, dz_de;
    return J;
}

bool within_limits(const ArmModel& arm, const JointPose& j, std::string* why) {
    const double v[4] = {j.base, j.shoulder, j.elbow, j.wrist};
    static const char* names[4] = {"base", "shoulder", "elbow", "wrist"};
    for (int i = 0; i < 4; ++i) {
        const double eps = 1e-9;
        if (v[i] < arm.limits[i].lo - eps || v[i] > arm.limits[i].hi + eps) {
            if (why)
                *why = std::string(names[i]) + " angle " + std::to_string(v[i]) + " outside [" +
                       std::to_string(arm.limits[i].lo) + ", " + std::to_string(arm.limits[i].hi) + "]";
            return false;
        }
    }
    return true;
}

JointPose inverse_kinematics(const ArmModel& arm, const Vec3& p, const JointPose* prev) {
    const double r = std::hypot(p.x(), p.y());
    const double h = p.z() - arm.base_height;
    const double d = std::hypot(r, h);
    const double reach = arm.l1 + arm.l2, inner = std::abs(arm.l1 - arm.l2);
    const double tol = 1e-9;
    if (d > reach + tol || d < inner - tol)
        throw KinematicsError("unreachable point (" + std::to_string(p.x()) + ", " + std::to_string(p.y()) + ", " +
                              std::to_string(p.z()) + "): distance " + std::to_string(d) + " mm outside [" +
                              std::to_string(inner) + ", " + std::to_string(reach) + "]");

    // Planar solution with the tool at signed radius `rs` from the base axis.
    auto solve = [&](double base_deg, double rs) {
        JointPose j;
        j.base = base_deg;
        const double c = std::clamp((d * d - arm.l1 * arm.l1 - arm.l2 * arm.l2) / (2 * arm.l1 * arm.l2), -1.0, 1.0);
        const double elbow = -std::acos(c);  // elbow up
        j.shoulder = (std::atan2(h, rs) - std::atan2(arm.l2 * std::sin(elbow), arm.l1 + arm.l2 * std::cos(elbow))) / kDeg;
        j.elbow = elbow / kDeg;
        j.wrist = prev ? prev->wrist : 0.0;
        return j;
    };
    const double base = r > 1e-12 ? std::atan2(p.y(), p.x()) / kDeg : (prev ? prev->base : 0.0);
    const JointPose front = solve(base, r);
    std::string why;
    if (within_limits(arm, front, &why)) return front;
    // Reaching back over the base axis: turn the base half a revolution.
    if (r > 1e-12) {
        const JointPose back = solve(base > 0 ? base - 180 : base + 180, -r);
        if (within_limits(arm, back)) return back;
    }
    throw KinematicsError("joint limit: " + why);
}

double TrapezoidProfile::speed_at(double t) const {
    if (empty() || t <= 0 || t >= duration()) return 0.0;
    if (t < t_acc) return accel * t;
    if (t < t_acc + t_cruise) return v_peak;
    return std::max(0.0, v_peak - accel * (t - t_acc - t_cruise));
}

double TrapezoidProfile::distance_at(double t) const {
    if (empty() || t <= 0) return 0.0;
    if (t >= duration()) return length;
    const double d_acc = 0.5 * accel * t_acc * t_acc;
    if (t < t_acc) return 0.5 * accel * t * t;
    if (t < t_acc + t_cruise) return d_acc + v_peak * (t - t_acc);
    const double u = t - t_acc - t_cruise;
    return d_acc + v_peak * t_cruise + v_peak * u - 0.5 * accel * u * u;
}

TrapezoidProfile plan_segment(double length, double v, double a) {
    if (!(v > 0 && a > 0)) throw InvalidInput("trapezoid: speed and acceleration must be positive");
    TrapezoidProfile p;
    if (!(length > 0)) return p;
    p.length = length;
    p.accel = a;
    if (length < v * v / a) {
        p.v_peak = std::sqrt(length * a);
        p.t_acc = p.t_dec = p.v_peak / a;
    } else {
        p.v_peak = v;
        p.t_acc = p.t_dec = v / a;
        p.t_cruise = (length - v * v / a) / v;
    }
    return p;
}

TrapezoidProfile plan_segment(const Vec3& from, const Vec3& to, double v, double a) {
    return plan_segment((to - from).norm(), v, a);
}

}  // namespace inkbot
