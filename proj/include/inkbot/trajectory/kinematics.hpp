#pragma once

#include "inkbot/types.hpp"

#include <array>
#include <string>

namespace inkbot {

struct JointLimits {
    double lo = -180, hi = 180;  // degrees
    bool operator==(const JointLimits&) const = default;
};

/// Base rotation plus a planar two-link arm whose parallel linkage keeps the
/// tool vertical. Angles in degrees: shoulder measured up from horizontal,
/// elbow relative to the upper arm (negative bends the elbow up).
struct ArmModel {
    double l1 = 135;
    double l2 = 147;
    double base_height = 0;
    std::array<JointLimits, 4> limits{{{-135, 135}, {-30, 120}, {-170, 10}, {-150, 150}}};
    double v_max = 200;       // mm/s
    double a_max = 1000;      // mm/s^2
    double draw_speed = 80;   // mm/s
    double travel_speed = 150;

    void validate() const;
    bool operator==(const ArmModel&) const = default;
};

struct JointPose {
    double base = 0, shoulder = 0, elbow = 0, wrist = 0;
    bool operator==(const JointPose&) const = default;
};

class KinematicsError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

Vec3 forward_kinematics(const ArmModel& arm, const JointPose& j);

/// d(x, y, z) / d(base, shoulder, elbow) with angles in radians.
Eigen::Matrix3d jacobian(const ArmModel& arm, const JointPose& j);

/// Elbow-up closed form. When the direct base angle breaks its limit the arm
/// reaches back over the base axis with the base turned half a revolution.
/// `prev` picks the base angle when the point lies on the base axis. Throws KinematicsError when out of reach or out of limits.
JointPose inverse_kinematics(const ArmModel& arm, const Vec3& p, const JointPose* prev = nullptr);

bool within_limits(const ArmModel& arm, const JointPose& j, std::string* why = nullptr);

/// Trapezoidal speed profile along a path of given length.
struct TrapezoidProfile {
    double length = 0;
    double v_peak = 0;
    double accel = 0;
    double t_acc = 0, t_cruise = 0, t_dec = 0;

    bool empty() const { return length <= 0; }
    double duration() const { return t_acc + t_cruise + t_dec; }
    double speed_at(double t) const;
    double distance_at(double t) const;
    bool operator==(const TrapezoidProfile&) const = default;
};

/// Cruise at v when the path is long enough (length >= v^2 / a), otherwise a
/// triangular profile peaking below v. Zero length gives an empty profile.
TrapezoidProfile plan_segment(double length, double v, double a);
TrapezoidProfile plan_segment(const Vec3& from, const Vec3& to, double v, double a);

}  // namespace inkbot
