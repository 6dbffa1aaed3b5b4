#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace inkbot {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

using Polyline2 = std::vector<Vec2>;
using Polyline3 = std::vector<Vec3>;

/// Contour family that produced a line: occluding contour, suggestive
/// contour or apparent ridge. Values double as bits in ContourImage tags.
enum class ContourFamily : unsigned char { OC = 1, SC = 2, AR = 4 };

const char* to_string(ContourFamily f);
ContourFamily contour_family_from_string(const std::string& s);

/// Input violates a documented precondition (bad mesh, bad parameters...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace inkbot
