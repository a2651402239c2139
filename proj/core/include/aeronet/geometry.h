#ifndef AERONET_GEOMETRY_H_
#define AERONET_GEOMETRY_H_

#include <cmath>

namespace aeronet {

// Position or displacement in meters (or m/s for velocities).
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  bool operator==(const Vec3&) const = default;

  double Norm() const { return std::sqrt(x * x + y * y + z * z); }
  double HorizontalNorm() const { return std::sqrt(x * x + y * y); }
};

inline double Distance(const Vec3& a, const Vec3& b) { return (a - b).Norm(); }
inline double HorizontalDistance(const Vec3& a, const Vec3& b) {
  return (a - b).HorizontalNorm();
}

// Axis-aligned box, inclusive bounds.
struct Box {
  Vec3 min;
  Vec3 max;

  bool Contains(const Vec3& p, double eps = 1e-9) const {
    return p.x >= min.x - eps && p.x <= max.x + eps && p.y >= min.y - eps &&
           p.y <= max.y + eps && p.z >= min.z - eps && p.z <= max.z + eps;
  }
  Vec3 Clamp(const Vec3& p) const {
    return {std::fmin(std::fmax(p.x, min.x), max.x),
            std::fmin(std::fmax(p.y, min.y), max.y),
            std::fmin(std::fmax(p.z, min.z), max.z)};
  }
};

}  // namespace aeronet

#endif  // AERONET_GEOMETRY_H_
