#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "marp/error.hpp"
#include "marp/geometry.hpp"

namespace marp {

// Abstract per-arm motion layer. Configurations are stacked per-arm points;
// a motion is the straight-line interpolation between two of them.
class MotionModel {
 public:
  virtual ~MotionModel() = default;

  virtual bool feasible(std::span<const Point> from, std::span<const Point> to) const = 0;

  // Per-arm arc length of the motion.
  virtual std::vector<double> cost(std::span<const Point> from, std::span<const Point> to) const {
    std::vector<double> c(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) c[i] = distance(from[i], to[i]);
    return c;
  }

  virtual std::string name() const = 0;
};

class FreeSpaceModel final : public MotionModel {
 public:
  bool feasible(std::span<const Point>, std::span<const Point>) const override { return true; }
  std::string name() const override { return "free"; }
};

// Arms are discs of clearance d_min/2: a motion is rejected when any two
// arms come closer than d_min at any normalized time in [0, 1].
class InterferenceModel final : public MotionModel {
 public:
  explicit InterferenceModel(double d_min) : d_min_(d_min) {
    if (!(d_min > 0.0)) throw InputError("d_min must be > 0");
  }

  bool feasible(std::span<const Point> from, std::span<const Point> to) const override {
    for (std::size_t i = 0; i < from.size(); ++i)
      for (std::size_t j = i + 1; j < from.size(); ++j)
        if (min_distance_linear(from[i], to[i], from[j], to[j]) < d_min_) return false;
    return true;
  }

  double d_min() const { return d_min_; }
  std::string name() const override { return "interference"; }

 private:
  double d_min_;
};

inline std::unique_ptr<MotionModel> make_motion_model(const std::string& kind, double d_min) {
  if (kind == "free") return std::make_unique<FreeSpaceModel>();
  if (kind == "interference") return std::make_unique<InterferenceModel>(d_min);
  throw InputError("unknown motion model '" + kind + "'");
}

}  // namespace marp
