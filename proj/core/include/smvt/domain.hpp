#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace smvt {

/// Where a field may be evaluated: a closed interval on the line, or a
/// convex set in R^p described by a membership predicate and a bounding box.
class Domain {
 public:
  enum class Kind { interval, convex_set };
  using Predicate = std::function<bool(std::span<const double>)>;

  /// Closed interval [lo, hi]; either bound may be infinite.
  static Domain interval(double lo, double hi);
  /// Convex set given by `contains`; the box is used for sampling and
  /// reporting only and may have infinite sides.
  static Domain convex(std::size_t arity, Predicate contains, std::vector<double> box_lo,
                       std::vector<double> box_hi);
  /// All of R^p.
  static Domain whole(std::size_t arity);

  Kind kind() const noexcept { return kind_; }
  std::size_t arity() const noexcept { return box_lo_.size(); }
  const std::vector<double>& box_lo() const noexcept { return box_lo_; }
  const std::vector<double>& box_hi() const noexcept { return box_hi_; }

  bool contains(std::span<const double> x) const;
  bool contains(double x) const;

  /// Checks a + t*h for `samples` equally spaced t in [0, 1].
  bool contains_segment(std::span<const double> a, std::span<const double> h,
                        int samples = 101) const;

  /// Spot check of midpoint convexity on pairs of points drawn from the
  /// finite part of the bounding box. Returns false on the first violation.
  bool spot_check_convexity(int pairs, std::uint64_t seed) const;

 private:
  Domain(Kind kind, Predicate contains, std::vector<double> lo, std::vector<double> hi);

  Kind kind_;
  Predicate contains_;
  std::vector<double> box_lo_;
  std::vector<double> box_hi_;
};

}  // namespace smvt
