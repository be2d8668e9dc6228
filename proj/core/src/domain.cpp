#include "smvt/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "smvt/errors.hpp"

namespace smvt {

Domain::Domain(Kind kind, Predicate contains, std::vector<double> lo, std::vector<double> hi)
    : kind_(kind), contains_(std::move(contains)), box_lo_(std::move(lo)), box_hi_(std::move(hi)) {}

Domain Domain::interval(double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
    throw std::invalid_argument("interval domain requires lo <= hi");
  }
  return Domain(Kind::interval, nullptr, {lo}, {hi});
}

Domain Domain::convex(std::size_t arity, Predicate contains, std::vector<double> box_lo,
                      std::vector<double> box_hi) {
  if (arity == 0) throw std::invalid_argument("domain arity must be positive");
  if (box_lo.size() != arity || box_hi.size() != arity) {
    throw ArityError("bounding box does not match domain arity");
  }
  for (std::size_t q = 0; q < arity; ++q) {
    if (!(box_lo[q] <= box_hi[q])) throw std::invalid_argument("bounding box requires lo <= hi");
  }
  if (!contains) throw std::invalid_argument("convex domain needs a membership predicate");
  return Domain(Kind::convex_set, std::move(contains), std::move(box_lo), std::move(box_hi));
}

Domain Domain::whole(std::size_t arity) {
  const double inf = std::numeric_limits<double>::infinity();
  return convex(
      arity,
      [](std::span<const double> x) {
        return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
      },
      std::vector<double>(arity, -inf), std::vector<double>(arity, inf));
}

bool Domain::contains(std::span<const double> x) const {
  if (x.size() != arity()) throw ArityError("point does not match domain arity");
  if (kind_ == Kind::interval) return std::isfinite(x[0]) && box_lo_[0] <= x[0] && x[0] <= box_hi_[0];
  return contains_(x);
}

bool Domain::contains(double x) const { return contains(std::span<const double>(&x, 1)); }

bool Domain::contains_segment(std::span<const double> a, std::span<const double> h,
                              int samples) const {
  if (a.size() != arity() || h.size() != arity()) {
    throw ArityError("segment does not match domain arity");
  }
  if (samples < 2) throw std::invalid_argument("segment check needs at least two samples");
  std::vector<double> p(arity());
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    for (std::size_t q = 0; q < p.size(); ++q) p[q] = a[q] + t * h[q];
    if (!contains(p)) return false;
  }
  return true;
}

bool Domain::spot_check_convexity(int pairs, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto draw = [&](std::vector<double>& x) {
    for (std::size_t q = 0; q < x.size(); ++q) {
      const double lo = std::isfinite(box_lo_[q]) ? box_lo_[q] : -1e3;
      const double hi = std::isfinite(box_hi_[q]) ? box_hi_[q] : 1e3;
      x[q] = lo + (hi - lo) * unit(rng);
    }
  };
  std::vector<double> u(arity()), v(arity()), m(arity());
  for (int i = 0; i < pairs; ++i) {
    draw(u);
    draw(v);
    if (!contains(u) || !contains(v)) continue;
    for (std::size_t q = 0; q < m.size(); ++q) m[q] = 0.5 * (u[q] + v[q]);
    if (!contains(m)) return false;
  }
  return true;
}

}  // namespace smvt
