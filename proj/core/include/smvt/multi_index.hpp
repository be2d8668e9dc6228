#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace smvt {

/// Exponents (i_1, ..., i_p) of a mixed partial derivative.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);

  static MultiIndex zero(std::size_t arity);
  /// k-th derivative along coordinate q.
  static MultiIndex axis(std::size_t arity, std::size_t q, int k);

  std::size_t arity() const noexcept { return entries_.size(); }
  int order() const noexcept { return order_; }
  bool is_zero() const noexcept { return order_ == 0; }
  int operator[](std::size_t q) const { return entries_[q]; }
  std::span<const int> entries() const noexcept { return entries_; }

  /// order! / (i_1! ... i_p!)
  double multinomial_weight() const;

  /// h_1^{i_1} ... h_p^{i_p}
  double monomial(std::span<const double> h) const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> entries_;
  int order_ = 0;
};

/// Every multi-index of the given arity with entries summing to `order`.
///
/// Order is lexicographic ascending on (i_1, ..., i_p): for arity 2 and
/// order 2 the sequence is (0,2), (1,1), (2,0). The order is part of the
/// contract so sums over it are reproducible bit for bit.
std::vector<MultiIndex> enumerate_multi_indices(std::size_t arity, int order);

double factorial(int k);

}  // namespace smvt
