#include "smvt/multi_index.hpp"

#include <numeric>
#include <stdexcept>

namespace smvt {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw std::invalid_argument("multi-index entries must be nonnegative");
  }
  order_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

MultiIndex MultiIndex::zero(std::size_t arity) { return MultiIndex(std::vector<int>(arity, 0)); }

MultiIndex MultiIndex::axis(std::size_t arity, std::size_t q, int k) {
  if (q >= arity) throw std::out_of_range("multi-index axis out of range");
  std::vector<int> e(arity, 0);
  e[q] = k;
  return MultiIndex(std::move(e));
}

double MultiIndex::multinomial_weight() const {
  double w = factorial(order_);
  for (int e : entries_) w /= factorial(e);
  return w;
}

double MultiIndex::monomial(std::span<const double> h) const {
  double m = 1.0;
  for (std::size_t q = 0; q < entries_.size(); ++q) {
    for (int i = 0; i < entries_[q]; ++i) m *= h[q];
  }
  return m;
}

namespace {

void enumerate(std::size_t q, int remaining, std::vector<int>& current, std::vector<MultiIndex>& out) {
  if (q + 1 == current.size()) {
    current[q] = remaining;
    out.emplace_back(current);
    return;
  }
  for (int i = 0; i <= remaining; ++i) {
    current[q] = i;
    enumerate(q + 1, remaining - i, current, out);
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_multi_indices(std::size_t arity, int order) {
  if (arity == 0) throw std::invalid_argument("arity must be positive");
  if (order < 0) throw std::invalid_argument("order must be nonnegative");
  std::vector<MultiIndex> out;
  std::vector<int> current(arity, 0);
  enumerate(0, order, current, out);
  return out;
}

double factorial(int k) {
  if (k < 0) throw std::invalid_argument("factorial of a negative number");
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace smvt
