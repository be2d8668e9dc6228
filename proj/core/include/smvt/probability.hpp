#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace smvt {

/// Blocks of outcome indices. On a finite space a partition generates the
/// sigma-algebra whose atoms are its blocks.
using Partition = std::vector<std::vector<std::size_t>>;

/// Finite Omega with a partition sigma-algebra and outcome weights.
///
/// Invariants, checked on construction: weights are nonnegative and sum to
/// one within 1e-12, atoms are pairwise disjoint and cover Omega, outcome
/// ids are unique.
class FiniteProbabilitySpace {
 public:
  FiniteProbabilitySpace(std::vector<std::string> outcomes, Partition atoms,
                         std::vector<double> weights);

  /// Equal weights, singleton atoms (the power-set sigma-algebra).
  static FiniteProbabilitySpace uniform(std::vector<std::string> outcomes);
  /// Outcomes named "0" .. "n-1".
  static FiniteProbabilitySpace uniform(std::size_t n);

  std::size_t size() const noexcept { return outcomes_.size(); }
  const std::vector<std::string>& outcomes() const noexcept { return outcomes_; }
  const std::string& outcome(std::size_t i) const { return outcomes_.at(i); }
  const Partition& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::optional<std::size_t> index_of(const std::string& id) const;

 private:
  std::vector<std::string> outcomes_;
  Partition atoms_;
  std::vector<double> weights_;
};

/// Scalar- or vector-valued map on a finite space. Scalars have dimension 1.
///
/// Must be measurable with respect to the space's sigma-algebra, i.e.
/// constant on every atom; the constructor rejects anything else.
class RandomVariable {
 public:
  RandomVariable(std::shared_ptr<const FiniteProbabilitySpace> space, std::size_t dimension,
                 std::vector<double> flat_values);

  static RandomVariable scalar(std::shared_ptr<const FiniteProbabilitySpace> space,
                               std::vector<double> values);
  static RandomVariable vector(std::shared_ptr<const FiniteProbabilitySpace> space,
                               const std::vector<std::vector<double>>& values);

  const std::shared_ptr<const FiniteProbabilitySpace>& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return space_->size(); }
  std::size_t dimension() const noexcept { return dim_; }
  std::span<const double> value(std::size_t i) const;
  /// Value of a dimension-1 variable.
  double scalar_value(std::size_t i) const;
  const std::vector<double>& flat() const noexcept { return data_; }

 private:
  std::shared_ptr<const FiniteProbabilitySpace> space_;
  std::size_t dim_;
  std::vector<double> data_;
};

/// (X, Y) stacked componentwise; both must live on the same space object.
RandomVariable joint(const RandomVariable& x, const RandomVariable& y);

/// Level sets of X, in order of first occurrence. Values are compared
/// exactly, componentwise; quantize first if near-equal values should merge.
Partition sigma_generated_by(const RandomVariable& x);

/// True iff g is constant (exactly) on every block of the partition.
bool is_measurable_wrt(const RandomVariable& g, const Partition& partition);

/// Sum of weight * value, componentwise.
std::vector<double> expectation(const RandomVariable& x);

/// JSON shape:
///   {"outcomes": [ids], "atoms": [[ids]], "weights": [...],
///    "values": {id: number | [numbers]}}
/// `values` is present only when a variable is given. Ids are strings;
/// numeric ids in input are accepted and converted.
nlohmann::json to_json(const FiniteProbabilitySpace& space,
                       const RandomVariable* values = nullptr);

struct LoadedSpace {
  std::shared_ptr<const FiniteProbabilitySpace> space;
  std::optional<RandomVariable> variable;
};

/// Throws ConfigError with a field path on malformed input.
LoadedSpace space_from_json(const nlohmann::json& j);
LoadedSpace load_space_file(const std::string& path);

}  // namespace smvt
