#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "smvt/probability.hpp"

namespace smvt {

/// Parametric family used for seeded draws.
///
/// Text form: `uniform:lo,hi`, `normal:mean,sd`, `bernoulli:p`,
/// `exponential:rate`.
struct Distribution {
  enum class Kind { uniform, normal, bernoulli, exponential };

  Kind kind = Kind::uniform;
  double p1 = 0.0;
  double p2 = 1.0;

  static Distribution uniform(double lo, double hi);
  static Distribution normal(double mean, double sd);
  static Distribution bernoulli(double p);
  static Distribution exponential(double rate);
  /// Throws std::invalid_argument for unknown families or bad parameters.
  static Distribution parse(std::string_view text);

  std::string to_string() const;
  double mean() const;
  double stddev() const;
};

/// Stateful draw source. The engine is std::mt19937_64, whose output sequence
/// is fixed by the standard; the transforms to each family are implemented
/// here so that streams are identical across standard libraries.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  double draw(const Distribution& d);
  std::vector<double> draw(const Distribution& d, std::size_t count);

 private:
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// splitmix64 mix of (master, index): independent-looking seeds for
/// replicate `index` that do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Seed + distribution + count; identical fields give identical draws.
struct SampleStream {
  std::uint64_t seed = 0;
  Distribution distribution;
  std::size_t count = 1;

  std::vector<double> draw() const;
};

struct EmpiricalSpace {
  std::shared_ptr<const FiniteProbabilitySpace> space;
  RandomVariable variable;
};

/// Uniform-weight space over the N draws, singleton atoms, X = the draws.
EmpiricalSpace empirical_space(const SampleStream& stream);

}  // namespace smvt
