#include "smvt/probability.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "smvt/errors.hpp"

namespace smvt {

FiniteProbabilitySpace::FiniteProbabilitySpace(std::vector<std::string> outcomes, Partition atoms,
                                               std::vector<double> weights)
    : outcomes_(std::move(outcomes)), atoms_(std::move(atoms)), weights_(std::move(weights)) {
  const std::size_t n = outcomes_.size();
  if (n == 0) throw std::invalid_argument("probability space needs at least one outcome");
  if (weights_.size() != n) throw std::invalid_argument("one weight per outcome required");

  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen.emplace(outcomes_[i], i).second) {
      throw std::invalid_argument("duplicate outcome id '" + outcomes_[i] + "'");
    }
  }

  // Neumaier-compensated so that large uniform spaces pass the 1e-12 check.
  double total = 0.0;
  double carry = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be nonnegative");
    const double t = total + w;
    carry += std::abs(total) >= w ? (total - t) + w : (w - t) + total;
    total = t;
  }
  total += carry;
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "weights sum to " << total << ", not 1";
    throw std::invalid_argument(os.str());
  }

  std::vector<int> covered(n, 0);
  for (const auto& block : atoms_) {
    if (block.empty()) throw std::invalid_argument("atoms must be nonempty");
    for (std::size_t i : block) {
      if (i >= n) throw std::invalid_argument("atom refers to an unknown outcome");
      if (covered[i]++) throw std::invalid_argument("atoms overlap at '" + outcomes_[i] + "'");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!covered[i]) throw std::invalid_argument("atoms do not cover '" + outcomes_[i] + "'");
  }
}

FiniteProbabilitySpace FiniteProbabilitySpace::uniform(std::vector<std::string> outcomes) {
  const std::size_t n = outcomes.size();
  if (n == 0) throw std::invalid_argument("probability space needs at least one outcome");
  Partition atoms(n);
  for (std::size_t i = 0; i < n; ++i) atoms[i] = {i};
  return FiniteProbabilitySpace(std::move(outcomes), std::move(atoms),
                                std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

FiniteProbabilitySpace FiniteProbabilitySpace::uniform(std::size_t n) {
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
  return uniform(std::move(ids));
}

std::optional<std::size_t> FiniteProbabilitySpace::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (outcomes_[i] == id) return i;
  }
  return std::nullopt;
}

RandomVariable::RandomVariable(std::shared_ptr<const FiniteProbabilitySpace> space,
                               std::size_t dimension, std::vector<double> flat_values)
    : space_(std::move(space)), dim_(dimension), data_(std::move(flat_values)) {
  if (!space_) throw std::invalid_argument("random variable needs a probability space");
  if (dim_ == 0) throw std::invalid_argument("random variable dimension must be positive");
  if (data_.size() != dim_ * space_->size()) {
    throw std::invalid_argument("random variable needs one value per outcome");
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw std::invalid_argument("random variable values must be finite");
  }
  if (!is_measurable_wrt(*this, space_->atoms())) {
    throw std::invalid_argument("random variable is not constant on the atoms of its space");
  }
}

RandomVariable RandomVariable::scalar(std::shared_ptr<const FiniteProbabilitySpace> space,
                                      std::vector<double> values) {
  return RandomVariable(std::move(space), 1, std::move(values));
}

RandomVariable RandomVariable::vector(std::shared_ptr<const FiniteProbabilitySpace> space,
                                      const std::vector<std::vector<double>>& values) {
  if (values.empty()) throw std::invalid_argument("random variable needs values");
  const std::size_t dim = values.front().size();
  std::vector<double> flat;
  flat.reserve(dim * values.size());
  for (const auto& v : values) {
    if (v.size() != dim) throw ArityError("random vector values must share a dimension");
    flat.insert(flat.end(), v.begin(), v.end());
  }
  return RandomVariable(std::move(space), dim, std::move(flat));
}

std::span<const double> RandomVariable::value(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("outcome index out of range");
  return std::span<const double>(data_).subspan(i * dim_, dim_);
}

double RandomVariable::scalar_value(std::size_t i) const {
  if (dim_ != 1) throw ArityError("scalar_value on a random vector");
  return value(i)[0];
}

RandomVariable joint(const RandomVariable& x, const RandomVariable& y) {
  if (x.space() != y.space()) {
    throw std::invalid_argument("joint variables must share the same probability space");
  }
  const std::size_t dim = x.dimension() + y.dimension();
  std::vector<double> flat;
  flat.reserve(dim * x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto a = x.value(i);
    const auto b = y.value(i);
    flat.insert(flat.end(), a.begin(), a.end());
    flat.insert(flat.end(), b.begin(), b.end());
  }
  return RandomVariable(x.space(), dim, std::move(flat));
}

namespace {

bool same_value(std::span<const double> a, std::span<const double> b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!(a[k] == b[k])) return false;
  }
  return true;
}

}  // namespace

Partition sigma_generated_by(const RandomVariable& x) {
  // Lexicographic map keyed on the value vector; insertion index keeps
  // blocks in order of first occurrence.
  std::map<std::vector<double>, std::size_t> block_of;
  Partition blocks;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto v = x.value(i);
    std::vector<double> key(v.begin(), v.end());
    const auto [it, inserted] = block_of.emplace(std::move(key), blocks.size());
    if (inserted) blocks.emplace_back();
    blocks[it->second].push_back(i);
  }
  return blocks;
}

bool is_measurable_wrt(const RandomVariable& g, const Partition& partition) {
  for (const auto& block : partition) {
    if (block.empty()) continue;
    const auto first = g.value(block.front());
    for (std::size_t i : block) {
      if (!same_value(first, g.value(i))) return false;
    }
  }
  return true;
}

std::vector<double> expectation(const RandomVariable& x) {
  std::vector<double> mean(x.dimension(), 0.0);
  const auto& w = x.space()->weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto v = x.value(i);
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += w[i] * v[k];
  }
  return mean;
}

nlohmann::json to_json(const FiniteProbabilitySpace& space, const RandomVariable* values) {
  nlohmann::json j;
  j["outcomes"] = space.outcomes();
  auto atoms = nlohmann::json::array();
  for (const auto& block : space.atoms()) {
    auto ids = nlohmann::json::array();
    for (std::size_t i : block) ids.push_back(space.outcome(i));
    atoms.push_back(std::move(ids));
  }
  j["atoms"] = std::move(atoms);
  j["weights"] = space.weights();
  if (values) {
    auto obj = nlohmann::json::object();
    for (std::size_t i = 0; i < values->size(); ++i) {
      const auto v = values->value(i);
      if (values->dimension() == 1) {
        obj[space.outcome(i)] = v[0];
      } else {
        obj[space.outcome(i)] = std::vector<double>(v.begin(), v.end());
      }
    }
    j["values"] = std::move(obj);
  }
  return j;
}

namespace {

std::string id_string(const nlohmann::json& id, const std::string& path) {
  if (id.is_string()) return id.get<std::string>();
  if (id.is_number_integer()) return std::to_string(id.get<long long>());
  throw ConfigError(path, "outcome ids must be strings or integers");
}

double finite_number(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
  return d;
}

}  // namespace

LoadedSpace space_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("$", "space must be a JSON object");
  if (!j.contains("outcomes") || !j["outcomes"].is_array()) {
    throw ConfigError("$.outcomes", "required array of outcome ids");
  }
  std::vector<std::string> ids;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < j["outcomes"].size(); ++i) {
    const std::string path = "$.outcomes[" + std::to_string(i) + "]";
    ids.push_back(id_string(j["outcomes"][i], path));
    if (!index.emplace(ids.back(), i).second) throw ConfigError(path, "duplicate outcome id");
  }
  if (ids.empty()) throw ConfigError("$.outcomes", "at least one outcome required");

  Partition atoms;
  if (j.contains("atoms")) {
    if (!j["atoms"].is_array()) throw ConfigError("$.atoms", "expected an array of arrays");
    for (std::size_t b = 0; b < j["atoms"].size(); ++b) {
      const std::string bpath = "$.atoms[" + std::to_string(b) + "]";
      const auto& block = j["atoms"][b];
      if (!block.is_array()) throw ConfigError(bpath, "expected an array of outcome ids");
      std::vector<std::size_t> members;
      for (std::size_t k = 0; k < block.size(); ++k) {
        const std::string kpath = bpath + "[" + std::to_string(k) + "]";
        const auto it = index.find(id_string(block[k], kpath));
        if (it == index.end()) throw ConfigError(kpath, "unknown outcome id");
        members.push_back(it->second);
      }
      atoms.push_back(std::move(members));
    }
  } else {
    for (std::size_t i = 0; i < ids.size(); ++i) atoms.push_back({i});
  }

  std::vector<double> weights;
  if (j.contains("weights")) {
    if (!j["weights"].is_array() || j["weights"].size() != ids.size()) {
      throw ConfigError("$.weights", "expected one weight per outcome");
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      weights.push_back(finite_number(j["weights"][i], "$.weights[" + std::to_string(i) + "]"));
    }
  } else {
    weights.assign(ids.size(), 1.0 / static_cast<double>(ids.size()));
  }

  LoadedSpace out;
  try {
    out.space = std::make_shared<const FiniteProbabilitySpace>(ids, std::move(atoms),
                                                               std::move(weights));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("$", e.what());
  }

  if (j.contains("values")) {
    const auto& vals = j["values"];
    if (!vals.is_object()) throw ConfigError("$.values", "expected an object keyed by outcome id");
    std::optional<std::size_t> dim;
    std::vector<std::vector<double>> rows(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::string path = "$.values." + ids[i];
      if (!vals.contains(ids[i])) throw ConfigError(path, "missing value for outcome");
      const auto& v = vals[ids[i]];
      if (v.is_array()) {
        for (std::size_t k = 0; k < v.size(); ++k) {
          rows[i].push_back(finite_number(v[k], path + "[" + std::to_string(k) + "]"));
        }
      } else {
        rows[i].push_back(finite_number(v, path));
      }
      if (rows[i].empty()) throw ConfigError(path, "empty value");
      if (dim && *dim != rows[i].size()) throw ConfigError(path, "value dimensions disagree");
      dim = rows[i].size();
    }
    if (vals.size() != ids.size()) throw ConfigError("$.values", "values for unknown outcomes");
    try {
      out.variable = RandomVariable::vector(out.space, rows);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("$.values", e.what());
    }
  }
  return out;
}

LoadedSpace load_space_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot open space file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON in '") + path + "': " + e.what());
  }
  return space_from_json(j);
}

}  // namespace smvt
