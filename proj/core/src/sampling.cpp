#include "smvt/sampling.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace smvt {

namespace {

std::vector<double> parse_params(std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view tok = text.substr(0, comma);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      throw std::invalid_argument("malformed distribution parameter '" + std::string(tok) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

Distribution Distribution::uniform(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("uniform distribution needs lo < hi");
  return {Kind::uniform, lo, hi};
}

Distribution Distribution::normal(double mean, double sd) {
  if (!(sd > 0.0)) throw std::invalid_argument("normal distribution needs sd > 0");
  return {Kind::normal, mean, sd};
}

Distribution Distribution::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli needs 0 <= p <= 1");
  return {Kind::bernoulli, p, 0.0};
}

Distribution Distribution::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential distribution needs rate > 0");
  return {Kind::exponential, rate, 0.0};
}

Distribution Distribution::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("distribution must look like family:params, got '" +
                                std::string(text) + "'");
  }
  const auto family = text.substr(0, colon);
  const auto p = parse_params(text.substr(colon + 1));
  const auto need = [&](std::size_t n) {
    if (p.size() != n) {
      throw std::invalid_argument(std::string(family) + " takes " + std::to_string(n) +
                                  " parameter(s)");
    }
  };
  if (family == "uniform") return need(2), uniform(p[0], p[1]);
  if (family == "normal") return need(2), normal(p[0], p[1]);
  if (family == "bernoulli") return need(1), bernoulli(p[0]);
  if (family == "exponential") return need(1), exponential(p[0]);
  throw std::invalid_argument("unsupported distribution family '" + std::string(family) + "'");
}

std::string Distribution::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::uniform: os << "uniform:" << p1 << ',' << p2; break;
    case Kind::normal: os << "normal:" << p1 << ',' << p2; break;
    case Kind::bernoulli: os << "bernoulli:" << p1; break;
    case Kind::exponential: os << "exponential:" << p1; break;
  }
  return os.str();
}

double Distribution::mean() const {
  switch (kind) {
    case Kind::uniform: return 0.5 * (p1 + p2);
    case Kind::normal: return p1;
    case Kind::bernoulli: return p1;
    case Kind::exponential: return 1.0 / p1;
  }
  return 0.0;
}

double Distribution::stddev() const {
  switch (kind) {
    case Kind::uniform: return (p2 - p1) / std::sqrt(12.0);
    case Kind::normal: return p2;
    case Kind::bernoulli: return std::sqrt(p1 * (1.0 - p1));
    case Kind::exponential: return 1.0 / p1;
  }
  return 0.0;
}

double Sampler::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Sampler::draw(const Distribution& d) {
  switch (d.kind) {
    case Distribution::Kind::uniform:
      return d.p1 + (d.p2 - d.p1) * uniform01();
    case Distribution::Kind::normal: {
      if (has_spare_normal_) {
        has_spare_normal_ = false;
        return d.p1 + d.p2 * spare_normal_;
      }
      // Box-Muller on (0, 1]
      const double u1 = 1.0 - uniform01();
      const double u2 = uniform01();
      const double r = std::sqrt(-2.0 * std::log(u1));
      const double phase = 2.0 * std::numbers::pi * u2;
      spare_normal_ = r * std::sin(phase);
      has_spare_normal_ = true;
      return d.p1 + d.p2 * r * std::cos(phase);
    }
    case Distribution::Kind::bernoulli:
      return uniform01() < d.p1 ? 1.0 : 0.0;
    case Distribution::Kind::exponential:
      return -std::log1p(-uniform01()) / d.p1;
  }
  throw std::logic_error("unhandled distribution kind");
}

std::vector<double> Sampler::draw(const Distribution& d, std::size_t count) {
  std::vector<double> out(count);
  for (double& v : out) v = draw(d);
  return out;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> SampleStream::draw() const {
  Sampler sampler(seed);
  return sampler.draw(distribution, count);
}

EmpiricalSpace empirical_space(const SampleStream& stream) {
  if (stream.count == 0) throw std::invalid_argument("empirical space needs N >= 1");
  auto space = std::make_shared<const FiniteProbabilitySpace>(
      FiniteProbabilitySpace::uniform(stream.count));
  auto x = RandomVariable::scalar(space, stream.draw());
  return {std::move(space), std::move(x)};
}

}  // namespace smvt
