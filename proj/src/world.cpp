#include "tradeshock/world.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "tradeshock/error.hpp"

namespace tradeshock {

namespace {

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  void text(const std::string& s) {
    bytes(s.data(), s.size());
    const char sep = '\0';
    bytes(&sep, 1);
  }
  void number(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    bytes(&bits, sizeof bits);
  }
  void numbers(std::span<const double> v) {
    for (double x : v) number(x);
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::uint64_t CalibratedWorld::fingerprint() const {
  Fnv1a h;
  for (const auto& c : dims.country_codes()) h.text(c);
  for (const auto& s : dims.sector_codes()) h.text(s);
  h.numbers(coefficients.values());
  h.numbers(base_shares.values());
  h.numbers({base_final_demand.data(), static_cast<std::size_t>(base_final_demand.size())});
  h.numbers({recorded_output.data(), static_cast<std::size_t>(recorded_output.size())});
  return h.value();
}

ModelParameters ModelParameters::defaults(std::size_t sectors) {
  const auto n = static_cast<Eigen::Index>(sectors);
  return {Vector::Constant(n, kDefaultSigma), Vector::Constant(n, kDefaultEpsilon)};
}

void ModelParameters::validate(std::size_t sectors) const {
  if (static_cast<std::size_t>(sigma.size()) != sectors ||
      static_cast<std::size_t>(epsilon.size()) != sectors) {
    throw DimensionError("model parameters need one sigma and one epsilon per commodity");
  }
  for (Eigen::Index y = 0; y < sigma.size(); ++y) {
    if (!(sigma[y] > 1.0) || !std::isfinite(sigma[y])) {
      throw ScenarioError("sigma must exceed 1, got " + std::to_string(sigma[y]));
    }
    if (!std::isfinite(epsilon[y])) throw ScenarioError("epsilon must be finite");
  }
}

}  // namespace tradeshock
