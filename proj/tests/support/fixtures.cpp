#include "fixtures.hpp"

namespace support {

using namespace tradeshock;

CalibratedWorld make_world(std::uint64_t seed, std::size_t countries, std::size_t sectors,
                           double openness, double sparsity) {
  FixtureOptions opt;
  opt.seed = seed;
  opt.countries = countries;
  opt.sectors = sectors;
  opt.trade_openness = openness;
  opt.sparsity = sparsity;
  return calibrate(generate_fixture(opt).dataset);
}

CalibratedWorld make_coded_world(std::uint64_t seed, const std::vector<std::string>& countries,
                                 const std::vector<std::string>& sectors) {
  FixtureOptions opt;
  opt.seed = seed;
  opt.countries = countries.size();
  opt.sectors = sectors.size();
  opt.country_codes = countries;
  opt.sector_codes = sectors;
  return calibrate(generate_fixture(opt).dataset);
}

TariffTensor uniform_tariff(const WorldDims& dims, double rate) {
  TariffTensor t(dims);
  for (std::size_t d = 0; d < dims.countries(); ++d) {
    for (std::size_t o = 0; o < dims.countries(); ++o) {
      if (d == o) continue;
      for (std::size_t y = 0; y < dims.sectors(); ++y) t.set(d, o, y, rate);
    }
  }
  return t;
}

TariffTensor unilateral_tariff(const WorldDims& dims, std::size_t importer, double rate) {
  TariffTensor t(dims);
  for (std::size_t o = 0; o < dims.countries(); ++o) {
    if (o == importer) continue;
    for (std::size_t y = 0; y < dims.sectors(); ++y) t.set(importer, o, y, rate);
  }
  return t;
}

double rel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double diff = (a - b).lpNorm<Eigen::Infinity>();
  if (diff == 0.0) return 0.0;
  return diff / b.lpNorm<Eigen::Infinity>();
}

}  // namespace support
