#pragma once

#include <cstdint>
#include <vector>

#include "tradeshock/data_io.hpp"
#include "tradeshock/equilibrium.hpp"
#include "tradeshock/tariff.hpp"

namespace support {

tradeshock::CalibratedWorld make_world(std::uint64_t seed, std::size_t countries,
                                       std::size_t sectors, double openness = 0.3,
                                       double sparsity = 0.2);

/// World with real country and sector codes taken from the front of the registry.
tradeshock::CalibratedWorld make_coded_world(std::uint64_t seed,
                                             const std::vector<std::string>& countries,
                                             const std::vector<std::string>& sectors);

/// Every importer taxes every foreign origin at `rate`.
tradeshock::TariffTensor uniform_tariff(const tradeshock::WorldDims& dims, double rate);

/// `importer` taxes every foreign origin at `rate`.
tradeshock::TariffTensor unilateral_tariff(const tradeshock::WorldDims& dims, std::size_t importer,
                                           double rate);

/// max |a - b| / max |b| over two vectors.
double rel(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace support
