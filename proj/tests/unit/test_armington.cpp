#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "tradeshock/armington.hpp"
#include "tradeshock/error.hpp"

using namespace tradeshock;

namespace {

// Two countries, one commodity. Destination B buys s_A from A and 1 - s_A from itself.
BlockMatrix two_origin_shares(double s_a) {
  const WorldDims dims({"A", "B"}, {"S1"});
  const std::vector<Triplet> trip = {{0, 0, 1.0}, {0, 1, s_a}, {1, 1, 1.0 - s_a}};
  return BlockMatrix::from_triplets(dims, BlockKind::Shares, trip);
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

TEST_SUITE("armington") {
  TEST_CASE("calibration reproduces base shares at unit prices") {
    const auto t0 = two_origin_shares(0.5);
    const auto params = ArmingtonParams::calibrate(t0, Vector::Constant(1, 2.0));
    CHECK(params.weights()[1] == 0.5);
    CHECK(params.weights()[2] == 0.5);
    const auto t = update_shares(params, DeliveredPrices(2, 1));
    CHECK(t.coeff(0, 1) == 0.5);
    CHECK(t.coeff(1, 1) == 0.5);
  }

  TEST_CASE("calibration round trip on random columns") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto w = support::make_world(seed, 7, 5, 0.6, 0.3);
      const auto params = ArmingtonParams::calibrate(w.base_shares, Vector::Constant(5, 4.0));
      const auto t = update_shares(params, DeliveredPrices(7, 5));
      CHECK(max_diff(t.values(), w.base_shares.values()) < 1e-12);
    }
  }

  TEST_CASE("a 25% tariff with sigma 2 leaves the taxed origin 4/9") {
    const auto params = ArmingtonParams::calibrate(two_origin_shares(0.5), Vector::Constant(1, 2.0));
    DeliveredPrices p(2, 1);
    p.set(1, 0, 0, 1.25);
    const auto t = update_shares(params, p);
    CHECK(std::abs(t.coeff(0, 1) - 4.0 / 9.0) < 1e-12);
    CHECK(std::abs(t.coeff(1, 1) - 5.0 / 9.0) < 1e-12);
  }

  TEST_CASE("zero base shares stay zero") {
    const auto params = ArmingtonParams::calibrate(two_origin_shares(1.0), Vector::Constant(1, 3.0));
    DeliveredPrices p(2, 1);
    p.set(1, 0, 0, 1.5);
    const auto t = update_shares(params, p);
    CHECK(t.coeff(0, 1) == 1.0);
    CHECK(t.coeff(1, 1) == 0.0);
  }

  TEST_CASE("uniform price scaling leaves shares unchanged") {
    const auto w = support::make_world(11, 6, 4, 0.5, 0.0);
    const auto params = ArmingtonParams::calibrate(w.base_shares, Vector::Constant(4, 4.0));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.8, 1.5);
    DeliveredPrices p(6, 4);
    for (std::size_t d = 0; d < 6; ++d) {
      for (std::size_t o = 0; o < 6; ++o) {
        for (std::size_t y = 0; y < 4; ++y) p.set(d, o, y, u(rng));
      }
    }
    const auto base = update_shares(params, p);
    for (double lambda : {0.5, 1.7, 3.0}) {
      const auto scaled = update_shares(params, p.scaled(lambda));
      CHECK(max_diff(scaled.values(), base.values()) < 1e-14);
    }
  }

  TEST_CASE("sigma close to one barely moves shares") {
    const auto params =
        ArmingtonParams::calibrate(two_origin_shares(0.3), Vector::Constant(1, 1.001));
    DeliveredPrices p(2, 1);
    p.set(1, 0, 0, 1.5);
    const auto t = update_shares(params, p);
    CHECK(std::abs(t.coeff(0, 1) - 0.3) < 1e-3);
  }

  TEST_CASE("raising a tariff lowers the taxed share and raises the others") {
    const auto w = support::make_world(4, 4, 2, 0.6, 0.0);
    const auto params = ArmingtonParams::calibrate(w.base_shares, Vector::Constant(2, 4.0));
    DeliveredPrices low(4, 2), high(4, 2);
    low.set(0, 2, 1, 1.1);
    high.set(0, 2, 1, 1.3);
    const auto a = update_shares(params, low);
    const auto b = update_shares(params, high);
    const Eigen::Index col = 1;  // destination 0, commodity 1
    CHECK(b.coeff(5, col) < a.coeff(5, col));
    for (Eigen::Index o : {1, 3, 7}) CHECK(b.coeff(o, col) >= a.coeff(o, col));
    CHECK(std::abs(b.column_sums()[col] - 1.0) <= 1e-12);
  }

  TEST_CASE("larger sigma means a larger share loss") {
    const auto t0 = two_origin_shares(0.4);
    DeliveredPrices p(2, 1);
    p.set(1, 0, 0, 1.2);
    double previous = 0.4;
    for (double sigma : {1.5, 2.0, 4.0, 8.0}) {
      const double s = update_shares(ArmingtonParams::calibrate(t0, Vector::Constant(1, sigma)), p)
                           .coeff(0, 1);
      CHECK(s <= previous);
      previous = s;
    }
  }

  TEST_CASE("invalid parameters") {
    const auto t0 = two_origin_shares(0.4);
    CHECK_THROWS(ArmingtonParams::calibrate(t0, Vector::Constant(1, 1.0)));
    CHECK_THROWS(ArmingtonParams::calibrate(t0, Vector::Constant(2, 3.0)));
    DeliveredPrices p(2, 1);
    CHECK_THROWS(p.set(0, 1, 0, 0.0));
    CHECK_THROWS(p.scaled(-1.0));
  }

  TEST_CASE("delivered prices combine producer price and tariff") {
    const WorldDims dims({"A", "B"}, {"S1"});
    TariffTensor tau(dims);
    tau.set(1, 0, 0, 0.25);
    Vector dp(2);
    dp << 0.1, 0.0;
    const auto p = DeliveredPrices::from_producer_prices(dims, dp, tau);
    CHECK(p.at(1, 0, 0) == doctest::Approx(1.1 * 1.25));
    CHECK(p.at(0, 0, 0) == doctest::Approx(1.1));
    CHECK(p.at(0, 1, 0) == 1.0);
  }
}
