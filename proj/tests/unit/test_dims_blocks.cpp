#include "doctest.h"
#include "tradeshock/block_matrix.hpp"
#include "tradeshock/error.hpp"
#include "tradeshock/tariff.hpp"

using namespace tradeshock;

TEST_SUITE("dims_blocks") {
  TEST_CASE("flat indexing is country-major") {
    const WorldDims dims({"USA", "CHN", "VNM"}, {"A01_02", "C24"});
    CHECK(dims.size() == 6);
    CHECK(dims.index(2, 1) == 5);
    CHECK(dims.country_of(5) == 2);
    CHECK(dims.sector_of(5) == 1);
    CHECK(dims.label(3) == "CHN:C24");
    CHECK(dims.find_country("VNM") == 2u);
    CHECK_FALSE(dims.find_sector("C29").has_value());
  }

  TEST_CASE("dims reject empty and duplicate codes") {
    CHECK_THROWS_AS(WorldDims({}, {"S1"}), DimensionError);
    CHECK_THROWS_AS(WorldDims({"A"}, {}), DimensionError);
    CHECK_THROWS_AS(WorldDims({"A", "A"}, {"S1"}), DimensionError);
    CHECK_THROWS_AS(WorldDims({"A"}, {"S1", "S1"}), DimensionError);
  }

  TEST_CASE("intermediate and coefficient blocks stay on the diagonal") {
    const WorldDims dims({"A", "B"}, {"S1", "S2"});
    const std::vector<Triplet> ok = {{0, 1, 1.0}, {3, 2, 2.0}};
    CHECK_NOTHROW(BlockMatrix::from_triplets(dims, BlockKind::Intermediate, ok));
    const std::vector<Triplet> off = {{0, 2, 1.0}};
    CHECK_THROWS_AS(BlockMatrix::from_triplets(dims, BlockKind::Intermediate, off), StructureError);
    CHECK_THROWS_AS(BlockMatrix::from_triplets(dims, BlockKind::Coefficients, off), StructureError);
  }

  TEST_CASE("allocation and shares stay on the commodity diagonal") {
    const WorldDims dims({"A", "B"}, {"S1", "S2"});
    const std::vector<Triplet> ok = {{0, 2, 1.0}, {2, 2, 3.0}};
    CHECK_NOTHROW(BlockMatrix::from_triplets(dims, BlockKind::Allocation, ok));
    const std::vector<Triplet> cross = {{0, 3, 1.0}};
    CHECK_THROWS_AS(BlockMatrix::from_triplets(dims, BlockKind::Allocation, cross), StructureError);
  }

  TEST_CASE("negative and non-finite entries are rejected") {
    const WorldDims dims({"A"}, {"S1"});
    const std::vector<Triplet> neg = {{0, 0, -1.0}};
    CHECK_THROWS_AS(BlockMatrix::from_triplets(dims, BlockKind::Intermediate, neg), StructureError);
    const std::vector<Triplet> nan = {{0, 0, std::nan("")}};
    CHECK_THROWS_AS(BlockMatrix::from_triplets(dims, BlockKind::Intermediate, nan), StructureError);
  }

  TEST_CASE("coefficient columns must sum below one") {
    const WorldDims dims({"A"}, {"S1", "S2"});
    const std::vector<Triplet> bad = {{0, 0, 0.6}, {1, 0, 0.4}};
    CHECK_THROWS_AS(BlockMatrix::from_triplets(dims, BlockKind::Coefficients, bad), StructureError);
  }

  TEST_CASE("share columns must sum to one") {
    const WorldDims dims({"A", "B"}, {"S1"});
    const std::vector<Triplet> good = {{0, 0, 0.3}, {1, 0, 0.7}, {1, 1, 1.0}};
    const auto t = BlockMatrix::from_triplets(dims, BlockKind::Shares, good);
    CHECK(t.column_sums().isApprox(Vector::Ones(2)));
    const std::vector<Triplet> short_col = {{0, 0, 0.3}, {1, 0, 0.6}, {1, 1, 1.0}};
    CHECK_THROWS_AS(BlockMatrix::from_triplets(dims, BlockKind::Shares, short_col), StructureError);
  }

  TEST_CASE("with_values keeps the pattern and revalidates") {
    const WorldDims dims({"A", "B"}, {"S1"});
    const std::vector<Triplet> trip = {{0, 0, 0.3}, {1, 0, 0.7}, {1, 1, 1.0}};
    const auto t = BlockMatrix::from_triplets(dims, BlockKind::Shares, trip);
    const std::vector<double> swapped = {0.7, 0.3, 1.0};
    const auto u = t.with_values(swapped);
    CHECK(u.coeff(0, 0) == doctest::Approx(0.7));
    CHECK(u.entries().nonZeros() == t.entries().nonZeros());
    const std::vector<double> broken = {0.7, 0.7, 1.0};
    CHECK_THROWS_AS(t.with_values(broken), StructureError);
    const std::vector<double> wrong_length = {1.0};
    CHECK_THROWS(t.with_values(wrong_length));
  }

  TEST_CASE("tariff tensor forbids domestic duties and rates at or below -100%") {
    TariffTensor t(2, 2);
    CHECK(t.is_zero());
    t.set(0, 1, 1, 0.25);
    CHECK(t.at(0, 1, 1) == 0.25);
    CHECK_FALSE(t.is_zero());
    CHECK_NOTHROW(t.set(1, 1, 0, 0.0));
    CHECK_THROWS(t.set(1, 1, 0, 0.1));
    CHECK_THROWS(t.set(1, 0, 0, -1.0));
    TariffTensor u(2, 2);
    u.set(0, 1, 1, 0.05);
    t += u;
    CHECK(t.at(0, 1, 1) == doctest::Approx(0.30));
  }
}
