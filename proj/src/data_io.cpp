#include "tradeshock/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "csv.hpp"
#include "tradeshock/mrio_core.hpp"
#include "tradeshock/registry.hpp"

namespace tradeshock {

namespace fs = std::filesystem;

Vector WorldDataset::final_demand() const {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(dims.size()));
  for (Eigen::Index i = 0; i < final_demand_by_origin.rows(); ++i) {
    const std::size_t y = dims.sector_of(static_cast<std::size_t>(i));
    for (Eigen::Index d = 0; d < final_demand_by_origin.cols(); ++d) {
      out[static_cast<Eigen::Index>(dims.index(static_cast<std::size_t>(d), y))] +=
          final_demand_by_origin(i, d);
    }
  }
  return out;
}

namespace {

const std::vector<std::string> kSatelliteHeader = {
    "row",      "jobs_per_output", "formal", "informal", "skilled", "unskilled",
    "adult",    "youth",           "male",   "female"};

const std::vector<std::string> kOutputHeader = {"row", "gross_output", "value_added"};

double relative_gap(double expected, double actual) {
  return std::abs(expected - actual) / std::max(1.0, std::abs(expected));
}

void require_file(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw IoError("missing file " + path.string());
}

class Collector {
 public:
  void add(std::string check, std::string file, std::string row, std::string column,
           double expected, double actual, std::string message) {
    diags_.push_back({std::move(check), std::move(file), std::move(row), std::move(column),
                      expected, actual, std::move(message)});
  }
  void schema(const std::string& file, std::size_t line, const std::string& message) {
    add("schema", file, "line " + std::to_string(line), "", 0.0, 0.0,
        file + ":" + std::to_string(line) + ": " + message);
  }

  /// Parses a non-negative finite number, recording a diagnostic otherwise.
  std::optional<double> value(const std::string& file, std::size_t line, const std::string& row,
                              const std::string& column, const std::string& text) {
    const auto v = csv::parse_number(text);
    if (!v || !std::isfinite(*v)) {
      add("schema", file, row, column, 0.0, 0.0,
          file + ":" + std::to_string(line) + ": '" + text + "' is not a number (" + row + ", " +
              column + ")");
      return std::nullopt;
    }
    if (*v < 0.0) {
      add("negative", file, row, column, 0.0, *v,
          file + ": negative entry " + text + " at (" + row + ", " + column + ")");
    }
    return v;
  }

  bool empty() const { return diags_.empty(); }
  std::vector<Diagnostic>& diagnostics() { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

/// Row labels must follow the dims order exactly.
bool check_label(Collector& c, const std::string& file, std::size_t line, const WorldDims& dims,
                 std::size_t expected_index, const std::string& actual) {
  const std::string expected = dims.label(expected_index);
  if (actual == expected) return true;
  c.schema(file, line, "expected row '" + expected + "', found '" + actual + "'");
  return false;
}

std::vector<Triplet> dense_block_triplets(const WorldDims& dims, const std::vector<double>& blocks) {
  // blocks[(d * n + y) * n + s] holds entry ((d,y), (d,s)).
  const std::size_t n = dims.sectors();
  std::vector<Triplet> out;
  out.reserve(blocks.size());
  for (std::size_t d = 0; d < dims.countries(); ++d) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t s = 0; s < n; ++s) {
        const double v = blocks[(d * n + y) * n + s];
        if (v != 0.0) {
          out.emplace_back(static_cast<int>(dims.index(d, y)), static_cast<int>(dims.index(d, s)),
                           v);
        }
      }
    }
  }
  return out;
}

std::vector<Triplet> allocation_triplets(const WorldDims& dims, const std::vector<double>& all) {
  // all[(o * n + y) * N + d] holds entry ((o,y), (d,y)).
  const std::size_t big_n = dims.countries();
  std::vector<Triplet> out;
  out.reserve(all.size());
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const std::size_t y = dims.sector_of(i);
    for (std::size_t d = 0; d < big_n; ++d) {
      const double v = all[i * big_n + d];
      if (v != 0.0) {
        out.emplace_back(static_cast<int>(i), static_cast<int>(dims.index(d, y)), v);
      }
    }
  }
  return out;
}

IncomeGroups default_groups(const WorldDims& dims) {
  return IncomeGroups::from_mapping(dims, icio_registry().income_mapping());
}

}  // namespace

// -------------------------------------------------------------------- load

WorldDims load_dims(const fs::path& dir) {
  const fs::path path = dir / "dims.csv";
  require_file(path);
  const csv::Table t = csv::read(path);
  if (t.header != std::vector<std::string>{"kind", "code"}) {
    throw DataError({{"schema", "dims.csv", "line 1", "", 0, 0,
                      "dims.csv: header must be 'kind,code'"}});
  }
  std::vector<std::string> countries, sectors;
  std::vector<Diagnostic> diags;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string where = "dims.csv:" + std::to_string(t.line_numbers[r]);
    if (row.size() != 2 || row[1].empty()) {
      diags.push_back({"schema", "dims.csv", where, "", 0, 0, where + ": expected 'kind,code'"});
    } else if (row[0] == "country") {
      countries.push_back(row[1]);
    } else if (row[0] == "sector") {
      sectors.push_back(row[1]);
    } else {
      diags.push_back({"schema", "dims.csv", where, "kind", 0, 0,
                       where + ": kind must be 'country' or 'sector', found '" + row[0] + "'"});
    }
  }
  if (!diags.empty()) throw DataError(std::move(diags));
  try {
    return WorldDims(std::move(countries), std::move(sectors));
  } catch (const DimensionError& e) {
    throw DataError({{"schema", "dims.csv", "", "", 0, 0, std::string("dims.csv: ") + e.what()}});
  }
}

WorldDataset load_world(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("world directory not found: " + dir.string());
  for (const char* name : {"dims.csv", "Z.csv", "fd.csv", "output.csv", "satellite.csv"}) {
    require_file(dir / name);
  }
  const WorldDims dims = load_dims(dir);
  const std::size_t big_n = dims.countries();
  const std::size_t n = dims.sectors();
  const std::size_t dim = dims.size();
  const auto edim = static_cast<Eigen::Index>(dim);
  Collector c;

  // Z.csv: origin-resolved, streamed and aggregated.
  std::vector<double> z_blocks(big_n * n * n, 0.0);
  std::vector<double> all(dim * big_n, 0.0);
  Vector sales = Vector::Zero(edim);
  {
    std::size_t next_row = 0;
    const auto header = csv::stream(dir / "Z.csv", [&](std::size_t line,
                                                        const std::vector<std::string>& f) {
      if (next_row >= dim) {
        c.schema("Z.csv", line, "more rows than " + std::to_string(dim));
        ++next_row;
        return;
      }
      const std::size_t i = next_row++;
      if (!check_label(c, "Z.csv", line, dims, i, f[0])) return;
      if (f.size() != dim + 1) {
        c.schema("Z.csv", line, "expected " + std::to_string(dim + 1) + " fields, found " +
                                    std::to_string(f.size()));
        return;
      }
      const std::size_t y = dims.sector_of(i);
      double row_sum = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const auto v = c.value("Z.csv", line, f[0], dims.label(j), f[j + 1]);
        if (!v) continue;
        const std::size_t d = dims.country_of(j);
        const std::size_t s = dims.sector_of(j);
        z_blocks[(d * n + y) * n + s] += *v;
        all[i * big_n + d] += *v;
        row_sum += *v;
      }
      sales[static_cast<Eigen::Index>(i)] = row_sum;
    });
    if (header.size() != dim + 1 || header[0] != "row") {
      c.schema("Z.csv", 1, "header must be 'row' followed by " + std::to_string(dim) +
                               " country:sector labels");
    } else {
      for (std::size_t j = 0; j < dim; ++j) {
        if (header[j + 1] != dims.label(j)) {
          c.schema("Z.csv", 1, "column " + std::to_string(j + 2) + " should be '" +
                                   dims.label(j) + "', found '" + header[j + 1] + "'");
          break;
        }
      }
    }
    if (next_row < dim) {
      c.schema("Z.csv", 0, "expected " + std::to_string(dim) + " rows, found " +
                               std::to_string(next_row));
    }
  }

  // fd.csv: one column per destination country, or per country:component.
  Eigen::MatrixXd fd = Eigen::MatrixXd::Zero(edim, static_cast<Eigen::Index>(big_n));
  {
    const csv::Table t = csv::read(dir / "fd.csv");
    std::vector<std::size_t> column_country;
    bool header_ok = !t.header.empty() && t.header[0] == "row";
    for (std::size_t k = 1; header_ok && k < t.header.size(); ++k) {
      const std::string& h = t.header[k];
      const auto colon = h.find(':');
      const auto country = dims.find_country(h.substr(0, colon));
      if (!country) {
        c.schema("fd.csv", 1, "column '" + h + "' does not name a country");
        header_ok = false;
      } else {
        column_country.push_back(*country);
      }
    }
    if (!header_ok) {
      c.schema("fd.csv", 1, "header must be 'row' followed by destination country columns");
    } else if (t.rows.size() != dim) {
      c.schema("fd.csv", 0,
               "expected " + std::to_string(dim) + " rows, found " + std::to_string(t.rows.size()));
    } else {
      for (std::size_t i = 0; i < dim; ++i) {
        const auto& f = t.rows[i];
        const std::size_t line = t.line_numbers[i];
        if (!check_label(c, "fd.csv", line, dims, i, f[0])) continue;
        if (f.size() != t.header.size()) {
          c.schema("fd.csv", line, "expected " + std::to_string(t.header.size()) + " fields");
          continue;
        }
        for (std::size_t k = 1; k < f.size(); ++k) {
          const auto v = c.value("fd.csv", line, f[0], t.header[k], f[k]);
          if (!v) continue;
          const std::size_t d = column_country[k - 1];
          fd(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) += *v;
          all[i * big_n + d] += *v;
        }
      }
    }
  }

  // output.csv
  Vector x = Vector::Zero(edim);
  Vector va = Vector::Zero(edim);
  {
    const csv::Table t = csv::read(dir / "output.csv");
    if (t.header != kOutputHeader) {
      c.schema("output.csv", 1, "header must be 'row,gross_output,value_added'");
    } else if (t.rows.size() != dim) {
      c.schema("output.csv", 0,
               "expected " + std::to_string(dim) + " rows, found " + std::to_string(t.rows.size()));
    } else {
      for (std::size_t i = 0; i < dim; ++i) {
        const auto& f = t.rows[i];
        const std::size_t line = t.line_numbers[i];
        if (!check_label(c, "output.csv", line, dims, i, f[0])) continue;
        if (f.size() != 3) {
          c.schema("output.csv", line, "expected 3 fields");
          continue;
        }
        const auto ei = static_cast<Eigen::Index>(i);
        if (const auto v = c.value("output.csv", line, f[0], "gross_output", f[1])) x[ei] = *v;
        if (const auto v = c.value("output.csv", line, f[0], "value_added", f[2])) va[ei] = *v;
      }
    }
  }

  // satellite.csv
  EmploymentSatellite sat;
  sat.jobs_per_output = Vector::Zero(edim);
  for (auto& s : sat.first_group_share) s = Vector::Zero(edim);
  {
    const csv::Table t = csv::read(dir / "satellite.csv");
    if (t.header != kSatelliteHeader) {
      c.schema("satellite.csv", 1,
               "header must be 'row,jobs_per_output,formal,informal,skilled,unskilled,adult,"
               "youth,male,female'");
    } else if (t.rows.size() != dim) {
      c.schema("satellite.csv", 0,
               "expected " + std::to_string(dim) + " rows, found " + std::to_string(t.rows.size()));
    } else {
      for (std::size_t i = 0; i < dim; ++i) {
        const auto& f = t.rows[i];
        const std::size_t line = t.line_numbers[i];
        if (!check_label(c, "satellite.csv", line, dims, i, f[0])) continue;
        if (f.size() != kSatelliteHeader.size()) {
          c.schema("satellite.csv", line, "expected 10 fields");
          continue;
        }
        const auto ei = static_cast<Eigen::Index>(i);
        if (const auto v = c.value("satellite.csv", line, f[0], "jobs_per_output", f[1])) {
          sat.jobs_per_output[ei] = *v;
        }
        for (std::size_t p = 0; p < 4; ++p) {
          const auto first = c.value("satellite.csv", line, f[0], kSatelliteHeader[2 + 2 * p],
                                     f[2 + 2 * p]);
          const auto second = c.value("satellite.csv", line, f[0], kSatelliteHeader[3 + 2 * p],
                                      f[3 + 2 * p]);
          if (!first || !second) continue;
          if (std::abs(*first + *second - 1.0) > kBalanceTolerance) {
            c.add("share_sum", "satellite.csv", f[0], kSatelliteHeader[2 + 2 * p], 1.0,
                  *first + *second,
                  "satellite.csv: " + kSatelliteHeader[2 + 2 * p] + " + " +
                      kSatelliteHeader[3 + 2 * p] + " = " + csv::format_number(*first + *second) +
                      " at " + f[0] + ", expected 1");
          }
          sat.first_group_share[p][ei] = std::clamp(*first, 0.0, 1.0);
        }
      }
    }
  }

  // income_groups.csv (optional)
  IncomeGroups groups = default_groups(dims);
  if (fs::is_regular_file(dir / "income_groups.csv")) {
    const csv::Table t = csv::read(dir / "income_groups.csv");
    if (t.header != std::vector<std::string>{"country", "income_group"}) {
      c.schema("income_groups.csv", 1, "header must be 'country,income_group'");
    } else {
      std::map<std::string, std::string> mapping;
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& f = t.rows[r];
        if (f.size() != 2 || f[1].empty()) {
          c.schema("income_groups.csv", t.line_numbers[r], "expected 'country,income_group'");
        } else if (!dims.find_country(f[0])) {
          c.schema("income_groups.csv", t.line_numbers[r], "unknown country '" + f[0] + "'");
        } else {
          mapping[f[0]] = f[1];
        }
      }
      groups = IncomeGroups::from_mapping(dims, mapping);
    }
  }

  if (!c.empty()) throw DataError(std::move(c.diagnostics()));

  WorldDataset ds{dims,
                  BlockMatrix::from_triplets(dims, BlockKind::Intermediate,
                                             dense_block_triplets(dims, z_blocks)),
                  BlockMatrix::from_triplets(dims, BlockKind::Allocation,
                                             allocation_triplets(dims, all)),
                  std::move(fd),
                  std::move(va),
                  std::move(x),
                  std::move(sat),
                  std::move(groups),
                  std::move(sales)};
  auto diags = validate(ds);
  if (!diags.empty()) throw DataError(std::move(diags));
  return ds;
}

// ---------------------------------------------------------------- validate

std::vector<Diagnostic> validate(const WorldDataset& ds) {
  Collector c;
  const WorldDims& dims = ds.dims;
  const auto dim = static_cast<Eigen::Index>(dims.size());
  if (ds.gross_output.size() != dim || ds.value_added.size() != dim ||
      ds.intermediate_sales.size() != dim || ds.final_demand_by_origin.rows() != dim ||
      ds.final_demand_by_origin.cols() != static_cast<Eigen::Index>(dims.countries())) {
    c.add("schema", "", "", "", 0, 0, "dataset vectors do not match the world dims");
    return std::move(c.diagnostics());
  }

  const Vector z_col = ds.intermediate.column_sums();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const std::string label = dims.label(static_cast<std::size_t>(i));
    const double x = ds.gross_output[i];
    if (x < 0.0) c.add("negative", "output.csv", label, "gross_output", 0, x, "negative output at " + label);
    if (ds.value_added[i] < 0.0) {
      c.add("negative", "output.csv", label, "value_added", 0, ds.value_added[i],
            "negative value added at " + label);
    }
    for (Eigen::Index d = 0; d < ds.final_demand_by_origin.cols(); ++d) {
      if (ds.final_demand_by_origin(i, d) < 0.0) {
        c.add("negative", "fd.csv", label, dims.country_codes()[static_cast<std::size_t>(d)], 0,
              ds.final_demand_by_origin(i, d), "negative final demand at " + label);
      }
    }

    const double row_total = ds.intermediate_sales[i] + ds.final_demand_by_origin.row(i).sum();
    if (relative_gap(x, row_total) > kBalanceTolerance) {
      c.add("row_balance", "Z.csv", label, "", x, row_total,
            "row balance violated at " + label + ": gross output " + csv::format_number(x) +
                ", intermediate + final sales " + csv::format_number(row_total));
    }
    const double col_total = z_col[i] + ds.value_added[i];
    if (relative_gap(x, col_total) > kBalanceTolerance) {
      c.add("column_balance", "Z.csv", "", label, x, col_total,
            "column balance violated at " + label + ": gross output " + csv::format_number(x) +
                ", intermediate inputs + value added " + csv::format_number(col_total));
    }
    if (z_col[i] > 0.0 && z_col[i] >= x) {
      c.add("coefficients", "Z.csv", "", label, x, z_col[i],
            "intermediate inputs of " + label + " do not leave room for value added");
    }
  }
  try {
    ds.satellite.validate(dims.size());
  } catch (const Error& e) {
    c.add("satellite", "satellite.csv", "", "", 0, 0, e.what());
  }
  if (ds.income_groups.countries() != dims.countries()) {
    c.add("schema", "income_groups.csv", "", "", 0, 0, "income groups do not cover every country");
  }
  return std::move(c.diagnostics());
}

// ------------------------------------------------------------------- write

void write_world(const WorldDataset& ds, const fs::path& dir) {
  fs::create_directories(dir);
  const WorldDims& dims = ds.dims;
  const std::size_t dim = dims.size();
  const std::size_t big_n = dims.countries();
  const auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    return out;
  };
  const auto num = [](double v) { return csv::format_number(v); };

  {
    auto out = open("dims.csv");
    out << "kind,code\n";
    for (const auto& code : dims.country_codes()) out << "country," << code << '\n';
    for (const auto& code : dims.sector_codes()) out << "sector," << code << '\n';
  }

  // Origin split of each destination's intermediate use follows the
  // bilateral allocation shares, the same proportionality the model uses.
  const Vector all_col = ds.allocation.column_sums();
  const Eigen::MatrixXd z_dense = ds.intermediate.to_dense();
  const Eigen::MatrixXd all_dense = ds.allocation.to_dense();
  {
    auto out = open("Z.csv");
    out << "row";
    for (std::size_t j = 0; j < dim; ++j) out << ',' << dims.label(j);
    out << '\n';
    for (std::size_t i = 0; i < dim; ++i) {
      const std::size_t y = dims.sector_of(i);
      out << dims.label(i);
      for (std::size_t j = 0; j < dim; ++j) {
        const std::size_t d = dims.country_of(j);
        const auto dy = static_cast<Eigen::Index>(dims.index(d, y));
        const double total = all_col[dy];
        const double share = total > 0.0 ? all_dense(static_cast<Eigen::Index>(i), dy) / total : 0.0;
        out << ',' << num(share * z_dense(dy, static_cast<Eigen::Index>(j)));
      }
      out << '\n';
    }
  }
  {
    auto out = open("fd.csv");
    out << "row";
    for (const auto& code : dims.country_codes()) out << ',' << code;
    out << '\n';
    const Vector fd_dest = ds.final_demand();
    for (std::size_t i = 0; i < dim; ++i) {
      const std::size_t y = dims.sector_of(i);
      out << dims.label(i);
      for (std::size_t d = 0; d < big_n; ++d) {
        const auto dy = static_cast<Eigen::Index>(dims.index(d, y));
        const double total = all_col[dy];
        const double share = total > 0.0 ? all_dense(static_cast<Eigen::Index>(i), dy) / total : 0.0;
        out << ',' << num(share * fd_dest[dy]);
      }
      out << '\n';
    }
  }
  {
    auto out = open("output.csv");
    out << "row,gross_output,value_added\n";
    for (std::size_t i = 0; i < dim; ++i) {
      const auto ei = static_cast<Eigen::Index>(i);
      out << dims.label(i) << ',' << num(ds.gross_output[ei]) << ',' << num(ds.value_added[ei])
          << '\n';
    }
  }
  {
    auto out = open("satellite.csv");
    for (std::size_t k = 0; k < kSatelliteHeader.size(); ++k) {
      out << (k ? "," : "") << kSatelliteHeader[k];
    }
    out << '\n';
    for (std::size_t i = 0; i < dim; ++i) {
      const auto ei = static_cast<Eigen::Index>(i);
      out << dims.label(i) << ',' << num(ds.satellite.jobs_per_output[ei]);
      for (const auto& share : ds.satellite.first_group_share) {
        out << ',' << num(share[ei]) << ',' << num(1.0 - share[ei]);
      }
      out << '\n';
    }
  }
  {
    auto out = open("income_groups.csv");
    out << "country,income_group\n";
    for (std::size_t k = 0; k < big_n; ++k) {
      out << dims.country_codes()[k] << ',' << ds.income_groups.group_of(k) << '\n';
    }
  }
}

// ----------------------------------------------------------------- fixture

Fixture generate_fixture(const FixtureOptions& opt) {
  if (opt.countries < 1 || opt.sectors < 1) {
    throw DimensionError("fixture needs at least one country and one sector");
  }
  if (!(opt.sparsity >= 0.0 && opt.sparsity < 1.0)) {
    throw DimensionError("fixture sparsity must lie in [0, 1)");
  }
  if (!(opt.trade_openness >= 0.0 && opt.trade_openness <= 1.0)) {
    throw DimensionError("fixture trade openness must lie in [0, 1]");
  }
  if (opt.countries == 1 && opt.trade_openness > 0.0) {
    throw DimensionError("a one-country fixture cannot be open to trade");
  }

  const auto codes = [](std::size_t count, char prefix) {
    std::vector<std::string> out;
    const int width = count >= 100 ? 3 : 2;
    char buf[16];
    for (std::size_t k = 1; k <= count; ++k) {
      std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, k);
      out.emplace_back(buf);
    }
    return out;
  };
  std::vector<std::string> country_codes = opt.country_codes.value_or(codes(opt.countries, 'R'));
  std::vector<std::string> sector_codes = opt.sector_codes.value_or(codes(opt.sectors, 'S'));
  if (country_codes.size() != opt.countries || sector_codes.size() != opt.sectors) {
    throw DimensionError("fixture code lists do not match the requested dimensions");
  }
  const WorldDims dims(std::move(country_codes), std::move(sector_codes));
  const std::size_t big_n = dims.countries();
  const std::size_t n = dims.sectors();
  const auto edim = static_cast<Eigen::Index>(dims.size());

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  // Technical coefficients: dense domestic blocks, column sums in [0.2, 0.65].
  std::vector<Triplet> a_trip;
  a_trip.reserve(big_n * n * n);
  for (std::size_t d = 0; d < big_n; ++d) {
    for (std::size_t s = 0; s < n; ++s) {
      const double column_sum = uniform(0.2, 0.65);
      std::vector<double> w(n);
      double total = 0.0;
      for (auto& v : w) total += (v = uniform(0.05, 1.0));
      for (std::size_t y = 0; y < n; ++y) {
        a_trip.emplace_back(static_cast<int>(dims.index(d, y)), static_cast<int>(dims.index(d, s)),
                            column_sum * w[y] / total);
      }
    }
  }
  const auto a = BlockMatrix::from_triplets(dims, BlockKind::Coefficients, a_trip);

  // Trade shares: domestic share 1 - openness * U(0.3, 1), foreign remainder
  // spread over a random subset of partners.
  std::vector<Triplet> t_trip;
  for (std::size_t d = 0; d < big_n; ++d) {
    for (std::size_t y = 0; y < n; ++y) {
      const int col = static_cast<int>(dims.index(d, y));
      const double domestic = 1.0 - opt.trade_openness * uniform(0.3, 1.0);
      std::vector<double> w(big_n, 0.0);
      double total = 0.0;
      for (std::size_t o = 0; o < big_n; ++o) {
        if (o == d) continue;
        const double weight = uniform(0.05, 1.0);
        if (unit(rng) >= opt.sparsity) total += (w[o] = weight);
      }
      if (total == 0.0 && big_n > 1) {
        std::size_t o = static_cast<std::size_t>(unit(rng) * static_cast<double>(big_n - 1));
        if (o >= d) ++o;
        w[std::min(o, big_n - 1)] = total = 1.0;
      }
      const double foreign = 1.0 - domestic;
      // Domestic entry absorbs the rounding so the column sums to one.
      double placed = 0.0;
      for (std::size_t o = 0; o < big_n; ++o) {
        if (o == d || w[o] == 0.0 || foreign == 0.0) continue;
        const double share = foreign * w[o] / total;
        placed += share;
        t_trip.emplace_back(static_cast<int>(dims.index(o, y)), col, share);
      }
      t_trip.emplace_back(static_cast<int>(dims.index(d, y)), col, 1.0 - placed);
    }
  }
  const auto t = BlockMatrix::from_triplets(dims, BlockKind::Shares, t_trip);

  Vector fd(edim);
  for (Eigen::Index i = 0; i < edim; ++i) fd[i] = uniform(10.0, 1000.0);

  EmploymentSatellite sat;
  sat.jobs_per_output.resize(edim);
  for (Eigen::Index i = 0; i < edim; ++i) sat.jobs_per_output[i] = uniform(0.001, 0.05);
  for (auto& share : sat.first_group_share) {
    share.resize(edim);
    for (Eigen::Index i = 0; i < edim; ++i) share[i] = uniform(0.05, 0.95);
  }

  const Vector x = solve_production(a, t, fd);

  // Back out the flows: Z = A diag(x), ALL = T diag(A x + fd).
  SparseMatrix z = a.entries() * x.asDiagonal();
  const Vector absorb = absorption(a, x, fd);
  SparseMatrix all = t.entries() * absorb.asDiagonal();
  const Vector sales = t.entries() * (a.entries() * x);
  Eigen::MatrixXd fd_origin = Eigen::MatrixXd::Zero(edim, static_cast<Eigen::Index>(big_n));
  for (Eigen::Index col = 0; col < t.entries().outerSize(); ++col) {
    const auto d = static_cast<Eigen::Index>(dims.country_of(static_cast<std::size_t>(col)));
    for (SparseMatrix::InnerIterator it(t.entries(), col); it; ++it) {
      fd_origin(it.row(), d) += it.value() * fd[col];
    }
  }
  const Vector va = x - BlockMatrix(dims, BlockKind::Intermediate, z).column_sums();

  IncomeGroups groups;
  if (opt.country_codes) {
    groups = default_groups(dims);
  } else {
    const auto names = icio_registry().group_names();
    const std::vector<std::string> list(names.begin(), names.end());
    std::vector<std::string> assigned;
    for (std::size_t k = 0; k < big_n; ++k) assigned.push_back(list[k % list.size()]);
    groups = IncomeGroups(dims, std::move(assigned));
  }

  const double jobs = sat.jobs_per_output.dot(x);
  WorldDataset ds{dims,
                  BlockMatrix(dims, BlockKind::Intermediate, std::move(z)),
                  BlockMatrix(dims, BlockKind::Allocation, std::move(all)),
                  std::move(fd_origin),
                  va,
                  x,
                  std::move(sat),
                  std::move(groups),
                  sales};
  return {std::move(ds), x, jobs};
}

// --------------------------------------------------------------- calibrate

CalibratedWorld calibrate(const WorldDataset& ds) {
  const WorldDims& dims = ds.dims;
  BlockMatrix a = build_coefficients(ds.intermediate, ds.gross_output);

  const Vector supply = ds.allocation.column_sums();
  BlockMatrix allocation = ds.allocation;
  if ((supply.array() <= 0.0).any()) {
    std::vector<Triplet> trip;
    const SparseMatrix& e = ds.allocation.entries();
    for (Eigen::Index col = 0; col < e.outerSize(); ++col) {
      if (supply[col] > 0.0) {
        for (SparseMatrix::InnerIterator it(e, col); it; ++it) {
          trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(col), it.value());
        }
      } else {
        trip.emplace_back(static_cast<int>(col), static_cast<int>(col), 1.0);
      }
    }
    allocation = BlockMatrix::from_triplets(dims, BlockKind::Allocation, trip);
  }
  BlockMatrix t = normalize_allocation(allocation);

  return CalibratedWorld{dims,
                         std::move(a),
                         std::move(t),
                         ds.final_demand(),
                         ds.gross_output,
                         ds.satellite,
                         ds.income_groups};
}

}  // namespace tradeshock
