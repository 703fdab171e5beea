#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "tradeshock/data_io.hpp"
#include "tradeshock/equilibrium.hpp"
#include "tradeshock/registry.hpp"
#include "tradeshock/report.hpp"
#include "tradeshock/scenario.hpp"

namespace py = pybind11;
using namespace tradeshock;

namespace {

using Array3 = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array3 to_array(const TariffTensor& t) {
  Array3 out({t.countries(), t.countries(), t.sectors()});
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

TariffTensor from_array(const CalibratedWorld& world, const Array3& a) {
  const std::size_t big_n = world.dims.countries(), n = world.dims.sectors();
  if (a.ndim() != 3 || static_cast<std::size_t>(a.shape(0)) != big_n ||
      static_cast<std::size_t>(a.shape(1)) != big_n || static_cast<std::size_t>(a.shape(2)) != n) {
    throw DimensionError("tariffs must have shape (countries, countries, sectors)");
  }
  TariffTensor t(big_n, n);
  const auto r = a.unchecked<3>();
  for (std::size_t d = 0; d < big_n; ++d) {
    for (std::size_t o = 0; o < big_n; ++o) {
      for (std::size_t y = 0; y < n; ++y) {
        const double v = r(d, o, y);
        if (v != 0.0) t.set(d, o, y, v);
      }
    }
  }
  return t;
}

Vector elasticity(py::object value, std::size_t sectors, double fallback) {
  if (value.is_none()) return Vector::Constant(static_cast<Eigen::Index>(sectors), fallback);
  if (py::isinstance<py::float_>(value) || py::isinstance<py::int_>(value)) {
    return Vector::Constant(static_cast<Eigen::Index>(sectors), value.cast<double>());
  }
  Vector v = value.cast<Vector>();
  if (static_cast<std::size_t>(v.size()) != sectors) {
    throw DimensionError("elasticity vector must have one entry per sector");
  }
  return v;
}

SolverConfig solver(double tol, int max_iter, double damping) {
  SolverConfig cfg;
  cfg.tolerance = tol;
  cfg.max_iterations = max_iter;
  cfg.damping = damping;
  return cfg;
}

ResolveContext context(const CalibratedWorld& world, const BaselineDuties* duties) {
  const auto& reg = icio_registry();
  return {world.dims,         world.income_groups, reg.country_codes(),
          reg.sector_codes(), reg.group_names(),   duties};
}

py::list rows(const std::vector<AggregateRow>& in) {
  py::list out;
  for (const auto& r : in) out.append(py::make_tuple(r.label, r.baseline, r.delta, r.pct));
  return out;
}

}  // namespace

PYBIND11_MODULE(tradeshock, m) {
  m.doc() = "Tariff shocks in a multiregional input-output model with Armington trade.";

  auto base_error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", base_error.ptr());
  py::register_exception<SolveError>(m, "SolveError", base_error.ptr());
  py::register_exception<ScenarioError>(m, "ScenarioError", base_error.ptr());
  py::register_exception<IoError>(m, "IoError", base_error.ptr());
  py::register_exception<DataError>(m, "DataError", base_error.ptr());

  py::class_<CalibratedWorld>(m, "World")
      .def_property_readonly("countries", [](const CalibratedWorld& w) { return w.dims.country_codes(); })
      .def_property_readonly("sectors", [](const CalibratedWorld& w) { return w.dims.sector_codes(); })
      .def_property_readonly("income_groups",
                             [](const CalibratedWorld& w) {
                               std::vector<std::string> g;
                               for (std::size_t c = 0; c < w.dims.countries(); ++c) {
                                 g.push_back(w.income_groups.group_of(c));
                               }
                               return g;
                             })
      .def_property_readonly("size", [](const CalibratedWorld& w) { return w.dims.size(); })
      .def_readonly("recorded_output", &CalibratedWorld::recorded_output)
      .def_readonly("final_demand", &CalibratedWorld::base_final_demand)
      .def_property_readonly("coefficients", [](const CalibratedWorld& w) { return w.coefficients.to_dense(); })
      .def_property_readonly("shares", [](const CalibratedWorld& w) { return w.base_shares.to_dense(); })
      .def_property_readonly("jobs_per_output", [](const CalibratedWorld& w) { return w.satellite.jobs_per_output; })
      .def("fingerprint", [](const CalibratedWorld& w) { return format_hash(w.fingerprint()); });

  m.def(
      "load_world", [](const std::filesystem::path& dir) { return calibrate(load_world(dir)); },
      py::arg("path"), "Loads, validates and calibrates a world directory.");

  m.def(
      "validate",
      [](const std::filesystem::path& dir) {
        py::list out;
        try {
          load_world(dir);
        } catch (const DataError& e) {
          for (const auto& d : e.diagnostics()) {
            py::dict item;
            item["check"] = d.check;
            item["file"] = d.file;
            item["row"] = d.row;
            item["column"] = d.column;
            item["expected"] = d.expected;
            item["actual"] = d.actual;
            item["message"] = d.message;
            out.append(item);
          }
        }
        return out;
      },
      py::arg("path"), "Diagnostics for a world directory; empty when it is valid.");

  m.def(
      "fixture",
      [](std::uint64_t seed, std::size_t countries, std::size_t sectors, double sparsity,
         double openness, std::optional<std::vector<std::string>> country_codes,
         std::optional<std::vector<std::string>> sector_codes,
         std::optional<std::filesystem::path> out) {
        FixtureOptions opt;
        opt.seed = seed;
        opt.countries = countries;
        opt.sectors = sectors;
        opt.sparsity = sparsity;
        opt.trade_openness = openness;
        opt.country_codes = std::move(country_codes);
        opt.sector_codes = std::move(sector_codes);
        const Fixture f = generate_fixture(opt);
        if (out) write_world(f.dataset, *out);
        return calibrate(f.dataset);
      },
      py::arg("seed") = 1, py::arg("countries") = 3, py::arg("sectors") = 2,
      py::arg("sparsity") = 0.2, py::arg("openness") = 0.3, py::arg("country_codes") = py::none(),
      py::arg("sector_codes") = py::none(), py::arg("out") = py::none(),
      "Balanced synthetic world, optionally written to `out` as CSV.");

  py::class_<EquilibriumState>(m, "State")
      .def_readonly("output", &EquilibriumState::output)
      .def_readonly("final_demand", &EquilibriumState::final_demand)
      .def_property_readonly("price_delta", [](const EquilibriumState& s) { return s.prices.price_delta; })
      .def_property_readonly("shares", [](const EquilibriumState& s) { return s.shares.to_dense(); })
      .def_property_readonly("exports", [](const EquilibriumState& s) { return s.trade.exports; })
      .def_property_readonly("imports", [](const EquilibriumState& s) { return s.trade.imports; })
      .def_property_readonly("sector_exports", [](const EquilibriumState& s) { return s.trade.sector_exports; })
      .def_readonly("iterations", &EquilibriumState::iterations)
      .def_property_readonly("status", [](const EquilibriumState& s) { return std::string(to_string(s.status)); })
      .def_property_readonly("converged", &EquilibriumState::converged);

  m.def(
      "solve_baseline",
      [](const CalibratedWorld& w, double tol, int max_iter, double damping) {
        return solve_baseline(w, solver(tol, max_iter, damping));
      },
      py::arg("world"), py::arg("tol") = 1e-9, py::arg("max_iter") = 200, py::arg("damping") = 0.5);

  m.def(
      "solve",
      [](const CalibratedWorld& w, const Array3& tariffs, py::object sigma, py::object epsilon,
         double tol, int max_iter, double damping, const EquilibriumState* baseline) {
        ModelParameters p;
        p.sigma = elasticity(sigma, w.dims.sectors(), ModelParameters::kDefaultSigma);
        p.epsilon = elasticity(epsilon, w.dims.sectors(), ModelParameters::kDefaultEpsilon);
        const TariffTensor tau = from_array(w, tariffs);
        py::gil_scoped_release release;
        return solve_scenario(w, tau, p, solver(tol, max_iter, damping), baseline);
      },
      py::arg("world"), py::arg("tariffs"), py::arg("sigma") = py::none(),
      py::arg("epsilon") = py::none(), py::arg("tol") = 1e-9, py::arg("max_iter") = 200,
      py::arg("damping") = 0.5, py::arg("baseline") = nullptr,
      "Counterfactual equilibrium. `tariffs` has shape (importer, exporter, sector).");

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("name", &Scenario::name)
      .def_readonly("description", &Scenario::description)
      .def("to_json", [](const Scenario& s) { return serialize_scenario(s); })
      .def("__repr__", [](const Scenario& s) { return "<Scenario " + s.name + ">"; });

  m.def("builtin_scenarios", &builtin_scenarios);
  m.def("load_scenario", [](const std::filesystem::path& p) { return parse_scenario(p); }, py::arg("path"));
  m.def("parse_scenario", [](const std::string& text) { return parse_scenario_text(text); }, py::arg("text"));

  m.def(
      "resolve",
      [](const Scenario& s, const CalibratedWorld& w, std::optional<std::filesystem::path> duties) {
        std::optional<BaselineDuties> loaded;
        if (duties) loaded = BaselineDuties::load(*duties, w.dims);
        const auto r = resolve_scenario(s, context(w, loaded ? &*loaded : nullptr));
        return py::make_tuple(to_array(r.tariffs), r.warnings);
      },
      py::arg("scenario"), py::arg("world"), py::arg("baseline_duties") = py::none(),
      "Tariff array (importer, exporter, sector) and resolution warnings.");

  m.def(
      "employment",
      [](const CalibratedWorld& w, const EquilibriumState& base, const EquilibriumState& shocked) {
        const auto r = employment_delta(w.satellite, w.dims, w.income_groups, base.output, shocked.output);
        py::dict out;
        out["baseline"] = r.baseline;
        out["delta"] = r.delta;
        out["total"] = py::make_tuple(r.total.baseline, r.total.delta, r.total.pct);
        out["by_income_group"] = rows(r.by_income_group);
        out["by_country"] = rows(r.by_country);
        out["by_sector"] = rows(r.by_sector);
        py::list groups;
        for (const auto& g : r.group_distribution) groups.append(py::make_tuple(g.label, g.jobs, g.pct));
        out["labour_groups"] = groups;
        return out;
      },
      py::arg("world"), py::arg("baseline"), py::arg("shocked"),
      "Employment change in thousand jobs; rows are (label, baseline, delta, pct).");

  m.def(
      "write_report",
      [](const std::filesystem::path& dir, const CalibratedWorld& w, const EquilibriumState& base,
         const EquilibriumState& shocked, const std::string& name, std::size_t top_k, bool timestamp) {
        RunMetadata meta;
        meta.scenario = name;
        meta.params = ModelParameters::defaults(w.dims.sectors());
        meta.iterations = shocked.iterations;
        meta.status = shocked.status;
        meta.world_hash = w.fingerprint();
        write_scenario_report(dir, w, analyse(w, base, shocked, meta), {top_k, timestamp});
      },
      py::arg("out"), py::arg("world"), py::arg("baseline"), py::arg("shocked"), py::arg("name"),
      py::arg("top_k") = 15, py::arg("timestamp") = false,
      "Writes the report tables. Header elasticities show the defaults.");

  m.def("compare", &compare_runs, py::arg("runs"));
}
