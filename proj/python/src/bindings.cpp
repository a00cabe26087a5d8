#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <string>
#include <vector>

#include "css_peaks/ansatz.hpp"
#include "css_peaks/config.hpp"
#include "css_peaks/energy.hpp"
#include "css_peaks/error.hpp"
#include "css_peaks/experiments.hpp"
#include "css_peaks/gauge.hpp"
#include "css_peaks/newton.hpp"
#include "css_peaks/pohozaev.hpp"
#include "css_peaks/reduction.hpp"
#include "css_peaks/snapshot.hpp"

namespace py = pybind11;
using namespace css;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Row index j is x2, column index i is x1, matching the field layout.
Array to_numpy(const ScalarField& f) {
  Array out({f.n(), f.n()});
  std::memcpy(out.mutable_data(), f.data().data(), f.size() * sizeof(double));
  return out;
}

ScalarField from_numpy(const Array& a, const Grid2D& grid) {
  if (a.ndim() != 2 || a.shape(0) != grid.n || a.shape(1) != grid.n) {
    throw PreconditionError("field shape does not match the grid (" + std::to_string(grid.n) + " x " +
                            std::to_string(grid.n) + ")");
  }
  std::vector<double> values(a.data(), a.data() + a.size());
  return ScalarField(grid, std::move(values));
}

py::tuple vec(Vec2 v) { return py::make_tuple(v.x1, v.x2); }

std::vector<Vec2> points(const std::vector<std::pair<double, double>>& ys) {
  std::vector<Vec2> out;
  for (const auto& [a, b] : ys) out.push_back({a, b});
  return out;
}

py::list vec_list(const std::vector<Vec2>& ys) {
  py::list out;
  for (const Vec2& v : ys) out.append(vec(v));
  return out;
}

py::dict energy_dict(const EnergyBreakdown& e) {
  py::dict d;
  d["kinetic"] = e.kinetic;
  d["potential"] = e.potential;
  d["nonlinear"] = e.nonlinear;
  d["gauge1"] = e.gauge1;
  d["gauge2"] = e.gauge2;
  d["total"] = e.total;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-peak standing waves of the gauged Schroedinger system";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<MarginError>(m, "MarginError", PyExc_ValueError);

  py::class_<Grid2D>(m, "Grid2D")
      .def(py::init([](int n, double L) {
             Grid2D g{n, L};
             g.validate();
             return g;
           }),
           py::arg("n"), py::arg("L"))
      .def_readonly("n", &Grid2D::n)
      .def_readonly("L", &Grid2D::L)
      .def_property_readonly("h", &Grid2D::h)
      .def("coords", [](const Grid2D& g) {
        Array x(g.n);
        for (int i = 0; i < g.n; ++i) x.mutable_at(i) = g.coord(i);
        return x;
      });

  py::class_<RadialProfile>(m, "RadialProfile")
      .def_readonly("v0", &RadialProfile::v0)
      .def_readonly("p", &RadialProfile::p)
      .def_readonly("dr", &RadialProfile::dr)
      .def_readonly("r_max", &RadialProfile::r_max)
      .def_readonly("u0", &RadialProfile::u0)
      .def_readonly("tail_amplitude", &RadialProfile::tail_amplitude)
      .def_property_readonly("r", [](const RadialProfile& p) {
        Array r(static_cast<py::ssize_t>(p.size()));
        for (std::size_t j = 0; j < p.size(); ++j) r.mutable_at(j) = p.radius(j);
        return r;
      })
      .def_property_readonly("u", [](const RadialProfile& p) { return Array(p.u.size(), p.u.data()); })
      .def("__call__", [](const RadialProfile& p, double r) { return evaluate_radial(p, r); })
      .def("integrals", [](const RadialProfile& p) {
        const ProfileIntegrals I = profile_integrals(p);
        py::dict d;
        d["mass2"] = I.mass2;
        d["massp"] = I.massp;
        d["dirichlet"] = I.dirichlet;
        return d;
      })
      .def("ode_residual", &ode_residual, py::arg("order") = 4, py::arg("r_min") = 0.0);

  m.def(
      "solve_ground_state",
      [](double v0, double p, double dr, double r_max, double tol) {
        ShootingOptions opts;
        opts.dr = dr;
        opts.r_max = r_max;
        opts.tol = tol;
        return solve_ground_state(v0, p, opts);
      },
      py::arg("v0"), py::arg("p"), py::arg("dr") = 0.0, py::arg("r_max") = 25.0, py::arg("tol") = 1e-12);

  py::class_<ExperimentConfig>(m, "Config")
      .def_static("from_json", &parse_config, py::arg("text"))
      .def_static("load", &load_config, py::arg("path"))
      .def("to_json", [](const ExperimentConfig& c) { return to_json(c); })
      .def_readwrite("eps_list", &ExperimentConfig::eps_list)
      .def_readwrite("grid", &ExperimentConfig::grid)
      .def_readwrite("p", &ExperimentConfig::p)
      .def_readwrite("delta", &ExperimentConfig::delta)
      .def_property_readonly("wells", [](const ExperimentConfig& c) {
        std::vector<Vec2> a;
        for (const Well& w : c.potential.wells()) a.push_back(w.a);
        return vec_list(a);
      })
      .def("potential", [](const ExperimentConfig& c, double x1, double x2) { return c.potential.value({x1, x2}); });

  m.def("well_profiles", [](const ExperimentConfig& c) { return well_profiles(c.potential, c.p); });

  m.def(
      "build_ansatz",
      [](const Grid2D& g, const std::vector<RadialProfile>& profiles,
         const std::vector<std::pair<double, double>>& ys, double eps) {
        const std::vector<Vec2> y = points(ys);
        return to_numpy(build_ansatz(g, profiles, y, eps));
      },
      py::arg("grid"), py::arg("profiles"), py::arg("peaks"), py::arg("eps"));

  m.def(
      "gauge_fields",
      [](const Array& u, const Grid2D& g) {
        const GaugeFields gf = compute_gauge(from_numpy(u, g));
        return py::make_tuple(to_numpy(gf.a0), to_numpy(gf.a1), to_numpy(gf.a2));
      },
      py::arg("u"), py::arg("grid"), "Returns (A0, A1, A2).");

  m.def(
      "tangency_residual",
      [](const Array& u, const Grid2D& g) {
        const ScalarField f = from_numpy(u, g);
        return tangency_residual(f, compute_gauge(f));
      },
      py::arg("u"), py::arg("grid"));

  m.def(
      "energy",
      [](const Array& u, const ExperimentConfig& c, double eps) {
        const Model model(c.grid, c.potential, eps, c.p);
        return energy_dict(energy(from_numpy(u, c.grid), model));
      },
      py::arg("u"), py::arg("config"), py::arg("eps"));

  m.def(
      "residual",
      [](const Array& u, const ExperimentConfig& c, double eps) {
        const Model model(c.grid, c.potential, eps, c.p);
        return to_numpy(residual(from_numpy(u, c.grid), model));
      },
      py::arg("u"), py::arg("config"), py::arg("eps"));

  m.def(
      "minimize_peaks",
      [](const ExperimentConfig& c, double eps, const std::vector<std::pair<double, double>>& y0) {
        const Model model(c.grid, c.potential, eps, c.p);
        const auto profiles = well_profiles(c.potential, c.p);
        const std::vector<Vec2> start = points(y0);
        const PeakConfig pc = minimize_peaks(model, profiles, start, c.delta);
        py::dict d;
        d["Y"] = vec_list(pc.Y);
        d["energy"] = pc.energy;
        d["converged"] = pc.converged;
        d["flat"] = pc.flat;
        d["iterations"] = pc.iterations;
        return d;
      },
      py::arg("config"), py::arg("eps"), py::arg("y0"));

  m.def(
      "newton_solve",
      [](const Array& u0, const ExperimentConfig& c, double eps) {
        const Model model(c.grid, c.potential, eps, c.p);
        const auto profiles = well_profiles(c.potential, c.p);
        SolveReport rep;
        {
          py::gil_scoped_release release;
          rep = newton_solve(from_numpy(u0, c.grid), model, c.solver, profiles);
        }
        py::dict d;
        d["u"] = to_numpy(rep.u);
        d["peaks"] = vec_list(rep.peaks);
        d["residual_norm"] = rep.residual_norm;
        d["iterations"] = rep.iterations;
        d["remainder_norm"] = rep.remainder_norm;
        d["peak_offsets"] = rep.peak_offsets;
        d["residual_history"] = rep.residual_history;
        d["converged"] = rep.converged;
        d["message"] = rep.message;
        return d;
      },
      py::arg("u0"), py::arg("config"), py::arg("eps"));

  m.def(
      "pohozaev_check",
      [](const Array& u, const ExperimentConfig& c, double eps, std::pair<double, double> center, double d,
         int k) {
        const Model model(c.grid, c.potential, eps, c.p);
        const ScalarField f = from_numpy(u, c.grid);
        const PohozaevReport r =
            pohozaev_check(f, compute_gauge(f), model, {center.first, center.second}, d, k, c.pohozaev.options);
        py::dict out;
        out["lhs"] = r.lhs;
        out["rhs"] = r.rhs;
        out["rhs_terms"] = std::vector<double>(r.rhs_terms.begin(), r.rhs_terms.end());
        out["rel_residual"] = r.rel_residual;
        return out;
      },
      py::arg("u"), py::arg("config"), py::arg("eps"), py::arg("center"), py::arg("d"), py::arg("k"));

  m.def(
      "write_snapshot",
      [](const Array& u, const Grid2D& g, const std::filesystem::path& path) {
        write_snapshot(from_numpy(u, g), path);
      },
      py::arg("u"), py::arg("grid"), py::arg("path"));
  m.def(
      "read_snapshot",
      [](const std::filesystem::path& path) {
        const ScalarField f = read_snapshot(path);
        return py::make_tuple(to_numpy(f), f.grid());
      },
      py::arg("path"), "Returns (values, grid).");
}
