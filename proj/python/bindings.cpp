#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dhls/bounds.hpp"
#include "dhls/cli.hpp"
#include "dhls/eig.hpp"
#include "dhls/errors.hpp"
#include "dhls/grid.hpp"
#include "dhls/kernel.hpp"
#include "dhls/maxprinciple.hpp"
#include "dhls/optimizer.hpp"
#include "dhls/verify.hpp"

namespace py = pybind11;
using namespace dhls;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
  const auto buf = a.request();
  if (buf.ndim != 1) throw std::invalid_argument("expected a 1-d array");
  const double* p = static_cast<const double*>(buf.ptr);
  return {p, p + buf.shape[0]};
}

py::array_t<double> to_numpy(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Convention parse_convention(const std::string& s) {
  if (s == "unit") return Convention::Unit;
  if (s == "centered") return Convention::Centered;
  throw std::invalid_argument("convention must be 'unit' or 'centered'");
}

LatticePoint parse_point(const std::vector<int>& coords) {
  if (coords.size() > kMaxDimension)
    throw std::invalid_argument("too many coordinates");
  LatticePoint p;
  for (std::size_t i = 0; i < coords.size(); ++i)
    p[static_cast<int>(i)] = coords[i];
  return p;
}

py::dict decay_to_dict(const DecayReport& rep) {
  py::list axes;
  for (const AxisDecayReport& a : rep.axes) {
    py::dict d;
    d["axis"] = a.axis;
    d["min_d"] = a.min_d;
    d["min_F"] = a.min_F;
    d["opnorm_A"] = a.opnorm_A;
    d["residual"] = a.residual;
    d["pass"] = a.pass;
    axes.append(d);
  }
  py::dict out;
  out["axes"] = axes;
  out["pass"] = rep.pass;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Sharp constant and optimizer of the discrete critical "
      "Hardy-Littlewood-Sobolev inequality on n-dimensional grids";

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init([](int n, int N, const std::string& convention) {
             return GridSpec(n, N, parse_convention(convention));
           }),
           py::arg("n"), py::arg("N"), py::arg("convention") = "unit")
      .def_readonly("n", &GridSpec::dimension)
      .def_readonly("N", &GridSpec::side)
      .def_property_readonly("convention",
                             [](const GridSpec& g) {
                               return g.convention == Convention::Unit
                                          ? "unit"
                                          : "centered";
                             })
      .def_property_readonly("num_points", &GridSpec::num_points)
      .def("__repr__", [](const GridSpec& g) {
        return "GridSpec(n=" + std::to_string(g.dimension) +
               ", N=" + std::to_string(g.side) + ", convention='" +
               (g.convention == Convention::Unit ? "unit" : "centered") + "')";
      });

  m.def(
      "linear_index",
      [](const std::vector<int>& p, const GridSpec& g) {
        return linear_index(parse_point(p), g);
      },
      py::arg("point"), py::arg("grid"));
  m.def(
      "point_of",
      [](std::int64_t i, const GridSpec& g) {
        const LatticePoint p = point_of(i, g);
        std::vector<int> out(static_cast<std::size_t>(g.dimension));
        for (int a = 0; a < g.dimension; ++a)
          out[static_cast<std::size_t>(a)] = p[a];
        return out;
      },
      py::arg("index"), py::arg("grid"));
  m.def(
      "kernel_value",
      [](const std::vector<int>& offset, int n) {
        return kernel_value(parse_point(offset), n);
      },
      py::arg("offset"), py::arg("n"));

  py::class_<KernelOperator>(m, "KernelOperator")
      .def(py::init([](const GridSpec& g, const std::string& mode,
                       std::int64_t dense_limit) {
             if (mode == "dense") return KernelOperator::dense(g, dense_limit);
             if (mode == "fast") return KernelOperator::fast(g);
             if (mode == "auto") return KernelOperator::make(g, dense_limit);
             throw std::invalid_argument("mode must be dense, fast, or auto");
           }),
           py::arg("grid"), py::arg("mode") = "auto",
           py::arg("dense_limit") = kDefaultDenseLimit)
      .def_property_readonly("mode",
                             [](const KernelOperator& op) {
                               return op.mode() == KernelMode::Dense
                                          ? "dense"
                                          : "fast";
                             })
      .def_property_readonly("size", &KernelOperator::size)
      .def("matvec",
           [](const KernelOperator& op, const Array& v) {
             return to_numpy(op.matvec(to_vector(v)));
           })
      .def("quadratic_form",
           [](const KernelOperator& op, const Array& a, const Array& b) {
             return op.quadratic_form(to_vector(a), to_vector(b));
           })
      .def("entry", &KernelOperator::entry);

  m.def(
      "row_sum",
      [](const GridSpec& g, const std::vector<int>& s0) {
        return row_sum(g, parse_point(s0));
      },
      py::arg("grid"), py::arg("point"));

  py::class_<OptimizerResult>(m, "OptimizerResult")
      .def_readonly("grid", &OptimizerResult::grid)
      .def_readonly("lambda_", &OptimizerResult::lambda)
      .def_property_readonly(
          "vector",
          [](const OptimizerResult& r) { return to_numpy(r.vector); })
      .def_readonly("el_residual", &OptimizerResult::el_residual)
      .def_readonly("gap_ratio", &OptimizerResult::gap_ratio)
      .def_readonly("iterations", &OptimizerResult::iterations)
      .def("__repr__", [](const OptimizerResult& r) {
        return "OptimizerResult(lambda=" + format_double(r.lambda) +
               ", iterations=" + std::to_string(r.iterations) + ")";
      });

  m.def(
      "solve_optimizer",
      [](const GridSpec& g, double tol, int max_iter, double shift,
         std::int64_t dense_limit, bool compute_gap) {
        SolveOptions opt;
        opt.tol = tol;
        opt.max_iter = max_iter;
        opt.shift = shift;
        opt.dense_limit = dense_limit;
        opt.compute_gap = compute_gap;
        return solve_optimizer(g, opt);
      },
      py::arg("grid"), py::arg("tol") = 1e-10, py::arg("max_iter") = 100000,
      py::arg("shift") = 1.0, py::arg("dense_limit") = kDefaultDenseLimit,
      py::arg("compute_gap") = true);

  m.def("sphere_area", &sphere_area, py::arg("n"));
  m.def("lower_bound_uniform", &lower_bound_uniform, py::arg("grid"));
  m.def("upper_bound_center", &upper_bound_center, py::arg("grid"));

  m.def(
      "sweep",
      [](int n, const std::vector<int>& N_values, double tol) {
        SolveOptions opt;
        opt.tol = tol;
        const SweepTable table = sweep(n, N_values, opt);
        py::list rows;
        for (const SweepRow& r : table.rows) {
          py::dict d;
          d["n"] = r.n;
          d["N"] = r.N;
          d["lambda"] = r.lambda;
          d["lower"] = r.lower_uniform;
          d["upper"] = r.upper_center;
          d["iterations"] = r.iterations;
          d["ln_N"] = r.ln_N;
          if (r.slope_prev)
            d["slope_prev"] = *r.slope_prev;
          else
            d["slope_prev"] = py::none();
          rows.append(d);
        }
        return rows;
      },
      py::arg("n"), py::arg("N_values"), py::arg("tol") = 1e-10);

  m.def(
      "check_symmetry",
      [](const OptimizerResult& res, double tolerance) {
        const SymmetryReport rep = check_symmetry(res, tolerance);
        py::dict d;
        d["group_order"] = rep.group_order;
        d["max_deviation"] = rep.max_deviation;
        d["pass"] = rep.pass;
        return d;
      },
      py::arg("result"), py::arg("tolerance") = 1e-8);

  m.def(
      "verify_decay",
      [](const OptimizerResult& res, double tol) {
        return decay_to_dict(verify_decay(res, tol));
      },
      py::arg("result"), py::arg("tol") = 1e-10);

  m.def(
      "certify",
      [](int n, int N, double tol, unsigned seed) {
        const CertificationReport rep = certify_all(n, N, tol, seed);
        py::list entries;
        for (const CertEntry& e : rep.entries) {
          py::dict d;
          d["id"] = e.id;
          d["pass"] = e.pass;
          py::dict metrics;
          for (const auto& [k, v] : e.metrics) metrics[k.c_str()] = v;
          d["metrics"] = metrics;
          if (!e.note.empty()) d["note"] = e.note;
          entries.append(d);
        }
        py::dict out;
        out["n"] = rep.n;
        out["N"] = rep.N;
        out["tol"] = rep.tol;
        out["seed"] = rep.seed;
        out["entries"] = entries;
        out["pass"] = rep.pass;
        return out;
      },
      py::arg("n"), py::arg("N"), py::arg("tol") = 1e-10, py::arg("seed") = 1);

  py::register_exception<NonConvergence>(m, "NonConvergenceError",
                                         PyExc_RuntimeError);
  py::register_exception<ContractViolation>(m, "ContractViolationError",
                                            PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);

  m.attr("__version__") = "1.0.0";
}
