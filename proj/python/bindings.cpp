#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "meixner/bd_process.hpp"
#include "meixner/commands.hpp"
#include "meixner/config.hpp"
#include "meixner/error.hpp"
#include "meixner/operators.hpp"
#include "meixner/polynomials.hpp"
#include "meixner/spectral.hpp"

namespace py = pybind11;
using namespace meixner;

namespace {

MultiIndex idx(const std::vector<int>& v) { return MultiIndex(v); }

py::tuple as_tuple(const MultiIndex& m) { return py::cast(m.entries()).cast<py::tuple>(); }

py::dict residuals_dict(const ConstraintResiduals& r) {
  py::dict d;
  d["secular"] = r.secular;
  d["u_linear"] = r.u_linear;
  d["u_quadratic"] = r.u_quadratic;
  d["b_linear"] = r.b_linear;
  d["b_quadratic"] = r.b_quadratic;
  d["max"] = r.max();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multivariate Meixner polynomials and their birth-death process";

  // messages read "<ErrorCode>: detail"
  py::register_exception<Error>(m, "MeixnerError", PyExc_ValueError);

  py::class_<ModelParams>(m, "Model")
      .def(py::init([](double beta, std::vector<double> c) { return validate_params(beta, std::move(c)); }),
           py::arg("beta"), py::arg("c"))
      .def_readonly("beta", &ModelParams::beta)
      .def_readonly("c", &ModelParams::c)
      .def_readonly("degenerate", &ModelParams::degenerate)
      .def_property_readonly("n", &ModelParams::n)
      .def_property_readonly("c_mass", &ModelParams::c_mass)
      .def("__repr__", [](const ModelParams& p) {
        return "Model(beta=" + std::to_string(p.beta) + ", n=" + std::to_string(p.n()) + ")";
      });

  py::class_<SpectralData>(m, "Spectral")
      .def_readonly("lambda_", &SpectralData::lambda)
      .def_readonly("u", &SpectralData::u)
      .def_readonly("b", &SpectralData::b)
      .def_readonly("cbar", &SpectralData::cbar)
      .def_property_readonly("residuals", [](const SpectralData& sd) { return residuals_dict(sd.residuals); });

  m.def("solve_spectrum", &solve_spectrum, py::arg("model"));
  m.def("dense_spectrum", &dense_spectrum, py::arg("model"));
  m.def(
      "degenerate_spectrum",
      [](const ModelParams& p) {
        std::vector<std::pair<double, int>> out;
        for (const auto& r : degenerate_spectrum(p)) out.emplace_back(r.value, r.multiplicity);
        return out;
      },
      py::arg("model"), "List of (root, multiplicity) for coincident c.");
  m.def("build_spectral", &build_spectral, py::arg("model"));
  m.def("build_u", &build_u, py::arg("model"), py::arg("lambdas"));

  m.def(
      "weight", [](const ModelParams& p, const std::vector<int>& x) { return weight(p, idx(x)); }, py::arg("model"),
      py::arg("x"));
  m.def(
      "meixner",
      [](const ModelParams& p, const SpectralData& sd, const std::vector<int>& deg, const std::vector<int>& x) {
        return meixner_eval(p, sd, idx(deg), idx(x));
      },
      py::arg("model"), py::arg("spectral"), py::arg("m"), py::arg("x"));
  m.def(
      "meixner_genfun",
      [](const ModelParams& p, const SpectralData& sd, const std::vector<int>& deg, const std::vector<int>& x,
         int cap) { return genfun_eval(p, sd, idx(deg), idx(x), cap); },
      py::arg("model"), py::arg("spectral"), py::arg("m"), py::arg("x"), py::arg("degree_cap") = kDefaultDegreeCap);
  m.def("meixner_1d", &meixner_1d, py::arg("beta"), py::arg("c"), py::arg("m"), py::arg("x"));
  m.def(
      "poly_table",
      [](const ModelParams& p, const SpectralData& sd, int max_deg, int S) {
        const auto t = poly_table(p, sd, max_deg, S);
        py::list degrees;
        py::list points;
        for (const auto& d : t.degrees) degrees.append(as_tuple(d));
        for (const auto& x : t.points) points.append(as_tuple(x));
        return py::make_tuple(degrees, points, t.values);
      },
      py::arg("model"), py::arg("spectral"), py::arg("max_deg"), py::arg("S"),
      "(degrees, points, values) with values[i, k] = P_degrees[i](points[k]).");

  m.def("eigenvalue", [](const SpectralData& sd, const std::vector<int>& deg) { return eigenvalue_of(sd, idx(deg)); },
        py::arg("spectral"), py::arg("m"));
  m.def(
      "eigen_check",
      [](const ModelParams& p, const SpectralData& sd, const std::vector<int>& deg,
         const std::vector<std::vector<int>>& sample) {
        std::vector<MultiIndex> pts;
        for (const auto& x : sample) pts.push_back(idx(x));
        return eigen_check(p, sd, idx(deg), pts);
      },
      py::arg("model"), py::arg("spectral"), py::arg("m"), py::arg("sample"));
  m.def(
      "orthogonality_check",
      [](const ModelParams& p, const SpectralData& sd, int max_deg, int S, double eps) {
        const auto r = orthogonality_check(p, sd, max_deg, S, eps);
        py::dict d;
        d["max_offdiag"] = r.max_offdiag;
        d["max_diag_rel"] = r.max_diag_rel;
        d["tail"] = r.tail;
        d["residuals"] = r.residuals;
        return d;
      },
      py::arg("model"), py::arg("spectral"), py::arg("max_deg"), py::arg("S"), py::arg("eps"));

  m.def(
      "transition_prob",
      [](const ModelParams& p, const SpectralData& sd, const std::vector<int>& x, const std::vector<int>& y, double t,
         int M) { return transition_prob(p, sd, idx(x), idx(y), t, M).spectral_value; },
      py::arg("model"), py::arg("spectral"), py::arg("x"), py::arg("y"), py::arg("t"), py::arg("M"),
      "T(x, y; t): probability of being at x at time t after starting from y.");
  m.def(
      "simulate",
      [](const ModelParams& p, const std::vector<int>& x0, double t, std::uint64_t seed, long n_traj) {
        EmpiricalDistribution emp;
        {
          py::gil_scoped_release release;
          emp = simulate(p, idx(x0), t, seed, n_traj);
        }
        py::dict counts;
        for (const auto& [state, k] : emp.counts) counts[as_tuple(state)] = k;
        return py::make_tuple(counts, emp.cap_hits);
      },
      py::arg("model"), py::arg("x0"), py::arg("t"), py::arg("seed"), py::arg("n_traj"),
      "(counts by end state, trajectories stopped at the event cap).");

  m.def(
      "verify",
      [](const std::string& config_json) {
        const RunConfig cfg = parse_config(config_json);
        const ModelParams p = cfg.model();
        const SpectralData sd = build_spectral(p);
        VerifyReport rep;
        {
          py::gil_scoped_release release;
          rep = run_verification(cfg, p, sd);
        }
        return py::module_::import("json").attr("loads")(rep.to_json().dump());
      },
      py::arg("config_json"), "Runs the verify checks for a JSON config and returns the report.");
}
