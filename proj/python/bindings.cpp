#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "besovlab/besov.hpp"
#include "besovlab/errors.hpp"
#include "besovlab/extension.hpp"
#include "besovlab/kernels.hpp"
#include "besovlab/lab/config.hpp"
#include "besovlab/lab/family.hpp"
#include "besovlab/lab/suites.hpp"
#include "besovlab/parallel.hpp"
#include "besovlab/riesz.hpp"

namespace py = pybind11;
using namespace besovlab;
using spectral::GridFunction;
using spectral::GridSpec;

namespace {

GridFunction from_array(const GridSpec& spec, py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (static_cast<std::size_t>(a.size()) != spec.size())
    throw PreconditionError("array has " + std::to_string(a.size()) + " values, grid has " +
                            std::to_string(spec.size()));
  return GridFunction(spec, std::vector<double>(a.data(), a.data() + a.size()));
}

py::array_t<double> to_array(const GridFunction& f) {
  const auto& spec = f.spec();
  std::vector<py::ssize_t> shape(spec.dim(), spec.samples_per_axis());
  py::array_t<double> out(shape);
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

spectral::MultiIndex multi_index(const std::vector<int>& beta, int l) {
  spectral::MultiIndex a;
  for (std::size_t i = 0; i < beta.size() && i < 2; ++i) a.beta[i] = beta[i];
  a.l = l;
  return a;
}

py::dict ratio_dict(const extension::RatioRow& r) {
  py::dict d;
  d["lhs"] = r.lhs;
  d["rhs"] = r.rhs;
  d["ratio"] = r.ratio;
  d["flagged"] = r.flagged;
  d["head_bound"] = r.head_bound;
  d["tail_bound"] = r.tail_bound;
  d["boundary_tail"] = r.boundary_tail;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Besov traces, half-space extensions and Riesz transforms on periodic grids";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<ResolutionError>(m, "ResolutionError", PyExc_RuntimeError);
  py::register_exception<lab::ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<kernels::KernelKind>(m, "KernelKind")
      .value("GAUSS", kernels::KernelKind::GaussWeierstrass)
      .value("POISSON", kernels::KernelKind::Poisson);

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init(&GridSpec::make), py::arg("dim"), py::arg("samples"), py::arg("length"))
      .def_property_readonly("dim", &GridSpec::dim)
      .def_property_readonly("samples", &GridSpec::samples_per_axis)
      .def_property_readonly("length", &GridSpec::length)
      .def_property_readonly("step", &GridSpec::step)
      .def("coordinates", [](const GridSpec& s) {
        py::array_t<double> out(std::vector<py::ssize_t>{s.samples_per_axis()});
        double* x = out.mutable_data();
        for (int i = 0; i < s.samples_per_axis(); ++i) x[i] = s.centered_coordinate(i);
        return out;
      }, "Centered coordinates along one axis, in storage order.")
      .def("refined", &GridSpec::refined)
      .def("__repr__", [](const GridSpec& s) {
        return "GridSpec(dim=" + std::to_string(s.dim()) + ", samples=" + std::to_string(s.samples_per_axis()) +
               ", length=" + std::to_string(s.length()) + ")";
      });

  py::class_<GridFunction>(m, "GridFunction")
      .def(py::init(&from_array), py::arg("spec"), py::arg("values"))
      .def_property_readonly("spec", &GridFunction::spec)
      .def_property_readonly("values", &to_array)
      .def("integral", &GridFunction::integral)
      .def("mean", &GridFunction::mean)
      .def("minus_mean", &GridFunction::minus_mean)
      .def("lp_norm", [](const GridFunction& f, double p) { return spectral::lp_norm(f, p); }, py::arg("p") = 1.0);

  m.def("set_thread_count", &parallel::set_thread_count, py::arg("count"));

  m.def("besov_seminorm", [](const GridFunction& f, double s, double p, double q) {
    return besov::besov_seminorm(f, besov::BesovParams::make(s, p, q)).value;
  }, py::arg("f"), py::arg("s"), py::arg("p") = 1.0, py::arg("q") = 1.0);
  m.def("zygmund_seminorm", [](const GridFunction& f, double s, int k) { return besov::zygmund_seminorm(f, s, k); },
        py::arg("f"), py::arg("s"), py::arg("k") = 1);

  m.def("heat_time_integral", [](const std::vector<int>& alpha, int dim, double b, std::vector<double> x) {
    x.resize(2, 0.0);
    auto r = kernels::heat_time_integral(multi_index(alpha, 0), dim, b, {x[0], x[1]});
    return py::make_tuple(r.value, r.tail_bound);
  }, py::arg("alpha"), py::arg("dim"), py::arg("b"), py::arg("x"),
        "(value, tail_bound) of the integral over t of t^b |d^alpha W_t(x)|.");
  m.def("heat_identity_residual", &kernels::heat_identity_residual, py::arg("t"), py::arg("spec"));

  m.def("extend", &extension::extend, py::arg("f"), py::arg("kind"), py::arg("t"));
  m.def("trace_limit", &extension::trace_limit, py::arg("f"), py::arg("kind"), py::arg("times"));
  m.def("main_estimate_ratio", [](const GridFunction& f, int mm, double a, kernels::KernelKind kind) {
    return ratio_dict(extension::main_estimate_ratio(f, extension::WeightParams::make(mm, a, 1.0), kind));
  }, py::arg("f"), py::arg("m"), py::arg("a"), py::arg("kind") = kernels::KernelKind::GaussWeierstrass);
  m.def("uspenskii_ansatz_residual", &extension::uspenskii_ansatz_residual, py::arg("f"), py::arg("kind"),
        py::arg("i"), py::arg("j"), py::arg("t"));

  m.def("riesz_transform", &riesz::riesz_transform, py::arg("f"), py::arg("j"));
  m.def("riesz_pv_oracle", &riesz::riesz_pv_oracle, py::arg("f"), py::arg("j"), py::arg("epsilon"));

  m.def("family", [](std::uint64_t seed, const GridSpec& spec, int count, bool mean_zero) {
    py::list out;
    for (auto& member : lab::family_generator(seed, spec, count, {0, mean_zero}))
      out.append(py::make_tuple(member.id, member.f));
    return out;
  }, py::arg("seed"), py::arg("spec"), py::arg("count"), py::arg("mean_zero") = false);

  m.def("run_suite", [](const std::string& name, const std::map<std::string, std::string>& settings) {
    lab::ExperimentConfig config;
    for (const auto& [k, v] : settings) config.set(k, v);
    config.validate();
    auto report = lab::run_suite(name, config);
    return py::make_tuple(report.payload_json(), report.failures);
  }, py::arg("name"), py::arg("settings") = std::map<std::string, std::string>{},
        "(JSON payload, failures) for one lab suite; settings use the config-file keys.");
  m.def("suite_names", &lab::suite_names);
  m.def("config_keys", &lab::ExperimentConfig::keys);
}
