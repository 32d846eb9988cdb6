#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sparseproc/discrete_filters.hpp"
#include "sparseproc/errors.hpp"
#include "sparseproc/expspline.hpp"
#include "sparseproc/generators.hpp"
#include "sparseproc/innovations.hpp"
#include "sparseproc/inverse_operators.hpp"
#include "sparseproc/io/config.hpp"
#include "sparseproc/io/validation.hpp"
#include "sparseproc/statistics.hpp"

namespace py = pybind11;
using namespace sparseproc;

namespace {

py::array_t<cplx> to_array(const std::vector<cplx>& v) { return py::array_t<cplx>(v.size(), v.data()); }

py::dict sequence_dict(const Sequence& s) {
  py::dict d;
  d["first"] = s.first;
  d["values"] = to_array(s.values);
  return d;
}

Sequence from_array(index_t first, const py::array_t<cplx, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D array");
  return Sequence(first, std::vector<cplx>(a.data(), a.data() + a.size()));
}

py::dict filter_dict(const FilterSpec& f) {
  py::dict d;
  d["offset"] = f.offset;
  d["taps"] = to_array(f.taps);
  return d;
}

template <class Fn>
py::array_t<cplx> eval_on(const Fn& f, const py::array_t<double, py::array::c_style | py::array::forcecast>& t) {
  py::array_t<cplx> out(t.size());
  auto o = out.mutable_unchecked<1>();
  const double* ti = t.data();
  for (py::ssize_t i = 0; i < t.size(); ++i) o(i) = f(ti[i]);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sampled sparse CARMA processes: exponential B-splines, filters, generators and estimators";

  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);

  py::class_<PoleZeroSystem>(m, "System")
      .def(py::init([](std::vector<cplx> poles, std::vector<cplx> zeros, cplx gain, double step) {
             return build_system(std::move(poles), std::move(zeros), gain, kImaginaryTolerance, step);
           }),
           py::arg("poles"), py::arg("zeros") = std::vector<cplx>{}, py::arg("gain") = cplx(1.0), py::arg("step") = 1.0)
      .def_readonly("poles", &PoleZeroSystem::poles)
      .def_readonly("zeros", &PoleZeroSystem::zeros)
      .def_readonly("gain", &PoleZeroSystem::gain)
      .def_readonly("n0", &PoleZeroSystem::n0)
      .def_readonly("step", &PoleZeroSystem::step)
      .def_property_readonly("order", &PoleZeroSystem::order)
      .def_property_readonly("stationary", &PoleZeroSystem::stationary)
      .def("__repr__", [](const PoleZeroSystem& s) {
        return "System(order=" + std::to_string(s.order()) + ", zeros=" + std::to_string(s.num_zeros()) +
               ", n0=" + std::to_string(s.n0) + ")";
      });

  py::class_<GaussianInnovation>(m, "Gaussian")
      .def(py::init<double>(), py::arg("b2") = 0.5)
      .def_readonly("b2", &GaussianInnovation::b2);
  py::class_<PoissonInnovation>(m, "Poisson")
      .def(py::init([](double lambda) { return PoissonInnovation{lambda}; }), py::arg("rate") = 1.0 / 32.0)
      .def_readonly("rate", &PoissonInnovation::lambda);
  py::class_<StableInnovation>(m, "SymmetricStable")
      .def(py::init<double, double>(), py::arg("alpha") = 1.2, py::arg("b_alpha") = 1.0)
      .def_readonly("alpha", &StableInnovation::alpha)
      .def_readonly("b_alpha", &StableInnovation::b_alpha);

  m.def("levy_exponent", &levy_exponent, py::arg("innovation"), py::arg("omega"));
  m.def("innovation_variance", &innovation_variance, py::arg("innovation"));

  m.def(
      "bspline",
      [](const PoleZeroSystem& sys, const py::array_t<double, py::array::c_style | py::array::forcecast>& t) {
        const PiecewiseExpPoly b = bspline_L(sys);
        return eval_on([&](double x) { return b(x); }, t);
      },
      py::arg("system"), py::arg("t"), "beta_L on the grid t (unit step)");
  m.def(
      "bspline_autocorr",
      [](const PoleZeroSystem& sys, const py::array_t<double, py::array::c_style | py::array::forcecast>& t) {
        const PiecewiseExpPoly b = bspline_autocorr(sys);
        return eval_on([&](double x) { return b(x); }, t);
      },
      py::arg("system"), py::arg("t"));
  m.def(
      "green_function",
      [](const PoleZeroSystem& sys, const py::array_t<double, py::array::c_style | py::array::forcecast>& t) {
        const GreenFunction g(sys);
        return eval_on([&](double x) { return g(x); }, t);
      },
      py::arg("system"), py::arg("t"));

  m.def("localization_filter", [](const PoleZeroSystem& sys) { return filter_dict(localization_coeffs(sys.poles)); },
        py::arg("system"));
  m.def("bspline_filter", [](const PoleZeroSystem& sys) { return filter_dict(discrete_bspline_filter(sys)); },
        py::arg("system"));
  m.def(
      "spectral_factor",
      [](const PoleZeroSystem& sys) { return filter_dict(spectral_factorize(discrete_bspline_filter(sys))); },
      py::arg("system"), "minimum-phase b_L^+ with |B_L^+|^2 = B_L on the unit circle");
  m.def("continuous_autocorr", &continuous_autocorr, py::arg("system"), py::arg("var0"), py::arg("t"));
  m.def("increment_spectrum", &increment_spectrum, py::arg("system"), py::arg("var0"), py::arg("omega"));

  m.def(
      "apply_localization",
      [](const PoleZeroSystem& sys, const py::array_t<cplx, py::array::c_style | py::array::forcecast>& s,
         index_t first) { return sequence_dict(apply_localization(sys, from_array(first, s))); },
      py::arg("system"), py::arg("samples"), py::arg("first") = 0);
  m.def(
      "apply_inverse",
      [](const PoleZeroSystem& sys, const py::array_t<cplx, py::array::c_style | py::array::forcecast>& x,
         index_t first) {
        const CompositeInverse r = apply_inverse_composite(sys, from_array(first, x));
        py::dict d = sequence_dict(r.signal);
        d["boundary_residuals"] = r.boundary.residuals;
        return d;
      },
      py::arg("system"), py::arg("increments"), py::arg("first") = 0);

  m.def(
      "generate",
      [](const PoleZeroSystem& sys, const InnovationSpec& spec, index_t n, std::uint64_t seed, int oversampling) {
        const Realization r = generate(sys, spec, n, seed, oversampling);
        py::dict d;
        d["samples"] = to_array(r.samples.values);
        d["increments"] = to_array(r.increments.values);
        d["increments_first"] = r.increments.first;
        if (r.knots) {
          std::vector<double> t, a;
          for (const Knot& k : *r.knots) {
            t.push_back(k.t * r.step);
            a.push_back(k.a);
          }
          d["knot_times"] = py::array_t<double>(t.size(), t.data());
          d["knot_amplitudes"] = py::array_t<double>(a.size(), a.data());
        }
        return d;
      },
      py::arg("system"), py::arg("innovation"), py::arg("n"), py::arg("seed"),
      py::arg("oversampling") = kDefaultOversampling);

  m.def("charfn_increment", &charfn_increment, py::arg("innovation"), py::arg("system"), py::arg("omegas"));

  m.def(
      "empirical_autocorr",
      [](const py::array_t<cplx, py::array::c_style | py::array::forcecast>& x, int maxlag) {
        const StatReport r = empirical_autocorr(from_array(0, x), maxlag);
        py::dict d;
        d["estimate"] = to_array(r.estimate);
        d["std_error"] = r.std_error;
        return d;
      },
      py::arg("x"), py::arg("maxlag"));

  m.def(
      "validate_config",
      [](const std::string& json_text, std::uint64_t seed) {
        const io::ValidationReport rep = io::run_validation(io::parse_config(nlohmann::json::parse(json_text)), seed);
        return rep.to_json().dump();
      },
      py::arg("config_json"), py::arg("seed"), "run the config-driven checks; returns the report as JSON text");
}
