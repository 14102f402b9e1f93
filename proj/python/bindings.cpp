#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ttent/angular.hpp"
#include "ttent/bloch.hpp"
#include "ttent/errors.hpp"
#include "ttent/events.hpp"
#include "ttent/kinematics.hpp"
#include "ttent/lumi.hpp"
#include "ttent/parton.hpp"
#include "ttent/tomography.hpp"
#include "ttent/window.hpp"

namespace py = pybind11;
using namespace ttent;

namespace {

// Events as an (n, 8) array: M, cos_theta, q+ (3), q- (3).
py::array_t<double> events_to_array(const std::vector<DileptonEvent>& events) {
  py::array_t<double> out({static_cast<py::ssize_t>(events.size()), py::ssize_t{8}});
  auto a = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < events.size(); ++i) {
    const DileptonEvent& e = events[i];
    const double row[8] = {e.m_ttbar,    e.cos_theta,  e.q_plus.x(),  e.q_plus.y(),
                           e.q_plus.z(), e.q_minus.x(), e.q_minus.y(), e.q_minus.z()};
    for (int j = 0; j < 8; ++j) a(i, j) = row[j];
  }
  return out;
}

std::vector<DileptonEvent> array_to_events(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 2 || arr.shape(1) != 8) throw Error(ErrorKind::usage, "events must have shape (n, 8)");
  auto a = arr.unchecked<2>();
  std::vector<DileptonEvent> events(a.shape(0));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) {
    events[i].m_ttbar = a(i, 0);
    events[i].cos_theta = a(i, 1);
    events[i].q_plus = Vec3(a(i, 2), a(i, 3), a(i, 4));
    events[i].q_minus = Vec3(a(i, 5), a(i, 6), a(i, 7));
  }
  return events;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Leading-order spin entanglement of top-antitop pairs";

  // kept alive for the lifetime of the interpreter
  static py::handle error_type = py::exception<Error>(m, "TtentError", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error_type(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::enum_<Channel>(m, "Channel").value("qqbar", Channel::qqbar).value("gg", Channel::gg);
  py::enum_<ChannelMix>(m, "ChannelMix")
      .value("qqbar", ChannelMix::qqbar)
      .value("gg", ChannelMix::gg)
      .value("mixed", ChannelMix::mixed);
  py::enum_<AssumptionLevel>(m, "AssumptionLevel")
      .value("lo_symmetric", AssumptionLevel::lo_symmetric)
      .value("symmetric", AssumptionLevel::symmetric)
      .value("general", AssumptionLevel::general);

  py::class_<PhysicsConfig>(m, "PhysicsConfig")
      .def(py::init([](double m_t, double alpha_s, double sqrt_s) {
             PhysicsConfig c{m_t, alpha_s, sqrt_s};
             c.validate();
             return c;
           }),
           py::arg("m_t") = 173.0, py::arg("alpha_s") = 0.118, py::arg("sqrt_s") = 13000.0)
      .def_readwrite("m_t", &PhysicsConfig::m_t)
      .def_readwrite("alpha_s", &PhysicsConfig::alpha_s)
      .def_readwrite("sqrt_s", &PhysicsConfig::sqrt_s)
      .def_static("load", &PhysicsConfig::load);

  py::class_<TwoQubitState>(m, "TwoQubitState")
      .def(py::init([](const Vec3& bp, const Vec3& bm, const Mat3& c) { return TwoQubitState{bp, bm, c}; }),
           py::arg("b_plus") = Vec3::Zero(), py::arg("b_minus") = Vec3::Zero(), py::arg("c") = Mat3::Zero())
      .def_readwrite("b_plus", &TwoQubitState::b_plus)
      .def_readwrite("b_minus", &TwoQubitState::b_minus)
      .def_readwrite("c", &TwoQubitState::c)
      .def_static("singlet", &TwoQubitState::singlet)
      .def_static("maximally_mixed", &TwoQubitState::maximally_mixed)
      .def("density", [](const TwoQubitState& s) { return assemble_density(s); })
      .def("d_observable", &TwoQubitState::d_observable);

  m.def("is_physical", [](const TwoQubitState& s) { return is_physical(s); });
  m.def("is_entangled_ppt", [](const TwoQubitState& s) { return is_entangled_ppt(s); });
  m.def("concurrence", [](const TwoQubitState& s) { return concurrence_wootters(s); });
  m.def("concurrence_diagonal", &concurrence_diagonal);
  m.def("delta_axial", &delta_axial);

  m.def("beta_of_mass", &beta_of_mass, py::arg("m"), py::arg("cfg") = PhysicsConfig{});
  m.def("mass_of_beta", &mass_of_beta, py::arg("beta"), py::arg("cfg") = PhysicsConfig{});

  m.def("spin_state", [](Channel ch, double beta, double cos_theta) {
    return coefficients(ch, beta, cos_theta).normalized();
  }, "Normalized helicity-basis state at (beta, cos_theta).");
  m.def("delta_point", &delta_point);
  m.def("concurrence_point", &concurrence_point);
  m.def("critical_betas", [](double theta) {
    const CriticalBetas cb = critical_betas(theta);
    return py::make_tuple(cb.beta_c1, cb.beta_c2);
  });

  py::class_<AveragedCoefficients>(m, "AveragedCoefficients")
      .def_readonly("a_tilde_avg", &AveragedCoefficients::a_tilde_avg)
      .def_property_readonly("c_perp", &AveragedCoefficients::c_perp)
      .def_property_readonly("c_z", &AveragedCoefficients::c_z)
      .def_readonly("beta", &AveragedCoefficients::beta)
      .def("state", &AveragedCoefficients::state);
  m.def("averaged_coefficients", &averaged_coefficients);
  m.def("k_integral", &k_integral);
  m.def("delta_avg", &delta_avg);
  m.def("critical_beta_gg", &critical_beta_gg);
  m.def("beta_delta_crossover", &beta_delta_crossover);

  py::class_<LuminosityTable>(m, "LuminosityTable")
      .def_static("load", &LuminosityTable::load)
      .def_static("parse", &LuminosityTable::parse)
      .def_property_readonly("m_min", &LuminosityTable::m_min)
      .def_property_readonly("m_max", &LuminosityTable::m_max)
      .def_property_readonly("source", &LuminosityTable::source)
      .def("__len__", &LuminosityTable::size)
      .def("interpolate", [](const LuminosityTable& t, double m) {
        const LumiValues v = t.interpolate(m);
        return py::make_tuple(v.l_qq, v.l_gg);
      });

  py::class_<WindowState>(m, "WindowState")
      .def_readonly("m_lo", &WindowState::m_lo)
      .def_readonly("m_hi", &WindowState::m_hi)
      .def_readonly("sigma_pb", &WindowState::sigma_pb)
      .def_readonly("c_perp", &WindowState::c_perp)
      .def_readonly("c_z", &WindowState::c_z)
      .def_readonly("c_kk", &WindowState::c_kk)
      .def_readonly("c_nn", &WindowState::c_nn)
      .def_readonly("c_rr", &WindowState::c_rr)
      .def_property_readonly("d", &WindowState::d)
      .def_property_readonly("delta", &WindowState::delta)
      .def_property_readonly("concurrence", &WindowState::concurrence)
      .def("state", &WindowState::state);
  m.def("integrate_window", &integrate_window, py::arg("m_max"), py::arg("table"), py::arg("cfg") = PhysicsConfig{},
        py::arg("mix") = ChannelMix::mixed, py::arg("rel_tol") = 1e-7, py::arg("m_lo") = 0.0);
  m.def("critical_mass_total", &critical_mass_total, py::arg("table"), py::arg("cfg") = PhysicsConfig{},
        py::arg("mix") = ChannelMix::mixed, py::arg("tol") = 0.1, py::arg("rel_tol") = 1e-9);

  m.def("sample_fixed_state",
        [](const TwoQubitState& s, std::size_t n, std::uint64_t seed) {
          std::vector<DileptonEvent> ev;
          {
            py::gil_scoped_release release;
            ev = sample_fixed_state(s, n, seed);
          }
          return events_to_array(ev);
        },
        py::arg("state"), py::arg("n"), py::arg("seed") = 1);
  m.def("sample_events",
        [](std::size_t n, double m_max, const LuminosityTable& table, const PhysicsConfig& cfg, std::uint64_t seed,
           ChannelMix mix) {
          std::vector<DileptonEvent> ev;
          {
            py::gil_scoped_release release;
            ev = sample_events(n, m_max, table, cfg, seed, mix);
          }
          return events_to_array(ev);
        },
        py::arg("n"), py::arg("m_max"), py::arg("table"), py::arg("cfg") = PhysicsConfig{}, py::arg("seed") = 1,
        py::arg("mix") = ChannelMix::mixed);

  m.def("estimate_D", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& ev) {
    const DEstimate d = estimate_D(array_to_events(ev));
    return py::make_tuple(d.d, d.std_err);
  }, "Returns (D, standard error).");
  m.def("tomography_json", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& ev,
                              AssumptionLevel level) { return to_json(tomography_report(array_to_events(ev), level)); },
        py::arg("events"), py::arg("level") = AssumptionLevel::general);
  m.def("project_physical", &project_physical);
  m.def("significance", [](double d, double rel_unc) {
    const Significance s = significance(d, rel_unc);
    return py::make_tuple(s.n_sigma, s.witness);
  }, "Returns (n_sigma, witness).");
}
