#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "heisring/capacity.hpp"
#include "heisring/coords.hpp"
#include "heisring/core.hpp"
#include "heisring/fields.hpp"
#include "heisring/flow.hpp"

namespace py = pybind11;
using namespace heisring;

PYBIND11_MODULE(heisring, m) {
  m.doc() = "Koranyi ellipsoidal ring moduli in the first Heisenberg group";

  py::class_<Point>(m, "Point")
      .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("t"))
      .def_readwrite("x", &Point::x)
      .def_readwrite("y", &Point::y)
      .def_readwrite("t", &Point::t)
      .def("__repr__", [](const Point& p) {
        std::ostringstream os;
        os << "Point(" << p.x << ", " << p.y << ", " << p.t << ")";
        return os.str();
      });

  py::class_<TangentVector>(m, "TangentVector")
      .def(py::init<double, double, double>(), py::arg("dx"), py::arg("dy"), py::arg("dt"))
      .def_readwrite("dx", &TangentVector::dx)
      .def_readwrite("dy", &TangentVector::dy)
      .def_readwrite("dt", &TangentVector::dt);

  py::class_<HorizontalVector>(m, "HorizontalVector")
      .def(py::init<double, double>(), py::arg("cx"), py::arg("cy"))
      .def_readwrite("cx", &HorizontalVector::cx)
      .def_readwrite("cy", &HorizontalVector::cy);

  py::class_<Frame>(m, "Frame")
      .def_readonly("X", &Frame::X)
      .def_readonly("Y", &Frame::Y)
      .def_readonly("T", &Frame::T);

  py::class_<ContactLinearMap>(m, "ContactLinearMap")
      .def(py::init<double, double>(), py::arg("a"), py::arg("b"))
      .def_readonly("a", &ContactLinearMap::a)
      .def_readonly("b", &ContactLinearMap::b);

  py::class_<EllipsoidalCoords>(m, "EllipsoidalCoords")
      .def(py::init<double, double, double>(), py::arg("r"), py::arg("phi"),
           py::arg("theta"))
      .def_readwrite("r", &EllipsoidalCoords::r)
      .def_readwrite("phi", &EllipsoidalCoords::phi)
      .def_readwrite("theta", &EllipsoidalCoords::theta)
      .def("__repr__", [](const EllipsoidalCoords& c) {
        std::ostringstream os;
        os << "EllipsoidalCoords(" << c.r << ", " << c.phi << ", " << c.theta << ")";
        return os.str();
      });

  py::enum_<RingRegion>(m, "RingRegion")
      .value("interior", RingRegion::interior)
      .value("inner_boundary", RingRegion::inner_boundary)
      .value("inside", RingRegion::inside)
      .value("outer_boundary", RingRegion::outer_boundary)
      .value("exterior", RingRegion::exterior);

  py::class_<RingSpec>(m, "RingSpec")
      .def(py::init<double, double, double, double>(), py::arg("B"), py::arg("A"),
           py::arg("a"), py::arg("b"))
      .def_readonly("B", &RingSpec::B)
      .def_readonly("A", &RingSpec::A)
      .def_readonly("a", &RingSpec::a)
      .def_readonly("b", &RingSpec::b)
      .def_property_readonly("K", &RingSpec::distortion)
      .def("log_ratio", &RingSpec::log_ratio)
      .def("gauge4", &RingSpec::gauge4)
      .def("radius", &RingSpec::radius);

  py::class_<QuadratureSpec>(m, "QuadratureSpec")
      .def(py::init<>())
      .def(py::init<int, int, int, int>(), py::arg("n_r"), py::arg("n_phi"),
           py::arg("n_theta"), py::arg("nodes_per_panel"))
      .def_readwrite("n_r", &QuadratureSpec::n_r)
      .def_readwrite("n_phi", &QuadratureSpec::n_phi)
      .def_readwrite("n_theta", &QuadratureSpec::n_theta)
      .def_readwrite("nodes_per_panel", &QuadratureSpec::nodes_per_panel)
      .def("node_count_3d", &QuadratureSpec::node_count_3d);

  py::class_<EnergyReport>(m, "EnergyReport")
      .def_readonly("value", &EnergyReport::value)
      .def_readonly("closed_form", &EnergyReport::closed_form)
      .def_readonly("relative_error", &EnergyReport::relative_error)
      .def_readonly("node_count", &EnergyReport::node_count);

  py::class_<JIntegrals>(m, "JIntegrals")
      .def_readonly("j1", &JIntegrals::j1)
      .def_readonly("j2", &JIntegrals::j2)
      .def_readonly("j3", &JIntegrals::j3);

  py::class_<ScalarField>(m, "ScalarField")
      .def("value", [](const ScalarField& f, const Point& p) { return f.value(p); })
      .def("horizontal_gradient",
           [](const ScalarField& f, const Point& p) { return f.horizontal_gradient(p); });

  py::class_<StepControl>(m, "StepControl")
      .def(py::init<>())
      .def_readwrite("rel_tol", &StepControl::rel_tol)
      .def_readwrite("abs_tol", &StepControl::abs_tol)
      .def_readwrite("max_steps", &StepControl::max_steps);

  py::class_<FlowState>(m, "FlowState")
      .def_readonly("point", &FlowState::point)
      .def_readonly("coords", &FlowState::coords)
      .def_readonly("tau", &FlowState::tau)
      .def_readonly("u_value", &FlowState::u_value)
      .def_readonly("velocity", &FlowState::velocity)
      .def_readonly("speed_h", &FlowState::speed_h)
      .def_readonly("rr_residual", &FlowState::rr_residual)
      .def_readonly("eq8_residual", &FlowState::eq8_residual);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("states", &Trajectory::states)
      .def_readonly("horizontal_length", &Trajectory::horizontal_length)
      .def_readonly("max_rr_residual", &Trajectory::max_rr_residual)
      .def_readonly("max_eq8_residual", &Trajectory::max_eq8_residual)
      .def_readonly("max_horizontality", &Trajectory::max_horizontality)
      .def_readonly("max_speed_law_residual", &Trajectory::max_speed_law_residual);

  py::class_<Density>(m, "Density")
      .def(py::init([](std::function<double(const EllipsoidalCoords&)> fn) {
             return Density{std::move(fn)};
           }),
           py::arg("eval"))
      .def("eval", [](const Density& d, const EllipsoidalCoords& c) { return d.eval(c); });

  py::class_<HolderReport>(m, "HolderReport")
      .def_readonly("lower_bound", &HolderReport::lower_bound)
      .def_readonly("rho4_integral", &HolderReport::rho4_integral)
      .def_readonly("pointwise_violations", &HolderReport::pointwise_violations)
      .def_readonly("worst_violation", &HolderReport::worst_violation)
      .def_readonly("worst_phi", &HolderReport::worst_phi)
      .def_readonly("worst_theta", &HolderReport::worst_theta);

  // group and metric
  m.def("group_multiply", &group_multiply);
  m.def("group_inverse", &group_inverse);
  m.def("koranyi_gauge", &koranyi_gauge);
  m.def("koranyi_distance", &koranyi_distance);
  m.def("left_translate", &left_translate);
  m.def("rotate", &rotate);
  m.def("dilate", &dilate);
  m.def("conjugate", &conjugate);
  m.def("contact_form", &contact_form);
  m.def("frame_vectors", &frame_vectors);
  m.def("linear_apply", &linear_apply);
  m.def("linear_differential", &linear_differential);
  m.def("linear_distortion", &linear_distortion);
  m.def("contact_pullback_factor", &contact_pullback_factor);

  // chart
  m.def("to_cartesian", &to_cartesian, py::arg("coords"), py::arg("a"), py::arg("b"));
  m.def("from_cartesian", &from_cartesian, py::arg("point"), py::arg("a"), py::arg("b"));
  m.def("chart_jacobian", &chart_jacobian, py::arg("coords"), py::arg("a"), py::arg("b"));
  m.def("ring_classify", &ring_classify);

  // fields
  m.def("u0_field", &u0_field);
  m.def("u0_value", &u0_value);
  m.def("u0_gradient", &u0_gradient);
  m.def("horizontal_fd_gradient", &horizontal_fd_gradient, py::arg("field"),
        py::arg("point"), py::arg("h") = 1e-4);
  m.def("horizontal_norm", &horizontal_norm);

  // capacity
  m.def("closed_form_modulus", &closed_form_modulus);
  m.def("energy_quadrature", &energy_quadrature, py::arg("spec"), py::arg("field"),
        py::arg("quadrature") = QuadratureSpec());
  m.def("j_integrals", &j_integrals, py::arg("resolution") = QuadratureSpec());
  m.def("assemble_modulus_from_j", &assemble_modulus_from_j);
  m.def("boundary_bump_field", &boundary_bump_field);
  m.def("perturbation_extremality", &perturbation_extremality, py::arg("spec"),
        py::arg("bump_seed"), py::arg("amplitude"),
        py::arg("quadrature") = QuadratureSpec());

  // flow
  m.def("flow_rhs", &flow_rhs);
  m.def("integrate_trajectory", &integrate_trajectory, py::arg("spec"), py::arg("phi0"),
        py::arg("theta0"), py::arg("control") = StepControl());
  m.def("rr_residual", &rr_residual);
  m.def("eq8_residual", &eq8_residual);
  m.def("line_integral", &line_integral);
  m.def("extremal_density", &extremal_density);
  m.def("holder_lower_bound", &holder_lower_bound, py::arg("spec"), py::arg("rho"),
        py::arg("grid") = QuadratureSpec());
}
