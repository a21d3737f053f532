#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "suslov/cayley.hpp"
#include "suslov/consistency.hpp"
#include "suslov/dreps.hpp"
#include "suslov/dynamics.hpp"
#include "suslov/errors.hpp"
#include "suslov/sim.hpp"
#include "suslov/so3.hpp"

namespace py = pybind11;
using namespace suslov;

namespace {

std::unique_ptr<DrepsScheme> scheme_or_throw(const std::string& name,
                                             const InertiaTensor& inertia) {
  auto s = make_scheme(name, inertia);
  if (!s) throw py::value_error("unknown scheme '" + name + "'");
  return s;
}

Rot3 to_rot(const Mat3& m) { return Rot3(m); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Suslov problem on SO(3): Cayley retraction, continuous dynamics and DREPS schemes.";

  auto base = py::register_exception<Error>(m, "SuslovError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ConstraintError>(m, "ConstraintError", base.ptr());
  py::register_exception<DegenerateError>(m, "DegenerateError", base.ptr());
  auto solver = py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<NonConvergence>(m, "NonConvergence", solver.ptr());
  py::register_exception<SingularJacobian>(m, "SingularJacobian", solver.ptr());
  py::register_exception<FitError>(m, "FitError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<InertiaTensor>(m, "InertiaTensor")
      .def(py::init<const Mat3&>(), py::arg("matrix"))
      .def_static("reference", &InertiaTensor::reference)
      .def_property_readonly("matrix", &InertiaTensor::matrix)
      .def_property_readonly("block", &InertiaTensor::block)
      .def_property_readonly("block_det", &InertiaTensor::block_det);

  // so(3) / SO(3)
  m.def("hat", [](const Vec3& v) { return hat(v).matrix(); }, py::arg("v"));
  m.def("vee", [](const Mat3& s) { return vee(s); }, py::arg("s"));
  m.def("killing_inner", &killing_inner, py::arg("a"), py::arg("b"));
  m.def("algebra_distance", &algebra_distance, py::arg("a"), py::arg("b"));
  m.def("group_distance", py::overload_cast<const Mat3&, const Mat3&>(&group_distance),
        py::arg("a"), py::arg("b"));
  m.def("orthonormality_defect", &orthonormality_defect, py::arg("a"));

  // Cayley map
  m.def("cay", [](const Vec3& w) { return cay(w).matrix(); }, py::arg("w"));
  m.def("cay_inv", [](const Mat3& r) { return cay_inv(to_rot(r)); }, py::arg("r"));
  m.def("dcay", &dcay, py::arg("w"));
  m.def("dcay_inv", &dcay_inv, py::arg("w"));
  m.def("dcay_inv_scaled", &dcay_inv_scaled, py::arg("w"), py::arg("eps"));

  // Continuous dynamics
  m.def("reduced_lagrangian", &reduced_lagrangian, py::arg("inertia"), py::arg("w"));
  m.def("reduced_energy", &reduced_energy, py::arg("inertia"), py::arg("w"));
  m.def("suslov_rhs", &suslov_rhs, py::arg("inertia"), py::arg("w"));
  m.def("suslov_multiplier", &suslov_multiplier, py::arg("inertia"), py::arg("w"));
  m.def(
      "eliminate_multiplier",
      [](const InertiaTensor& inertia, const Vec3& a, const Vec3& w) {
        const auto p = eliminate_multiplier(inertia, ConstraintCovector(a), w);
        return py::make_tuple(p.rhs, p.lambda);
      },
      py::arg("inertia"), py::arg("a"), py::arg("w"));
  m.def("rk4_step", &rk4_step, py::arg("inertia"), py::arg("w"), py::arg("eps"));
  m.def("integrate_reference", &integrate_reference, py::arg("inertia"), py::arg("w0"),
        py::arg("eps"), py::arg("n_steps"));
  m.def("inconsistency_offset", &inconsistency_offset, py::arg("inertia"), py::arg("w"));

  // DREPS schemes
  m.def("midpoint_residual", &midpoint_residual, py::arg("inertia"), py::arg("w_k"),
        py::arg("w_next"), py::arg("eps"));
  m.def("variational_residual", &variational_residual, py::arg("inertia"), py::arg("w_k"),
        py::arg("w_next"), py::arg("eps"));
  m.def("variational_multiplier", &variational_multiplier, py::arg("inertia"),
        py::arg("w_k"), py::arg("w_next"));
  m.def(
      "newton_solve",
      [](const std::string& scheme, const InertiaTensor& inertia, const Vec3& w_k,
         double eps, double tol, int max_iter) {
        NewtonConfig cfg;
        cfg.tol = tol;
        cfg.max_iter = max_iter;
        const StepResult r = newton_solve(*scheme_or_throw(scheme, inertia), w_k, eps, cfg);
        py::dict out;
        out["omega_next"] = r.omega_next;
        out["lambda_next"] = r.lambda_next;
        out["newton_iters"] = r.newton_iters;
        out["jacobian_condition"] = r.jacobian_condition;
        return out;
      },
      py::arg("scheme"), py::arg("inertia"), py::arg("w_k"), py::arg("eps"),
      py::arg("tol") = 1e-13, py::arg("max_iter") = 50);

  m.def(
      "simulate",
      [](const std::string& method, const InertiaTensor& inertia, const Vec3& omega0,
         double eps, double t_final) {
        RunConfig cfg;
        const auto parsed = parse_method(method);
        if (!parsed) throw py::value_error("unknown method '" + method + "'");
        cfg.method = *parsed;
        cfg.inertia = inertia;
        cfg.omega0 = omega0;
        cfg.eps = eps;
        cfg.t_final = t_final;
        const auto rows = simulate(cfg);
        Eigen::MatrixXd table(static_cast<Eigen::Index>(rows.size()),
                              static_cast<Eigen::Index>(kTrajectoryColumns.size()));
        for (std::size_t k = 0; k < rows.size(); ++k) {
          const auto& r = rows[k];
          auto row = table.row(static_cast<Eigen::Index>(k));
          row << r.t, r.omega.x(), r.omega.y(), r.omega.z(), r.lambda, r.energy,
              r.reduced_residual, r.unreduced_residual, r.orthonormality_defect,
              r.rotation(0, 0), r.rotation(0, 1), r.rotation(0, 2), r.rotation(1, 0),
              r.rotation(1, 1), r.rotation(1, 2), r.rotation(2, 0), r.rotation(2, 1),
              r.rotation(2, 2);
        }
        return py::make_tuple(kTrajectoryColumns, table);
      },
      py::arg("method"), py::arg("inertia"), py::arg("omega0"), py::arg("eps"),
      py::arg("t_final"),
      "Returns (column names, table) with one row per step.");

  m.def(
      "estimate_order",
      [](const std::string& scheme, const InertiaTensor& inertia, const Vec3& w0,
         const std::vector<double>& eps_grid) {
        const ConsistencyReport r =
            estimate_order(*scheme_or_throw(scheme, inertia), w0, eps_grid);
        py::dict out;
        out["slope_omega"] = r.omega.slope;
        out["slope_lambda"] = r.lambda.slope;
        out["slope_group"] = r.group.slope;
        out["slope_velocity"] = r.velocity.slope;
        out["lambda_offset"] = r.lambda_offset.offset;
        py::list samples;
        for (const auto& s : r.samples) {
          samples.append(py::make_tuple(s.eps, s.err_omega, s.err_lambda, s.err_group,
                                        s.err_velocity));
        }
        out["samples"] = samples;
        return out;
      },
      py::arg("scheme"), py::arg("inertia"), py::arg("w0"), py::arg("eps_grid"));

  m.def(
      "one_step_errors",
      [](const std::string& scheme, const InertiaTensor& inertia, const Vec3& w0, double eps) {
        const ErrorSample e =
            one_step_errors(*scheme_or_throw(scheme, inertia), w0, Rot3::identity(), eps);
        py::dict out;
        out["eps"] = e.eps;
        out["err_omega"] = e.err_omega;
        out["err_lambda"] = e.err_lambda;
        out["err_group"] = e.err_group;
        out["err_velocity"] = e.err_velocity;
        return out;
      },
      py::arg("scheme"), py::arg("inertia"), py::arg("w0"), py::arg("eps"));

  m.def("log_spaced_grid", &log_spaced_grid, py::arg("log10_min") = -3.5,
        py::arg("log10_max") = -1.5, py::arg("count") = 8);
}
