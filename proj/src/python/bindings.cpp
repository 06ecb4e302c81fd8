#include <sstream>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nevschur/cli.hpp"
#include "nevschur/document.hpp"
#include "nevschur/random.hpp"
#include "nevschur/rsclass.hpp"
#include "nevschur/systems.hpp"
#include "nevschur/transforms.hpp"

namespace py = pybind11;
using namespace nevschur;

namespace {

// Leaked on purpose: must outlive interpreter teardown.
py::exception<Error>* error_type = nullptr;

CutPlanePoint cp(cdouble z) { return CutPlanePoint(z); }

py::dict certificate_dict(const RSCertificate& c) {
  py::dict d;
  d["pass"] = c.pass;
  d["min_kernel_eig"] = c.min_kernel_eig;
  d["min_inequality_eig"] = c.min_inequality_eig;
  d["schur_norm_max"] = c.schur_norm_max;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Passive selfadjoint systems and their transforms";

  error_type = new py::exception<Error>(m, "NevschurError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type->ptr())(std::string(to_string(e.kind())) + ": " + e.what());
      exc.attr("kind") = to_string(e.kind());
      PyErr_SetObject(error_type->ptr(), exc.ptr());
    }
  });

  py::class_<PassiveSystem>(m, "PassiveSystem")
      .def(py::init([](const CMatrix& t, Index dim_input, bool selfadjoint) {
             return PassiveSystem::validate(t, dim_input, selfadjoint);
           }),
           py::arg("matrix"), py::arg("dim_input"), py::arg("selfadjoint") = true)
      .def_property_readonly("dim_input", &PassiveSystem::dim_input)
      .def_property_readonly("dim_state", &PassiveSystem::dim_state)
      .def_property_readonly("selfadjoint", &PassiveSystem::selfadjoint)
      .def_property_readonly("matrix", &PassiveSystem::matrix)
      .def("__repr__", [](const PassiveSystem& s) {
        std::ostringstream o;
        o << "PassiveSystem(dim_input=" << s.dim_input() << ", dim_state=" << s.dim_state() << ")";
        return o.str();
      });

  m.def("load_system", &load_system, py::arg("path"));
  m.def("save_system", &save_system, py::arg("system"), py::arg("path"));
  m.def("parse_system", [](const std::string& s) { return parse_system(s); }, py::arg("text"));
  m.def("serialize_system", &serialize_system, py::arg("system"));
  m.def("random_system", [](std::uint64_t seed, Index m, Index n) {
    Rng rng(seed);
    return random_selfadjoint_system(rng, m, n);
  }, py::arg("seed"), py::arg("dim_input"), py::arg("dim_state"));

  m.def("transfer", [](const PassiveSystem& s, cdouble z) { return transfer(s, cp(z)); });
  m.def("is_minimal", [](const PassiveSystem& s) { return krylov_analysis(s).minimal; });
  m.def("certify_rs", [](const PassiveSystem& s) { return certificate_dict(certify_rs(s)); });
  m.def("phi_eval", [](const PassiveSystem& s, cdouble z) { return phi_eval(s, cp(z)); });
  m.def("phi_realize", [](const PassiveSystem& s) { return phi_realize(s); });
  m.def("xi_realize", &xi_realize, py::arg("system"), py::arg("a"));
  m.def("operator_moebius", &operator_moebius, py::arg("system"), py::arg("a"));
  m.def("pi_a_realize", &pi_a_realize, py::arg("system"), py::arg("a"));
  m.def("zeta_realize", &zeta_realize, py::arg("system"), py::arg("a"));
  m.def("omega0", [](cdouble z, Index dim) { return omega0_eval(cp(z), dim); }, py::arg("z"), py::arg("dim") = 1);
  m.def("m0", &m0_eval, py::arg("xi"), py::arg("dim") = 1);
  m.def("jacobi_system", &jacobi_system, py::arg("n"), py::arg("dim_input") = 1);
  m.def("jacobi_error", [](Index n, cdouble z) { return jacobi_error(n, cp(z)); });
  m.def("u_eval", &u_eval);
  m.def("gamma_transform", [](const PassiveSystem& s, cdouble xi) { return gamma_transform(to_nfunction(s), xi); });
  m.def("spectral_measure", [](const PassiveSystem& s) {
    py::list atoms;
    for (const SpectralAtom& a : spectral_measure(inner_dilate(s)).atoms) atoms.append(py::make_tuple(a.t, a.weight));
    return atoms;
  });
  m.def("is_inner", [](const PassiveSystem& s) { return inner_test(s).is_inner; });

  m.def("run_cli", [](const std::vector<std::string>& args, const std::string& stdin_text) {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    const int code = run_cli(args, in, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), py::arg("stdin") = "");
}
