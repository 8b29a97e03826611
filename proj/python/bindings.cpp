// python bindings for the main operations

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diraclab/geometry.hpp"
#include "diraclab/json_io.hpp"
#include "diraclab/spectral.hpp"

namespace py = pybind11;
using namespace diraclab;

namespace {

TwistSpec make_twist(const std::string& parity, int a, int b) {
  if (parity == "even") return TwistSpec::even(a, b);
  if (parity == "odd") return TwistSpec::odd(a);
  throw precondition_error("twist parity must be 'even' or 'odd'");
}

}  // namespace

PYBIND11_MODULE(_diraclab, m) {
  m.doc() = "index localization toolkit for perturbed Dirac operators";

  py::register_exception<precondition_error>(m, "PreconditionError");
  py::register_exception<inconclusive_gap_error>(m, "InconclusiveGapError");

  py::class_<CliffordRep>(m, "CliffordRep")
      .def_readonly("n", &CliffordRep::n)
      .def_readonly("dim", &CliffordRep::dim)
      .def_readonly("generators", &CliffordRep::generators)
      .def_readonly("chirality", &CliffordRep::chirality);

  py::class_<GradedModule>(m, "GradedModule")
      .def_readonly("n", &GradedModule::n)
      .def_readonly("rank_plus", &GradedModule::rank_plus)
      .def_readonly("rank_minus", &GradedModule::rank_minus)
      .def_readonly("action", &GradedModule::action)
      .def("grading", &GradedModule::grading)
      .def("rank", &GradedModule::rank);

  py::class_<LinearPerturbation>(m, "LinearPerturbation")
      .def(py::init([](const GradedModule& module, std::vector<Matrix> zs,
                       RealVector basepoint) {
             LinearPerturbation p;
             p.n = module.n;
             p.module = module;
             p.zs = std::move(zs);
             p.basepoint = std::move(basepoint);
             return p;
           }),
           py::arg("module"), py::arg("zs"), py::arg("basepoint"))
      .def_readonly("n", &LinearPerturbation::n)
      .def_readonly("module", &LinearPerturbation::module)
      .def_readonly("zs", &LinearPerturbation::zs)
      .def_readonly("basepoint", &LinearPerturbation::basepoint);

  py::class_<ProperReport>(m, "ProperReport")
      .def_readonly("is_proper", &ProperReport::is_proper)
      .def_readonly("c_lower", &ProperReport::c_lower)
      .def_readonly("anticommutes", &ProperReport::anticommutes)
      .def_readonly("rank_ok", &ProperReport::rank_ok)
      .def_readonly("scalar_square", &ProperReport::scalar_square);

  py::class_<LocalIndexResult>(m, "LocalIndexResult")
      .def_readonly("dim_ker_plus", &LocalIndexResult::dim_ker_plus)
      .def_readonly("dim_ker_minus", &LocalIndexResult::dim_ker_minus)
      .def_readonly("index", &LocalIndexResult::index)
      .def_property_readonly(
          "method", [](const LocalIndexResult& r) { return to_string(r.method); });

  py::class_<SpectrumResult>(m, "SpectrumResult")
      .def_readonly("s", &SpectrumResult::s)
      .def_readonly("ker_plus", &SpectrumResult::ker_plus)
      .def_readonly("ker_minus", &SpectrumResult::ker_minus)
      .def_readonly("flatness", &SpectrumResult::flatness)
      .def_property_readonly("betti",
                             [](const SpectrumResult& r) -> py::object {
                               if (!r.betti) return py::none();
                               return py::cast(*r.betti);
                             })
      .def("index", &SpectrumResult::index)
      .def_property_readonly("eigenvalues", [](const SpectrumResult& r) {
        std::vector<std::tuple<double, int, double>> out;
        for (const auto& rec : r.records)
          out.emplace_back(rec.eigenvalue, rec.grading, rec.cluster_mu);
        return out;
      });

  py::class_<PoincareHopfResult>(m, "PoincareHopfResult")
      .def_readonly("per_zero", &PoincareHopfResult::per_zero)
      .def_readonly("chi", &PoincareHopfResult::chi);

  py::class_<PinSphereResult>(m, "PinSphereResult")
      .def_readonly("per_zero", &PinSphereResult::per_zero)
      .def_readonly("total", &PinSphereResult::total);

  m.def("build_irreducible_rep", &build_irreducible_rep, py::arg("n"));
  m.def(
      "rep_max_residual",
      [](const CliffordRep& rep) { return check_rep_invariants(rep).max(); },
      "largest residual of the defining relations");
  m.def(
      "build_graded_module",
      [](const CliffordRep& rep, const std::string& parity, int a, int b) {
        return build_graded_module(rep, make_twist(parity, a, b));
      },
      py::arg("rep"), py::arg("parity"), py::arg("a"), py::arg("b") = 0);
  m.def("admissible_rank", &admissible_rank, py::arg("k"), py::arg("r"));
  m.def("build_invertible_pencil", &build_invertible_pencil, py::arg("k"),
        py::arg("m"));
  m.def("de_rham_module", &de_rham_module, py::arg("n"));
  m.def("de_rham_perturbation", &de_rham_perturbation, py::arg("v"));

  m.def("check_anticommutation", &check_anticommutation, py::arg("module"),
        py::arg("z"), py::arg("tol") = kAnticommuteTol);
  m.def("check_proper", &check_proper, py::arg("p"), py::arg("samples") = 1000,
        py::arg("seed") = kDefaultSeed);
  m.def(
      "build_even",
      [](const CliffordRep& rep, int w, const std::vector<Matrix>& phis) {
        return build_even(rep, TwistSpec::even(w, w), phis);
      },
      py::arg("rep"), py::arg("w"), py::arg("phis"));
  m.def("build_odd", &build_odd, py::arg("rep"), py::arg("dim_w_prime"),
        py::arg("phis"));
  m.def(
      "normalize",
      [](const LinearPerturbation& p) { return normalize(p).zt; },
      "normalized anticommuting coefficients");

  m.def("local_index_eigenspace", &local_index_eigenspace, py::arg("module"),
        py::arg("zt"));
  m.def(
      "hermite_kernel_oracle",
      [](const GradedModule& module, const std::vector<Matrix>& zs, int cutoff) {
        return hermite_kernel_oracle(ModelOperator::from_point(module, zs),
                                     cutoff);
      },
      py::arg("module"), py::arg("zs"), py::arg("cutoff") = 14);
  m.def(
      "fredholm_index_oracle",
      [](const GradedModule& module, const std::vector<Matrix>& zs,
         double radius, int points) {
        const GridSpec grid =
            radius > 0 ? GridSpec{radius, points} : default_grid(module.n);
        return fredholm_index_oracle(module, zs, grid);
      },
      py::arg("module"), py::arg("zs"), py::arg("radius") = 0.0,
      py::arg("points") = 0);
  m.def(
      "global_index",
      [](const std::vector<LinearPerturbation>& points) {
        return global_index(points);
      },
      py::arg("points"));

  m.def("circle_counterexample", &circle_counterexample, py::arg("s"),
        py::arg("n_modes"));
  m.def("circle_morse_witten", &circle_morse_witten, py::arg("s"),
        py::arg("n_modes"));
  m.def(
      "torus_de_rham_index",
      [](double s, int n_modes) {
        return torus_de_rham_index(TrigField2::standard(), s, n_modes);
      },
      py::arg("s"), py::arg("n_modes"));

  m.def(
      "poincare_hopf",
      [](const std::vector<RealMatrix>& linearizations) {
        VectorFieldSpec spec;
        if (linearizations.empty())
          throw precondition_error("poincare_hopf: no zeros given");
        spec.n = static_cast<int>(linearizations[0].rows());
        for (size_t i = 0; i < linearizations.size(); ++i)
          spec.zeros.push_back({"zero" + std::to_string(i), linearizations[i]});
        return poincare_hopf(spec);
      },
      py::arg("linearizations"));
  m.def(
      "commuting_lemma_check",
      [](const RealVector& b1, const RealVector& b2) {
        return commuting_lemma_check(
            b1, b2, build_irreducible_rep(static_cast<int>(b1.size())));
      },
      py::arg("b1"), py::arg("b2"));
  m.def("pin_sphere_indices", &pin_sphere_indices, py::arg("m"));
  m.def("submanifold_vanishing",
        [](int tangent_dim, int normal_rank, double scale) {
          const SubmanifoldReport r =
              submanifold_vanishing(tangent_dim, normal_rank, scale);
          return py::make_tuple(r.ok, r.index);
        },
        py::arg("tangent_dim"), py::arg("normal_rank"),
        py::arg("omega_scale") = 1.0);
}
