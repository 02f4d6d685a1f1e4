#include "cocycle_lab/algebra.hpp"
#include "cocycle_lab/catalog.hpp"
#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/error.hpp"
#include "cocycle_lab/euclid.hpp"
#include "cocycle_lab/experiment.hpp"
#include "cocycle_lab/gradient.hpp"
#include "cocycle_lab/group.hpp"
#include "cocycle_lab/multiplier.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cocycle_lab;

namespace {

using GroupPtr = std::shared_ptr<const FiniteGroup>;
// pybind11 holders cannot be pointers to const.
using PyGroup = std::shared_ptr<FiniteGroup>;

PyGroup share(FiniteGroup g) { return std::make_shared<FiniteGroup>(std::move(g)); }
PyGroup expose(const GroupPtr& g) { return std::const_pointer_cast<FiniteGroup>(g); }

GroupPtr finite_of(const LengthFunction& psi) {
  const GroupPtr& g = psi.group().finite_ptr();
  if (!g) throw Error(ErrorKind::not_applicable, "operation needs a finite group");
  return g;
}

AlgebraElement element(const GroupPtr& g, const Eigen::VectorXcd& coeffs) { return AlgebraElement(g, coeffs); }

py::dict residual_dict(const CocycleResiduals& r) {
  py::dict d;
  d["gram"] = r.gram;
  d["length"] = r.length;
  d["law"] = r.law;
  d["orthogonality"] = r.orthogonality;
  d["representation"] = r.representation;
  d["coverage"] = r.coverage;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Length functions, cocycles and multipliers on finite groups.";

  static py::exception<Error> error(m, "CocycleLabError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<FiniteGroup, PyGroup>(m, "Group")
      .def_property_readonly("order", &FiniteGroup::order)
      .def_property_readonly("name", &FiniteGroup::name)
      .def_property_readonly("labels", &FiniteGroup::labels)
      .def_property_readonly("inverses", &FiniteGroup::inverses)
      .def_property_readonly("table",
                             [](const FiniteGroup& g) {
                               const auto n = static_cast<py::ssize_t>(g.order());
                               py::array_t<std::uint32_t> a({n, n});
                               std::copy(g.table().begin(), g.table().end(), a.mutable_data());
                               return a;
                             })
      .def("mul", &FiniteGroup::mul)
      .def("inv", &FiniteGroup::inv)
      .def("label", &FiniteGroup::label)
      .def("is_abelian", &FiniteGroup::is_abelian)
      .def("__repr__", [](const FiniteGroup& g) { return "<Group " + g.name() + " of order " + std::to_string(g.order()) + ">"; });

  m.def("cyclic", [](Index n) { return share(build_cyclic(n)); }, py::arg("n"));
  m.def("dihedral", [](Index n) { return share(build_dihedral(n)); }, py::arg("n"));
  m.def("symmetric", [](Index n) { return share(build_symmetric(n)); }, py::arg("n"));
  m.def("heisenberg_mod", [](Index n) { return share(build_heisenberg_mod(n)); }, py::arg("n"));
  m.def("product", [](const FiniteGroup& a, const FiniteGroup& b) { return share(build_product(a, b)); });
  m.def(
      "group_from_table",
      [](py::array_t<std::uint32_t, py::array::c_style | py::array::forcecast> table, const std::string& name) {
        if (table.ndim() != 2 || table.shape(0) != table.shape(1)) {
          throw Error(ErrorKind::validation, "table must be a square matrix");
        }
        std::vector<std::uint32_t> flat(table.data(), table.data() + table.size());
        return share(FiniteGroup::from_table(static_cast<Index>(table.shape(0)), std::move(flat), {}, name));
      },
      py::arg("table"), py::arg("name") = "custom");

  py::class_<LengthFunction>(m, "LengthFunction")
      .def(py::init([](const PyGroup& g, std::vector<double> values) { return LengthFunction(GroupCarrier(g), std::move(values)); }),
           py::arg("group"), py::arg("values"))
      .def_property_readonly("values", &LengthFunction::values)
      .def_property_readonly("group", [](const LengthFunction& psi) { return expose(psi.group().finite_ptr()); })
      .def("__len__", &LengthFunction::size)
      .def("__getitem__", &LengthFunction::operator[]);

  py::class_<Cocycle, std::shared_ptr<Cocycle>>(m, "Cocycle")
      .def_readonly("dim", &Cocycle::dim)
      .def_readonly("b", &Cocycle::b)
      .def_readonly("gram", &Cocycle::gram)
      .def_readonly("kind", &Cocycle::kind)
      .def_property_readonly("order", &Cocycle::order)
      .def_property_readonly("alpha", [](const Cocycle& c) { return c.alpha; })
      .def_property_readonly("group", [](const Cocycle& c) { return expose(c.group.finite_ptr()); });

  m.def("zn_roots", &catalog::zn_roots, py::arg("n"));
  m.def("heisenberg_roots", &catalog::heisenberg_roots, py::arg("n"));
  m.def(
      "dihedral_plane",
      [](Index n, const Eigen::Vector2d& v) {
        return catalog::linear_coboundary(share(build_dihedral(n)), catalog::dihedral_plane_rep(n), v);
      },
      py::arg("n"), py::arg("v") = Eigen::Vector2d(1.0, 0.5));
  m.def(
      "regular_coboundary", [](const PyGroup& g, const Eigen::VectorXd& v) { return catalog::regular_coboundary(g, v); },
      py::arg("group"), py::arg("v"));
  m.def(
      "random_length",
      [](const PyGroup& g, std::uint64_t seed, int terms, double scale) {
        Rng rng(seed);
        return catalog::random_length(g, rng, terms, scale);
      },
      py::arg("group"), py::arg("seed"), py::arg("terms") = 2, py::arg("scale") = 4.0);

  m.def("gromov_form", [](const LengthFunction& psi) { return gromov_form(psi); });
  m.def(
      "is_conditionally_negative",
      [](const LengthFunction& psi, double tol) {
        const NegativityCertificate c = is_conditionally_negative(psi, tol);
        return py::make_tuple(c.pass, c.min_eig);
      },
      py::arg("psi"), py::arg("tol") = kDefaultTol);
  m.def("schoenberg_grid", &schoenberg_grid);
  m.def(
      "schoenberg_check",
      [](const LengthFunction& psi, const std::vector<double>& ts, double tol) {
        py::list out;
        for (const SchoenbergVerdict& v : schoenberg_check(psi, ts, tol)) out.append(py::make_tuple(v.t, v.min_eig, v.psd));
        return out;
      },
      py::arg("psi"), py::arg("t_list"), py::arg("tol") = 1e-8);
  m.def("build_cocycle", [](const LengthFunction& psi) { return build_cocycle(psi); }, py::arg("psi"));
  m.def("induced_length", &induced_length, py::arg("cocycle"));
  m.def("cocycle_residuals", [](const Cocycle& c, const LengthFunction& psi) { return residual_dict(cocycle_residuals(c, &psi)); });
  m.def("ball_counts", [](const Cocycle& c, const std::vector<double>& radii) {
    py::list out;
    for (const BallCount& b : ball_count_check(c, radii)) out.append(py::make_tuple(b.radius, b.count, b.bound, b.pass));
    return out;
  });

  m.def(
      "lp_norm", [](const PyGroup& g, const Eigen::VectorXcd& f, double p) { return lp_norm(element(g, f), p); },
      py::arg("group"), py::arg("coeffs"), py::arg("p"));
  m.def("semigroup_apply", [](const LengthFunction& psi, double t, const Eigen::VectorXcd& f) {
    return Eigen::VectorXcd(semigroup_apply(psi, t, element(finite_of(psi), f)).coeffs());
  });
  m.def("bmo_norm", [](const LengthFunction& psi, const Eigen::VectorXcd& f) {
    const BmoReport r = bmo_norm(psi, element(finite_of(psi), f), default_bmo_grid());
    py::dict d;
    d["column"] = r.column;
    d["row"] = r.row;
    d["max"] = r.max;
    d["boundary_argmax"] = r.boundary_argmax;
    return d;
  });
  m.def("gamma", [](const LengthFunction& psi, const Eigen::VectorXcd& f1, const Eigen::VectorXcd& f2) {
    const GroupPtr g = finite_of(psi);
    return Eigen::VectorXcd(gamma_generator(psi, element(g, f1), element(g, f2)).coeffs());
  });
  m.def(
      "meyer_ratio",
      [](const LengthFunction& psi, double p, int samples, std::uint64_t seed) {
        const MeyerStats s = meyer_ratio(psi, p, samples, seed);
        py::dict d;
        d["p"] = s.p;
        d["ratios"] = s.ratios;
        d["min"] = s.min;
        d["max"] = s.max;
        d["median"] = s.median;
        return d;
      },
      py::arg("psi"), py::arg("p"), py::arg("samples") = 200, py::arg("seed") = 0);

  m.def("riesz_symbol", [](const Cocycle& c, const Eigen::VectorXd& eta) { return Eigen::VectorXcd(riesz_symbol(c, eta).m); });
  m.def(
      "lp_norm_search",
      [](const PyGroup& g, const Eigen::VectorXcd& symbol, double p, int trials, int steps, std::uint64_t seed) {
        const LpSearchResult r = lp_norm_search(explicit_symbol(GroupCarrier(g), symbol), p, trials, steps, seed);
        return py::make_tuple(r.lower_bound, r.per_trial);
      },
      py::arg("group"), py::arg("symbol"), py::arg("p"), py::arg("trials") = 4, py::arg("steps") = 200,
      py::arg("seed") = 0);

  m.def(
      "donut_symbol",
      [](double alpha, double beta, double gamma) {
        FrequencySymbol s = donut_symbol(alpha, beta, gamma);
        return std::function<cplx(double)>(s);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("gamma"));
  m.def(
      "norm_sweep",
      [](double alpha, double beta, double gamma, double p, const std::vector<std::size_t>& sizes, int trials, int steps,
         std::uint64_t seed) {
        py::list out;
        for (const SweepRow& r : empirical_norm_sweep(donut_symbol(alpha, beta, gamma), p, sizes, trials, steps, seed)) {
          py::dict d;
          d["n"] = r.n;
          d["p"] = r.p;
          d["lower_bound"] = r.lower_bound;
          d["exact_l2"] = r.exact_l2;
          out.append(d);
        }
        return out;
      },
      py::arg("alpha"), py::arg("beta"), py::arg("gamma"), py::arg("p"), py::arg("sizes"), py::arg("trials") = 2,
      py::arg("steps") = 100, py::arg("seed") = 0);

  m.def("commands", &experiment::commands);
  m.def(
      "run_json",
      [](const std::string& config) {
        const experiment::RunResult r = experiment::run(experiment::ExperimentConfig::from_json(io::json::parse(config)));
        return py::make_tuple(r.report.dump(), r.pass);
      },
      py::arg("config"));
}
