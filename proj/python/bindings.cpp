#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ssr/bench.hpp"
#include "ssr/checks.hpp"
#include "ssr/priors.hpp"
#include "ssr/type1.hpp"
#include "ssr/type2.hpp"

namespace py = pybind11;
using namespace ssr;

PYBIND11_MODULE(_pesmssr, m) {
  m.doc() = "Type I / Type II Bayesian sparse signal recovery";

  // priors
  py::class_<PePrior>(m, "PePrior")
      .def(py::init<double, double>(), py::arg("p"), py::arg("sigma"))
      .def_readonly("p", &PePrior::p)
      .def_readonly("sigma", &PePrior::sigma);
  py::class_<GtPrior>(m, "GtPrior")
      .def(py::init<double, double, double>(), py::arg("sigma"), py::arg("p"),
           py::arg("q"))
      .def_readonly("sigma", &GtPrior::sigma)
      .def_readonly("p", &GtPrior::p)
      .def_readonly("q", &GtPrior::q)
      .def_readonly("log_eta", &GtPrior::log_eta);
  py::class_<GgMixing>(m, "GgMixing")
      .def(py::init<double, double, double>(), py::arg("p"), py::arg("sigma"),
           py::arg("q"));

  m.def("pe_log_density", &pe_log_density, py::arg("x"), py::arg("prior"));
  m.def("gt_log_density", &gt_log_density, py::arg("x"), py::arg("prior"));
  m.def("gg_log_density", &gg_log_density, py::arg("gamma"), py::arg("mixing"));
  m.def("laplacian_gsm_marginal", &laplacian_gsm_marginal, py::arg("x"),
        py::arg("a"), py::arg("rel_tol") = 1e-10);
  m.def("gt_weight", &gt_weight, py::arg("x"), py::arg("p"), py::arg("q"),
        py::arg("sigma"));
  m.def("weight_from_marginal", &weight_from_marginal, py::arg("x"),
        py::arg("dlog_density"), py::arg("p"));

  // type1
  py::class_<Type1Result>(m, "Type1Result")
      .def_readonly("x_hat", &Type1Result::x_hat)
      .def_readonly("weights", &Type1Result::weights)
      .def_readonly("objective_trace", &Type1Result::objective_trace)
      .def_readonly("outer_iters", &Type1Result::outer_iters)
      .def_readonly("converged", &Type1Result::converged);

  m.def(
      "lasso",
      [](const VectorXd& y, const MatrixXd& phi, double lam, double noise_var) {
        Type1Config cfg;
        cfg.preset = PriorPreset::lasso(lam);
        cfg.noise_var = noise_var;
        return em_type1(y, phi, cfg);
      },
      py::arg("y"), py::arg("phi"), py::arg("lam"), py::arg("noise_var") = 1e-6);
  m.def(
      "reweighted_l1",
      [](const VectorXd& y, const MatrixXd& phi, double eps, double noise_var) {
        Type1Config cfg;
        cfg.preset = PriorPreset::reweighted_l1(eps);
        cfg.noise_var = noise_var;
        return em_type1(y, phi, cfg);
      },
      py::arg("y"), py::arg("phi"), py::arg("eps") = 0.1,
      py::arg("noise_var") = 1e-6);
  m.def(
      "reweighted_l2",
      [](const VectorXd& y, const MatrixXd& phi, double eps, double noise_var) {
        Type1Config cfg;
        cfg.preset = PriorPreset::reweighted_l2(eps);
        cfg.noise_var = noise_var;
        return em_type1(y, phi, cfg);
      },
      py::arg("y"), py::arg("phi"), py::arg("eps") = 1.0,
      py::arg("noise_var") = 1e-6);
  m.def(
      "basis_pursuit",
      [](const VectorXd& y, const MatrixXd& phi) {
        const auto r = basis_pursuit(y, phi);
        return py::make_tuple(r.x_hat, r.converged);
      },
      py::arg("y"), py::arg("phi"));
  m.def("weighted_l2_step", &weighted_l2_step, py::arg("y"), py::arg("phi"),
        py::arg("w"), py::arg("noise_var"));

  // type2
  py::class_<Posterior>(m, "Posterior")
      .def_readonly("mu", &Posterior::mu)
      .def_readonly("sigma_diag", &Posterior::sigma_diag)
      .def_readonly("active", &Posterior::active);
  py::class_<Type2Result>(m, "Type2Result")
      .def_readonly("x_hat", &Type2Result::x_hat)
      .def_readonly("gamma", &Type2Result::gamma)
      .def_readonly("lambda_", &Type2Result::lambda)
      .def_readonly("iters", &Type2Result::iters)
      .def_readonly("converged", &Type2Result::converged);

  m.def("gaussian_posterior", &gaussian_posterior, py::arg("y"), py::arg("phi"),
        py::arg("gamma"), py::arg("noise_var"));
  m.def("update_gamma_l1", &update_gamma_l1);
  m.def("update_gamma_rel1", &update_gamma_rel1);
  m.def("update_gamma_rel2", &update_gamma_rel2);
  m.def(
      "type2_l1",
      [](const VectorXd& y, const MatrixXd& phi, double lam, bool update_lambda,
         double noise_var) {
        Type2Config cfg;
        cfg.rule = Type2Rule::l1(lam, update_lambda);
        cfg.noise_var = noise_var;
        return em_type2(y, phi, cfg);
      },
      py::arg("y"), py::arg("phi"), py::arg("lam") = 5.0,
      py::arg("update_lambda") = false, py::arg("noise_var") = 1e-6);
  m.def(
      "type2_reweighted_l1",
      [](const VectorXd& y, const MatrixXd& phi, double eps, double lambda_init,
         double noise_var) {
        Type2Config cfg;
        cfg.rule = Type2Rule::rel1(eps, lambda_init, true);
        cfg.noise_var = noise_var;
        return em_type2(y, phi, cfg);
      },
      py::arg("y"), py::arg("phi"), py::arg("eps") = 100.0,
      py::arg("lambda_init") = 1.0, py::arg("noise_var") = 1e-6);
  m.def(
      "type2_reweighted_l2",
      [](const VectorXd& y, const MatrixXd& phi, double eps, double noise_var) {
        Type2Config cfg;
        cfg.rule = Type2Rule::rel2(eps);
        cfg.noise_var = noise_var;
        return em_type2(y, phi, cfg);
      },
      py::arg("y"), py::arg("phi"), py::arg("eps") = 0.0,
      py::arg("noise_var") = 1e-6);

  // bench
  m.def(
      "gen_problem",
      [](int n, int m_, int k, const std::string& dist, std::uint64_t seed) {
        ProblemSpec spec;
        spec.n = n;
        spec.m = m_;
        spec.k = k;
        spec.coeff_dist = coeff_dist_from_name(dist);
        spec.seed = seed;
        const Problem p = gen_problem(spec);
        return py::make_tuple(p.phi, p.x_gen, p.y);
      },
      py::arg("n"), py::arg("m"), py::arg("k"), py::arg("dist") = "gaussian",
      py::arg("seed") = 0);
  m.def(
      "solve_named",
      [](const std::string& name, const MatrixXd& phi, const VectorXd& y,
         double noise_var) {
        Problem p;
        p.phi = phi;
        p.y = y;
        return make_algorithm(name, noise_var)(p);
      },
      py::arg("name"), py::arg("phi"), py::arg("y"),
      py::arg("noise_var") = 1e-6);
  m.def("known_algorithm_names", &known_algorithm_names);
  m.def(
      "score",
      [](const VectorXd& x_hat, const VectorXd& x_gen) {
        const auto out = score(x_hat, x_gen);
        return py::make_tuple(out.success, out.linf_err, out.l2_err);
      },
      py::arg("x_hat"), py::arg("x_gen"));

  m.def("run_checks", []() {
    py::list out;
    for (const auto& r : run_all_checks(false))
      out.append(py::make_tuple(r.name, r.max_error, r.tolerance, r.passed));
    return out;
  });
}
