#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "gwlab/acceptance.hpp"
#include "gwlab/commands.hpp"
#include "gwlab/error.hpp"
#include "gwlab/harness.hpp"
#include "gwlab/limits.hpp"
#include "gwlab/model_io.hpp"
#include "gwlab/moments.hpp"

namespace py = pybind11;
using namespace gwlab;

namespace {

std::array<double, 2> vec(Vec2 v) { return {v[0], v[1]}; }

std::array<std::array<double, 2>, 2> mat(const Mat2& m) {
  return {{{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}};
}

py::array_t<std::int64_t> simulate(const ModelParams& p, long K, std::uint64_t seed, long reps, int threads) {
  if (reps < 1) throw ValidationError("reps must be positive");
  if (K < 0) throw ValidationError("K must be nonnegative");
  const auto plan = seed_plan(seed, static_cast<std::uint64_t>(reps));
  std::vector<PathRecord> paths;
  {
    py::gil_scoped_release release;
    paths = map_replicates(p, K, plan, threads, SamplingMode::Aggregate, [](const PathRecord& r) { return r; });
  }
  py::array_t<std::int64_t> out({reps, K + 1, 2L});
  auto v = out.mutable_unchecked<3>();
  for (long r = 0; r < reps; ++r)
    for (long k = 0; k <= K; ++k) {
      // Report in the labels of the input model.
      const Population& x = paths[static_cast<std::size_t>(r)][k];
      v(r, k, 0) = p.swapped ? x.type2 : x.type1;
      v(r, k, 1) = p.swapped ? x.type1 : x.type2;
    }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Core routines of gwlab";
  m.attr("__version__") = GWLAB_VERSION;

  // Translators run newest first, so the base class goes first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<OverflowError>(m, "OverflowError", PyExc_OverflowError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

  py::class_<ModelParams>(m, "Model")
      .def_static("from_json", [](const std::string& text) { return parse_model(nlohmann::json::parse(text)); },
                  py::arg("text"))
      .def_static("load", &load_model, py::arg("path"))
      .def_static("archetype", &archetype_model, py::arg("case_number"))
      .def_property_readonly("case", [](const ModelParams& p) { return p.case_label.to_string(); })
      .def_property_readonly("case_number", [](const ModelParams& p) { return p.case_label.number(); })
      .def_property_readonly("swapped", [](const ModelParams& p) { return p.swapped; })
      .def_property_readonly("A", [](const ModelParams& p) { return mat(p.A); })
      .def_property_readonly("b", [](const ModelParams& p) { return vec(p.b); })
      .def("to_json", [](const ModelParams& p) { return to_json(p).dump(); })
      .def("mean", [](const ModelParams& p, long k) { return vec(exact_mean(p, k).closed_form); }, py::arg("k"))
      .def("mean_generic", [](const ModelParams& p, long k) { return vec(exact_mean(p, k).generic); }, py::arg("k"))
      .def("cov", [](const ModelParams& p, long k) { return mat(exact_cov(p, k)); }, py::arg("k"))
      .def("simulate", &simulate, py::arg("K"), py::arg("seed") = 1, py::arg("reps") = 1, py::arg("threads") = 0,
           "Paths as an int64 array of shape (reps, K + 1, 2), coordinates in the input labels.");

  m.def("classify", [](double a11, double a21, double a22) { return classify(Mat2(a11, 0.0, a21, a22)).to_string(); },
        py::arg("a11"), py::arg("a21"), py::arg("a22"));
  m.def("laplace_sbp", &laplace_sbp, py::arg("alpha"), py::arg("beta"), py::arg("t"), py::arg("nu"));
  m.def("laplace_joint_case2", &laplace_joint_case2, py::arg("s1"), py::arg("s2"), py::arg("t"), py::arg("b1"),
        py::arg("v"), py::arg("a21"));
  m.def("laplace_joint_fosterney", &laplace_joint_fosterney, py::arg("s1"), py::arg("s2"), py::arg("b1"), py::arg("v"),
        py::arg("a21"), py::arg("tol") = 1e-12);
  m.def("sbp_marginal_cdf", &sbp_marginal_cdf, py::arg("x"), py::arg("b"), py::arg("v"), py::arg("t"));
  m.def(
      "stationary_pmf",
      [](const std::string& offspring, const std::string& immigration, long N, long M) {
        const auto G = parse_univariate(nlohmann::json::parse(offspring), "offspring");
        const auto H = parse_univariate(nlohmann::json::parse(immigration), "immigration");
        return stationary_law(G, H, N, M).pmf;
      },
      py::arg("offspring"), py::arg("immigration"), py::arg("N") = 256, py::arg("M") = 4096);

  m.def(
      "run_command",
      [](const std::string& subcommand, std::optional<std::string> model, std::optional<int> case_number,
         std::uint64_t seed, long k, long reps, std::vector<long> n, std::vector<double> grid, long limit_paths,
         long paths, double T, double dt, long N, long M, int threads) {
        RunConfig cfg;
        cfg.subcommand = subcommand;
        cfg.model_path = std::move(model);
        cfg.case_number = case_number;
        cfg.seed = seed;
        cfg.k = k;
        cfg.reps = reps;
        cfg.n_list = std::move(n);
        cfg.grid = std::move(grid);
        cfg.limit_paths = limit_paths;
        cfg.paths = paths;
        cfg.T = T;
        cfg.dt = dt;
        cfg.N = N;
        cfg.M = M;
        cfg.threads = threads;
        CommandResult r;
        {
          py::gil_scoped_release release;
          r = run_command(cfg);
        }
        std::map<std::string, std::string> files;
        for (auto& f : r.files) files[f.name] = std::move(f.content);
        return files;
      },
      py::arg("subcommand"), py::arg("model") = py::none(), py::arg("case") = py::none(), py::arg("seed") = 1,
      py::arg("k") = 100, py::arg("reps") = 20000, py::arg("n") = std::vector<long>{100, 300, 1000},
      py::arg("grid") = std::vector<double>{0.25, 0.5, 1.0}, py::arg("limit_paths") = 100000, py::arg("paths") = 10,
      py::arg("T") = 1.0, py::arg("dt") = 1e-3, py::arg("N") = 256, py::arg("M") = 4096, py::arg("threads") = 0,
      "Runs a subcommand in memory and returns {file name: content}.");

  m.def(
      "run_acceptance",
      [](std::vector<int> only, std::uint64_t seed, int threads) {
        AcceptanceOptions o;
        o.only = std::move(only);
        o.seed = seed;
        o.threads = threads;
        std::vector<CriterionResult> results;
        {
          py::gil_scoped_release release;
          results = run_acceptance(o);
        }
        py::list out;
        for (const auto& r : results) {
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["pass"] = r.pass;
          d["seconds"] = r.seconds;
          d["budget_seconds"] = r.budget_seconds;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("only") = std::vector<int>{}, py::arg("seed") = AcceptanceOptions{}.seed, py::arg("threads") = 0);
}
