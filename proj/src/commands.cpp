#include "gwlab/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gwlab/error.hpp"
#include "gwlab/harness.hpp"
#include "gwlab/limits.hpp"
#include "gwlab/model_io.hpp"
#include "gwlab/moments.hpp"
#include "gwlab/parallel.hpp"

namespace gwlab {

using nlohmann::json;

namespace {

constexpr double kPmfPrintFloor = 1e-15;

std::string opt(double x) { return std::isnan(x) ? "" : format_double(x); }

std::string header(const RunConfig& cfg) {
  return "# " + tool_version() + "\n# config: " + cfg.echo().dump() + "\n";
}

ModelParams resolve_model(const RunConfig& cfg) {
  if (cfg.model_path) {
    ModelParams p = load_model(*cfg.model_path);
    if (cfg.case_number && cfg.subcommand != "experiment" &&
        p.case_label.number() != *cfg.case_number)
      throw ValidationError("case mismatch: model file is " + p.case_label.to_string() +
                            ", --case requested Case" + std::to_string(*cfg.case_number));
    return p;
  }
  if (cfg.case_number) return archetype_model(*cfg.case_number);
  throw ValidationError("either --model or --case is required");
}

// Vec2/Mat2 in the labels of the input.
Vec2 original(Vec2 v, bool swapped) { return swapped ? Vec2{v[1], v[0]} : v; }
Mat2 original(const Mat2& m, bool swapped) {
  return swapped ? Mat2(m(1, 1), m(1, 0), m(0, 1), m(0, 0)) : m;
}

json stats_json(const Statistic& s) {
  auto o = [](const auto& v) -> json { return v ? json(*v) : json(nullptr); };
  return {{"name", s.name},       {"time", o(s.time)},   {"n", o(s.n)},
          {"estimate", s.estimate}, {"se", o(s.se)},     {"target", o(s.target)},
          {"tolerance", o(s.tolerance)}, {"pass", o(s.pass)}, {"sample_size", s.sample_size},
          {"note", s.note}};
}

CommandResult cmd_simulate(const RunConfig& cfg) {
  const ModelParams params = resolve_model(cfg);
  const auto plan = seed_plan(cfg.seed, static_cast<std::uint64_t>(cfg.reps));
  const auto paths = map_replicates(params, cfg.k, plan, cfg.threads, cfg.sampling,
                                    [](const PathRecord& p) { return p; });
  std::ostringstream os;
  os << header(cfg) << "# model: " << to_json(params).dump() << "\n";
  os << "replicate,k,X1,X2\n";
  for (std::size_t r = 0; r < paths.size(); ++r)
    for (long k = 0; k <= paths[r].horizon(); ++k) {
      const Population& x = paths[r][k];
      const auto x1 = params.swapped ? x.type2 : x.type1;
      const auto x2 = params.swapped ? x.type1 : x.type2;
      os << r << ',' << k << ',' << x1 << ',' << x2 << '\n';
    }
  return {{{"paths.csv", os.str()}},
          "simulated " + std::to_string(cfg.reps) + " path(s) of horizon " + std::to_string(cfg.k) +
              " under " + params.case_label.to_string(),
          0};
}

CommandResult cmd_moments(const RunConfig& cfg) {
  const ModelParams params = resolve_model(cfg);
  const bool s = params.swapped;
  std::ostringstream csv;
  csv << header(cfg) << "k,mean1,mean2,var11,var12,var22\n";
  json rows = json::array();
  const auto generic = mean_generic_series(params, cfg.k);
  for (long k = 0; k <= cfg.k; ++k) {
    const Vec2 mean = original(mean_closed_form(params, k), s);
    const Vec2 gen = original(generic[static_cast<std::size_t>(k)], s);
    const Mat2 var = k == 0 ? Mat2{} : original(exact_cov(params, k), s);
    const Mat2 emm = k == 0 ? Mat2{} : original(expected_mm(params, k), s);
    csv << k << ',' << format_double(mean[0]) << ',' << format_double(mean[1]) << ','
        << format_double(var(0, 0)) << ',' << format_double(var(0, 1)) << ','
        << format_double(var(1, 1)) << '\n';
    rows.push_back({{"k", k},
                    {"mean", {mean[0], mean[1]}},
                    {"mean_generic", {gen[0], gen[1]}},
                    {"cov", {{var(0, 0), var(0, 1)}, {var(1, 0), var(1, 1)}}},
                    {"E_MMt", {{emm(0, 0), emm(0, 1)}, {emm(1, 0), emm(1, 1)}}}});
  }
  json doc{{"tool", tool_version()}, {"config", cfg.echo()}, {"model", to_json(params)}, {"rows", rows}};
  if (params.case_label.covered()) {
    json g = json::object();
    for (const auto& e : growth_exponents(params.case_label)) g[to_string(e.quantity)] = e.exponent;
    doc["growth_exponents"] = g;
    doc["growth_exponents_note"] = s ? "internal labels (types were swapped)" : "";
  }
  return {{{"moments.csv", csv.str()}, {"moments.json", doc.dump(2) + "\n"}},
          "exact moments for k = 0.." + std::to_string(cfg.k) + " under " + params.case_label.to_string(),
          0};
}

CommandResult cmd_stationary(const RunConfig& cfg) {
  UnivariateLaw G, H;
  json inputs;
  std::optional<json> doc_in;
  if (cfg.model_path) doc_in = read_json_file(*cfg.model_path);
  if (doc_in && doc_in->is_object() && doc_in->contains("offspring")) {
    const SingleTypeModel m = parse_single_type(*doc_in);
    G = m.offspring;
    H = m.immigration;
  } else {
    const ModelParams params = doc_in ? parse_model(*doc_in) : resolve_model(cfg);
    int coord;
    if (cfg.coordinate) coord = *cfg.coordinate;
    else if (params.case_label.kind == CaseKind::Case3) coord = params.swapped ? 1 : 2;
    else if (params.case_label.kind == CaseKind::Case5) coord = params.swapped ? 2 : 1;
    else throw ValidationError("stationary: --coordinate is required unless the model is Case3 or Case5");
    // internal index of the requested original coordinate
    const int internal = params.swapped ? 2 - coord : coord - 1;
    if (internal != 0 && internal != 1) throw ValidationError("--coordinate must be 1 or 2");
    if (internal == 1 && params.a21() > kCriticalityTolerance)
      throw ValidationError("stationary: this coordinate receives offspring from the other type");
    G = (internal == 0 ? params.offspring_type1 : params.offspring_type2).marginal(internal);
    H = params.immigration.marginal(internal);
    inputs["coordinate"] = coord;
  }
  const StationaryLaw law = stationary_law(G, H, cfg.N, cfg.M);
  inputs["offspring"] = to_json(G);
  inputs["immigration"] = to_json(H);

  long last = 0;
  for (long k = 0; k <= cfg.N; ++k)
    if (law.pmf[static_cast<std::size_t>(k)] >= kPmfPrintFloor) last = k;
  std::ostringstream csv;
  csv << header(cfg) << "# rows after the last entry >= 1e-15 are omitted\n" << "k,p_k\n";
  for (long k = 0; k <= last; ++k) csv << k << ',' << format_double(law.pmf[static_cast<std::size_t>(k)]) << '\n';
  json doc{{"tool", tool_version()},
           {"config", cfg.echo()},
           {"inputs", inputs},
           {"leaked", law.leaked},
           {"aliased", law.aliased},
           {"mean_from_pmf", law.mean_from_pmf},
           {"mean_theory", law.mean_theory}};
  return {{{"stationary.csv", csv.str()}, {"stationary.json", doc.dump(2) + "\n"}},
          "stationary law: mean " + format_double(law.mean_from_pmf) + " (theory " +
              format_double(law.mean_theory) + "), leaked " + format_double(law.leaked),
          0};
}

CommandResult cmd_limit(const RunConfig& cfg) {
  const ModelParams params = resolve_model(cfg);
  if (!params.case_label.covered())
    throw ValidationError("limit: model is " + params.case_label.to_string());
  const auto plan = seed_plan(cfg.seed, static_cast<std::uint64_t>(cfg.paths), StreamPurpose::LimitPath);
  std::vector<LimitPath> paths(plan.size());
  parallel_for(plan.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
    RngStream rng = open_stream(plan[i]);
    paths[i] = simulate_limit_case(params, cfg.T, cfg.dt, rng);
  });
  std::ostringstream csv;
  csv << header(cfg) << "path,t,x1,x2,integral\n";
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const LimitPath& p = paths[i];
    for (std::size_t g = 0; g < p.t.size(); ++g) {
      double a = p.x1.empty() ? NAN : p.x1[g];
      double b = p.x2.empty() ? NAN : p.x2[g];
      if (params.swapped) std::swap(a, b);
      csv << i << ',' << format_double(p.t[g]) << ',' << opt(a) << ',' << opt(b) << ','
          << format_double(p.integral[g]) << '\n';
    }
  }

  // Closed-form transforms of the limit at T.
  json records = json::array();
  const SdeConfig sde = limit_sde(params, cfg.T, cfg.dt);
  for (double s : {0.25, 0.5, 1.0, 2.0}) {
    const double nu = sde.diffusion > 0.0 ? 2.0 * sde.drift / sde.diffusion - 1.0 : NAN;
    const double value = sde.diffusion > 0.0 && sde.drift > 0.0
                             ? laplace_sbp(s * sde.diffusion / 4.0, 0.0, cfg.T, nu)
                             : std::exp(-s * sde.drift * cfg.T);
    records.push_back({{"inputs", {{"transform", "marginal"}, {"s", s}, {"t", cfg.T}, {"drift", sde.drift},
                                   {"diffusion", sde.diffusion}}},
                       {"value", value}});
  }
  if (params.case_label.kind == CaseKind::Case2 && sde.diffusion > 0.0) {
    for (double s1 : {0.0, 0.5, 1.0})
      for (double s2 : {0.25, 0.5, 1.0}) {
        records.push_back({{"inputs", {{"transform", "joint_case2"}, {"s1", s1}, {"s2", s2}, {"t", cfg.T},
                                       {"b1", params.b[0]}, {"v", sde.diffusion}, {"a21", params.a21()}}},
                           {"value", laplace_joint_case2(s1, s2, cfg.T, params.b[0], sde.diffusion, params.a21())}});
      }
  }
  json doc{{"tool", tool_version()}, {"config", cfg.echo()}, {"model", to_json(params)}, {"transforms", records}};
  return {{{"limit_paths.csv", csv.str()}, {"limit_transforms.json", doc.dump(2) + "\n"}},
          "simulated " + std::to_string(cfg.paths) + " limit path(s) for " + params.case_label.to_string(),
          0};
}

CommandResult cmd_experiment(const RunConfig& cfg) {
  const ModelParams params = resolve_model(cfg);
  CaseLabel requested = cfg.case_number ? CaseLabel::of(*cfg.case_number) : params.case_label;
  ExperimentConfig ec;
  ec.n_list = cfg.n_list;
  ec.reps = cfg.reps;
  ec.grid = cfg.grid;
  ec.seed = cfg.seed;
  ec.limit_paths = cfg.limit_paths;
  ec.dt = cfg.dt;
  ec.sampling = cfg.sampling;
  ec.threads = cfg.threads;
  ec.stationary_N = cfg.N;
  ec.stationary_M = cfg.M;
  const ExperimentReport rep = run_case_experiment(requested, params, ec);

  json stats = json::array();
  std::ostringstream csv;
  csv << header(cfg) << "name,time,n,estimate,se,target,tolerance,pass,sample_size,note\n";
  for (const auto& s : rep.statistics) {
    stats.push_back(stats_json(s));
    auto o = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    csv << s.name << ',' << o(s.time) << ',' << (s.n ? std::to_string(*s.n) : "") << ','
        << format_double(s.estimate) << ',' << o(s.se) << ',' << o(s.target) << ',' << o(s.tolerance)
        << ',' << (s.pass ? (*s.pass ? "true" : "false") : "") << ',' << s.sample_size << ",\""
        << s.note << "\"\n";
  }
  std::ostringstream plot;
  plot << header(cfg) << "series,x,empirical,target\n";
  for (const auto& p : rep.plot)
    plot << p.series << ',' << format_double(p.x) << ',' << format_double(p.empirical) << ','
         << format_double(p.target) << '\n';

  json doc{{"tool", tool_version()},
           {"case", rep.case_label.to_string()},
           {"config", cfg.echo()},
           {"model", to_json(params)},
           {"coordinates_note", rep.swapped ? "statistics use relabelled types: x1 is input type 2" : "input labels"},
           {"statistics", stats},
           {"all_pass", rep.all_passed()}};
  std::size_t failed = 0, judged = 0;
  for (const auto& s : rep.statistics)
    if (s.pass) {
      ++judged;
      failed += !*s.pass;
    }
  return {{{"report.json", doc.dump(2) + "\n"}, {"report.csv", csv.str()}, {"plot.csv", plot.str()}},
          rep.case_label.to_string() + ": " + std::to_string(judged - failed) + "/" + std::to_string(judged) +
              " statistics within tolerance",
          0};
}

}  // namespace

std::string tool_version() { return std::string("gwlab ") + GWLAB_VERSION; }

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void RunConfig::validate() const {
  static const std::vector<std::string> known{"simulate", "moments", "stationary", "limit", "experiment"};
  if (std::find(known.begin(), known.end(), subcommand) == known.end())
    throw ValidationError("unknown subcommand \"" + subcommand + "\"");
  if (case_number && (*case_number < 1 || *case_number > 5))
    throw ValidationError("--case must be in 1..5");
  if (k < 0) throw ValidationError("--k must be nonnegative");
  if (reps < 1) throw ValidationError("--reps must be positive");
  if (paths < 1) throw ValidationError("--paths must be positive");
  if (!(T >= 0.0) || !(dt > 0.0)) throw ValidationError("--T must be >= 0 and --dt > 0");
  if (N < 0 || M < 2 * N) throw ValidationError("need --N >= 0 and --M >= 2N");
  if (coordinate && *coordinate != 1 && *coordinate != 2) throw ValidationError("--coordinate must be 1 or 2");
  for (long n : n_list)
    if (n < 1) throw ValidationError("--n values must be positive");
  for (double t : grid)
    if (!(t >= 0.0)) throw ValidationError("--grid values must be nonnegative");
}

json RunConfig::echo() const {
  json j;
  j["subcommand"] = subcommand;
  j["model"] = model_path ? json(*model_path) : json(nullptr);
  j["case"] = case_number ? json(*case_number) : json(nullptr);
  j["seed"] = seed;
  j["sampling"] = sampling == SamplingMode::Aggregate ? "aggregate" : "per-individual";
  if (subcommand == "simulate") {
    j["k"] = k;
    j["reps"] = reps;
  } else if (subcommand == "moments") {
    j["k"] = k;
  } else if (subcommand == "stationary") {
    j["N"] = N;
    j["M"] = M;
    j["coordinate"] = coordinate ? json(*coordinate) : json(nullptr);
  } else if (subcommand == "limit") {
    j["paths"] = paths;
    j["T"] = T;
    j["dt"] = dt;
  } else if (subcommand == "experiment") {
    j["n"] = n_list;
    j["reps"] = reps;
    j["grid"] = grid;
    j["limit_paths"] = limit_paths;
    j["dt"] = dt;
    j["N"] = N;
    j["M"] = M;
  }
  return j;
}

CommandResult run_command(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.subcommand == "simulate") return cmd_simulate(cfg);
  if (cfg.subcommand == "moments") return cmd_moments(cfg);
  if (cfg.subcommand == "stationary") return cmd_stationary(cfg);
  if (cfg.subcommand == "limit") return cmd_limit(cfg);
  return cmd_experiment(cfg);
}

void write_outputs(const std::string& dir, const std::vector<OutputFile>& files) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir + ": " + ec.message());
  for (const auto& f : files)
    if (fs::exists(fs::path(dir) / f.name))
      throw ValidationError("refusing to overwrite existing output " + (fs::path(dir) / f.name).string());
  for (const auto& f : files) {
    std::ofstream out(fs::path(dir) / f.name, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + (fs::path(dir) / f.name).string());
    out << f.content;
  }
}

}  // namespace gwlab
