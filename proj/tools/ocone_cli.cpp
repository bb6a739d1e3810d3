// Command-line front end: path transforms, the reflection-word solver, exact
// laws and their checks, discretization, and the Monte Carlo tests.
//
// Exit codes: 0 success or accept, 1 verification failure or reject,
// 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ocone.hpp"

namespace {

using namespace ocone;

constexpr int kOk = 0;
constexpr int kVerificationFailed = 1;
constexpr int kUsageError = 2;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("OCONE_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used, 0);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("OCONE_SEED is not an unsigned integer: '") + env + "'");
  }
}

struct Output {
  Config config;
  std::string format_flag;  // as given; empty selects the subcommand default

  [[nodiscard]] std::string format(const std::string& fallback) const {
    return format_flag.empty() ? fallback : format_flag;
  }

  void emit(const std::string& text) const {
    if (config.output.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream f(config.output);
    if (!f) throw UsageError("cannot open output file '" + config.output + "'");
    f << text;
  }

  void emit_json(const Json& body) const { emit(with_config(body, config).dump(2) + "\n"); }

  /// CSV with the resolved configuration on a leading comment line.
  void emit_csv(const std::string& table) const { emit("# config " + to_json(config).dump() + "\n" + table); }
};

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

SamplerKind sampler_kind(const std::string& name) {
  try {
    return parse_sampler_kind(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

/// Exact law of a named process at horizon m.
PathLaw named_law(const std::string& name, std::size_t m, double stay, const Config& config) {
  if (m > config.law_cap)
    throw UsageError("horizon " + std::to_string(m) + " exceeds the law cap " + std::to_string(config.law_cap));
  if (name == "zero") return enumerate_law(zero_process_spec(), m, config.law_cap);
  SamplerSpec spec;
  spec.kind = sampler_kind(name);
  spec.horizon = m;
  spec.stagnation_probability = stay;
  validate(spec);
  auto law = exact_law(spec, m);
  if (!law) throw UsageError("process '" + name + "' has no exact discrete law");
  return *law;
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string out;
  for (const auto& c : cells) out += (out.empty() ? "" : ",") + c;
  return out + "\n";
}

std::string num(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

/// (t, value) rows; a non-numeric first line is taken as a header.
SampledContinuousPath read_path_csv(const std::string& text, bool exact) {
  SampledContinuousPath p;
  p.exact_crossing = exact;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw UsageError("path CSV line " + std::to_string(line_no) + ": expected t,value");
    try {
      std::size_t u1 = 0, u2 = 0;
      const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
      const double t = std::stod(a, &u1), x = std::stod(b, &u2);
      p.times.push_back(t);
      p.values.push_back(x);
    } catch (const std::exception&) {
      if (line_no == 1) continue;
      throw UsageError("path CSV line " + std::to_string(line_no) + ": not numeric");
    }
  }
  return SampledContinuousPath(p.times, p.values, exact);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reflection invariance and Ocone martingale toolkit"};
  app.require_subcommand(1);

  Output out;
  Config& config = out.config;
  try {
    config.seed = default_seed();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  app.add_option("--format", out.format_flag, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--workers", config.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output,-o", config.output, "Write to this file instead of standard output");
  app.add_option("--seed", config.seed, "Seed (default: OCONE_SEED or 0)");
  app.add_option("--alpha", config.alpha, "Significance level of statistical tests");
  app.add_option("--z", config.z, "Standard-error multiple for the characteristic-function check");
  app.add_option("--law-cap", config.law_cap, "Largest horizon for exact enumeration");
  app.add_option("--orbit-cap", config.orbit_cap, "Largest horizon for orbit graphs");
  app.add_option("--meshes", config.meshes, "Decreasing mesh sequence a_n")->delimiter(',');

  // reflect
  auto* reflect_cmd = app.add_subcommand("reflect", "Apply Theta^a (or Psi^a with --exit) to a path");
  std::string path_text;
  int level = 0;
  bool use_exit = false;
  reflect_cmd->add_option("--path", path_text, "Path as '+-0' text or a JSON array")->required();
  reflect_cmd->add_option("--level", level, "Reflection level a")->required();
  reflect_cmd->add_flag("--exit", use_exit, "Reflect after the first exit from [-a, a]");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Find a word of effective reflections mapping s to t");
  std::string s_text, t_text;
  solve_cmd->add_option("--s", s_text, "Source walk")->required();
  solve_cmd->add_option("--t", t_text, "Target walk")->required();

  // orbit-census
  auto* census_cmd = app.add_subcommand("orbit-census", "Connected components of the reflection graph on walks");
  std::size_t m_min = 1, m_max = 8;
  std::vector<int> levels{0, 1, 2};
  census_cmd->add_option("--m-min", m_min, "Smallest horizon")->check(CLI::PositiveNumber);
  census_cmd->add_option("--m-max", m_max, "Largest horizon")->check(CLI::PositiveNumber);
  census_cmd->add_option("--levels", levels, "Reflection levels")->delimiter(',');

  // law
  auto* law_cmd = app.add_subcommand("law", "Exact law of a named process");
  std::string process = "bernoulli-walk";
  std::size_t m = 3;
  double stay = 0.5;
  std::optional<int> push_level;
  law_cmd->add_option("--process", process,
                      "bernoulli-walk | zero | ocone-time-change | dependent-time-change | ce1 | ce2");
  law_cmd->add_option("--m", m, "Horizon");
  law_cmd->add_option("--stay", stay, "ocone-time-change: probability that the clock stays put");
  law_cmd->add_option("--reflect", push_level, "Push the law forward through Theta^a");

  // ocone-check
  auto* ocone_cmd = app.add_subcommand("ocone-check", "Exact Ocone check of a law");
  std::string law_file;
  bool pasted = false, assert_ocone = false;
  ocone_cmd->add_option("--process", process, "Named process (see 'law')");
  ocone_cmd->add_option("--m", m, "Horizon");
  ocone_cmd->add_option("--stay", stay, "ocone-time-change: probability that the clock stays put");
  ocone_cmd->add_option("--law-file", law_file, "Law JSON file; overrides --process");
  ocone_cmd->add_flag("--pasted", pasted, "Paste a fair walk after the last increase of [M] first");
  ocone_cmd->add_flag("--assert-ocone", assert_ocone, "Exit 1 unless the law passes");

  // counterexample
  auto* ce_cmd = app.add_subcommand("counterexample", "Reflection invariance of the two counterexample laws");
  int which = 1;
  std::vector<int> ce_levels;
  bool assert_invariant = false;
  std::string support_csv;
  ce_cmd->add_option("which", which, "1 or 2")->required()->check(CLI::IsMember({1, 2}));
  ce_cmd->add_option("--m", m, "Horizon");
  ce_cmd->add_option("--level", ce_levels, "Levels to test (repeatable or comma separated)")->delimiter(',');
  ce_cmd->add_flag("--assert-invariant", assert_invariant, "Exit 1 if some tested level breaks invariance");
  ce_cmd->add_option("--support-csv", support_csv, "Also write the law as CSV to this file");

  // discretize
  auto* disc_cmd = app.add_subcommand("discretize", "Lattice discretization of a sampled path");
  double mesh = 0.25;
  std::string input_csv, disc_spec = "brownian-walk";
  bool exact_input = false;
  std::size_t index = 0;
  double walk_step = 1.0 / 16;
  disc_cmd->add_option("--mesh", mesh, "Lattice mesh a")->required()->check(CLI::PositiveNumber);
  disc_cmd->add_option("--input", input_csv, "CSV of (t, value); otherwise a sampled path");
  disc_cmd->add_flag("--exact", exact_input, "Input crossings are exact (a lattice walk of mesh dividing a)");
  disc_cmd->add_option("--spec", disc_spec, "Sampler when no input is given: brownian-walk | brownian-grid");
  disc_cmd->add_option("--index", index, "Sample index within the seeded stream");
  disc_cmd->add_option("--walk-step", walk_step, "brownian-walk spatial step")->check(CLI::PositiveNumber);

  // cf-check
  auto* cf_cmd = app.add_subcommand("cf-check", "Characteristic-function check for step functions h");
  std::vector<double> lambdas{1.0}, breaks{1.0};
  std::size_t n_samples = 10000;
  std::string cf_spec = "ocone-time-change";
  std::size_t grid_steps = 64;
  cf_cmd->add_option("--lambda", lambdas, "Coefficients lambda_1..lambda_k")->delimiter(',');
  cf_cmd->add_option("--breaks", breaks, "Breakpoints t_1 < ... < t_k (t_0 = 0 implied)")->delimiter(',');
  cf_cmd->add_option("--n-samples", n_samples, "Number of samples")->check(CLI::PositiveNumber);
  cf_cmd->add_option("--spec", cf_spec, "ocone-time-change | dependent-time-change | brownian-grid | brownian-walk");
  cf_cmd->add_option("--grid-steps", grid_steps, "Grid size of Gaussian-increment samplers");
  cf_cmd->add_option("--walk-step", walk_step, "brownian-walk spatial step")->check(CLI::PositiveNumber);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Draw sample paths");
  std::string sim_spec = "bernoulli-walk";
  std::size_t n = 10;
  sim_cmd->add_option("--spec", sim_spec, "Sampler kind");
  sim_cmd->add_option("--n", n, "Number of samples")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--m", m, "Horizon of discrete kinds");
  sim_cmd->add_option("--stay", stay, "ocone-time-change: probability that the clock stays put");
  sim_cmd->add_option("--grid-steps", grid_steps, "Grid size of Gaussian-increment samplers");
  sim_cmd->add_option("--walk-step", walk_step, "brownian-walk spatial step")->check(CLI::PositiveNumber);

  // test-reflect / test-independence
  auto* tr_cmd = app.add_subcommand("test-reflect", "Two-sample chi-square test of M against Theta^a(M)");
  std::size_t depth = 4;
  std::string test_spec = "bernoulli-walk";
  n = 100000;
  tr_cmd->add_option("--spec", test_spec, "Discrete sampler kind");
  tr_cmd->add_option("--level", level, "Reflection level a")->required();
  tr_cmd->add_option("--depth", depth, "Cylinder depth");
  tr_cmd->add_option("--n", n, "Samples per arm")->check(CLI::PositiveNumber);
  tr_cmd->add_option("--m", m, "Sampler horizon (default: depth)");
  tr_cmd->add_option("--stay", stay, "ocone-time-change: probability that the clock stays put");

  auto* ti_cmd = app.add_subcommand("test-independence", "Chi-square test of [M] against the embedded walk");
  ti_cmd->add_option("--spec", test_spec, "Discrete sampler kind");
  ti_cmd->add_option("--depth", depth, "Cylinder depth");
  ti_cmd->add_option("--n", n, "Samples")->check(CLI::PositiveNumber);
  ti_cmd->add_option("--m", m, "Sampler horizon (default: depth)");
  ti_cmd->add_option("--stay", stay, "ocone-time-change: probability that the clock stays put");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  CLI::App* cmd = app.get_subcommands().front();
  config.subcommand = cmd->get_name();
  if (!out.format_flag.empty()) config.format = out.format_flag;
  const CLI::Option* m_option = cmd->get_option_no_throw("--m");
  const bool m_given = m_option != nullptr && m_option->count() > 0;

  try {
    config.validate();

    if (cmd == reflect_cmd) {
      const SkipFreePath p = parse_skip_free(path_text);
      if (use_exit && level < 0) throw UsageError("--exit needs a nonnegative level");
      const SkipFreePath r = use_exit ? exit_reflect(p, level) : reflect(p, level);
      const std::string fmt = out.format("text");
      if (fmt == "text") {
        out.emit(to_text(r) + "\n");
      } else if (fmt == "csv") {
        out.emit_csv(csv_line({"input", "level", "transform", "output"}) +
                     csv_line({to_text(p), std::to_string(level), use_exit ? "exit" : "first-passage", to_text(r)}));
      } else {
        out.emit_json({{"input", to_text(p)},
                       {"level", level},
                       {"transform", use_exit ? "exit" : "first-passage"},
                       {"output", to_text(r)},
                       {"values", to_json_array(r)}});
      }
      return kOk;
    }

    if (cmd == solve_cmd) {
      const WalkPath s = parse_walk(s_text), t = parse_walk(t_text);
      if (s.horizon() != t.horizon()) throw UsageError("--s and --t have different horizons");
      const SolveReport r = solve_and_verify(s, t);
      if (out.format("json") == "csv") {
        std::string word;
        for (int a : r.word.levels) word += (word.empty() ? "" : ";") + std::to_string(a);
        out.emit_csv(csv_line({"m", "s", "t", "word", "verified"}) +
                     csv_line({std::to_string(r.s.horizon()), to_text(r.s), to_text(r.t), word,
                               r.verified ? "true" : "false"}));
      } else {
        out.emit_json(to_json(r));
      }
      return r.verified ? kOk : kVerificationFailed;
    }

    if (cmd == census_cmd) {
      if (m_min > m_max) throw UsageError("--m-min exceeds --m-max");
      std::vector<OrbitReport> rows;
      for (std::size_t k = m_min; k <= m_max; ++k) rows.push_back(orbit_graph(k, levels, true, config.orbit_cap));
      if (out.format("csv") == "csv") {
        std::string table = orbit_census_csv_header();
        for (const auto& r : rows) table += orbit_census_csv_row(r);
        out.emit_csv(table);
      } else {
        Json arr = Json::array();
        for (const auto& r : rows) arr.push_back(to_json(r));
        out.emit_json({{"census", std::move(arr)}});
      }
      return kOk;
    }

    if (cmd == law_cmd) {
      PathLaw law = named_law(process, m, stay, config);
      if (push_level) law = pushforward_reflect(law, *push_level);
      if (out.format("json") == "csv") {
        out.emit_csv(law_to_csv(law));
      } else {
        Json body{{"process", process}};
        if (push_level) body["reflected_at"] = *push_level;
        body.update(to_json(law));
        out.emit_json(body);
      }
      return kOk;
    }

    if (cmd == ocone_cmd) {
      const PathLaw law = law_file.empty() ? named_law(process, m, stay, config)
                                           : law_from_json(Json::parse(read_file(law_file)));
      OconeCheckOptions opt;
      opt.pasted = pasted;
      const OconeReport r = ocone_check(law, opt);
      Json body{{"source", law_file.empty() ? process : law_file}, {"m", law.horizon()}};
      body.update(to_json(r));
      if (out.format("json") == "csv") {
        out.emit_csv(csv_line({"source", "m", "is_ocone", "is_product", "embedded_uniform", "witness_kind",
                               "witness_walk"}) +
                     csv_line({body["source"].get<std::string>(), std::to_string(law.horizon()),
                               r.is_ocone() ? "true" : "false", r.is_product ? "true" : "false",
                               r.embedded_uniform ? "true" : "false", r.witness ? to_string(r.witness->kind) : "",
                               r.witness ? to_text(r.witness->walk) : ""}));
      } else {
        out.emit_json(body);
      }
      return assert_ocone && !r.is_ocone() ? kVerificationFailed : kOk;
    }

    if (cmd == ce_cmd) {
      if (ce_levels.empty()) ce_levels = which == 1 ? std::vector<int>{0, 1, 2, 3} : std::vector<int>{0, 1, 2};
      if (m > (which == 1 ? kCe1Cap : kCe2Cap)) throw UsageError("--m above the cap for this counterexample");
      const PathLaw law = which == 1 ? ce1_law(m) : ce2_law(m);
      if (which == 2 && !ce2_block_complete(m))
        throw UsageError("counterexample 2 needs --m in {1, 3, 7, 15, 31}");
      const InvarianceReport r = invariance_report(which == 1 ? "ce1" : "ce2", law, ce_levels);
      if (!support_csv.empty()) {
        std::ofstream f(support_csv);
        if (!f) throw UsageError("cannot open '" + support_csv + "'");
        f << law_to_csv(law);
      }
      bool invariant = true;
      for (const auto& l : r.levels) invariant = invariant && l.comparison.equal;
      if (out.format("json") == "csv") {
        std::string table = csv_line({"process", "m", "level", "equal", "witness", "mass", "reflected_mass"});
        for (const auto& l : r.levels) {
          const auto& w = l.comparison.witness;
          table += csv_line({r.process, std::to_string(r.m), std::to_string(l.level), l.comparison.equal ? "true" : "false",
                             w ? to_text(w->path) : "", w ? to_string(w->left) : "", w ? to_string(w->right) : ""});
        }
        out.emit_csv(table);
      } else {
        out.emit_json(to_json(r));
      }
      return assert_invariant && !invariant ? kVerificationFailed : kOk;
    }

    if (cmd == disc_cmd) {
      SampledContinuousPath p;
      if (!input_csv.empty()) {
        p = read_path_csv(read_file(input_csv), exact_input);
      } else {
        SamplerSpec spec;
        spec.kind = sampler_kind(disc_spec);
        if (spec.kind != SamplerKind::brownian_walk && spec.kind != SamplerKind::brownian_grid)
          throw UsageError("discretize: --spec must be brownian-walk or brownian-grid");
        spec.seed = config.seed;
        spec.walk_step = walk_step;
        validate(spec);
        p = draw_continuous(spec, index).path;
      }
      const LatticePath l = discretize(p, mesh);
      const GapReport g = sup_gap(p, l);
      if (out.format("json") == "csv") {
        std::string table = csv_line({"jump_time", "sign"});
        for (std::size_t k = 0; k < l.jump_count(); ++k)
          table += csv_line({num(l.jump_times()[k]), std::to_string(l.jump_signs()[k])});
        out.emit_csv(table);
      } else {
        out.emit_json({{"source", input_csv.empty() ? disc_spec : input_csv},
                       {"index", index},
                       {"exact_crossing", p.exact_crossing},
                       {"lattice", to_json(l)},
                       {"qv_final", l.qv_at(l.horizon())},
                       {"sup_gap", to_json(g)}});
      }
      return g.within_bound() ? kOk : kVerificationFailed;
    }

    if (cmd == cf_cmd) {
      if (lambdas.size() != breaks.size()) throw UsageError("--lambda and --breaks differ in length");
      const StepFunction h = StepFunction::from_breaks(breaks, lambdas);
      SamplerSpec spec;
      spec.kind = sampler_kind(cf_spec);
      if (!is_continuous(spec.kind)) throw UsageError("cf-check: --spec must be a continuous sampler");
      spec.seed = config.seed;
      spec.grid_steps = grid_steps;
      spec.walk_step = walk_step;
      spec.time_horizon = h.last_break();
      validate(spec);
      const auto samples = sample_continuous(spec, n_samples, config.workers);
      const CfReport r = cf_ocone_test(samples, h, config.z);
      if (out.format("json") == "csv") {
        out.emit_csv(csv_line({"lhs_re", "lhs_im", "rhs", "standard_error", "distance", "z", "n", "pass"}) +
                     csv_line({num(r.lhs.real()), num(r.lhs.imag()), num(r.rhs), num(r.standard_error),
                               num(r.distance), num(r.z), std::to_string(r.n), r.pass ? "true" : "false"}));
      } else {
        out.emit_json({{"spec", to_json(spec)}, {"h", to_json(h)}, {"report", to_json(r)}});
      }
      return r.pass ? kOk : kVerificationFailed;
    }

    if (cmd == sim_cmd) {
      SamplerSpec spec;
      spec.kind = sampler_kind(sim_spec);
      spec.seed = config.seed;
      spec.horizon = m;
      spec.stagnation_probability = stay;
      spec.grid_steps = grid_steps;
      spec.walk_step = walk_step;
      validate(spec);
      const bool csv = out.format("json") == "csv";
      if (is_discrete(spec.kind)) {
        const auto paths = sample_paths(spec, n, config.workers);
        if (csv) {
          std::string table = csv_line({"sample", "path"});
          for (std::size_t i = 0; i < paths.size(); ++i) table += csv_line({std::to_string(i), to_text(paths[i])});
          out.emit_csv(table);
        } else {
          Json arr = Json::array();
          for (const auto& p : paths) arr.push_back(to_text(p));
          out.emit_json({{"spec", to_json(spec)}, {"n", n}, {"paths", std::move(arr)}});
        }
      } else {
        const auto samples = sample_continuous(spec, n, config.workers);
        if (csv) {
          std::string table = csv_line({"sample", "t", "value", "qv"});
          for (std::size_t i = 0; i < samples.size(); ++i)
            for (std::size_t k = 0; k < samples[i].path.times.size(); ++k) {
              const double t = samples[i].path.times[k];
              table += csv_line({std::to_string(i), num(t), num(samples[i].path.values[k]), num(samples[i].qv.at(t))});
            }
          out.emit_csv(table);
        } else {
          Json arr = Json::array();
          for (const auto& s : samples)
            arr.push_back({{"times", s.path.times}, {"values", s.path.values}, {"qv", s.qv.values},
                           {"qv_times", s.qv.times}});
          out.emit_json({{"spec", to_json(spec)}, {"n", n}, {"samples", std::move(arr)}});
        }
      }
      return kOk;
    }

    if (cmd == tr_cmd || cmd == ti_cmd) {
      SamplerSpec spec;
      spec.kind = sampler_kind(test_spec);
      spec.seed = config.seed;
      spec.horizon = m_given ? m : depth;
      spec.stagnation_probability = stay;
      validate(spec);
      const TestReport r = cmd == tr_cmd ? reflect_two_sample_test(spec, level, n, depth, config.alpha, config.workers)
                                         : ocone_independence_test(spec, n, depth, config.alpha, config.workers);
      if (out.format("json") == "csv") {
        out.emit_csv(csv_line({"test", "spec", "level", "statistic", "dof", "p_value", "n_samples", "depth", "alpha",
                               "decision"}) +
                     csv_line({r.test, std::string(to_string(spec.kind)), std::to_string(r.level), num(r.statistic),
                               std::to_string(r.dof), num(r.p_value), std::to_string(r.n_samples),
                               std::to_string(r.depth), num(r.alpha), r.decision()}));
      } else {
        out.emit_json(to_json(r));
      }
      return r.reject ? kVerificationFailed : kOk;
    }
  } catch (const UndersizedSample& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
