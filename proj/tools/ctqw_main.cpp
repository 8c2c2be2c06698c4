#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "ctqw/dynamics.hpp"
#include "ctqw/errors.hpp"
#include "ctqw/hamiltonian.hpp"
#include "ctqw/io.hpp"
#include "ctqw/lattice.hpp"
#include "ctqw/operators.hpp"

namespace {

using namespace ctqw;

const std::vector<std::string> kLatticeNames = {"square", "triangular", "honeycomb",
                                                "truncated-square"};
const std::vector<std::string> kModelNames = {"free", "peierls", "peierls-modified",
                                              "discretized", "harmonic"};

struct RunOptions {
  std::string lattice = "square";
  int nj = 31;
  int nk = 31;
  std::string model = "free";
  double field = 0.0;
  double js = 1.0;
  double t_max = 6.0;
  int steps = 121;
  std::string start = "center";
  std::string out;
  std::vector<double> snapshots;
  long long seed = 0;
  std::string config;
};

// Pre-parse pass: locate --config, read the file, and append one synthetic
// --key=value token for every key the command line does not already set.
// CLI11 then validates the merged line exactly like hand-typed flags, which
// also makes unknown config keys loud parse errors.
std::vector<std::string> with_config_applied(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a file path");
      path = args[i + 1];
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      break;
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  const auto trim = [](const std::string& s) {
    const char* ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
  };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    const std::string key = eq == std::string::npos ? "" : trim(stripped.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("config file " + path + " line " + std::to_string(lineno) +
                        " is not key=value: '" + stripped + "'");
    }
    if (key == "config") {
      throw ConfigError("config files cannot chain further config files");
    }
    const std::string flag = "--" + key;
    bool given = false;
    for (const std::string& t : args) {
      if (t == flag || t.rfind(flag + "=", 0) == 0) {
        given = true;
        break;
      }
    }
    if (!given) args.push_back(flag + "=" + trim(stripped.substr(eq + 1)));
  }
  return args;
}

int parse_int_field(const std::string& text, const char* what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(std::string("malformed ") + what + " '" + text + "'");
  }
  if (used != text.size()) {
    throw ConfigError(std::string("malformed ") + what + " '" + text + "'");
  }
  return v;
}

VertexId parse_start(const std::string& s, const LatticeSpec& spec) {
  if (s == "center") return center_vertex(spec);
  const auto comma = s.find(',');
  if (comma == std::string::npos) {
    throw ConfigError("--start must be 'center' or 'j,k', got '" + s + "'");
  }
  const VertexId v{parse_int_field(s.substr(0, comma), "start index j"),
                   parse_int_field(s.substr(comma + 1), "start index k")};
  linear_index(spec, v.j, v.k);  // range check
  return v;
}

LatticeSpec spec_of(const RunOptions& o) {
  LatticeSpec spec;
  spec.kind = lattice_kind_from_string(o.lattice);
  spec.n_j = o.nj;
  spec.n_k = o.nk;
  return spec;
}

struct RunResult {
  Lattice lat;
  ObservableSeries series;
};

RunResult execute_run(const RunOptions& o) {
  const LatticeSpec spec = spec_of(o);
  Lattice lat = build_lattice(spec);
  const ModelKind model = model_kind_from_string(o.model);
  if (!model_supported(model, spec.kind)) {
    throw ConfigError("model '" + o.model + "' is not defined on the " + o.lattice +
                      " lattice");
  }
  const VertexId start = parse_start(o.start, spec);
  const auto l0 = static_cast<std::size_t>(lat.linear0(start));
  // Gauge centered on the launch vertex, so the potential vanishes there.
  const GaugeField gauge = make_gauge(o.field, lat.x[l0], lat.y[l0]);
  if (field_exceeds_lattice_scale(gauge, spec.a)) {
    std::cerr << "warning: magnetic length below lattice constant (B = " << o.field
              << " > 1 in QW units)\n";
  }
  const HoppingAmplitude hop =
      hopping_amplitude(spec.kind, walker_mass(o.js, spec.a), spec.a);
  const HamiltonianMatrix H = build_hamiltonian(lat, model, hop, gauge);
  const WalkerState psi0 = localized_state(lat, start);
  const auto grid = uniform_grid(o.t_max, o.steps);
  const auto states = evolve(H, psi0, grid);
  ObservableSeries series = observe(lat, states, o.snapshots);
  return {std::move(lat), std::move(series)};
}

nlohmann::json run_echo(const RunOptions& o, const std::string& command) {
  nlohmann::json j;
  j["command"] = command;
  j["lattice"] = o.lattice;
  j["nj"] = o.nj;
  j["nk"] = o.nk;
  j["model"] = o.model;
  j["field"] = o.field;
  j["js"] = o.js;
  j["t-max"] = o.t_max;
  j["steps"] = o.steps;
  j["start"] = o.start;
  j["seed"] = o.seed;
  return j;
}

// Config files are plain key=value lines mirroring the long option names.
// They are merged before CLI11 parses (see with_config_applied), so this
// option only has to accept the path and show up in --help.
void add_config_option(CLI::App* cmd, std::string& slot) {
  cmd->add_option("--config", slot,
                  "key=value file; command-line flags override it");
}

void add_lattice_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--lattice", o.lattice, "Lattice kind")
      ->check(CLI::IsMember(kLatticeNames))
      ->capture_default_str();
  cmd->add_option("--nj", o.nj, "Vertices per j-polyline")->capture_default_str();
  cmd->add_option("--nk", o.nk, "Vertices per k-polyline")->capture_default_str();
  add_config_option(cmd, o.config);
}

void add_run_options(CLI::App* cmd, RunOptions& o) {
  add_lattice_options(cmd, o);
  cmd->add_option("--model", o.model, "Hamiltonian model")
      ->check(CLI::IsMember(kModelNames))
      ->capture_default_str();
  cmd->add_option("--field", o.field, "Magnetic field modulus B (QW units)")
      ->capture_default_str();
  cmd->add_option("--js", o.js, "Square-lattice energy scale J_S; fixes the walker mass")
      ->capture_default_str();
  cmd->add_option("--t-max", o.t_max, "Largest adimensional time Jt")
      ->capture_default_str();
  cmd->add_option("--steps", o.steps, "Number of samples on [0, t-max]")
      ->capture_default_str();
  cmd->add_option("--start", o.start, "Launch vertex: 'j,k' or 'center'")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Reserved; the deterministic core ignores it")
      ->capture_default_str();
}

int cmd_evolve(const RunOptions& o) {
  if (!o.snapshots.empty() && o.out.empty()) {
    throw ConfigError("--snapshots needs --out (the JSON is written next to the CSV)");
  }
  const RunResult r = execute_run(o);
  const std::string csv = series_to_csv(r.series);
  if (o.out.empty()) {
    std::cout << csv;
  } else {
    write_text_file(o.out, csv);
  }
  if (!o.snapshots.empty()) {
    nlohmann::json j;
    j["config"] = run_echo(o, "evolve");
    j["grid_step"] = o.t_max / static_cast<double>(o.steps - 1);
    auto snaps = nlohmann::json::array();
    for (const Snapshot& s : r.series.snapshots) {
      auto rho = nlohmann::json::array();
      for (Eigen::Index i = 0; i < s.rho.size(); ++i) rho.push_back(s.rho[i]);
      snaps.push_back({{"Jt", s.jt}, {"rho", std::move(rho)}});
    }
    j["snapshots"] = std::move(snaps);
    write_text_file(o.out + ".snapshots.json", j.dump(2) + "\n");
  }
  return 0;
}

struct SweepOptions {
  RunOptions base;
  std::vector<std::string> lattices{"square"};
  std::vector<std::string> models{"free"};
  std::vector<double> fields{0.0};
  int jobs = 0;  // 0 -> hardware concurrency
  std::string out;
};

std::string field_tag(double b) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", b);
  return buf;
}

int cmd_sweep(const SweepOptions& s) {
  struct PlannedRun {
    std::size_t index;
    RunOptions opts;
    std::string file;
  };

  const std::size_t total = s.lattices.size() * s.models.size() * s.fields.size();
  if (total == 0) throw ConfigError("sweep axes must be nonempty");
  if (total > 10000) {
    throw ConfigError("sweep would launch " + std::to_string(total) +
                      " runs; the guard allows at most 10000");
  }

  // Validate the whole cross product before any work starts.
  std::vector<PlannedRun> plan;
  plan.reserve(total);
  for (const std::string& lattice : s.lattices) {
    for (const std::string& model : s.models) {
      for (double field : s.fields) {
        RunOptions o = s.base;
        o.lattice = lattice;
        o.model = model;
        o.field = field;
        o.out.clear();
        o.snapshots.clear();
        const LatticeSpec spec = spec_of(o);
        if (!model_supported(model_kind_from_string(model), spec.kind)) {
          throw ConfigError("sweep combination rejected: model '" + model +
                            "' is not defined on the " + lattice + " lattice");
        }
        parse_start(o.start, spec);
        make_gauge(field, 0.0, 0.0);
        char name[128];
        std::snprintf(name, sizeof(name), "run_%04zu_%s_%s_B%s.csv", plan.size(),
                      lattice.c_str(), model.c_str(), field_tag(field).c_str());
        plan.push_back({plan.size(), std::move(o), name});
      }
    }
  }

  const std::filesystem::path dir(s.out);
  std::filesystem::create_directories(dir);

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const std::size_t jobs =
      std::min<std::size_t>(s.jobs > 0 ? static_cast<std::size_t>(s.jobs) : hw, total);

  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= plan.size()) break;
      try {
        const RunResult r = execute_run(plan[i].opts);
        write_text_file(dir / plan[i].file, series_to_csv(r.series));
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        break;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);

  nlohmann::json manifest;
  manifest["command"] = "sweep";
  nlohmann::json config = run_echo(s.base, "sweep");
  config.erase("lattice");
  config.erase("model");
  config.erase("field");
  config["lattices"] = s.lattices;
  config["models"] = s.models;
  config["fields"] = s.fields;
  config["jobs"] = jobs;
  manifest["config"] = std::move(config);
  auto runs = nlohmann::json::array();
  for (const PlannedRun& p : plan) {
    runs.push_back({{"index", p.index},
                    {"file", p.file},
                    {"lattice", p.opts.lattice},
                    {"model", p.opts.model},
                    {"field", p.opts.field},
                    {"js", p.opts.js},
                    {"nj", p.opts.nj},
                    {"nk", p.opts.nk},
                    {"t-max", p.opts.t_max},
                    {"steps", p.opts.steps},
                    {"start", p.opts.start}});
  }
  manifest["runs"] = std::move(runs);
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << plan.size() << " runs and manifest.json to " << dir.string()
            << "\n";
  return 0;
}

struct FitOptions {
  std::string csv;
  std::vector<double> window;
  std::string component = "sigma_x2";
  std::string out;
  std::string config;
};

SeriesComponent component_from_string(const std::string& name) {
  if (name == "sigma_x2") return SeriesComponent::SigmaX2;
  if (name == "sigma_y2") return SeriesComponent::SigmaY2;
  if (name == "coherence") return SeriesComponent::Coherence;
  throw ConfigError("unknown series component: " + name);
}

int cmd_fit(const FitOptions& f) {
  const ObservableSeries series = series_from_csv(read_text_file(f.csv));
  if (series.times.empty()) throw ConfigError("CSV holds no samples");
  double lo = 0.5, hi = series.times.back();
  if (!f.window.empty()) {
    if (f.window.size() != 2) throw ConfigError("--window takes exactly two values: lo,hi");
    lo = f.window[0];
    hi = f.window[1];
  }
  const FitResult fit = fit_power_law(series, component_from_string(f.component), lo, hi);
  std::printf("A = %.12g\n", fit.A);
  std::printf("p = %.12g\n", fit.p);
  std::printf("rms_residual = %.12g\n", fit.rms_residual);
  std::printf("window = [%g, %g]\n", fit.window_lo, fit.window_hi);
  std::printf("n_samples = %d\n", fit.n_samples);

  nlohmann::json j;
  j["command"] = "fit";
  j["input"] = f.csv;
  j["component"] = f.component;
  j["A"] = fit.A;
  j["p"] = fit.p;
  j["rms_residual"] = fit.rms_residual;
  j["window"] = {fit.window_lo, fit.window_hi};
  j["n_samples"] = fit.n_samples;
  const std::string out = f.out.empty() ? f.csv + ".fit.json" : f.out;
  write_text_file(out, j.dump(2) + "\n");
  return 0;
}

int cmd_export_map(const RunOptions& o) {
  if (o.snapshots.empty()) {
    throw ConfigError("export-map needs --snapshots with at least one Jt value");
  }
  if (o.out.empty()) throw ConfigError("export-map needs --out");
  const RunResult r = execute_run(o);
  const std::vector<DualPatch> patches = dual_patches(r.lat);

  nlohmann::json j;
  j["config"] = run_echo(o, "export-map");
  j["lattice"] = {{"kind", o.lattice},
                  {"n_j", o.nj},
                  {"n_k", o.nk},
                  {"a", r.lat.spec.a},
                  {"size", r.lat.size()}};
  auto maps = nlohmann::json::array();
  for (const Snapshot& s : r.series.snapshots) {
    auto cells = nlohmann::json::array();
    for (int l = 0; l < r.lat.size(); ++l) {
      const DualPatch& p = patches[static_cast<std::size_t>(l)];
      auto poly = nlohmann::json::array();
      for (const auto& [px, py] : p.polygon) poly.push_back({px, py});
      cells.push_back({{"l", l + 1},
                       {"clipped", p.clipped},
                       {"polygon", std::move(poly)},
                       {"rho", s.rho[l]}});
    }
    maps.push_back({{"Jt", s.jt}, {"cells", std::move(cells)}});
  }
  j["maps"] = std::move(maps);
  write_text_file(o.out, j.dump() + "\n");
  return 0;
}

struct InfoOptions {
  RunOptions run;
  bool patches = false;
};

int cmd_lattice_info(const InfoOptions& i) {
  const Lattice lat = build_lattice(spec_of(i.run));
  nlohmann::json j = lattice_to_json(lat);
  if (i.patches) {
    j["patches"] = patches_to_json(lat, dual_patches(lat))["patches"];
  }
  const std::string text = j.dump(2) + "\n";
  if (i.run.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(i.run.out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-time quantum walks on planar lattice graphs"};
  app.require_subcommand(1);

  RunOptions evolve_opts;
  CLI::App* evolve_cmd =
      app.add_subcommand("evolve", "Run one walk and write the observable CSV");
  add_run_options(evolve_cmd, evolve_opts);
  evolve_cmd->add_option("--out", evolve_opts.out, "CSV path (stdout when omitted)");
  evolve_cmd
      ->add_option("--snapshots", evolve_opts.snapshots,
                   "Comma-separated Jt values whose densities are kept")
      ->delimiter(',');

  SweepOptions sweep_opts;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Run the cross product of lattices x models x fields");
  sweep_cmd->add_option("--lattice", sweep_opts.lattices, "Lattice kinds to sweep")
      ->check(CLI::IsMember(kLatticeNames))
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--nj", sweep_opts.base.nj, "Vertices per j-polyline")
      ->capture_default_str();
  sweep_cmd->add_option("--nk", sweep_opts.base.nk, "Vertices per k-polyline")
      ->capture_default_str();
  sweep_cmd->add_option("--model", sweep_opts.models, "Models to sweep")
      ->check(CLI::IsMember(kModelNames))
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--field", sweep_opts.fields, "Field moduli to sweep")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--js", sweep_opts.base.js, "Square-lattice energy scale J_S")
      ->capture_default_str();
  sweep_cmd->add_option("--t-max", sweep_opts.base.t_max, "Largest adimensional time Jt")
      ->capture_default_str();
  sweep_cmd->add_option("--steps", sweep_opts.base.steps, "Samples on [0, t-max]")
      ->capture_default_str();
  sweep_cmd->add_option("--start", sweep_opts.base.start, "Launch vertex: 'j,k' or 'center'")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", sweep_opts.base.seed, "Reserved")
      ->capture_default_str();
  sweep_cmd->add_option("--jobs", sweep_opts.jobs, "Worker threads (default: hardware)")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_opts.out, "Output directory")->required();
  add_config_option(sweep_cmd, sweep_opts.base.config);

  FitOptions fit_opts;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit A (Jt)^p to an observable CSV");
  fit_cmd->add_option("csv", fit_opts.csv, "Observable CSV from evolve/sweep")
      ->required()
      ->check(CLI::ExistingFile);
  fit_cmd->add_option("--window", fit_opts.window, "Fit window lo,hi (default 0.5,last)")
      ->delimiter(',');
  fit_cmd
      ->add_option("--component", fit_opts.component,
                   "sigma_x2 | sigma_y2 | coherence")
      ->check(CLI::IsMember({"sigma_x2", "sigma_y2", "coherence"}))
      ->capture_default_str();
  fit_cmd->add_option("--out", fit_opts.out, "Fit JSON path (default <csv>.fit.json)");
  add_config_option(fit_cmd, fit_opts.config);

  RunOptions map_opts;
  CLI::App* map_cmd = app.add_subcommand(
      "export-map", "Export density snapshots with dual-patch polygons as JSON");
  add_run_options(map_cmd, map_opts);
  map_cmd
      ->add_option("--snapshots", map_opts.snapshots,
                   "Comma-separated Jt values to export")
      ->delimiter(',');
  map_cmd->add_option("--out", map_opts.out, "JSON path");

  InfoOptions info_opts;
  CLI::App* info_cmd =
      app.add_subcommand("lattice-info", "Print lattice geometry and adjacency as JSON");
  add_lattice_options(info_cmd, info_opts.run);
  info_cmd->add_flag("--patches", info_opts.patches, "Include dual-patch polygons");
  info_cmd->add_option("--out", info_opts.run.out, "JSON path (stdout when omitted)");

  try {
    std::vector<std::string> args =
        with_config_applied(std::vector<std::string>(argv + 1, argv + argc));
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(std::move(args));
    if (evolve_cmd->parsed()) return cmd_evolve(evolve_opts);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts);
    if (fit_cmd->parsed()) return cmd_fit(fit_opts);
    if (map_cmd->parsed()) return cmd_export_map(map_opts);
    if (info_cmd->parsed()) return cmd_lattice_info(info_opts);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ctqw::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
