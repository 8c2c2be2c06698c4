#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

// End-to-end checks of the command-line binary, driven through the shell. The
// binary path arrives in CTQW_BIN (set by the test harness).

namespace fs = std::filesystem;

namespace {

const std::string& cli_path() {
  static const std::string path = [] {
    const char* env = std::getenv("CTQW_BIN");
    REQUIRE_MESSAGE(env != nullptr, "CTQW_BIN must point at the ctqw binary");
    return std::string(env);
  }();
  return path;
}

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "ctqw_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

CmdResult run_cli(const std::string& args) {
  static int seq = 0;
  const fs::path so = scratch() / ("out_" + std::to_string(seq) + ".txt");
  const fs::path se = scratch() / ("err_" + std::to_string(seq) + ".txt");
  ++seq;
  const std::string cmd = "\"" + cli_path() + "\" " + args + " > \"" + so.string() +
                          "\" 2> \"" + se.string() + "\"";
  const int rc = std::system(cmd.c_str());
  CmdResult r;
  r.code = (rc == -1) ? -1 : (WIFEXITED(rc) ? WEXITSTATUS(rc) : -2);
  r.out = slurp(so);
  r.err = slurp(se);
  return r;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("evolve writes the observable CSV to stdout, deterministically") {
  const std::string args =
      "evolve --lattice square --nj 7 --nk 7 --t-max 2 --steps 21";
  const CmdResult first = run_cli(args);
  REQUIRE(first.code == 0);
  CHECK(first.out.rfind("Jt,sigma_x2,sigma_y2,coherence\n", 0) == 0);
  CHECK(count_lines(first.out) == 22);  // header + 21 samples
  CHECK(first.out.find("\n0,0,0,0\n") != std::string::npos);

  const CmdResult second = run_cli(args);
  CHECK(second.code == 0);
  CHECK(second.out == first.out);  // byte-identical rerun
}

TEST_CASE("configuration errors exit with code 2") {
  CHECK(run_cli("evolve --lattice kagome").code == 2);
  CHECK(run_cli("evolve --lattice square --nj 8 --nk 7 --t-max 1 --steps 11").code == 2);
  CHECK(run_cli("evolve --lattice truncated-square --model discretized --nj 5 --nk 5")
            .code == 2);
  CHECK(run_cli("evolve --lattice square --nj 5 --nk 5 --field=-0.5").code == 2);
  CHECK(run_cli("evolve --lattice square --nj 5 --nk 5 --snapshots 1.0").code == 2);
  const fs::path out = scratch() / "offgrid.csv";
  CHECK(run_cli("evolve --lattice square --nj 5 --nk 5 --t-max 6 --steps 121 "
                "--snapshots 9.0 --out \"" +
                out.string() + "\"")
            .code == 2);
  CHECK(run_cli("fit /no/such/file.csv").code == 2);
  CHECK(run_cli("").code == 2);  // a subcommand is required
}

TEST_CASE("strong fields warn on stderr but still run") {
  const CmdResult r = run_cli(
      "evolve --lattice square --nj 5 --nk 5 --model peierls --field 1.5 "
      "--t-max 1 --steps 11");
  CHECK(r.code == 0);
  CHECK(r.err.find("magnetic length below lattice constant") != std::string::npos);
  CHECK(count_lines(r.out) == 12);
}

TEST_CASE("fit recovers the exponent of a synthetic power law") {
  const fs::path csv = scratch() / "synthetic.csv";
  {
    std::ofstream f(csv);
    f << "Jt,sigma_x2,sigma_y2,coherence\n";
    char buf[128];
    for (int i = 0; i <= 20; ++i) {
      const double jt = 0.25 * i;
      const double v = 2.5 * jt * jt;
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", jt, v, v, v);
      f << buf;
    }
  }
  const fs::path out = scratch() / "synthetic.fit.json";
  const CmdResult r =
      run_cli("fit \"" + csv.string() + "\" --component sigma_x2 --out \"" +
              out.string() + "\"");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("p = ") != std::string::npos);
  const nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(j["p"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(j["A"].get<double>() == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(j["component"] == "sigma_x2");
  CHECK(j["n_samples"].get<int>() >= 8);
}

TEST_CASE("evolve output feeds straight into fit") {
  const fs::path csv = scratch() / "ballistic.csv";
  const CmdResult ev = run_cli(
      "evolve --lattice square --nj 21 --nk 21 --t-max 4 --steps 81 --out \"" +
      csv.string() + "\"");
  REQUIRE(ev.code == 0);
  REQUIRE(fs::exists(csv));
  const CmdResult ft = run_cli("fit \"" + csv.string() + "\" --window 0.5,2");
  REQUIRE(ft.code == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(fs::path(csv.string() + ".fit.json")));
  // Ballistic spreading well before the rim is reached.
  CHECK(j["p"].get<double>() > 1.7);
  CHECK(j["p"].get<double>() < 2.2);
}

TEST_CASE("export-map emits dual-cell polygons with normalized densities") {
  struct Case {
    const char* lattice;
    std::size_t corners;
  };
  for (const Case& c : {Case{"square", 4}, Case{"honeycomb", 3}, Case{"triangular", 6}}) {
    const fs::path out = scratch() / (std::string("map_") + c.lattice + ".json");
    const CmdResult r = run_cli(std::string("export-map --lattice ") + c.lattice +
                                " --nj 5 --nk 5 --t-max 1 --steps 11 "
                                "--snapshots 0,0.5 --out \"" +
                                out.string() + "\"");
    REQUIRE_MESSAGE(r.code == 0, c.lattice << ": " << r.err);
    const nlohmann::json j = nlohmann::json::parse(slurp(out));
    CHECK(j["lattice"]["size"] == 25);
    CHECK(j["config"]["command"] == "export-map");
    REQUIRE(j["maps"].size() == 2);
    for (const auto& m : j["maps"]) {
      REQUIRE(m["cells"].size() == 25);
      double total = 0.0;
      for (const auto& cell : m["cells"]) {
        CHECK(cell["polygon"].size() == c.corners);
        total += cell["rho"].get<double>();
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  CHECK(run_cli("export-map --lattice square --nj 5 --nk 5 --snapshots 1.0").code == 2);
  const fs::path out = scratch() / "nosnap.json";
  CHECK(run_cli("export-map --lattice square --nj 5 --nk 5 --out \"" + out.string() +
                "\"")
            .code == 2);
}

TEST_CASE("sweep writes one CSV per combination plus a complete manifest") {
  const fs::path dir = scratch() / "sweep_out";
  const CmdResult r = run_cli(
      "sweep --lattice square --model free,peierls --field 0,0.5 --nj 5 --nk 5 "
      "--t-max 2 --steps 21 --jobs 2 --out \"" +
      dir.string() + "\"");
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["command"] == "sweep");
  CHECK(manifest["config"]["models"].size() == 2);
  CHECK(manifest["config"]["fields"].size() == 2);
  REQUIRE(manifest["runs"].size() == 4);
  std::size_t csv_count = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") ++csv_count;
  }
  CHECK(csv_count == 4);
  for (const auto& run : manifest["runs"]) {
    const fs::path f = dir / run["file"].get<std::string>();
    REQUIRE_MESSAGE(fs::exists(f), f.string());
    const std::string body = slurp(f);
    CHECK(body.rfind("Jt,sigma_x2,sigma_y2,coherence\n", 0) == 0);
    CHECK(count_lines(body) == 22);
    CHECK(run["nj"] == 5);
    CHECK(run["start"] == "center");
  }

  // An unsupported combination poisons the whole sweep before any run starts.
  const fs::path bad = scratch() / "sweep_bad";
  CHECK(run_cli("sweep --lattice truncated-square --model free,harmonic --field 0 "
                "--nj 5 --nk 5 --out \"" +
                bad.string() + "\"")
            .code == 2);
  CHECK_FALSE(fs::exists(bad / "manifest.json"));
}

TEST_CASE("lattice-info prints geometry and optional patches") {
  const CmdResult r = run_cli("lattice-info --lattice square --nj 3 --nk 3");
  REQUIRE(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["kind"] == "square");
  CHECK(j["size"] == 9);
  CHECK(j["vertices"].size() == 9);
  CHECK(j["edges"].size() == 12);
  CHECK_FALSE(j.contains("patches"));

  const CmdResult rp = run_cli("lattice-info --lattice square --nj 3 --nk 3 --patches");
  REQUIRE(rp.code == 0);
  const nlohmann::json jp = nlohmann::json::parse(rp.out);
  REQUIRE(jp["patches"].size() == 9);
  CHECK(jp["patches"][0]["polygon"].size() == 4);
}

TEST_CASE("config files fill defaults and flags override them") {
  const fs::path cfg = scratch() / "walk.cfg";
  {
    std::ofstream f(cfg);
    f << "nj=5\n"
      << "nk=5\n"
      << "steps=21\n"
      << "t-max=2\n";
  }
  const fs::path dir = scratch() / "sweep_cfg";
  const CmdResult r = run_cli("sweep --config \"" + cfg.string() +
                              "\" --nk 7 --lattice square --model free --field 0 "
                              "--out \"" +
                              dir.string() + "\"");
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const nlohmann::json manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["config"]["nj"] == 5);      // from the file
  CHECK(manifest["config"]["nk"] == 7);      // flag beats file
  CHECK(manifest["config"]["steps"] == 21);  // from the file
  CHECK(manifest["config"]["t-max"] == 2.0);
  REQUIRE(manifest["runs"].size() == 1);
  const std::string body = slurp(dir / manifest["runs"][0]["file"].get<std::string>());
  CHECK(count_lines(body) == 22);

  // The same config key set also drives evolve.
  const CmdResult ev = run_cli("evolve --config \"" + cfg.string() + "\" --nk 7");
  REQUIRE_MESSAGE(ev.code == 0, ev.err);
  CHECK(count_lines(ev.out) == 22);
}
