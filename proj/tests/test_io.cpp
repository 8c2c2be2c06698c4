#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "ctqw/errors.hpp"
#include "ctqw/hamiltonian.hpp"
#include "ctqw/io.hpp"
#include "ctqw/operators.hpp"

using namespace ctqw;
namespace fs = std::filesystem;

namespace {

LatticeSpec spec_of(LatticeKind kind, int nj, int nk, double a = 1.0) {
  LatticeSpec s;
  s.kind = kind;
  s.n_j = nj;
  s.n_k = nk;
  s.a = a;
  return s;
}

ObservableSeries tiny_series() {
  ObservableSeries s;
  s.times = {0.0, 0.05, 1.0 / 3.0};
  s.sigma_x2 = {0.0, 0.01, 1.234567890123456789};
  s.sigma_y2 = {0.0, 0.01, 9.87e-13};
  s.coherence = {0.0, 0.5, 3.0};
  return s;
}

}  // namespace

TEST_CASE("g17 formatting round-trips doubles exactly") {
  for (double v : {0.0, 1.0, -1.0, 0.05, 1.0 / 3.0, 6.02214076e23, 9.87e-13,
                   1.234567890123456789, -2.718281828459045}) {
    const std::string s = format_g17(v);
    CHECK(std::stod(s) == v);
    CHECK(s.find(',') == std::string::npos);  // locale independence
  }
}

TEST_CASE("series CSV writes the pinned header and round-trips") {
  const ObservableSeries s = tiny_series();
  const std::string csv = series_to_csv(s);
  CHECK(csv.rfind("Jt,sigma_x2,sigma_y2,coherence\n", 0) == 0);
  CHECK(csv.back() == '\n');
  CHECK(series_to_csv(s) == csv);  // deterministic

  const ObservableSeries back = series_from_csv(csv);
  REQUIRE(back.times.size() == s.times.size());
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    CHECK(back.times[i] == s.times[i]);
    CHECK(back.sigma_x2[i] == s.sigma_x2[i]);
    CHECK(back.sigma_y2[i] == s.sigma_y2[i]);
    CHECK(back.coherence[i] == s.coherence[i]);
  }

  // Windows line endings are tolerated on input.
  std::string crlf = csv;
  std::string::size_type pos = 0;
  while ((pos = crlf.find('\n', pos)) != std::string::npos) {
    crlf.replace(pos, 1, "\r\n");
    pos += 2;
  }
  CHECK(series_from_csv(crlf).times.size() == s.times.size());
}

TEST_CASE("series CSV rejects malformed input") {
  CHECK_THROWS_AS(series_from_csv(""), ConfigError);
  CHECK_THROWS_AS(series_from_csv("Jt,sx,sy,c\n0,0,0,0\n"), ConfigError);
  CHECK_THROWS_AS(series_from_csv("Jt,sigma_x2,sigma_y2,coherence\n0,0,0\n"), ConfigError);
  CHECK_THROWS_AS(series_from_csv("Jt,sigma_x2,sigma_y2,coherence\n0,zero,0,0\n"),
                  ConfigError);
  CHECK_THROWS_AS(series_from_csv("Jt,sigma_x2,sigma_y2,coherence\n0,1.5x,0,0\n"),
                  ConfigError);
}

TEST_CASE("text file round trip") {
  const fs::path p = fs::temp_directory_path() / "ctqw_io_test.txt";
  const std::string body = "line one\nline two\n";
  write_text_file(p, body);
  CHECK(read_text_file(p) == body);
  std::remove(p.string().c_str());
  CHECK_THROWS_AS(read_text_file(p), ConfigError);
  CHECK_THROWS_AS(write_text_file(fs::path("/no/such/dir/x.txt"), "y"), ConfigError);
}

TEST_CASE("lattice JSON carries vertices, classes and labeled edges") {
  const Lattice lat = build_lattice(spec_of(LatticeKind::Honeycomb, 4, 4));
  const nlohmann::json j = lattice_to_json(lat);
  CHECK(j["kind"] == "honeycomb");
  CHECK(j["n_j"] == 4);
  CHECK(j["n_k"] == 4);
  CHECK(j["size"] == 16);
  CHECK(j["boundary"] == "open");
  REQUIRE(j["vertices"].size() == 16);
  const auto& v0 = j["vertices"][0];
  CHECK(v0["l"] == 1);
  CHECK(v0["j"] == 1);
  CHECK(v0["k"] == 1);
  CHECK(v0.contains("x"));
  CHECK(v0.contains("class"));
  CHECK(v0.contains("boundary"));

  // Each undirected edge appears exactly once, with a direction label.
  std::size_t degree_sum = 0;
  for (int v = 0; v < lat.size(); ++v) degree_sum += lat.adj[static_cast<std::size_t>(v)].size();
  CHECK(j["edges"].size() == degree_sum / 2);
  for (const auto& e : j["edges"]) {
    REQUIRE(e.size() == 3);
    CHECK(e[0].is_number_integer());
    CHECK(e[1].is_number_integer());
    CHECK(e[2].is_string());
    CHECK(e[0].get<int>() < e[1].get<int>());
  }
}

TEST_CASE("patches JSON lists one closed polygon per vertex") {
  const Lattice lat = build_lattice(spec_of(LatticeKind::Square, 4, 4));
  const auto patches = dual_patches(lat);
  const nlohmann::json j = patches_to_json(lat, patches);
  CHECK(j["kind"] == "square");
  REQUIRE(j["patches"].size() == 16);
  for (const auto& p : j["patches"]) {
    CHECK(p["polygon"].size() == 4);
    CHECK(p["area"].get<double>() == doctest::Approx(1.0));
    CHECK(p.contains("clipped"));
  }
}

TEST_CASE("triplet dump holds every nonzero entry once") {
  const Lattice lat = build_lattice(spec_of(LatticeKind::Square, 3, 3));
  const HoppingAmplitude J = hopping_amplitude(LatticeKind::Square, 0.5, 1.0);
  const HamiltonianMatrix H = build_free(lat, J);
  const nlohmann::json j = matrix_to_triplets(H);
  CHECK(j["dim"] == 9);
  CHECK(j["model"] == "free");
  // 9 diagonal entries + 2 * 12 undirected edges.
  CHECK(j["entries"].size() == 9 + 24);
  for (const auto& t : j["entries"]) {
    REQUIRE(t.size() == 4);
    const int r = t[0].get<int>(), c = t[1].get<int>();
    CHECK(r >= 1);
    CHECK(r <= 9);
    CHECK(c >= 1);
    CHECK(c <= 9);
    const double re = t[2].get<double>(), im = t[3].get<double>();
    CHECK((re != 0.0 || im != 0.0));
  }
}
