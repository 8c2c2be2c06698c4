#include "ctqw/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ctqw/errors.hpp"

namespace ctqw {

namespace {

constexpr const char* kCsvHeader = "Jt,sigma_x2,sigma_y2,coherence";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& field, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    throw ConfigError("malformed number '" + field + "' on CSV line " +
                      std::to_string(line_no));
  }
  if (used != field.size()) {
    throw ConfigError("trailing garbage in '" + field + "' on CSV line " +
                      std::to_string(line_no));
  }
  return v;
}

}  // namespace

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string series_to_csv(const ObservableSeries& series) {
  std::string out = kCsvHeader;
  out.push_back('\n');
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out += format_g17(series.times[i]);
    out.push_back(',');
    out += format_g17(series.sigma_x2[i]);
    out.push_back(',');
    out += format_g17(series.sigma_y2[i]);
    out.push_back(',');
    out += format_g17(series.coherence[i]);
    out.push_back('\n');
  }
  return out;
}

ObservableSeries series_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  ObservableSeries series;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kCsvHeader) {
        throw ConfigError("unexpected CSV header '" + line + "' (want '" +
                          std::string(kCsvHeader) + "')");
      }
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 4) {
      throw ConfigError("CSV line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) + " fields, want 4");
    }
    series.times.push_back(parse_double(fields[0], line_no));
    series.sigma_x2.push_back(parse_double(fields[1], line_no));
    series.sigma_y2.push_back(parse_double(fields[2], line_no));
    series.coherence.push_back(parse_double(fields[3], line_no));
  }
  if (line_no == 0) {
    throw ConfigError("empty CSV input");
  }
  return series;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot open '" + path.string() + "' for writing");
  }
  out << text;
  if (!out) {
    throw NumericalError("short write to '" + path.string() + "'");
  }
}

nlohmann::json lattice_to_json(const Lattice& lat) {
  nlohmann::json j;
  j["kind"] = to_string(lat.spec.kind);
  j["n_j"] = lat.spec.n_j;
  j["n_k"] = lat.spec.n_k;
  j["a"] = lat.spec.a;
  j["boundary"] = lat.spec.boundary == Boundary::Periodic ? "periodic" : "open";
  j["size"] = lat.size();

  auto vertices = nlohmann::json::array();
  for (int l = 0; l < lat.size(); ++l) {
    const VertexId v = lat.vertex(l);
    const auto u = static_cast<std::size_t>(l);
    vertices.push_back({{"l", l + 1},
                        {"j", v.j},
                        {"k", v.k},
                        {"x", lat.x[u]},
                        {"y", lat.y[u]},
                        {"class", to_string(lat.cls[u])},
                        {"boundary", lat.is_boundary(l)}});
  }
  j["vertices"] = std::move(vertices);

  auto edges = nlohmann::json::array();
  for (int l = 0; l < lat.size(); ++l) {
    for (const Neighbor& nb : lat.adj[static_cast<std::size_t>(l)]) {
      if (nb.l <= l) continue;  // each undirected edge once
      edges.push_back({l + 1, nb.l + 1, std::string(1, direction_label(nb.dir))});
    }
  }
  j["edges"] = std::move(edges);
  return j;
}

nlohmann::json patches_to_json(const Lattice& lat, const std::vector<DualPatch>& patches) {
  nlohmann::json j;
  j["kind"] = to_string(lat.spec.kind);
  j["a"] = lat.spec.a;
  auto arr = nlohmann::json::array();
  for (const DualPatch& p : patches) {
    auto poly = nlohmann::json::array();
    for (const auto& [px, py] : p.polygon) {
      poly.push_back({px, py});
    }
    arr.push_back({{"l", lat.linear0(p.vertex) + 1},
                   {"j", p.vertex.j},
                   {"k", p.vertex.k},
                   {"clipped", p.clipped},
                   {"area", polygon_area(p.polygon)},
                   {"polygon", std::move(poly)}});
  }
  j["patches"] = std::move(arr);
  return j;
}

nlohmann::json matrix_to_triplets(const HamiltonianMatrix& H) {
  nlohmann::json j;
  j["dim"] = H.dim();
  j["model"] = to_string(H.model);
  j["J"] = H.J.J;
  auto entries = nlohmann::json::array();
  for (Eigen::Index c = 0; c < H.entries.cols(); ++c) {
    for (Eigen::Index r = 0; r < H.entries.rows(); ++r) {
      const std::complex<double> v = H.entries(r, c);
      if (v == 0.0) continue;
      entries.push_back({r + 1, c + 1, v.real(), v.imag()});
    }
  }
  j["entries"] = std::move(entries);
  return j;
}

}  // namespace ctqw
