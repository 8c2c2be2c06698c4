#include "ctqw/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace ctqw {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kSqrt2 = std::numbers::sqrt2;

void validate(const LatticeSpec& spec) {
  if (spec.n_j < 3 || spec.n_k < 3)
    throw ConfigError("lattice dimensions must satisfy n_j >= 3 and n_k >= 3");
  if (!(spec.a > 0.0)) throw ConfigError("lattice parameter a must be positive");
  if (spec.boundary == Boundary::Periodic && spec.kind != LatticeKind::Square)
    throw ConfigError("periodic boundaries are only defined for the square lattice");
}

}  // namespace

bool is_regular(LatticeKind kind) { return kind != LatticeKind::TruncatedSquare; }

int interior_degree(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Square: return 4;
    case LatticeKind::Triangular: return 6;
    case LatticeKind::Honeycomb: return 3;
    case LatticeKind::TruncatedSquare: return 3;
  }
  throw ConfigError("unknown lattice kind");
}

std::string to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Square: return "square";
    case LatticeKind::Triangular: return "triangular";
    case LatticeKind::Honeycomb: return "honeycomb";
    case LatticeKind::TruncatedSquare: return "truncated-square";
  }
  throw ConfigError("unknown lattice kind");
}

LatticeKind lattice_kind_from_string(const std::string& name) {
  if (name == "square") return LatticeKind::Square;
  if (name == "triangular") return LatticeKind::Triangular;
  if (name == "honeycomb") return LatticeKind::Honeycomb;
  if (name == "truncated-square") return LatticeKind::TruncatedSquare;
  throw ConfigError("unknown lattice kind: " + name);
}

int class_sign(VertexClass c) {
  switch (c) {
    case VertexClass::White:
    case VertexClass::WhiteDot: return +1;
    case VertexClass::Black:
    case VertexClass::BlackDot: return -1;
    case VertexClass::Equivalent: break;
  }
  throw ConfigError("vertex class carries no sublattice sign");
}

std::string to_string(VertexClass c) {
  switch (c) {
    case VertexClass::Equivalent: return "equivalent";
    case VertexClass::White: return "white";
    case VertexClass::Black: return "black";
    case VertexClass::WhiteDot: return "white-dot";
    case VertexClass::BlackDot: return "black-dot";
  }
  throw ConfigError("unknown vertex class");
}

char direction_label(Direction d) {
  return static_cast<char>('A' + static_cast<int>(d));
}

int linear_index(const LatticeSpec& spec, int j, int k) {
  if (j < 1 || j > spec.n_j || k < 1 || k > spec.n_k)
    throw ConfigError("vertex index out of range");
  return spec.n_k * (j - 1) + k;
}

VertexId inverse_index(const LatticeSpec& spec, int l) {
  if (l < 1 || l > spec.n_j * spec.n_k)
    throw ConfigError("linear index out of range");
  const int j = (l - 1) / spec.n_k + 1;
  const int k = (l - 1) % spec.n_k + 1;
  return {j, k};
}

std::pair<double, double> vertex_coords(LatticeKind kind, double a, int j, int k) {
  switch (kind) {
    case LatticeKind::Square:
      return {a * j, a * k};
    case LatticeKind::Triangular:
      // Even-k rows are shifted right by half a step.
      return {a * (j + 0.5 * (1 - k % 2)), a * (kSqrt3 * 0.5 * k)};
    case LatticeKind::Honeycomb: {
      const double x = kSqrt3 * 0.5 * j;
      const int dlt = (k - 1) / 2;
      const double y = k + dlt + (1 - j % 2) * (0.5 - k % 2);
      return {a * x, a * y};
    }
    case LatticeKind::TruncatedSquare: {
      const double x = (j + 1) / 2 + (j / 2) / kSqrt2;
      const double dlt = kSqrt2 * ((k - 1) / 2);
      const bool shifted = (j % 2) != (j % 4);
      const double y = k + dlt + (shifted ? kSqrt2 * (0.5 - k % 2) : 0.0);
      return {a * x, a * y};
    }
  }
  throw ConfigError("unknown lattice kind");
}

VertexClass vertex_class(LatticeKind kind, int j, int k) {
  switch (kind) {
    case LatticeKind::Square:
    case LatticeKind::Triangular:
      return VertexClass::Equivalent;
    case LatticeKind::Honeycomb:
      return ((j + k) % 2 == 0) ? VertexClass::White : VertexClass::Black;
    case LatticeKind::TruncatedSquare: {
      const int jm = j % 4;
      const bool odd_k = (k % 2 == 1);
      if (odd_k ? jm == 1 : jm == 3) return VertexClass::WhiteDot;
      if (odd_k ? jm == 2 : jm == 0) return VertexClass::Black;
      if (odd_k ? jm == 3 : jm == 1) return VertexClass::White;
      return VertexClass::BlackDot;
    }
  }
  throw ConfigError("unknown lattice kind");
}

VertexId center_vertex(const LatticeSpec& spec) {
  if (spec.n_j % 2 == 0 || spec.n_k % 2 == 0)
    throw ConfigError("center vertex requires odd n_j and n_k");
  return {(spec.n_j + 1) / 2, (spec.n_k + 1) / 2};
}

bool Lattice::is_boundary(int l0) const {
  if (spec.boundary == Boundary::Periodic) return false;
  const VertexId v = vertex(l0);
  return v.j == 1 || v.j == spec.n_j || v.k == 1 || v.k == spec.n_k;
}

VertexId Lattice::vertex(int l0) const { return inverse_index(spec, l0 + 1); }

int Lattice::linear0(VertexId v) const { return linear_index(spec, v.j, v.k) - 1; }

std::pair<double, double> direction_offset(LatticeKind kind, VertexClass c,
                                           Direction d, double a) {
  const int i = static_cast<int>(d);
  switch (kind) {
    case LatticeKind::Square: {
      static constexpr std::array<std::array<double, 2>, 4> off = {
          {{+1, 0}, {0, +1}, {-1, 0}, {0, -1}}};
      if (i >= 4) throw ConfigError("square lattice has directions A..D");
      return {a * off[i][0], a * off[i][1]};
    }
    case LatticeKind::Triangular: {
      static const std::array<std::array<double, 2>, 6> off = {
          {{+1.0, 0.0},
           {+0.5, +kSqrt3 / 2},
           {-0.5, +kSqrt3 / 2},
           {-1.0, 0.0},
           {-0.5, -kSqrt3 / 2},
           {+0.5, -kSqrt3 / 2}}};
      return {a * off[i][0], a * off[i][1]};
    }
    case LatticeKind::Honeycomb: {
      if (i >= 3) throw ConfigError("honeycomb lattice has directions A..C");
      const double s = class_sign(c);
      switch (d) {
        case Direction::A: return {a * kSqrt3 / 2, -s * a / 2};
        case Direction::B: return {-a * kSqrt3 / 2, -s * a / 2};
        default: return {0.0, s * a};
      }
    }
    case LatticeKind::TruncatedSquare:
      throw ConfigError("truncated-square lattice has no direction table");
  }
  throw ConfigError("unknown lattice kind");
}

namespace {

void build_square_adjacency(Lattice& lat) {
  const auto& spec = lat.spec;
  const bool periodic = spec.boundary == Boundary::Periodic;
  // A..D index steps matching the (+a,0), (0,+a), (-a,0), (0,-a) offsets.
  constexpr std::array<std::array<int, 2>, 4> step = {
      {{+1, 0}, {0, +1}, {-1, 0}, {0, -1}}};
  for (int j = 1; j <= spec.n_j; ++j)
    for (int k = 1; k <= spec.n_k; ++k) {
      auto& nb = lat.adj[linear_index(spec, j, k) - 1];
      for (int d = 0; d < 4; ++d) {
        int tj = j + step[d][0], tk = k + step[d][1];
        if (periodic) {
          tj = (tj - 1 + spec.n_j) % spec.n_j + 1;
          tk = (tk - 1 + spec.n_k) % spec.n_k + 1;
        } else if (tj < 1 || tj > spec.n_j || tk < 1 || tk > spec.n_k) {
          continue;
        }
        nb.push_back({linear_index(spec, tj, tk) - 1, static_cast<Direction>(d)});
      }
    }
}

void build_triangular_adjacency(Lattice& lat) {
  const auto& spec = lat.spec;
  // Index steps for A..F depend on the parity of k (even rows are shifted).
  constexpr std::array<std::array<int, 2>, 6> odd_k = {
      {{+1, 0}, {0, +1}, {-1, +1}, {-1, 0}, {-1, -1}, {0, -1}}};
  constexpr std::array<std::array<int, 2>, 6> even_k = {
      {{+1, 0}, {+1, +1}, {0, +1}, {-1, 0}, {0, -1}, {+1, -1}}};
  for (int j = 1; j <= spec.n_j; ++j)
    for (int k = 1; k <= spec.n_k; ++k) {
      auto& nb = lat.adj[linear_index(spec, j, k) - 1];
      const auto& step = (k % 2 == 1) ? odd_k : even_k;
      for (int d = 0; d < 6; ++d) {
        const int tj = j + step[d][0], tk = k + step[d][1];
        if (tj < 1 || tj > spec.n_j || tk < 1 || tk > spec.n_k) continue;
        nb.push_back({linear_index(spec, tj, tk) - 1, static_cast<Direction>(d)});
      }
    }
}

void build_honeycomb_adjacency(Lattice& lat) {
  const auto& spec = lat.spec;
  // Work in the exact integer chart (j, 2y/a): every vertex and every
  // neighbor target has integer coordinates there, so lookups are exact.
  auto ty = [](int j, int k) {
    return 2 * k + 2 * ((k - 1) / 2) + (1 - j % 2) * (1 - 2 * (k % 2));
  };
  std::unordered_map<long long, int> index;  // (j, ty) -> 0-based linear index
  auto key = [](int j, int t) {
    return (static_cast<long long>(j) << 24) | static_cast<long long>(t);
  };
  for (int j = 1; j <= spec.n_j; ++j)
    for (int k = 1; k <= spec.n_k; ++k)
      index[key(j, ty(j, k))] = linear_index(spec, j, k) - 1;

  for (int j = 1; j <= spec.n_j; ++j)
    for (int k = 1; k <= spec.n_k; ++k) {
      const int l0 = linear_index(spec, j, k) - 1;
      auto& nb = lat.adj[l0];
      const int s = class_sign(lat.cls[l0]);
      const int t = ty(j, k);
      // A: (+sqrt3/2, -s/2), B: (-sqrt3/2, -s/2), C: (0, +s) in units of a.
      const std::array<std::array<int, 2>, 3> step = {
          {{+1, -s}, {-1, -s}, {0, +2 * s}}};
      for (int d = 0; d < 3; ++d) {
        auto it = index.find(key(j + step[d][0], t + step[d][1]));
        if (it == index.end()) continue;
        nb.push_back({it->second, static_cast<Direction>(d)});
      }
    }
}

void build_truncated_square_adjacency(Lattice& lat) {
  const auto& spec = lat.spec;
  const double a = spec.a;
  // No direction table exists; neighbors are the index-window vertices at
  // Euclidean distance a. Labels follow discovery order.
  constexpr std::array<std::array<int, 2>, 8> window = {
      {{+1, 0}, {0, +1}, {-1, 0}, {0, -1}, {+1, +1}, {-1, +1}, {-1, -1}, {+1, -1}}};
  for (int j = 1; j <= spec.n_j; ++j)
    for (int k = 1; k <= spec.n_k; ++k) {
      const int l0 = linear_index(spec, j, k) - 1;
      auto& nb = lat.adj[l0];
      for (const auto& w : window) {
        const int tj = j + w[0], tk = k + w[1];
        if (tj < 1 || tj > spec.n_j || tk < 1 || tk > spec.n_k) continue;
        const int t0 = linear_index(spec, tj, tk) - 1;
        const double dx = lat.x[t0] - lat.x[l0], dy = lat.y[t0] - lat.y[l0];
        if (std::abs(std::hypot(dx, dy) - a) < 1e-9 * a)
          nb.push_back({t0, static_cast<Direction>(nb.size())});
      }
    }
}

}  // namespace

Lattice build_lattice(const LatticeSpec& spec) {
  validate(spec);
  Lattice lat;
  lat.spec = spec;
  const int n = spec.n_j * spec.n_k;
  lat.x.resize(n);
  lat.y.resize(n);
  lat.cls.resize(n);
  lat.adj.resize(n);
  for (int j = 1; j <= spec.n_j; ++j)
    for (int k = 1; k <= spec.n_k; ++k) {
      const int l0 = linear_index(spec, j, k) - 1;
      std::tie(lat.x[l0], lat.y[l0]) = vertex_coords(spec.kind, spec.a, j, k);
      lat.cls[l0] = vertex_class(spec.kind, j, k);
    }
  switch (spec.kind) {
    case LatticeKind::Square: build_square_adjacency(lat); break;
    case LatticeKind::Triangular: build_triangular_adjacency(lat); break;
    case LatticeKind::Honeycomb: build_honeycomb_adjacency(lat); break;
    case LatticeKind::TruncatedSquare: build_truncated_square_adjacency(lat); break;
  }
  return lat;
}

namespace {

// Dual-cell corner offsets for a truncated-square vertex, derived by probing
// an interior vertex of the requested class on a throwaway lattice: the cell
// corners are the centers of the three tiles meeting at the vertex (one
// square at distance a/sqrt2 along the bisector of the perpendicular edge
// pair, two octagons at circumradius a/(2 sin pi/8) along the 135-degree
// bisectors).
std::array<std::array<double, 2>, 3> truncated_square_patch_offsets(VertexClass c) {
  static const auto table = [] {
    LatticeSpec probe_spec{LatticeKind::TruncatedSquare, 9, 9, 1.0, Boundary::Open};
    const Lattice probe = build_lattice(probe_spec);
    std::array<std::array<std::array<double, 2>, 3>, 4> result{};
    std::array<bool, 4> done{};
    auto slot = [](VertexClass cl) {
      switch (cl) {
        case VertexClass::White: return 0;
        case VertexClass::Black: return 1;
        case VertexClass::WhiteDot: return 2;
        default: return 3;  // BlackDot
      }
    };
    const double r_oct = 1.0 / (2.0 * std::sin(std::numbers::pi / 8));
    for (int j = 3; j <= 7; ++j)
      for (int k = 3; k <= 7; ++k) {
        const int l0 = linear_index(probe_spec, j, k) - 1;
        if (probe.degree(l0) != 3) continue;
        const int s = slot(probe.cls[l0]);
        if (done[s]) continue;
        std::array<std::array<double, 2>, 3> e{};
        for (int d = 0; d < 3; ++d)
          e[d] = {probe.x[probe.adj[l0][d].l] - probe.x[l0],
                  probe.y[probe.adj[l0][d].l] - probe.y[l0]};
        std::vector<std::array<double, 2>> corners;
        for (int p = 0; p < 3; ++p)
          for (int q = p + 1; q < 3; ++q) {
            const double dot = e[p][0] * e[q][0] + e[p][1] * e[q][1];
            double bx = e[p][0] + e[q][0], by = e[p][1] + e[q][1];
            const double bn = std::hypot(bx, by);
            bx /= bn;
            by /= bn;
            // dot approx 0: the square tile sits between these edges;
            // dot approx cos 135: an octagon does.
            const double r = (std::abs(dot) < 0.5) ? 1.0 / kSqrt2 : r_oct;
            corners.push_back({r * bx, r * by});
          }
        std::sort(corners.begin(), corners.end(),
                  [](const auto& u, const auto& v) {
                    return std::atan2(u[1], u[0]) < std::atan2(v[1], v[0]);
                  });
        result[s] = {corners[0], corners[1], corners[2]};
        done[s] = true;
      }
    return result;
  }();
  switch (c) {
    case VertexClass::White: return table[0];
    case VertexClass::Black: return table[1];
    case VertexClass::WhiteDot: return table[2];
    case VertexClass::BlackDot: return table[3];
    default: throw ConfigError("truncated-square patch needs a four-way class");
  }
}

std::vector<std::array<double, 2>> patch_polygon(LatticeKind kind, VertexClass c,
                                                 double a, double cx, double cy) {
  std::vector<std::array<double, 2>> poly;
  switch (kind) {
    case LatticeKind::Square:
      poly = {{cx + a / 2, cy - a / 2},
              {cx + a / 2, cy + a / 2},
              {cx - a / 2, cy + a / 2},
              {cx - a / 2, cy - a / 2}};
      break;
    case LatticeKind::Triangular: {
      // Hexagon through the six surrounding triangle centroids.
      const double r = a / kSqrt3;
      for (int m = 0; m < 6; ++m) {
        const double th = std::numbers::pi * (30.0 + 60.0 * m) / 180.0;
        poly.push_back({cx + r * std::cos(th), cy + r * std::sin(th)});
      }
      break;
    }
    case LatticeKind::Honeycomb: {
      // Triangle through the three surrounding hexagon centers (distance a).
      const double base = (class_sign(c) > 0) ? 30.0 : 90.0;
      for (int m = 0; m < 3; ++m) {
        const double th = std::numbers::pi * (base + 120.0 * m) / 180.0;
        poly.push_back({cx + a * std::cos(th), cy + a * std::sin(th)});
      }
      break;
    }
    case LatticeKind::TruncatedSquare: {
      for (const auto& off : truncated_square_patch_offsets(c))
        poly.push_back({cx + a * off[0], cy + a * off[1]});
      break;
    }
  }
  return poly;
}

}  // namespace

std::vector<DualPatch> dual_patches(const Lattice& lat) {
  std::vector<DualPatch> patches;
  patches.reserve(lat.size());
  for (int l0 = 0; l0 < lat.size(); ++l0) {
    DualPatch p;
    p.vertex = lat.vertex(l0);
    p.clipped = lat.is_boundary(l0);
    p.polygon = patch_polygon(lat.spec.kind, lat.cls[l0], lat.spec.a, lat.x[l0],
                              lat.y[l0]);
    patches.push_back(std::move(p));
  }
  return patches;
}

double polygon_area(const std::vector<std::array<double, 2>>& poly) {
  double s = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    s += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * s;
}

}  // namespace ctqw
