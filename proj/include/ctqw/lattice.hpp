#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ctqw/errors.hpp"

namespace ctqw {

// The three regular planar tessellations plus the semiregular truncated-square
// tiling (one square and two octagons around every vertex). The truncated
// square supports only the graph-Laplacian Hamiltonian; it has no Taylor or
// Green's-formula stencils.
enum class LatticeKind { Square, Triangular, Honeycomb, TruncatedSquare };

enum class Boundary { Open, Periodic };

bool is_regular(LatticeKind kind);
int interior_degree(LatticeKind kind);  // 4, 6, 3, 3
std::string to_string(LatticeKind kind);
LatticeKind lattice_kind_from_string(const std::string& name);

// Sublattice classes. Square and triangular vertices are all equivalent
// (Bravais lattices). The honeycomb alternates White/Black with the parity of
// j+k. The truncated square needs four classes, keyed on (k mod 2, j mod 4),
// to pin down the orientation of each vertex's three edges.
enum class VertexClass : std::uint8_t { Equivalent, White, Black, WhiteDot, BlackDot };

// +1 for White/WhiteDot, -1 for Black/BlackDot (the honeycomb gradient and
// neighbor tables flip sign between the two sublattices).
int class_sign(VertexClass c);
std::string to_string(VertexClass c);

// Neighbor direction labels from the interior tables: A..D (square),
// A..F (triangular), A..C (honeycomb). Truncated-square edges get labels in
// discovery order; the tiling has no global direction table.
enum class Direction : std::uint8_t { A, B, C, D, E, F };
char direction_label(Direction d);

struct LatticeSpec {
  LatticeKind kind = LatticeKind::Square;
  int n_j = 3;  // vertices per j-polyline
  int n_k = 3;  // vertices per k-polyline
  double a = 1.0;  // lattice parameter (nearest-neighbor distance), QW units
  Boundary boundary = Boundary::Open;  // Periodic is valid for Square only
};

struct VertexId {
  int j = 1;
  int k = 1;
  friend bool operator==(const VertexId&, const VertexId&) = default;
};

// l = n_k (j-1) + k, both sides 1-based.
int linear_index(const LatticeSpec& spec, int j, int k);
VertexId inverse_index(const LatticeSpec& spec, int l);

// True plane coordinates of vertex (j,k); every kind keeps nearest-neighbor
// distance equal to a.
std::pair<double, double> vertex_coords(LatticeKind kind, double a, int j, int k);
VertexClass vertex_class(LatticeKind kind, int j, int k);

// Center of a (2n+1)x(2m+1) graph; requires both dimensions odd.
VertexId center_vertex(const LatticeSpec& spec);

struct Neighbor {
  int l = 0;  // 0-based linear index of the neighbor vertex
  Direction dir = Direction::A;
};

struct Lattice {
  LatticeSpec spec;
  std::vector<double> x, y;            // true coordinates, index l-1
  std::vector<VertexClass> cls;        // vertex classes, index l-1
  std::vector<std::vector<Neighbor>> adj;  // ordered by direction label

  int size() const { return spec.n_j * spec.n_k; }
  int degree(int l0) const { return static_cast<int>(adj[l0].size()); }
  // Vertices on the index rim; a periodic lattice has none.
  bool is_boundary(int l0) const;
  VertexId vertex(int l0) const;
  int linear0(VertexId v) const;  // 0-based storage index
};

Lattice build_lattice(const LatticeSpec& spec);

// Interior neighbor displacement (relative coordinates) for a direction label,
// as listed in the nearest-neighbor tables. Honeycomb depends on the vertex
// class; TruncatedSquare has no table and is rejected.
std::pair<double, double> direction_offset(LatticeKind kind, VertexClass c,
                                           Direction d, double a);

// Dual-tessellation cell centered on each vertex: square -> unit square,
// triangular -> regular hexagon, honeycomb -> equilateral triangle,
// truncated square -> right isosceles triangle (tetrakis tiling). Boundary
// vertices keep the interior shape and are flagged clipped.
struct DualPatch {
  VertexId vertex;
  bool clipped = false;
  std::vector<std::array<double, 2>> polygon;  // CCW corners
};

std::vector<DualPatch> dual_patches(const Lattice& lat);

// Shoelace area of a simple polygon (positive for CCW orientation).
double polygon_area(const std::vector<std::array<double, 2>>& poly);

}  // namespace ctqw
