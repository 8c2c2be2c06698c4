#pragma once

#include <Eigen/Core>
#include <utility>

#include "ctqw/lattice.hpp"

namespace ctqw {

// Second-derivative stencil from Taylor expansion:
//   lap f(V) = neighbor_coeff * (sum_NN f_W - degree * f_V).
// Coefficients: 1/a^2 (square), 2/(3a^2) (triangular), 4/(3a^2) (honeycomb).
struct LaplacianStencil {
  LatticeKind kind = LatticeKind::Square;
  double neighbor_coeff = 0.0;  // 1/a^2 units
  double center_coeff = 0.0;    // = -degree * neighbor_coeff
  int degree = 0;
};

LaplacianStencil laplacian_stencil(LatticeKind kind, double a);

// First-derivative stencils from the discrete Green's formulae. Each neighbor
// direction carries a coefficient pair (cx, cy):
//   grad_x f(V) = sum_d cx(d) f_{W_d},   grad_y f(V) = sum_d cy(d) f_{W_d}.
// Coefficients sum to zero, so constants are annihilated; the honeycomb y
// component flips sign with the sublattice class. Only defined where the full
// neighbor set exists (interior vertices).
struct GradientStencil {
  LatticeKind kind = LatticeKind::Square;
  double a = 1.0;
  std::pair<double, double> coeff(Direction d, VertexClass c) const;
};

GradientStencil gradient_stencil(LatticeKind kind, double a);

// Area of the Green's-formula contour cell: 2a^2 (square), (3 sqrt3/2) a^2
// (triangular), (3 sqrt3/4) a^2 (honeycomb).
double cell_area(LatticeKind kind, double a);

// Hopping amplitude of the continuum-limit kinetic term (hbar = 1):
//   J_S = 1/(2 m a^2), J_T = (2/3) J_S, J_H = (4/3) J_S.
// The truncated square has no Taylor stencil; its Hamiltonian is -J L with J
// conventionally set to the square-lattice value (observables depend on Jt
// only, so the choice is a pure time rescaling).
struct HoppingAmplitude {
  double J = 1.0;
  LatticeKind kind = LatticeKind::Square;
  double m = 0.5;
};

HoppingAmplitude hopping_amplitude(LatticeKind kind, double m, double a);

// Walker mass fixed by the square-lattice energy scale: J_S = 1/(2 m a^2).
double walker_mass(double j_square, double a);

// Apply the Taylor Laplacian to a per-vertex field. Boundary rows keep the
// same per-neighbor coefficient and use the actual (reduced) degree on the
// diagonal, consistent with the graph Laplacian of the finite graph.
Eigen::VectorXd apply_laplacian(const Lattice& lat, const Eigen::VectorXd& field);
Eigen::VectorXcd apply_laplacian(const Lattice& lat, const Eigen::VectorXcd& field);

// Graph Laplacian L = A - D of the finite graph (all kinds).
Eigen::MatrixXd graph_laplacian_matrix(const Lattice& lat);

// Green's-formula gradient at one vertex; requires the full interior neighbor
// set (boundary gradients are undefined).
std::pair<double, double> gradient_at(const Lattice& lat,
                                      const Eigen::VectorXd& field, int l0);

}  // namespace ctqw
