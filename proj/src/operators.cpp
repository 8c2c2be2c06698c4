#include "ctqw/operators.hpp"

#include <cmath>
#include <numbers>

namespace ctqw {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

void require_regular(LatticeKind kind, const char* what) {
  if (!is_regular(kind))
    throw UnsupportedStencil(std::string(what) +
                             " is undefined on the truncated-square lattice");
}

}  // namespace

LaplacianStencil laplacian_stencil(LatticeKind kind, double a) {
  require_regular(kind, "the Taylor Laplacian stencil");
  if (!(a > 0.0)) throw ConfigError("lattice parameter a must be positive");
  LaplacianStencil s;
  s.kind = kind;
  s.degree = interior_degree(kind);
  switch (kind) {
    case LatticeKind::Square: s.neighbor_coeff = 1.0 / (a * a); break;
    case LatticeKind::Triangular: s.neighbor_coeff = 2.0 / (3.0 * a * a); break;
    default: s.neighbor_coeff = 4.0 / (3.0 * a * a); break;
  }
  s.center_coeff = -s.degree * s.neighbor_coeff;
  return s;
}

std::pair<double, double> GradientStencil::coeff(Direction d, VertexClass c) const {
  const int i = static_cast<int>(d);
  switch (kind) {
    case LatticeKind::Square: {
      // grad_x = (f_A - f_C)/2a, grad_y = (f_B - f_D)/2a
      static constexpr std::array<std::array<double, 2>, 4> w = {
          {{+0.5, 0}, {0, +0.5}, {-0.5, 0}, {0, -0.5}}};
      if (i >= 4) throw ConfigError("square stencil has directions A..D");
      return {w[i][0] / a, w[i][1] / a};
    }
    case LatticeKind::Triangular: {
      // grad_x = (2f_A + f_B - f_C - 2f_D - f_E + f_F)/6a
      // grad_y = (f_B + f_C - f_E - f_F)/(2 sqrt3 a)
      static const std::array<std::array<double, 2>, 6> w = {
          {{2.0 / 6, 0},
           {1.0 / 6, 1.0 / (2 * kSqrt3)},
           {-1.0 / 6, 1.0 / (2 * kSqrt3)},
           {-2.0 / 6, 0},
           {-1.0 / 6, -1.0 / (2 * kSqrt3)},
           {1.0 / 6, -1.0 / (2 * kSqrt3)}}};
      return {w[i][0] / a, w[i][1] / a};
    }
    case LatticeKind::Honeycomb: {
      // grad_x = (f_A - f_B)/(sqrt3 a), grad_y = sgn * (2f_C - f_A - f_B)/3a
      if (i >= 3) throw ConfigError("honeycomb stencil has directions A..C");
      const double s = class_sign(c);
      switch (d) {
        case Direction::A: return {1.0 / (kSqrt3 * a), -s / (3.0 * a)};
        case Direction::B: return {-1.0 / (kSqrt3 * a), -s / (3.0 * a)};
        default: return {0.0, 2.0 * s / (3.0 * a)};
      }
    }
    default:
      throw UnsupportedStencil(
          "gradient stencil is undefined on the truncated-square lattice");
  }
}

GradientStencil gradient_stencil(LatticeKind kind, double a) {
  require_regular(kind, "the Green's-formula gradient stencil");
  if (!(a > 0.0)) throw ConfigError("lattice parameter a must be positive");
  return {kind, a};
}

double cell_area(LatticeKind kind, double a) {
  require_regular(kind, "the Green's-formula cell area");
  switch (kind) {
    case LatticeKind::Square: return 2.0 * a * a;
    case LatticeKind::Triangular: return 1.5 * kSqrt3 * a * a;
    default: return 0.75 * kSqrt3 * a * a;
  }
}

HoppingAmplitude hopping_amplitude(LatticeKind kind, double m, double a) {
  if (!(m > 0.0)) throw ConfigError("walker mass must be positive");
  if (!(a > 0.0)) throw ConfigError("lattice parameter a must be positive");
  HoppingAmplitude h;
  h.kind = kind;
  h.m = m;
  switch (kind) {
    case LatticeKind::Square:
    case LatticeKind::TruncatedSquare: h.J = 1.0 / (2.0 * m * a * a); break;
    case LatticeKind::Triangular: h.J = 1.0 / (3.0 * m * a * a); break;
    case LatticeKind::Honeycomb: h.J = 2.0 / (3.0 * m * a * a); break;
  }
  return h;
}

double walker_mass(double j_square, double a) {
  if (!(j_square > 0.0)) throw ConfigError("energy scale J_S must be positive");
  if (!(a > 0.0)) throw ConfigError("lattice parameter a must be positive");
  return 1.0 / (2.0 * j_square * a * a);
}

namespace {

template <typename Vec>
Vec apply_laplacian_impl(const Lattice& lat, const Vec& field) {
  if (field.size() != lat.size())
    throw ConfigError("field length does not match the vertex count");
  const LaplacianStencil s = laplacian_stencil(lat.spec.kind, lat.spec.a);
  Vec out(field.size());
  for (int v = 0; v < lat.size(); ++v) {
    typename Vec::Scalar acc = -static_cast<double>(lat.degree(v)) * field[v];
    for (const Neighbor& nb : lat.adj[v]) acc += field[nb.l];
    out[v] = s.neighbor_coeff * acc;
  }
  return out;
}

}  // namespace

Eigen::VectorXd apply_laplacian(const Lattice& lat, const Eigen::VectorXd& field) {
  return apply_laplacian_impl(lat, field);
}

Eigen::VectorXcd apply_laplacian(const Lattice& lat, const Eigen::VectorXcd& field) {
  return apply_laplacian_impl(lat, field);
}

Eigen::MatrixXd graph_laplacian_matrix(const Lattice& lat) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(lat.size(), lat.size());
  for (int v = 0; v < lat.size(); ++v) {
    for (const Neighbor& nb : lat.adj[v]) L(v, nb.l) = 1.0;
    L(v, v) = -static_cast<double>(lat.degree(v));
  }
  return L;
}

std::pair<double, double> gradient_at(const Lattice& lat,
                                      const Eigen::VectorXd& field, int l0) {
  if (field.size() != lat.size())
    throw ConfigError("field length does not match the vertex count");
  if (l0 < 0 || l0 >= lat.size()) throw ConfigError("vertex index out of range");
  const GradientStencil g = gradient_stencil(lat.spec.kind, lat.spec.a);
  if (lat.degree(l0) != interior_degree(lat.spec.kind))
    throw ConfigError("gradient is undefined at boundary vertices");
  double gx = 0.0, gy = 0.0;
  for (const Neighbor& nb : lat.adj[l0]) {
    const auto [cx, cy] = g.coeff(nb.dir, lat.cls[l0]);
    gx += cx * field[nb.l];
    gy += cy * field[nb.l];
  }
  return {gx, gy};
}

}  // namespace ctqw
