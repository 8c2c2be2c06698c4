#include "ctqw/hamiltonian.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace ctqw {

using std::complex;

GaugeField make_gauge(double B, double xc, double yc, double q) {
  if (B < 0.0) throw ConfigError("field modulus B must be nonnegative");
  return {B, xc, yc, q};
}

std::pair<double, double> vector_potential(const GaugeField& g, double x, double y) {
  return {-0.5 * g.B * (y - g.yc), 0.5 * g.B * (x - g.xc)};
}

double magnetic_length(const GaugeField& g) {
  if (g.B == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / std::sqrt(g.B);
}

bool field_exceeds_lattice_scale(const GaugeField& g, double a) {
  return g.B * a * a > 1.0;
}

double peierls_phase(const GaugeField& g, std::pair<double, double> r0,
                     std::pair<double, double> r1) {
  const auto [ax0, ay0] = vector_potential(g, r0.first, r0.second);
  const auto [ax1, ay1] = vector_potential(g, r1.first, r1.second);
  // Trapezoidal rule; exact here because A is linear in the coordinates.
  return g.q * 0.5 *
         ((r1.first - r0.first) * (ax0 + ax1) + (r1.second - r0.second) * (ay0 + ay1));
}

std::string to_string(ModelKind m) {
  switch (m) {
    case ModelKind::Free: return "free";
    case ModelKind::PeierlsOriginal: return "peierls";
    case ModelKind::PeierlsModified: return "peierls-modified";
    case ModelKind::Discretized: return "discretized";
    case ModelKind::HarmonicOscillator: return "harmonic";
  }
  throw ConfigError("unknown model kind");
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "free") return ModelKind::Free;
  if (name == "peierls") return ModelKind::PeierlsOriginal;
  if (name == "peierls-modified") return ModelKind::PeierlsModified;
  if (name == "discretized") return ModelKind::Discretized;
  if (name == "harmonic") return ModelKind::HarmonicOscillator;
  throw ConfigError("unknown model kind: " + name);
}

bool model_supported(ModelKind m, LatticeKind kind) {
  if (is_regular(kind)) return true;
  return m == ModelKind::Free || m == ModelKind::PeierlsOriginal;
}

double onsite_quadratic_factor(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Square: return 1.0;
    case LatticeKind::Triangular: return 1.5;
    case LatticeKind::Honeycomb: return 0.75;
    default:
      throw UnsupportedStencil(
          "the discretized on-site term is undefined on the truncated square");
  }
}

namespace {

struct Triplet {
  int r, c;
  complex<double> v;
};

// Shared assembly: hopping entry H[W,V] = -J * factor(phase of V->W) for every
// directed edge, plus a model-specific real diagonal. Entries are generated in
// both directions independently from the edge-phase formula; Hermiticity is
// asserted afterwards and the matrix is symmetrized only to canonicalize
// rounding.
template <typename HopFactor, typename DiagTerm>
HamiltonianMatrix assemble(const Lattice& lat, const HoppingAmplitude& J,
                           HopFactor&& hop_factor, DiagTerm&& diag_term) {
  if (J.kind != lat.spec.kind)
    throw ConfigError("hopping amplitude was derived for a different lattice kind");
  const int n = lat.size();
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(n) * (interior_degree(lat.spec.kind) + 1));
  for (int v = 0; v < n; ++v) {
    for (const Neighbor& nb : lat.adj[v])
      entries.push_back({nb.l, v, -J.J * hop_factor(v, nb.l)});
    entries.push_back({v, v, complex<double>(J.J * lat.degree(v) + diag_term(v), 0.0)});
  }
  HamiltonianMatrix H;
  H.J = J;
  H.entries = Eigen::MatrixXcd::Zero(n, n);
  for (const Triplet& t : entries) H.entries(t.r, t.c) += t.v;
  const double res = hermiticity_residual(H.entries);
  if (res > 1e-12)
    throw NumericalError("assembled Hamiltonian is not Hermitian (residual " +
                         std::to_string(res) + ")");
  H.entries = 0.5 * (H.entries + H.entries.adjoint()).eval();
  return H;
}

void require_open_boundary(const Lattice& lat, const char* model) {
  if (lat.spec.boundary == Boundary::Periodic)
    throw ConfigError(std::string(model) +
                      " is not offered on periodic lattices (symmetric gauge "
                      "breaks flux uniformity at the seam)");
}

double edge_phase(const Lattice& lat, const GaugeField& g, int v, int w) {
  return peierls_phase(g, {lat.x[v], lat.y[v]}, {lat.x[w], lat.y[w]});
}

double onsite_a2(const Lattice& lat, const GaugeField& g, const HoppingAmplitude& J,
                 int v) {
  const auto [ax, ay] = vector_potential(g, lat.x[v], lat.y[v]);
  const double a = lat.spec.a;
  return J.J * onsite_quadratic_factor(lat.spec.kind) * g.q * g.q * a * a *
         (ax * ax + ay * ay);
}

}  // namespace

HamiltonianMatrix build_free(const Lattice& lat, const HoppingAmplitude& J) {
  HamiltonianMatrix H = assemble(
      lat, J, [](int, int) { return complex<double>(1.0, 0.0); },
      [](int) { return 0.0; });
  H.model = ModelKind::Free;
  return H;
}

HamiltonianMatrix build_peierls(const Lattice& lat, const HoppingAmplitude& J,
                                const GaugeField& g) {
  require_open_boundary(lat, "the Peierls model");
  HamiltonianMatrix H = assemble(
      lat, J,
      [&](int v, int w) {
        return std::exp(complex<double>(0.0, edge_phase(lat, g, v, w)));
      },
      [](int) { return 0.0; });
  H.model = ModelKind::PeierlsOriginal;
  H.field = g;
  return H;
}

HamiltonianMatrix build_discretized(const Lattice& lat, const HoppingAmplitude& J,
                                    const GaugeField& g) {
  require_open_boundary(lat, "the discretized model");
  if (!model_supported(ModelKind::Discretized, lat.spec.kind))
    throw UnsupportedStencil(
        "the discretized model needs gradient stencils; truncated square has none");
  HamiltonianMatrix H = assemble(
      lat, J,
      [&](int v, int w) {
        return complex<double>(1.0, edge_phase(lat, g, v, w));
      },
      [&](int v) { return onsite_a2(lat, g, J, v); });
  H.model = ModelKind::Discretized;
  H.field = g;
  return H;
}

HamiltonianMatrix build_peierls_modified(const Lattice& lat,
                                         const HoppingAmplitude& J,
                                         const GaugeField& g) {
  require_open_boundary(lat, "the modified Peierls model");
  if (!model_supported(ModelKind::PeierlsModified, lat.spec.kind))
    throw UnsupportedStencil(
        "the modified Peierls model needs the discretized on-site term; "
        "truncated square has none");
  HamiltonianMatrix H = assemble(
      lat, J,
      [&](int v, int w) {
        return std::exp(complex<double>(0.0, edge_phase(lat, g, v, w)));
      },
      [&](int v) { return onsite_a2(lat, g, J, v); });
  H.model = ModelKind::PeierlsModified;
  H.field = g;
  return H;
}

HamiltonianMatrix build_harmonic(const Lattice& lat, const HoppingAmplitude& J,
                                 const GaugeField& g) {
  require_open_boundary(lat, "the harmonic-oscillator model");
  if (!model_supported(ModelKind::HarmonicOscillator, lat.spec.kind))
    throw UnsupportedStencil(
        "the harmonic-oscillator model needs the walker mass relation; "
        "truncated square has none");
  const double well = g.q * g.q * g.B * g.B / (8.0 * J.m);
  HamiltonianMatrix H = assemble(
      lat, J, [](int, int) { return complex<double>(1.0, 0.0); },
      [&](int v) {
        const double dx = lat.x[v] - g.xc, dy = lat.y[v] - g.yc;
        return well * (dx * dx + dy * dy);
      });
  H.model = ModelKind::HarmonicOscillator;
  H.field = g;
  return H;
}

HamiltonianMatrix build_hamiltonian(const Lattice& lat, ModelKind model,
                                    const HoppingAmplitude& J, const GaugeField& g) {
  switch (model) {
    case ModelKind::Free: return build_free(lat, J);
    case ModelKind::PeierlsOriginal: return build_peierls(lat, J, g);
    case ModelKind::PeierlsModified: return build_peierls_modified(lat, J, g);
    case ModelKind::Discretized: return build_discretized(lat, J, g);
    case ModelKind::HarmonicOscillator: return build_harmonic(lat, J, g);
  }
  throw ConfigError("unknown model kind");
}

double hermiticity_residual(const Eigen::MatrixXcd& H) {
  if (H.rows() != H.cols()) throw ConfigError("Hermiticity requires a square matrix");
  return (H - H.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace ctqw
