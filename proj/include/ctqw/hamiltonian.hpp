#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <utility>

#include "ctqw/lattice.hpp"
#include "ctqw/operators.hpp"

namespace ctqw {

// Uniform perpendicular field B in the symmetric gauge centered on (xc, yc):
//   A^x = -(B/2)(y - yc),  A^y = +(B/2)(x - xc).
// QW units (hbar = 1); q defaults to the unit charge.
struct GaugeField {
  double B = 0.0;
  double xc = 0.0;
  double yc = 0.0;
  double q = 1.0;
};

// Validating constructor: B < 0 is a hard error. B > 1 (magnetic length
// below the lattice constant) is legal but worth a warning at the surface;
// see field_exceeds_lattice_scale.
GaugeField make_gauge(double B, double xc, double yc, double q = 1.0);

std::pair<double, double> vector_potential(const GaugeField& g, double x, double y);

// l_B = B^(-1/2); +inf at zero field.
double magnetic_length(const GaugeField& g);

// True when l_B < a, i.e. B a^2 > 1: the field varies below the lattice scale.
bool field_exceeds_lattice_scale(const GaugeField& g, double a);

// Line integral (q/hbar) * integral of A . dr from r0 to r1, evaluated with
// the trapezoidal rule — exact for the linear symmetric-gauge potential.
// Antisymmetric under endpoint exchange.
double peierls_phase(const GaugeField& g, std::pair<double, double> r0,
                     std::pair<double, double> r1);

enum class ModelKind { Free, PeierlsOriginal, PeierlsModified, Discretized, HarmonicOscillator };

std::string to_string(ModelKind m);
ModelKind model_kind_from_string(const std::string& name);

// The discretized, Peierls-modified, and harmonic models need the gradient /
// mass machinery of the regular tessellations; the truncated square supports
// only Free and PeierlsOriginal.
bool model_supported(ModelKind m, LatticeKind kind);

struct HamiltonianMatrix {
  Eigen::MatrixXcd entries;
  ModelKind model = ModelKind::Free;
  HoppingAmplitude J;
  std::optional<GaugeField> field;  // absent for Free

  int dim() const { return static_cast<int>(entries.rows()); }
};

// Free walker, H = -J L: off-diagonal -J on edges, diagonal +J deg(V)
// (positive-semidefinite sign convention).
HamiltonianMatrix build_free(const Lattice& lat, const HoppingAmplitude& J);

// Peierls substitution: hopping entries -J exp(i phase(edge)), diagonal
// +J deg(V) (field-independent; no on-site A^2 term).
HamiltonianMatrix build_peierls(const Lattice& lat, const HoppingAmplitude& J,
                                const GaugeField& g);

// Hybrid spatial discretization: hopping entries -J (1 + i phase(edge)) —
// the first-order expansion of the Peierls factors — plus the on-site term
// +J (deg(V) + c q^2 a^2 |A_V|^2) with c = 1, 3/2, 3/4 per kind.
HamiltonianMatrix build_discretized(const Lattice& lat, const HoppingAmplitude& J,
                                    const GaugeField& g);

// Peierls hoppings combined with the discretized on-site A^2 correction.
HamiltonianMatrix build_peierls_modified(const Lattice& lat,
                                         const HoppingAmplitude& J,
                                         const GaugeField& g);

// Free Hamiltonian plus the equivalent 2D harmonic well
// (q^2 B^2 / 8m) [(x-xc)^2 + (y-yc)^2] on the diagonal.
HamiltonianMatrix build_harmonic(const Lattice& lat, const HoppingAmplitude& J,
                                 const GaugeField& g);

HamiltonianMatrix build_hamiltonian(const Lattice& lat, ModelKind model,
                                    const HoppingAmplitude& J, const GaugeField& g);

// max elementwise |H - H^dagger|.
double hermiticity_residual(const Eigen::MatrixXcd& H);

// On-site quadratic coefficient c of the discretized model.
double onsite_quadratic_factor(LatticeKind kind);

}  // namespace ctqw
