#pragma once

#include <Eigen/Core>
#include <limits>
#include <vector>

#include "ctqw/hamiltonian.hpp"
#include "ctqw/lattice.hpp"

namespace ctqw {

// Pure walker state; time is the adimensional Jt of the run.
struct WalkerState {
  Eigen::VectorXcd amplitudes;
  double time = 0.0;
};

WalkerState localized_state(const Lattice& lat, VertexId v);

// Exact propagation through the full Hermitian eigendecomposition:
//   psi(Jt) = U exp(-i lambda Jt / J) U^dagger psi0   (hbar = 1).
// Construction rejects non-Hermitian input (residual > 1e-12) and verifies
// unitarity of the eigenbasis with random-vector probes.
class Propagator {
 public:
  explicit Propagator(const HamiltonianMatrix& H);

  WalkerState apply(const Eigen::VectorXcd& psi0, double jt) const;
  const Eigen::VectorXd& eigenvalues() const { return lam_; }
  const Eigen::MatrixXcd& eigenvectors() const { return basis_; }
  double J() const { return J_; }
  double unitarity_residual() const { return unitarity_residual_; }

 private:
  Eigen::VectorXd lam_;
  Eigen::MatrixXcd basis_;
  double J_ = 1.0;
  double unitarity_residual_ = 0.0;
};

// States at the requested times (sorted, nonnegative). Norm conservation is
// enforced to 1e-10 at every output time.
std::vector<WalkerState> evolve(const Propagator& prop, const WalkerState& psi0,
                                const std::vector<double>& times);
std::vector<WalkerState> evolve(const HamiltonianMatrix& H, const WalkerState& psi0,
                                const std::vector<double>& times);

Eigen::VectorXd probability_density(const WalkerState& state);

// Second moments with the true plane coordinates (not indices).
std::pair<double, double> coordinate_variance(const Lattice& lat,
                                              const Eigen::VectorXd& density);

// l1 coherence of the pure state: (sum_l |psi_l|)^2 - 1.
double l1_coherence(const WalkerState& state);

struct Snapshot {
  double jt = 0.0;
  Eigen::VectorXd rho;
};

struct ObservableSeries {
  std::vector<double> times;
  std::vector<double> sigma_x2, sigma_y2, coherence;
  std::vector<Snapshot> snapshots;
  // First sampled time at which any boundary vertex carries density above the
  // threshold; +inf if that never happens on the grid.
  double boundary_contact_jt = std::numeric_limits<double>::infinity();
};

// Observables along a trajectory; snapshot_times are matched to the nearest
// sampled time within half a grid step.
ObservableSeries observe(const Lattice& lat, const std::vector<WalkerState>& states,
                         const std::vector<double>& snapshot_times = {},
                         double boundary_density_threshold = 1e-4);

enum class SeriesComponent { SigmaX2, SigmaY2, Coherence };

struct FitResult {
  double A = 0.0;
  double p = 0.0;
  double rms_residual = 0.0;  // log space
  double window_lo = 0.0, window_hi = 0.0;
  int n_samples = 0;
};

// Least-squares fit of log f = log A + p log(Jt) over the window; needs at
// least 8 in-window samples, all positive, at strictly positive times.
FitResult fit_power_law(const ObservableSeries& series, SeriesComponent component,
                        double window_lo, double window_hi);

// Upper bound of the default fitting window: boundary-contact time, capped at
// the last sampled time.
double default_fit_upper_bound(const ObservableSeries& series);

enum class ExtremumKind { Maximum, Minimum };

struct Extremum {
  double jt = 0.0;
  double value = 0.0;
  ExtremumKind kind = ExtremumKind::Maximum;
};

// Interior extrema from sign changes of the discrete first difference.
std::vector<Extremum> local_extrema(const ObservableSeries& series,
                                    SeriesComponent component);

// steps uniform samples covering [0, t_max] (both ends included).
std::vector<double> uniform_grid(double t_max, int steps);

}  // namespace ctqw
