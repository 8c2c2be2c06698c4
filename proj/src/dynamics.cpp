#include "ctqw/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "ctqw/errors.hpp"

#ifdef CTQW_HAVE_LAPACKE
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#endif

namespace ctqw {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kNormTol = 1e-10;
constexpr double kUnitarityTol = 1e-10;

// Eigendecomposition of a real symmetric matrix, eigenvectors in columns.
void decompose_real(Eigen::MatrixXd A, Eigen::VectorXd& lam, Eigen::MatrixXcd& basis) {
  const auto n = A.rows();
  lam.resize(n);
#ifdef CTQW_HAVE_LAPACKE
  const auto info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                                   A.data(), static_cast<lapack_int>(n), lam.data());
  if (info == 0) {
    basis = A.cast<std::complex<double>>();
    return;
  }
#endif
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition failed to converge");
  }
  lam = es.eigenvalues();
  basis = es.eigenvectors().cast<std::complex<double>>();
}

void decompose_complex(Eigen::MatrixXcd A, Eigen::VectorXd& lam, Eigen::MatrixXcd& basis) {
  const auto n = A.rows();
  lam.resize(n);
#ifdef CTQW_HAVE_LAPACKE
  const auto info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                                   A.data(), static_cast<lapack_int>(n), lam.data());
  if (info == 0) {
    basis = std::move(A);
    return;
  }
#endif
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition failed to converge");
  }
  lam = es.eigenvalues();
  basis = es.eigenvectors();
}

}  // namespace

Propagator::Propagator(const HamiltonianMatrix& H) {
  if (H.dim() == 0) {
    throw ConfigError("cannot build a propagator from an empty matrix");
  }
  const double herm = hermiticity_residual(H.entries);
  if (!(herm <= kHermTol)) {
    throw NumericalError("matrix is not Hermitian enough for spectral propagation (residual " +
                         std::to_string(herm) + ")");
  }
  J_ = H.J.J;
  if (!(J_ > 0.0)) {
    throw ConfigError("hopping energy must be positive");
  }

  if (H.entries.imag().isZero(0.0)) {
    decompose_real(H.entries.real(), lam_, basis_);
  } else {
    decompose_complex(H.entries, lam_, basis_);
  }

  // Spot-check unitarity of the eigenbasis with a few random probes; a full
  // U U^dagger reconstruction would dominate the runtime at large sizes.
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto n = basis_.rows();
  double worst = 0.0;
  for (int probe = 0; probe < 3; ++probe) {
    Eigen::VectorXcd x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      x[i] = std::complex<double>(gauss(rng), gauss(rng));
    }
    x /= x.norm();
    const Eigen::VectorXcd back = basis_ * (basis_.adjoint() * x).eval();
    worst = std::max(worst, (back - x).cwiseAbs().maxCoeff());
  }
  unitarity_residual_ = worst;
  if (!(worst <= kUnitarityTol)) {
    throw NumericalError("eigenbasis failed the unitarity probes (residual " +
                         std::to_string(worst) + ")");
  }
}

WalkerState Propagator::apply(const Eigen::VectorXcd& psi0, double jt) const {
  if (psi0.size() != basis_.rows()) {
    throw ConfigError("state dimension does not match the propagator");
  }
  // U(0) is the identity; skip the basis round trip so zero-time observables
  // come out exactly zero instead of accumulating ~1e-14 rounding noise.
  if (jt == 0.0) return WalkerState{psi0, 0.0};
  using namespace std::complex_literals;
  Eigen::VectorXcd c = basis_.adjoint() * psi0;
  const double t = jt / J_;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    c[i] *= std::exp(-1.0i * lam_[i] * t);
  }
  return WalkerState{basis_ * c, jt};
}

std::vector<WalkerState> evolve(const Propagator& prop, const WalkerState& psi0,
                                const std::vector<double>& times) {
  const double norm0 = psi0.amplitudes.norm();
  std::vector<WalkerState> out;
  out.reserve(times.size());
  double prev = -1.0;
  for (double jt : times) {
    if (!(jt >= 0.0)) {
      throw ConfigError("evolution times must be nonnegative");
    }
    if (jt < prev) {
      throw ConfigError("evolution times must be sorted ascending");
    }
    prev = jt;
    WalkerState state = prop.apply(psi0.amplitudes, jt);
    if (std::abs(state.amplitudes.norm() - norm0) > kNormTol) {
      throw NumericalError("norm drifted beyond tolerance during propagation");
    }
    out.push_back(std::move(state));
  }
  return out;
}

std::vector<WalkerState> evolve(const HamiltonianMatrix& H, const WalkerState& psi0,
                                const std::vector<double>& times) {
  return evolve(Propagator(H), psi0, times);
}

WalkerState localized_state(const Lattice& lat, VertexId v) {
  const auto l0 = lat.linear0(v);
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(lat.size()));
  amp[static_cast<Eigen::Index>(l0)] = 1.0;
  return WalkerState{std::move(amp), 0.0};
}

Eigen::VectorXd probability_density(const WalkerState& state) {
  return state.amplitudes.cwiseAbs2();
}

std::pair<double, double> coordinate_variance(const Lattice& lat,
                                              const Eigen::VectorXd& density) {
  if (density.size() != static_cast<Eigen::Index>(lat.size())) {
    throw ConfigError("density vector does not match the lattice size");
  }
  double mx = 0.0, my = 0.0;
  for (int l = 0; l < lat.size(); ++l) {
    mx += density[l] * lat.x[static_cast<std::size_t>(l)];
    my += density[l] * lat.y[static_cast<std::size_t>(l)];
  }
  double vx = 0.0, vy = 0.0;
  for (int l = 0; l < lat.size(); ++l) {
    const double dx = lat.x[static_cast<std::size_t>(l)] - mx;
    const double dy = lat.y[static_cast<std::size_t>(l)] - my;
    vx += density[l] * dx * dx;
    vy += density[l] * dy * dy;
  }
  return {vx, vy};
}

double l1_coherence(const WalkerState& state) {
  const double s = state.amplitudes.cwiseAbs().sum();
  return s * s - 1.0;
}

ObservableSeries observe(const Lattice& lat, const std::vector<WalkerState>& states,
                         const std::vector<double>& snapshot_times,
                         double boundary_density_threshold) {
  ObservableSeries series;
  const auto n = states.size();
  series.times.reserve(n);
  series.sigma_x2.reserve(n);
  series.sigma_y2.reserve(n);
  series.coherence.reserve(n);

  std::vector<int> boundary;
  for (int l = 0; l < lat.size(); ++l) {
    if (lat.is_boundary(l)) boundary.push_back(l);
  }

  std::vector<Eigen::VectorXd> densities;
  densities.reserve(n);
  for (const auto& state : states) {
    Eigen::VectorXd rho = probability_density(state);
    const auto [vx, vy] = coordinate_variance(lat, rho);
    series.times.push_back(state.time);
    series.sigma_x2.push_back(vx);
    series.sigma_y2.push_back(vy);
    series.coherence.push_back(l1_coherence(state));
    if (series.boundary_contact_jt == std::numeric_limits<double>::infinity()) {
      for (int l : boundary) {
        if (rho[l] > boundary_density_threshold) {
          series.boundary_contact_jt = state.time;
          break;
        }
      }
    }
    densities.push_back(std::move(rho));
  }

  if (!snapshot_times.empty()) {
    if (n < 2) {
      throw ConfigError("snapshots need a sampled trajectory with at least two points");
    }
    const double step = (series.times.back() - series.times.front()) /
                        static_cast<double>(n - 1);
    for (double want : snapshot_times) {
      std::size_t best = 0;
      double best_err = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        const double err = std::abs(series.times[i] - want);
        if (err < best_err) {
          best_err = err;
          best = i;
        }
      }
      if (best_err > 0.5 * step + 1e-12) {
        throw ConfigError("snapshot time " + std::to_string(want) +
                          " is not on the sampled grid");
      }
      series.snapshots.push_back(Snapshot{series.times[best], densities[best]});
    }
  }
  return series;
}

namespace {

const std::vector<double>& component_of(const ObservableSeries& s, SeriesComponent c) {
  switch (c) {
    case SeriesComponent::SigmaX2: return s.sigma_x2;
    case SeriesComponent::SigmaY2: return s.sigma_y2;
    case SeriesComponent::Coherence: return s.coherence;
  }
  throw ConfigError("unknown series component");
}

}  // namespace

FitResult fit_power_law(const ObservableSeries& series, SeriesComponent component,
                        double window_lo, double window_hi) {
  if (!(window_lo < window_hi)) {
    throw ConfigError("fit window must satisfy lo < hi");
  }
  const auto& f = component_of(series, component);
  std::vector<double> lt, lf;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    if (t < window_lo || t > window_hi || t <= 0.0) continue;
    if (!(f[i] > 0.0)) {
      throw ConfigError("fit window contains non-positive values");
    }
    lt.push_back(std::log(t));
    lf.push_back(std::log(f[i]));
  }
  const auto m = lt.size();
  if (m < 8) {
    throw ConfigError("fit window holds " + std::to_string(m) +
                      " samples; at least 8 are required");
  }
  double st = 0.0, sf = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    st += lt[i];
    sf += lf[i];
  }
  const double mt = st / static_cast<double>(m);
  const double mf = sf / static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lt[i] - mt) * (lt[i] - mt);
    sxy += (lt[i] - mt) * (lf[i] - mf);
  }
  if (!(sxx > 0.0)) {
    throw ConfigError("fit window spans a single time value");
  }
  FitResult fit;
  fit.p = sxy / sxx;
  fit.A = std::exp(mf - fit.p * mt);
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = lf[i] - (std::log(fit.A) + fit.p * lt[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(m));
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  fit.n_samples = static_cast<int>(m);
  return fit;
}

double default_fit_upper_bound(const ObservableSeries& series) {
  if (series.times.empty()) {
    throw ConfigError("cannot derive a fit window from an empty series");
  }
  return std::min(series.boundary_contact_jt, series.times.back());
}

std::vector<Extremum> local_extrema(const ObservableSeries& series,
                                    SeriesComponent component) {
  const auto& f = component_of(series, component);
  std::vector<Extremum> out;
  if (f.size() < 3) return out;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    const double dl = f[i] - f[i - 1];
    const double dr = f[i + 1] - f[i];
    if (dl > 0.0 && dr < 0.0) {
      out.push_back(Extremum{series.times[i], f[i], ExtremumKind::Maximum});
    } else if (dl < 0.0 && dr > 0.0) {
      out.push_back(Extremum{series.times[i], f[i], ExtremumKind::Minimum});
    }
  }
  return out;
}

std::vector<double> uniform_grid(double t_max, int steps) {
  if (!(t_max > 0.0)) {
    throw ConfigError("t_max must be positive");
  }
  if (steps < 2) {
    throw ConfigError("a time grid needs at least 2 samples");
  }
  std::vector<double> grid(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    grid[static_cast<std::size_t>(i)] =
        t_max * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  return grid;
}

}  // namespace ctqw
