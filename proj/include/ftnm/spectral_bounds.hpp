#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ftnm/operators.hpp"

// Coupling-strength bounds from bath spectral data: the reorganization-type
// integral of J(omega)/omega, the bath-energy bound built on it, thermal
// quadrature bounds for a cooled bath, and the hyperfine spin-bath bound.

namespace ftnm {

enum class SpectralKind { Ohmic, Tabulated };

// Bath spectrum: either the Ohmic family J(w) = alpha * w * exp(-w/omega_c)
// or a sampled curve.  beta_eff is the effective inverse temperature used by
// the cooling bounds.
struct SpectralDensity {
  SpectralKind kind = SpectralKind::Ohmic;
  double alpha = 0.0;
  double omega_c = 1.0;
  std::vector<std::pair<double, double>> table;  // (omega, J), omega strictly increasing
  std::optional<double> beta_eff;
};

SpectralDensity make_ohmic(double alpha, double omega_c,
                           std::optional<double> beta_eff = std::nullopt);
SpectralDensity make_tabulated(std::vector<std::pair<double, double>> table,
                               std::optional<double> beta_eff = std::nullopt);

// Trigamma function (derivative of the digamma function), x > 0.
double trigamma(double x);

// Adaptive Simpson quadrature to a relative tolerance; exposed for oracle
// use in tests.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol);

// integral of J(w)/w over w >= 0.  Ohmic densities are integrated
// numerically (the alpha*omega_c closed form is left to the tests);
// tabulated densities use the trapezoid rule on the given grid.
double reorg_integral(const SpectralDensity& j);

// 2 * sqrt(bath_energy * reorg_integral(J)): coupling-strength bound for a
// bath at bounded energy.
double energy_bound(const SpectralDensity& j, double bath_energy);

enum class CoolingMethod {
  Quadrature,  // sqrt( integral of J(w) * coth(beta w / 2) / 2 )
  Closed,      // sqrt(alpha/2) * sqrt(-omega_c^2 + 2 Psi'(1/(beta omega_c)) / beta^2)
  Series,      // sqrt(alpha/2) * sqrt(omega_c^2 + pi^2 / (3 beta^2))
};

struct CoolingBound {
  double value = 0.0;
  // Closed and series forms are expansions around beta*omega_c >> 1; set
  // when evaluated at beta*omega_c <= 1 (computed anyway).
  bool outside_expansion_regime = false;
};

CoolingBound cooling_bound(const SpectralDensity& j, CoolingMethod method);

// Hyperfine spin bath: coupling constant, unit-cell volume, and the electron
// density weights |psi(i)|^2 at the occupied nuclear sites (sum <= 1).
struct HyperfineModel {
  double coupling_constant = 0.0;  // A_hf
  double cell_volume = 0.0;        // v0
  std::vector<double> weights;
};

HyperfineModel make_hyperfine_model(double coupling_constant, double cell_volume,
                                    std::vector<double> weights);

// sigma . I for a spin-1/2 partner: sum_k sigma_k (x) sigma_k / 2, the 4x4
// single-site coupling operator.  Its norm 3/2 is the kappa prefactor.
Matrix single_site_spin_coupling();

inline constexpr double kHyperfineKappa = 1.5;

// kappa * A_hf * v0 * sum(weights).
double hyperfine_bound(const HyperfineModel& model, double kappa = kHyperfineKappa);

}  // namespace ftnm
