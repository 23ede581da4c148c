#include "ftnm/spectral_bounds.hpp"

#include <cmath>

#include "ftnm/bath_model.hpp"

namespace ftnm {

SpectralDensity make_ohmic(double alpha, double omega_c, std::optional<double> beta_eff) {
  if (alpha < 0.0) throw std::invalid_argument("make_ohmic: alpha must be >= 0");
  if (omega_c <= 0.0) throw std::invalid_argument("make_ohmic: omega_c must be positive");
  if (beta_eff && *beta_eff <= 0.0)
    throw std::invalid_argument("make_ohmic: beta_eff must be positive");
  SpectralDensity j;
  j.kind = SpectralKind::Ohmic;
  j.alpha = alpha;
  j.omega_c = omega_c;
  j.beta_eff = beta_eff;
  return j;
}

SpectralDensity make_tabulated(std::vector<std::pair<double, double>> table,
                               std::optional<double> beta_eff) {
  if (table.size() < 2) throw std::invalid_argument("make_tabulated: need at least two samples");
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].first < 0.0)
      throw std::invalid_argument("make_tabulated: omega must be >= 0");
    if (i > 0 && table[i].first <= table[i - 1].first)
      throw std::invalid_argument("make_tabulated: omega must be strictly increasing");
    if (table[i].second < 0.0) throw std::invalid_argument("make_tabulated: J must be >= 0");
  }
  if (beta_eff && *beta_eff <= 0.0)
    throw std::invalid_argument("make_tabulated: beta_eff must be positive");
  SpectralDensity j;
  j.kind = SpectralKind::Tabulated;
  j.table = std::move(table);
  j.beta_eff = beta_eff;
  return j;
}

double trigamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("trigamma: argument must be positive");
  // Shift up by Psi'(x) = Psi'(x+1) + 1/x^2, then the asymptotic series.
  double acc = 0.0;
  while (x < 10.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double tail =
      1.0 / 6.0 +
      inv2 * (-1.0 / 30.0 +
              inv2 * (1.0 / 42.0 +
                      inv2 * (-1.0 / 30.0 + inv2 * (5.0 / 66.0 - inv2 * (691.0 / 2730.0)))));
  return acc + inv + 0.5 * inv2 + inv * inv2 * tail;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb,
               double m, double fm) {
  (void)m;
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                double m, double fm, double whole, double eps, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (!(b > a)) throw std::invalid_argument("integrate: need a < b");
  if (rel_tol <= 0.0) throw std::invalid_argument("integrate: tolerance must be positive");
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, m, fm);
  const double scale = std::max({std::abs(whole), std::abs(b - a) * std::abs(fm), 1e-300});
  return adaptive(f, a, fa, b, fb, m, fm, whole, rel_tol * scale, 48);
}

namespace {

double trapezoid_over_table(const SpectralDensity& j,
                            const std::function<double(double, double)>& integrand_of_point,
                            const std::function<double(double)>& zero_limit_from_slope) {
  // integrand_of_point maps (omega, J) to the integrand; at omega = 0 the
  // value is defined by the limit using the initial slope J'(0) ~ J1/omega1.
  std::vector<double> values(j.table.size());
  for (std::size_t i = 0; i < j.table.size(); ++i) {
    const auto [w, jw] = j.table[i];
    if (w == 0.0) {
      if (jw != 0.0)
        throw std::domain_error("tabulated spectral density: integrand singular at omega = 0");
      const auto [w1, jw1] = j.table[i + 1];
      values[i] = zero_limit_from_slope(jw1 / w1);
    } else {
      values[i] = integrand_of_point(w, jw);
    }
  }
  double sum = 0.0;
  for (std::size_t i = 1; i < j.table.size(); ++i)
    sum += 0.5 * (values[i] + values[i - 1]) * (j.table[i].first - j.table[i - 1].first);
  return sum;
}

}  // namespace

double reorg_integral(const SpectralDensity& j) {
  if (j.kind == SpectralKind::Ohmic) {
    // J(w)/w = alpha * exp(-w/omega_c); integrated numerically rather than
    // collapsed to its closed form so the value is an independent check.
    const double alpha = j.alpha, wc = j.omega_c;
    if (alpha == 0.0) return 0.0;
    return integrate([alpha, wc](double w) { return alpha * std::exp(-w / wc); }, 0.0, 60.0 * wc,
                     1e-10);
  }
  return trapezoid_over_table(
      j, [](double w, double jw) { return jw / w; },
      [](double slope) { return slope; });
}

double energy_bound(const SpectralDensity& j, double bath_energy) {
  if (bath_energy < 0.0) throw std::invalid_argument("energy_bound: bath energy must be >= 0");
  return 2.0 * std::sqrt(bath_energy * reorg_integral(j));
}

namespace {

// coth without overflow: 1 + 2/(e^{2z} - 1); e^{2z} saturates to inf for
// large z, giving exactly 1.
double coth(double z) { return 1.0 + 2.0 / std::expm1(2.0 * z); }

}  // namespace

CoolingBound cooling_bound(const SpectralDensity& j, CoolingMethod method) {
  if (!j.beta_eff)
    throw std::invalid_argument("cooling_bound: spectral density has no beta_eff set");
  const double beta = *j.beta_eff;

  CoolingBound out;
  switch (method) {
    case CoolingMethod::Quadrature: {
      if (j.kind == SpectralKind::Ohmic) {
        const double alpha = j.alpha, wc = j.omega_c;
        if (alpha == 0.0) return out;
        const auto f = [alpha, wc, beta](double w) {
          if (w == 0.0) return alpha / beta;  // limit of J(w) coth(beta w/2)/2
          return 0.5 * alpha * w * std::exp(-w / wc) * coth(0.5 * beta * w);
        };
        out.value = std::sqrt(integrate(f, 0.0, 60.0 * wc, 1e-10));
      } else {
        const double sum = trapezoid_over_table(
            j,
            [beta](double w, double jw) { return 0.5 * jw * coth(0.5 * beta * w); },
            [beta](double slope) { return slope / beta; });
        out.value = std::sqrt(sum);
      }
      return out;
    }
    case CoolingMethod::Closed: {
      if (j.kind != SpectralKind::Ohmic)
        throw std::invalid_argument("cooling_bound: closed form requires an Ohmic density");
      const double wc = j.omega_c;
      out.outside_expansion_regime = beta * wc <= 1.0;
      const double psi1 = trigamma(1.0 / (beta * wc));
      out.value = std::sqrt(0.5 * j.alpha) * std::sqrt(-wc * wc + 2.0 * psi1 / (beta * beta));
      return out;
    }
    case CoolingMethod::Series: {
      if (j.kind != SpectralKind::Ohmic)
        throw std::invalid_argument("cooling_bound: series form requires an Ohmic density");
      const double wc = j.omega_c;
      out.outside_expansion_regime = beta * wc <= 1.0;
      out.value =
          std::sqrt(0.5 * j.alpha) * std::sqrt(wc * wc + M_PI * M_PI / (3.0 * beta * beta));
      return out;
    }
  }
  throw std::invalid_argument("cooling_bound: unknown method");
}

HyperfineModel make_hyperfine_model(double coupling_constant, double cell_volume,
                                    std::vector<double> weights) {
  if (coupling_constant < 0.0)
    throw std::invalid_argument("make_hyperfine_model: coupling constant must be >= 0");
  if (cell_volume < 0.0) throw std::invalid_argument("make_hyperfine_model: volume must be >= 0");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("make_hyperfine_model: weights must be >= 0");
    sum += w;
  }
  if (sum > 1.0 + 1e-12)
    throw std::invalid_argument("make_hyperfine_model: weights must sum to at most 1");
  return HyperfineModel{coupling_constant, cell_volume, std::move(weights)};
}

Matrix single_site_spin_coupling() {
  Matrix op = Matrix::Zero(4, 4);
  for (int k = 1; k <= 3; ++k) op += kron(pauli(k), Matrix(0.5 * pauli(k)));
  return op;
}

double hyperfine_bound(const HyperfineModel& model, double kappa) {
  if (kappa <= 0.0) throw std::invalid_argument("hyperfine_bound: kappa must be positive");
  double sum = 0.0;
  for (double w : model.weights) sum += w;
  return kappa * model.coupling_constant * model.cell_volume * sum;
}

}  // namespace ftnm
