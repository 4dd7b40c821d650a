#include "ksurf/harmonic_cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ksurf {

namespace {

constexpr double kAliasingThreshold = 1e-8;
constexpr double kDivergenceHeight = 1e-3;
// Mode m of a layer is amplified like (m v)^k / k! further up the series,
// so roundoff in modes the solution does not populate would eventually
// swamp it. Coefficients below this fraction of the layer's input scale
// are cleared (Krasny-type filter).
constexpr double kFilterLevel = 1e-16;

void filter_noise(FourierCurve3& c, double threshold) {
  for (int m = 0; m <= c.modes(); ++m) {
    if (c.cos_coeff(m).norm() < threshold) c.cos_coeff(m).setZero();
    if (c.sin_coeff(m).norm() < threshold) c.sin_coeff(m).setZero();
  }
}

double layer_energy(const FourierCurve3& c, int from_mode) {
  double e = 0.0;
  for (int m = from_mode; m <= c.modes(); ++m) e += c.cos_coeff(m).squaredNorm() + c.sin_coeff(m).squaredNorm();
  return e;
}

}  // namespace

int default_modes(const SphericalCurve& alpha) {
  return std::max(8, 4 * alpha.base().effective_modes());
}

GaussJet solve_cauchy(const SphericalCurve& alpha, int taylor_order, int modes) {
  if (taylor_order < 2) {
    throw Error(ErrorCode::Domain, "harmonic_cauchy", "Taylor order must be at least 2");
  }
  if (modes <= 0) modes = default_modes(alpha);
  if (modes < alpha.base().effective_modes()) {
    throw Error(ErrorCode::Domain, "harmonic_cauchy",
                "Fourier truncation below the mode count of the datum");
  }
  const int K = taylor_order;
  const FourierGrid grid(product_grid_size(modes), 2 * modes);
  const int G = grid.size();

  GaussJet jet;
  jet.layers_.assign(K + 1, FourierCurve3().padded(modes));
  jet.layers_[0] = alpha.base().truncated(modes);

  // grid samples of c_k and c_k'
  std::vector<std::vector<Vec3>> val(K + 1), du(K + 1);
  val[0] = grid.synthesize(jet.layers_[0]);
  du[0] = grid.synthesize(jet.layers_[0], 1);
  val[1].assign(G, Vec3::Zero());
  du[1].assign(G, Vec3::Zero());

  // energy[j] = v^j coefficient of |N_u|^2 + |N_v|^2, on the grid
  std::vector<std::vector<double>> energy;
  for (int k = 0; k + 2 <= K; ++k) {
    std::vector<double> e(G, 0.0);
    for (int i = 0; i <= k; ++i) {
      const double w = static_cast<double>(i + 1) * (k - i + 1);
      for (int g = 0; g < G; ++g) {
        e[g] += du[i][g].dot(du[k - i][g]) + w * val[i + 1][g].dot(val[k - i + 1][g]);
      }
    }
    energy.push_back(std::move(e));

    std::vector<Vec3> phi(G, Vec3::Zero());
    for (int j = 0; j <= k; ++j) {
      for (int g = 0; g < G; ++g) phi[g] += energy[j][g] * val[k - j][g];
    }
    const FourierCurve3 curvature_term = jet.layers_[k].differentiated(2);
    const FourierCurve3 nonlinear_term = grid.project(phi, modes);
    const double scale = std::max(curvature_term.coefficient_l1(), nonlinear_term.coefficient_l1()) /
                         ((k + 1.0) * (k + 2.0));
    FourierCurve3 next = curvature_term + nonlinear_term;
    next *= -1.0 / ((k + 1.0) * (k + 2.0));
    filter_noise(next, kFilterLevel * scale);
    jet.layers_[k + 2] = next;
    val[k + 2] = grid.synthesize(next);
    du[k + 2] = grid.synthesize(next, 1);
  }

  // layers at roundoff level carry a flat noise spectrum; skip them
  const int top = std::max(1, (3 * modes) / 4 + 1);
  const double floor = 1e-12 * jet.layers_[0].coefficient_l1();
  for (const auto& c : jet.layers_) {
    if (c.coefficient_l1() <= floor) continue;
    jet.aliasing_ratio_ = std::max(jet.aliasing_ratio_, layer_energy(c, top) / layer_energy(c, 0));
  }
  if (jet.aliasing_ratio_ > kAliasingThreshold) {
    std::ostringstream msg;
    msg << "spectral energy in the top modes reaches " << jet.aliasing_ratio_
        << " of the layer energy; increase the Fourier truncation (now " << modes << ")";
    throw Error(ErrorCode::Resolution, "harmonic_cauchy", msg.str());
  }

  jet.trust_height_ = estimate_strip(jet);
  if (jet.trust_height_ < kDivergenceHeight) {
    std::ostringstream msg;
    msg << "layer norms grow too fast: trusted strip height " << jet.trust_height_;
    jet.warnings_.push_back(msg.str());
  }
  return jet;
}

GaussJet rotated(const GaussJet& jet, const Mat3& rotation) {
  GaussJet out = jet;
  for (auto& c : out.layers_) c = c.rotated(rotation);
  return out;
}

GaussSample evaluate_gauss(const GaussJet& jet, double u, double v, int deriv_order) {
  if (deriv_order < 0 || deriv_order > 2) {
    throw Error(ErrorCode::UnsupportedOrder, "harmonic_cauchy", "derivative order above 2");
  }
  if (std::abs(v) > jet.trust_height() * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "|v| = " << std::abs(v) << " exceeds the trusted strip height " << jet.trust_height();
    throw Error(ErrorCode::Extrapolation, "harmonic_cauchy", msg.str());
  }
  GaussSample out{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  const int order = deriv_order;
  // Horner from the top layer down, carrying v-derivatives alongside
  for (int k = jet.taylor_order(); k >= 0; --k) {
    const auto j = jet.layer(k).jet(u, order);
    out.N_vv = out.N_vv * v + 2.0 * out.N_v;
    out.N_v = out.N_v * v + out.N;
    out.N = out.N * v + j[0];
    if (order >= 1) {
      out.N_uv = out.N_uv * v + out.N_u;
      out.N_u = out.N_u * v + j[1];
    }
    if (order >= 2) out.N_uu = out.N_uu * v + j[2];
  }
  return out;
}

std::vector<double> norm_defect(const GaussJet& jet) {
  const int M = jet.modes();
  const FourierGrid grid(product_grid_size(M), 2 * M);
  const int G = grid.size();
  std::vector<std::vector<Vec3>> val;
  for (const auto& c : jet.layers()) val.push_back(grid.synthesize(c));
  std::vector<double> out;
  for (int k = 0; k <= jet.taylor_order(); ++k) {
    std::vector<double> s(G, k == 0 ? -1.0 : 0.0);
    for (int i = 0; i <= k; ++i) {
      for (int g = 0; g < G; ++g) s[g] += val[i][g].dot(val[k - i][g]);
    }
    const auto spectrum = grid.scalar_spectrum(s);
    out.push_back(*std::max_element(spectrum.begin(), spectrum.end()));
  }
  return out;
}

double estimate_strip(const GaussJet& jet, double tolerance) {
  const int K = jet.taylor_order();
  std::vector<double> norms;
  for (const auto& c : jet.layers()) norms.push_back(c.coefficient_l1());

  // root test over the upper half of the layers
  double growth = 0.0;
  for (int k = std::max(1, K / 2); k <= K; ++k) {
    if (norms[k] > 0.0) growth = std::max(growth, std::pow(norms[k], 1.0 / k));
  }
  if (growth == 0.0) return 1.0;
  double scale = 0.0;
  for (int k = std::max(1, K / 2); k <= K; ++k) scale = std::max(scale, norms[k] / std::pow(growth, k));

  auto tail = [&](double v) {
    double t = 0.0;
    for (int k = std::max(0, K - 1); k <= K; ++k) t += norms[k] * std::pow(v, k);
    const double q = growth * v;
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    return t + scale * std::pow(q, K + 1) / (1.0 - q);
  };
  if (tail(1.0) < tolerance) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) < tolerance ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace ksurf
