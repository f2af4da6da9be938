#pragma once

#include <complex>
#include <vector>

#include "cfplace/geometry.hpp"
#include "cfplace/rng.hpp"

namespace cfplace {

// Uplink channel model. Large-scale gain between AP at q and user at p is
//   beta = constant_c * z / (||p - q||^gamma + epsilon)
// with z = 1 unless log-normal shadowing is enabled. epsilon (units m^gamma)
// keeps beta finite at zero distance.
struct ChannelParams {
  double constant_c = 1.0;
  double gamma = 3.5;
  double epsilon = 1.0;
  double shadowing_sigma_db = 0.0;  // 0 disables shadowing
  double rho_r_db = 30.0;           // transmit SNR, dB

  double rho_r_linear() const { return std::pow(10.0, rho_r_db / 10.0); }
  bool shadowing_enabled() const { return shadowing_sigma_db > 0.0; }
};

// One small-scale realization: entries g_mk = sqrt(beta_mk) h_mk with
// h_mk ~ CN(0,1). Row m = AP, column k = user; row-major storage.
struct ChannelMatrix {
  int num_aps = 0;
  int num_users = 0;
  std::vector<std::complex<double>> entries;
  std::vector<double> betas;

  std::complex<double>& g(int m, int k) { return entries[m * num_users + k]; }
  std::complex<double> g(int m, int k) const { return entries[m * num_users + k]; }
  double beta(int m, int k) const { return betas[m * num_users + k]; }
};

// Pathloss-only gain; shadow_z multiplies in an externally drawn shadowing
// factor (1 = none).
double large_scale_coeff(Point2 user, Point2 ap, const ChannelParams& params,
                         double shadow_z = 1.0);

// Draw order is fixed: APs outer, users inner; per entry the shadowing draw
// (if enabled) precedes the two fading normals. Same seed, same matrix.
ChannelMatrix draw_channel(const Placement& aps, const std::vector<Point2>& users,
                           const ChannelParams& params, Rng& rng);

// Zero-forcing per-user SNR rho_r / [(G^H G)^{-1}]_kk. Throws
// std::runtime_error on a numerically singular Gram matrix (degenerate draw;
// callers redraw). Requires num_aps >= num_users.
std::vector<double> zf_snr(const ChannelMatrix& channel, double rho_r);

// Diagonal of (G^H G)^{-1}; zf_snr is rho_r / this. Exposed because the
// inverse is power-independent and evaluation reuses it across a power grid.
std::vector<double> zf_inverse_diagonal(const ChannelMatrix& channel);

// Large-system approximation psi_k = rho_r * sum_m beta_mk (no fading, no
// shadowing).
std::vector<double> asymptotic_snr(const Placement& aps,
                                   const std::vector<Point2>& users,
                                   const ChannelParams& params, double rho_r);

double asymptotic_snr_single(Point2 user, const Placement& aps,
                             const ChannelParams& params, double rho_r);

}  // namespace cfplace
