#include "cfplace/channel.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace cfplace {

double large_scale_coeff(Point2 user, Point2 ap, const ChannelParams& params,
                         double shadow_z) {
  const double d = dist(user, ap);
  return params.constant_c * shadow_z / (std::pow(d, params.gamma) + params.epsilon);
}

ChannelMatrix draw_channel(const Placement& aps, const std::vector<Point2>& users,
                           const ChannelParams& params, Rng& rng) {
  ChannelMatrix ch;
  ch.num_aps = static_cast<int>(aps.size());
  ch.num_users = static_cast<int>(users.size());
  ch.entries.resize(aps.size() * users.size());
  ch.betas.resize(aps.size() * users.size());
  const double shadow_scale = params.shadowing_sigma_db / 10.0;
  for (int m = 0; m < ch.num_aps; ++m) {
    for (int k = 0; k < ch.num_users; ++k) {
      double z = 1.0;
      if (params.shadowing_enabled()) z = std::pow(10.0, shadow_scale * rng.normal());
      const double beta = large_scale_coeff(users[k], aps[m], params, z);
      const double amp = std::sqrt(0.5 * beta);  // per-part variance beta/2
      ch.betas[m * ch.num_users + k] = beta;
      ch.entries[m * ch.num_users + k] = {amp * rng.normal(), amp * rng.normal()};
    }
  }
  return ch;
}

std::vector<double> zf_inverse_diagonal(const ChannelMatrix& channel) {
  const int m_aps = channel.num_aps;
  const int k_users = channel.num_users;
  if (m_aps < k_users)
    throw std::invalid_argument("zf_inverse_diagonal: fewer APs than users");
  Eigen::MatrixXcd g(m_aps, k_users);
  for (int m = 0; m < m_aps; ++m)
    for (int k = 0; k < k_users; ++k) g(m, k) = channel.g(m, k);
  const Eigen::MatrixXcd gram = g.adjoint() * g;
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("zf_inverse_diagonal: singular Gram matrix (degenerate draw)");
  const Eigen::MatrixXcd inv =
      llt.solve(Eigen::MatrixXcd::Identity(k_users, k_users));
  std::vector<double> diag(k_users);
  for (int k = 0; k < k_users; ++k) {
    const double d = inv(k, k).real();
    if (!(d > 0.0) || !std::isfinite(d))
      throw std::runtime_error("zf_inverse_diagonal: singular Gram matrix (degenerate draw)");
    diag[k] = d;
  }
  return diag;
}

std::vector<double> zf_snr(const ChannelMatrix& channel, double rho_r) {
  std::vector<double> psi = zf_inverse_diagonal(channel);
  for (double& v : psi) v = rho_r / v;
  return psi;
}

double asymptotic_snr_single(Point2 user, const Placement& aps,
                             const ChannelParams& params, double rho_r) {
  double sum = 0.0;
  for (const Point2& q : aps) sum += large_scale_coeff(user, q, params);
  return rho_r * sum;
}

std::vector<double> asymptotic_snr(const Placement& aps,
                                   const std::vector<Point2>& users,
                                   const ChannelParams& params, double rho_r) {
  std::vector<double> psi(users.size());
  for (std::size_t k = 0; k < users.size(); ++k)
    psi[k] = asymptotic_snr_single(users[k], aps, params, rho_r);
  return psi;
}

}  // namespace cfplace
