#include "wetsim/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "wetsim/rng.hpp"

namespace wetsim::channel {

namespace {

constexpr double hermitian_tol = 1e-8;       // relative asymmetry ceiling
constexpr double rank_cutoff = 1e-12;        // relative eigenvalue floor

cvec steering_vector_rad(double phi_rad, int antennas, double spacing) {
  cvec a(antennas);
  const double step = 2.0 * pi * spacing * std::cos(phi_rad);
  for (int i = 0; i < antennas; ++i) a(i) = std::polar(1.0, step * i);
  return a;
}

}  // namespace

cmat ClusterStatistics::mp_factor() const {
  return kl_gains.cwiseSqrt().asDiagonal() * kl_basis.adjoint();
}

cmat ClusterStatistics::correlation() const {
  return kl_basis * kl_gains.asDiagonal() * kl_basis.adjoint();
}

std::pair<double, double> rician_weights(double beta_linear, double kappa) {
  if (!(beta_linear > 0.0)) throw std::invalid_argument("pathloss must be positive in linear scale");
  if (kappa < 0.0) throw std::invalid_argument("rician kappa must be >= 0");
  if (std::isinf(kappa)) return {std::sqrt(beta_linear), 0.0};
  const double alpha1 = std::sqrt(beta_linear * kappa / (1.0 + kappa));
  const double alpha2 = std::sqrt(beta_linear / (1.0 + kappa));
  return {alpha1, alpha2};
}

cvec steering_vector(double phi_deg, int antennas, double spacing) {
  if (antennas < 1) throw std::invalid_argument("antennas must be >= 1");
  if (spacing <= 0.0) throw std::invalid_argument("element spacing must be positive");
  return steering_vector_rad(deg2rad(phi_deg), antennas, spacing);
}

cmat los_matrix(const ClusterConfig& cluster, int antennas, double spacing, double rotation_deg,
                std::mt19937_64& rng) {
  const double center = cluster.angle_deg + rotation_deg;
  cmat h(cluster.terminals, antennas);
  if (cluster.aperture_deg == 0.0) {
    h.rowwise() = steering_vector(center, antennas, spacing).transpose();
    return h;
  }
  std::uniform_real_distribution<double> angle(center - cluster.aperture_deg,
                                               center + cluster.aperture_deg);
  for (int k = 0; k < cluster.terminals; ++k)
    h.row(k) = steering_vector(angle(rng), antennas, spacing).transpose();
  return h;
}

cmat scatter_rays(const ClusterConfig& cluster, int antennas, double spacing, int num_rays,
                  double rotation_deg, std::mt19937_64& rng) {
  if (num_rays < 1 || num_rays > antennas)
    throw std::invalid_argument("ray count must be in [1, antennas]");
  const double center = cluster.angle_deg + rotation_deg;
  std::uniform_real_distribution<double> angle(center - cluster.scatter_aperture_deg,
                                               center + cluster.scatter_aperture_deg);
  cmat rays(antennas, num_rays);
  const double scale = 1.0 / std::sqrt(static_cast<double>(num_rays));
  for (int s = 0; s < num_rays; ++s)
    rays.col(s) = steering_vector(angle(rng), antennas, spacing) * scale;
  return rays;
}

cmat sample_correlation(const ClusterConfig& cluster, int antennas, double spacing,
                        int rank_target, double rotation_deg, std::mt19937_64& rng) {
  const cmat rays = scatter_rays(cluster, antennas, spacing, rank_target, rotation_deg, rng);
  cmat r = rays * rays.adjoint();
  // Each ray has squared norm M, so the trace is already M up to roundoff;
  // renormalizing keeps the unit-average-gain contract exact.
  r *= static_cast<double>(antennas) / r.trace().real();
  return r;
}

std::pair<cmat, rvec> kl_factors(const cmat& correlation) {
  if (correlation.rows() != correlation.cols())
    throw std::invalid_argument("correlation matrix must be square");
  const double asym = (correlation - correlation.adjoint()).norm();
  if (asym > hermitian_tol * std::max(1.0, correlation.norm()))
    throw std::invalid_argument("correlation matrix is not Hermitian");

  Eigen::SelfAdjointEigenSolver<cmat> eig(correlation);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition of the correlation matrix failed");

  const rvec all = eig.eigenvalues();  // ascending
  const double cutoff = all.maxCoeff() * rank_cutoff;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < all.size(); ++i)
    if (all(i) > cutoff) ++rank;
  if (rank == 0) throw std::invalid_argument("correlation matrix has no positive eigenvalues");

  cmat basis(correlation.rows(), rank);
  rvec gains(rank);
  for (Eigen::Index j = 0; j < rank; ++j) {
    const Eigen::Index src = all.size() - 1 - j;  // descending order
    gains(j) = all(src);
    basis.col(j) = eig.eigenvectors().col(src);
  }
  return {std::move(basis), std::move(gains)};
}

std::pair<cmat, rvec> kl_factors_from_rays(const cmat& rays) {
  // Eigenpairs of F F^H from the small Gram matrix F^H F.
  Eigen::SelfAdjointEigenSolver<cmat> eig(rays.adjoint() * rays);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition of the ray Gram matrix failed");

  const rvec all = eig.eigenvalues();
  const double cutoff = all.maxCoeff() * rank_cutoff;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < all.size(); ++i)
    if (all(i) > cutoff) ++rank;
  if (rank == 0) throw std::invalid_argument("ray matrix is numerically zero");

  cmat basis(rays.rows(), rank);
  rvec gains(rank);
  for (Eigen::Index j = 0; j < rank; ++j) {
    const Eigen::Index src = all.size() - 1 - j;
    gains(j) = all(src);
    basis.col(j) = rays * eig.eigenvectors().col(src) / std::sqrt(all(src));
  }
  // The division by sqrt(lambda) amplifies roundoff for eigenvalues near the
  // cutoff; one modified Gram-Schmidt pass restores orthonormality without
  // disturbing the well-separated leading columns.
  for (Eigen::Index j = 0; j < rank; ++j) {
    for (Eigen::Index i = 0; i < j; ++i)
      basis.col(j) -= basis.col(i).dot(basis.col(j)) * basis.col(i);
    basis.col(j).normalize();
  }
  return {std::move(basis), std::move(gains)};
}

cmat sample_fading(int terminals, int rank, std::mt19937_64& rng) {
  if (terminals < 1 || rank < 1) throw std::invalid_argument("fading dimensions must be >= 1");
  cmat g(terminals, rank);
  for (int k = 0; k < terminals; ++k)
    for (int r = 0; r < rank; ++r) g(k, r) = complex_gaussian(rng);
  return g;
}

ClusterStatistics make_cluster_statistics(const ClusterConfig& cluster, const SystemConfig& system,
                                          std::mt19937_64& rng) {
  ClusterStatistics stats;
  const double beta_eff = db_to_linear(cluster.pathloss_db + system.antenna_gain_db);
  std::tie(stats.alpha1, stats.alpha2) = rician_weights(beta_eff, cluster.rician_kappa);

  if (system.correlation == CorrelationModel::Iid) {
    stats.kl_basis = cmat::Identity(system.antennas, system.antennas);
    stats.kl_gains = rvec::Ones(system.antennas);
  } else {
    // Correlation rank tied to the cluster population, capped by the array.
    const int rank_target = std::min(cluster.terminals, system.antennas);
    const cmat rays = scatter_rays(cluster, system.antennas, system.element_spacing, rank_target,
                                   system.rotation_deg, rng);
    std::tie(stats.kl_basis, stats.kl_gains) = kl_factors_from_rays(rays);
  }
  stats.h_los =
      los_matrix(cluster, system.antennas, system.element_spacing, system.rotation_deg, rng);
  return stats;
}

ChannelRealization realize_channel(const ClusterStatistics& stats, std::mt19937_64& rng) {
  ChannelRealization real;
  real.fading = sample_fading(static_cast<int>(stats.terminals()),
                              static_cast<int>(stats.rank()), rng);
  real.h_eff = stats.alpha1 * stats.h_los + stats.alpha2 * (real.fading * stats.mp_factor());
  return real;
}

}  // namespace wetsim::channel
