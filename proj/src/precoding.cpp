#include "wetsim/precoding.hpp"

#include <cmath>
#include <stdexcept>

namespace wetsim::precoding {

namespace {

constexpr double degenerate_gap = 1e-10;  // relative gap flagging a tied maximizer

/// Rotate so the largest-magnitude entry is real positive (ties: lowest index).
void canonicalize_phase(cvec& x) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) best = std::max(best, std::abs(x(i)));
  if (best <= 0.0) return;
  // Anchor on the first entry whose modulus is within roundoff of the
  // maximum. Symmetric arrays produce exactly tied moduli, and a strict
  // comparison would let noise pick different anchors for algebraically
  // equal vectors computed along different routes.
  Eigen::Index pivot = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) >= best * (1.0 - 1e-9)) {
      pivot = i;
      break;
    }
  }
  x *= std::conj(x(pivot)) / std::abs(x(pivot));
}

}  // namespace

StackedStatMatrix build_stat_matrix(std::span<const channel::ClusterStatistics> stats) {
  if (stats.empty()) throw std::invalid_argument("at least one cluster is required");
  const Eigen::Index antennas = stats[0].antennas();
  Eigen::Index total = 0;
  for (const auto& s : stats) {
    if (s.antennas() != antennas)
      throw std::invalid_argument("clusters disagree on the antenna count");
    total += s.terminals() + s.rank();
  }

  StackedStatMatrix out;
  out.rows.resize(total, antennas);
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l < stats.size(); ++l) {
    const auto& s = stats[l];
    out.rows.middleRows(offset, s.terminals()) = s.alpha1 * s.h_los;
    out.row_map.push_back({static_cast<int>(l), RowBlock::Kind::Los, offset, s.terminals()});
    offset += s.terminals();
    out.rows.middleRows(offset, s.rank()) = s.alpha2 * s.mp_factor();
    out.row_map.push_back({static_cast<int>(l), RowBlock::Kind::Multipath, offset, s.rank()});
    offset += s.rank();
  }
  return out;
}

cvec top_right_singular(const cmat& a, double* sigma_max, bool* degenerate) {
  if (a.size() == 0) throw std::invalid_argument("matrix is empty");
  if (a.norm() == 0.0) throw std::invalid_argument("matrix is identically zero");

  // Work with the smaller Gram matrix; both routes share eigenvalues.
  const bool rows_smaller = a.rows() < a.cols();
  const cmat gram = rows_smaller ? cmat(a * a.adjoint()) : cmat(a.adjoint() * a);
  Eigen::SelfAdjointEigenSolver<cmat> eig(gram);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition for the singular pair failed");

  const Eigen::Index top = gram.rows() - 1;
  const double lambda = std::max(eig.eigenvalues()(top), 0.0);
  cvec x;
  if (rows_smaller) {
    // Right singular vector recovered from the top left singular vector.
    x = a.adjoint() * eig.eigenvectors().col(top);
    const double norm = x.norm();
    if (norm == 0.0) throw std::runtime_error("degenerate singular recovery");
    x /= norm;
  } else {
    x = eig.eigenvectors().col(top);
  }
  canonicalize_phase(x);

  if (sigma_max) *sigma_max = std::sqrt(lambda);
  if (degenerate) {
    *degenerate = false;
    if (gram.rows() > 1) {
      const double gap = eig.eigenvalues()(top) - eig.eigenvalues()(top - 1);
      // Compare singular values: sigma1 - sigma2 < tol * sigma1.
      const double sigma1 = std::sqrt(lambda);
      const double sigma2 = std::sqrt(std::max(eig.eigenvalues()(top - 1), 0.0));
      *degenerate = (sigma1 - sigma2) < degenerate_gap * std::max(sigma1, 1e-300) || gap < 0.0;
    }
  }
  return x;
}

BeamVector precoder_mp(const cmat& kl_basis, double tx_power) {
  if (kl_basis.cols() < 1) throw std::invalid_argument("empty eigenbasis");
  if (!(tx_power > 0.0)) throw std::invalid_argument("tx power must be positive");
  cvec x = kl_basis.col(0);
  canonicalize_phase(x);
  return {std::sqrt(tx_power) * x, SchemeTag::Mp, false};
}

BeamVector precoder_stat(const StackedStatMatrix& stacked, double tx_power, SchemeTag tag) {
  if (!(tx_power > 0.0)) throw std::invalid_argument("tx power must be positive");
  bool degenerate = false;
  cvec x = top_right_singular(stacked.rows, nullptr, &degenerate);
  return {std::sqrt(tx_power) * x, tag, degenerate};
}

BeamVector precoder_full_csit(std::span<const channel::ChannelRealization> realizations,
                              double tx_power) {
  if (realizations.empty()) throw std::invalid_argument("at least one cluster is required");
  if (!(tx_power > 0.0)) throw std::invalid_argument("tx power must be positive");
  Eigen::Index total = 0;
  const Eigen::Index antennas = realizations[0].h_eff.cols();
  for (const auto& r : realizations) total += r.h_eff.rows();
  cmat stacked(total, antennas);
  Eigen::Index offset = 0;
  for (const auto& r : realizations) {
    stacked.middleRows(offset, r.h_eff.rows()) = r.h_eff;
    offset += r.h_eff.rows();
  }
  bool degenerate = false;
  cvec x = top_right_singular(stacked, nullptr, &degenerate);
  return {std::sqrt(tx_power) * x, SchemeTag::FullCsit, degenerate};
}

BeamVector precoder_aa(int antennas, double tx_power) {
  if (antennas < 1) throw std::invalid_argument("antennas must be >= 1");
  if (!(tx_power > 0.0)) throw std::invalid_argument("tx power must be positive");
  cvec x = cvec::Constant(antennas, std::sqrt(tx_power / antennas));
  return {std::move(x), SchemeTag::Aa, false};
}

rvec sa_received_power(const cmat& h_eff, double tx_power) {
  if (!(tx_power > 0.0)) throw std::invalid_argument("tx power must be positive");
  return (tx_power / static_cast<double>(h_eff.cols())) * h_eff.cwiseAbs2().rowwise().sum();
}

rvec received_powers(const cmat& h_eff, const cvec& x) {
  if (h_eff.cols() != x.size()) throw std::invalid_argument("beam length must match antennas");
  return (h_eff * x).cwiseAbs2();
}

rvec received_powers(const cmat& h_eff, const BeamVector& beam) {
  return received_powers(h_eff, beam.coeffs);
}

double expected_terminal_power(const channel::ClusterStatistics& stats, int terminal,
                               const cvec& x) {
  if (terminal < 0 || terminal >= stats.terminals())
    throw std::invalid_argument("terminal index out of range");
  const double los = std::norm((stats.h_los.row(terminal) * x).value());
  const double mp = (stats.mp_factor() * x).squaredNorm();
  return stats.alpha1 * stats.alpha1 * los + stats.alpha2 * stats.alpha2 * mp;
}

rvec expected_terminal_powers(const channel::ClusterStatistics& stats, const cvec& x) {
  const rvec los = (stats.h_los * x).cwiseAbs2();
  const double mp = (stats.mp_factor() * x).squaredNorm();
  return stats.alpha1 * stats.alpha1 * los +
         rvec::Constant(stats.terminals(), stats.alpha2 * stats.alpha2 * mp);
}

}  // namespace wetsim::precoding
