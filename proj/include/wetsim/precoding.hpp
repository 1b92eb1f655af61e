#pragma once

#include <span>
#include <vector>

#include "wetsim/channel.hpp"
#include "wetsim/types.hpp"

namespace wetsim::precoding {

enum class SchemeTag {
  Mp,
  StatSingle,
  StatMulti,
  FullCsit,
  Aa,
  ConstrainedStat,
  ConstrainedFull,
};

/// Transmit vector together with the scheme that produced it.
struct BeamVector {
  cvec coeffs;
  SchemeTag tag = SchemeTag::Aa;
  /// Set when the top two singular values of the defining matrix are nearly
  /// tied, i.e. the maximizer is not unique to working precision.
  bool degenerate = false;

  double norm_sq() const { return coeffs.squaredNorm(); }
};

struct RowBlock {
  enum class Kind { Los, Multipath };
  int cluster = 0;
  Kind kind = Kind::Los;
  Eigen::Index offset = 0;
  Eigen::Index rows = 0;
};

/// Vertical stack of alpha1 * H_los and alpha2 * mp_factor blocks over all
/// clusters, plus a map from row ranges back to their origin.
struct StackedStatMatrix {
  cmat rows;
  std::vector<RowBlock> row_map;
};

StackedStatMatrix build_stat_matrix(std::span<const channel::ClusterStatistics> stats);

/// Unit right singular vector of the largest singular value, with the global
/// phase fixed so the largest-magnitude entry is real positive. Optionally
/// reports sigma_max and whether the top singular pair is degenerate.
cvec top_right_singular(const cmat& a, double* sigma_max = nullptr, bool* degenerate = nullptr);

/// Beam along the strongest correlation eigenvector of a single cluster.
BeamVector precoder_mp(const cmat& kl_basis, double tx_power);

/// Beam along the top right singular vector of the stacked statistics.
BeamVector precoder_stat(const StackedStatMatrix& stacked, double tx_power,
                         SchemeTag tag = SchemeTag::StatMulti);

/// Beam along the top right singular vector of the realized channels stacked
/// over clusters; per-realization optimum of the delivered sum power.
BeamVector precoder_full_csit(std::span<const channel::ChannelRealization> realizations,
                              double tx_power);

/// Uniform in-phase excitation of all elements.
BeamVector precoder_aa(int antennas, double tx_power);

/// Per-terminal power collected by cycling the full budget through one
/// element at a time, modeled at the power level: (P/M) * sum_i |H(k,i)|^2.
rvec sa_received_power(const cmat& h_eff, double tx_power);

/// |H_eff * x|^2 per terminal for one realization.
rvec received_powers(const cmat& h_eff, const cvec& x);
rvec received_powers(const cmat& h_eff, const BeamVector& beam);

/// Expected received power of one terminal under fixed statistics:
/// alpha1^2 |h_los_k^T x|^2 + alpha2^2 ||mp_factor * x||^2.
double expected_terminal_power(const channel::ClusterStatistics& stats, int terminal,
                               const cvec& x);

/// All K expected terminal powers of a cluster.
rvec expected_terminal_powers(const channel::ClusterStatistics& stats, const cvec& x);

}  // namespace wetsim::precoding
