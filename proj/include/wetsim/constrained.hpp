#pragma once

#include <limits>
#include <random>
#include <span>
#include <vector>

#include "wetsim/channel.hpp"
#include "wetsim/precoding.hpp"
#include "wetsim/types.hpp"

namespace wetsim::constrained {

struct SolverOptions {
  int multistarts = 8;     ///< SVD warm start, uniform start, remainder random
  int max_outer = 5000;    ///< multiplier updates per start
  int max_inner = 200;     ///< projected-gradient steps per outer iteration
  double kkt_tol = 1e-7;   ///< scaled stationarity residual
  double feas_tol = 1e-9;  ///< absolute constraint tolerance in watts
};

/// Beam-power maximization with per-terminal receive-power box constraints.
/// The objective rows and the per-terminal row blocks are kept separately so
/// both the statistical and the realization-based variants fit one solver.
struct ConstrainedProblem {
  cmat objective;                    ///< maximize ||objective * x||^2
  std::vector<cmat> terminal_rows;   ///< p_k(x) = ||terminal_rows[k] * x||^2
  std::vector<int> terminal_cluster; ///< cluster index per terminal
  double tx_power = 1.0;
  double lower_w = 0.0;              ///< per-terminal floor (0 disables)
  double upper_w = std::numeric_limits<double>::infinity();  ///< ceiling
  SolverOptions options;
  precoding::SchemeTag tag = precoding::SchemeTag::ConstrainedStat;

  int num_terminals() const { return static_cast<int>(terminal_rows.size()); }
  Eigen::Index antennas() const { return objective.cols(); }
  void validate() const;

  /// Expected-power constraints from per-trial statistics.
  static ConstrainedProblem statistical(std::span<const channel::ClusterStatistics> stats,
                                        double tx_power, double lower_w, double upper_w,
                                        const SolverOptions& options = {});

  /// Instantaneous-power constraints from realized channels.
  static ConstrainedProblem full_csit(std::span<const channel::ChannelRealization> realizations,
                                      double tx_power, double lower_w, double upper_w,
                                      const SolverOptions& options = {});

  /// p_k(x) for every terminal.
  rvec terminal_powers(const cvec& x) const;
};

enum class SolveStatus { OptimalFeasible, Infeasible, MaxIterations };

struct ConstrainedSolution {
  precoding::BeamVector beam;
  double objective_value = 0.0;   ///< ||objective * x||^2 at the solution
  rvec per_terminal_powers;
  SolveStatus status = SolveStatus::Infeasible;
  double constraint_violation = 0.0;  ///< max violation in watts
  int outer_iterations = 0;           ///< total across starts
  int best_start = -1;
};

struct ConstraintSlack {
  enum class Kind { PowerBudget, TerminalLower, TerminalUpper };
  Kind kind = Kind::PowerBudget;
  int cluster = -1;
  int terminal = -1;
  double slack = 0.0;  ///< positive means satisfied
};

/// [[Re A, -Im A], [Im A, Re A]]; preserves norms of embedded vectors.
rmat real_equivalent(const cmat& a);

/// [Re x; Im x] and its inverse.
rvec real_embed(const cvec& x);
cvec complex_from_real(const rvec& z);

/// Augmented-Lagrangian multistart solver. `x_init` seeds the first start and
/// is scaled onto the power ball if needed; `rng` drives the random starts.
/// Feasible starts are ranked by objective value, ties broken by start index;
/// if no start is feasible the least-violating iterate is returned with
/// status Infeasible.
ConstrainedSolution solve_constrained(const ConstrainedProblem& problem, const cvec& x_init,
                                      std::mt19937_64& rng);

/// Signed slack of every constraint at x: the power budget first, then the
/// lower and upper bound of each terminal.
std::vector<ConstraintSlack> feasibility_report(const ConstrainedProblem& problem, const cvec& x);

}  // namespace wetsim::constrained
