#include "wetsim/constrained.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wetsim/rng.hpp"

namespace wetsim::constrained {

namespace {

/// State of one augmented-Lagrangian run on the real-embedded problem.
/// The objective and every terminal power are quadratic forms, so gradients
/// are matrix-vector products with precomputed 2M x 2M PSD matrices.
struct RealProblem {
  rmat q_obj;                // objective quadratic
  std::vector<rmat> q_term;  // one PSD quadratic per terminal
  double tx_power = 1.0;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  double power_scale = 1.0;  // natural objective magnitude, for scaling

  bool has_lower() const { return lower > 0.0; }
  bool has_upper() const { return std::isfinite(upper); }

  double objective(const rvec& z) const { return z.dot(q_obj * z); }
  double terminal_power(int k, const rvec& z) const { return z.dot(q_term[k] * z); }

  double max_violation(const rvec& z) const {
    double v = std::max(0.0, z.squaredNorm() - tx_power);
    for (const auto& q : q_term) {
      const double p = z.dot(q * z);
      if (has_lower()) v = std::max(v, lower - p);
      if (has_upper()) v = std::max(v, p - upper);
    }
    return v;
  }
};

void project_ball(rvec& z, double radius_sq) {
  const double n2 = z.squaredNorm();
  if (n2 > radius_sq) z *= std::sqrt(radius_sq / n2);
}

struct StartResult {
  rvec z;
  double objective = 0.0;
  double violation = 0.0;
  bool feasible = false;
  bool converged = false;
  int outer_used = 0;
};

/// Minimizes -objective + sum of Powell-Hestenes-Rockafellar terms over the
/// power ball with projected-gradient inner steps and Armijo backtracking.
StartResult run_single_start(const RealProblem& rp, rvec z, const SolverOptions& opt) {
  const int n_terms = static_cast<int>(rp.q_term.size());
  const int n_lower = rp.has_lower() ? n_terms : 0;
  const int n_upper = rp.has_upper() ? n_terms : 0;

  // Work in units of the natural objective scale so tolerances and the
  // penalty weight are dimensionless.
  const double fscale = 1.0 / rp.power_scale;
  rvec lam_lo = rvec::Zero(n_lower);
  rvec lam_hi = rvec::Zero(n_upper);
  double mu = 10.0;
  double prev_violation = std::numeric_limits<double>::infinity();

  rvec powers(n_terms);
  auto eval_powers = [&](const rvec& v) {
    for (int k = 0; k < n_terms; ++k) powers(k) = v.dot(rp.q_term[k] * v);
  };

  auto lagrangian = [&](const rvec& v, rvec* grad) -> double {
    double val = -fscale * v.dot(rp.q_obj * v);
    if (grad) *grad = -2.0 * fscale * (rp.q_obj * v);
    for (int k = 0; k < n_terms; ++k) {
      const rvec qv = rp.q_term[k] * v;
      const double p = v.dot(qv);
      if (rp.has_lower()) {
        const double g = fscale * (rp.lower - p);  // g <= 0 when satisfied
        const double t = lam_lo(k) + mu * g;
        if (t > 0.0) {
          val += (t * t - lam_lo(k) * lam_lo(k)) / (2.0 * mu);
          if (grad) *grad -= t * 2.0 * fscale * qv;
        } else {
          val -= lam_lo(k) * lam_lo(k) / (2.0 * mu);
        }
      }
      if (rp.has_upper()) {
        const double g = fscale * (p - rp.upper);
        const double t = lam_hi(k) + mu * g;
        if (t > 0.0) {
          val += (t * t - lam_hi(k) * lam_hi(k)) / (2.0 * mu);
          if (grad) *grad += t * 2.0 * fscale * qv;
        } else {
          val -= lam_hi(k) * lam_hi(k) / (2.0 * mu);
        }
      }
    }
    return val;
  };

  project_ball(z, rp.tx_power);
  const double step_floor = 1e-14;
  double step = 1.0;
  StartResult result;

  for (int outer = 0; outer < opt.max_outer; ++outer) {
    ++result.outer_used;

    // Inner projected-gradient descent on the current Lagrangian.
    rvec grad(z.size());
    double val = lagrangian(z, &grad);
    double inner_residual = std::numeric_limits<double>::infinity();
    for (int inner = 0; inner < opt.max_inner; ++inner) {
      rvec trial(z.size());
      double trial_val = 0.0;
      step = std::min(step * 4.0, 1e6);
      for (;;) {
        trial = z - step * grad;
        project_ball(trial, rp.tx_power);
        trial_val = lagrangian(trial, nullptr);
        const double decrease = (z - trial).squaredNorm() / (2.0 * step);
        if (trial_val <= val - 1e-4 * decrease || step < step_floor) break;
        step *= 0.5;
      }
      inner_residual = (z - trial).norm() / std::max(step, step_floor);
      z = trial;
      val = lagrangian(z, &grad);
      if (inner_residual <= opt.kkt_tol * std::max(1.0, grad.norm())) break;
      if (step < step_floor) break;
    }

    // Multiplier update and convergence bookkeeping on true (unscaled) powers.
    eval_powers(z);
    double violation = std::max(0.0, z.squaredNorm() - rp.tx_power);
    for (int k = 0; k < n_terms; ++k) {
      if (rp.has_lower()) {
        const double g = fscale * (rp.lower - powers(k));
        lam_lo(k) = std::max(0.0, lam_lo(k) + mu * g);
        violation = std::max(violation, rp.lower - powers(k));
      }
      if (rp.has_upper()) {
        const double g = fscale * (powers(k) - rp.upper);
        lam_hi(k) = std::max(0.0, lam_hi(k) + mu * g);
        violation = std::max(violation, powers(k) - rp.upper);
      }
    }

    const bool feasible_now = violation <= opt.feas_tol;
    const bool stationary = inner_residual <= opt.kkt_tol;
    if (feasible_now && stationary) {
      result.converged = true;
      break;
    }
    if (violation > 0.25 * prev_violation) mu = std::min(mu * 4.0, 1e12);
    prev_violation = violation;
    // No measurable violation and no inner progress possible: stop early
    // instead of spinning the multiplier loop.
    if (feasible_now && inner_residual <= 10.0 * opt.kkt_tol) {
      result.converged = true;
      break;
    }
  }

  result.z = z;
  result.objective = rp.objective(z);
  result.violation = rp.max_violation(z);
  result.feasible = result.violation <= opt.feas_tol;
  return result;
}

}  // namespace

rmat real_equivalent(const cmat& a) {
  rmat out(2 * a.rows(), 2 * a.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a.real();
  out.topRightCorner(a.rows(), a.cols()) = -a.imag();
  out.bottomLeftCorner(a.rows(), a.cols()) = a.imag();
  out.bottomRightCorner(a.rows(), a.cols()) = a.real();
  return out;
}

rvec real_embed(const cvec& x) {
  rvec z(2 * x.size());
  z.head(x.size()) = x.real();
  z.tail(x.size()) = x.imag();
  return z;
}

cvec complex_from_real(const rvec& z) {
  if (z.size() % 2 != 0) throw std::invalid_argument("real embedding must have even length");
  const Eigen::Index m = z.size() / 2;
  cvec x(m);
  x.real() = z.head(m);
  x.imag() = z.tail(m);
  return x;
}

void ConstrainedProblem::validate() const {
  if (objective.size() == 0) throw std::invalid_argument("objective matrix is empty");
  if (!(tx_power > 0.0)) throw std::invalid_argument("tx power must be positive");
  if (lower_w < 0.0) throw std::invalid_argument("per-terminal floor must be >= 0");
  if (!(upper_w > lower_w)) throw std::invalid_argument("per-terminal ceiling must exceed floor");
  if (terminal_rows.size() != terminal_cluster.size())
    throw std::invalid_argument("terminal bookkeeping sizes disagree");
  for (const auto& rows : terminal_rows)
    if (rows.cols() != objective.cols())
      throw std::invalid_argument("terminal rows disagree with the antenna count");
  if (options.multistarts < 1) throw std::invalid_argument("at least one start is required");
}

ConstrainedProblem ConstrainedProblem::statistical(
    std::span<const channel::ClusterStatistics> stats, double tx_power, double lower_w,
    double upper_w, const SolverOptions& options) {
  ConstrainedProblem problem;
  problem.objective = precoding::build_stat_matrix(stats).rows;
  problem.tx_power = tx_power;
  problem.lower_w = lower_w;
  problem.upper_w = upper_w;
  problem.options = options;
  for (std::size_t l = 0; l < stats.size(); ++l) {
    const auto& s = stats[l];
    const cmat mp = s.alpha2 * s.mp_factor();
    for (Eigen::Index k = 0; k < s.terminals(); ++k) {
      cmat rows(1 + mp.rows(), s.antennas());
      rows.row(0) = s.alpha1 * s.h_los.row(k);
      rows.bottomRows(mp.rows()) = mp;
      problem.terminal_rows.push_back(std::move(rows));
      problem.terminal_cluster.push_back(static_cast<int>(l));
    }
  }
  return problem;
}

ConstrainedProblem ConstrainedProblem::full_csit(
    std::span<const channel::ChannelRealization> realizations, double tx_power, double lower_w,
    double upper_w, const SolverOptions& options) {
  ConstrainedProblem problem;
  Eigen::Index total = 0;
  const Eigen::Index antennas = realizations.empty() ? 0 : realizations[0].h_eff.cols();
  for (const auto& r : realizations) total += r.h_eff.rows();
  problem.objective.resize(total, antennas);
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l < realizations.size(); ++l) {
    const cmat& h = realizations[l].h_eff;
    problem.objective.middleRows(offset, h.rows()) = h;
    offset += h.rows();
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
      problem.terminal_rows.push_back(h.row(k));
      problem.terminal_cluster.push_back(static_cast<int>(l));
    }
  }
  problem.tx_power = tx_power;
  problem.lower_w = lower_w;
  problem.upper_w = upper_w;
  problem.options = options;
  problem.tag = precoding::SchemeTag::ConstrainedFull;
  return problem;
}

rvec ConstrainedProblem::terminal_powers(const cvec& x) const {
  rvec p(num_terminals());
  for (int k = 0; k < num_terminals(); ++k) p(k) = (terminal_rows[k] * x).squaredNorm();
  return p;
}

ConstrainedSolution solve_constrained(const ConstrainedProblem& problem, const cvec& x_init,
                                      std::mt19937_64& rng) {
  problem.validate();
  const Eigen::Index m = problem.antennas();
  if (x_init.size() != m) throw std::invalid_argument("x_init length must match antennas");

  double sigma_max = 0.0;
  const cvec x_svd = precoding::top_right_singular(problem.objective, &sigma_max);
  const double objective_bound = problem.tx_power * sigma_max * sigma_max;

  RealProblem rp;
  rp.q_obj = real_equivalent(problem.objective.adjoint() * problem.objective);
  rp.q_term.reserve(problem.terminal_rows.size());
  for (const auto& rows : problem.terminal_rows)
    rp.q_term.push_back(real_equivalent(rows.adjoint() * rows));
  rp.tx_power = problem.tx_power;
  rp.lower = problem.lower_w;
  rp.upper = problem.upper_w;
  rp.power_scale = std::max(objective_bound, 1e-300);

  // Start list: caller's point, the unconstrained maximizer if it differs,
  // the uniform excitation, then random sphere points up to the budget.
  std::vector<rvec> starts;
  starts.reserve(problem.options.multistarts);
  cvec x0 = x_init;
  if (x0.squaredNorm() > problem.tx_power)
    x0 *= std::sqrt(problem.tx_power / x0.squaredNorm());
  starts.push_back(real_embed(x0));
  const cvec x_top = std::sqrt(problem.tx_power) * x_svd;
  if (static_cast<int>(starts.size()) < problem.options.multistarts &&
      (x0 - x_top).norm() > 1e-12 * x_top.norm()) {
    starts.push_back(real_embed(x_top));
  }
  if (static_cast<int>(starts.size()) < problem.options.multistarts) {
    starts.push_back(real_embed(
        cvec::Constant(m, cplx(std::sqrt(problem.tx_power / static_cast<double>(m)), 0.0))));
  }
  while (static_cast<int>(starts.size()) < problem.options.multistarts)
    starts.push_back(real_embed(random_sphere_point(m, problem.tx_power, rng)));

  ConstrainedSolution best;
  best.constraint_violation = std::numeric_limits<double>::infinity();
  bool have_feasible = false;
  int outer_total = 0;

  for (std::size_t s = 0; s < starts.size(); ++s) {
    StartResult res = run_single_start(rp, starts[s], problem.options);
    outer_total += res.outer_used;

    const bool better =
        res.feasible ? (!have_feasible || res.objective > best.objective_value)
                     : (!have_feasible && res.violation < best.constraint_violation);
    if (better) {
      have_feasible = have_feasible || res.feasible;
      best.beam.coeffs = complex_from_real(res.z);
      best.objective_value = res.objective;
      best.constraint_violation = res.violation;
      best.best_start = static_cast<int>(s);
      best.status = res.feasible
                        ? (res.converged ? SolveStatus::OptimalFeasible : SolveStatus::MaxIterations)
                        : SolveStatus::Infeasible;
    }

    // A feasible stationary point at the unconstrained optimum cannot be
    // beaten by any other start; skip the rest.
    if (res.feasible && res.converged &&
        res.objective >= objective_bound * (1.0 - 1e-9)) {
      break;
    }
  }

  best.outer_iterations = outer_total;
  best.beam.tag = problem.tag;
  best.per_terminal_powers = problem.terminal_powers(best.beam.coeffs);
  return best;
}

std::vector<ConstraintSlack> feasibility_report(const ConstrainedProblem& problem, const cvec& x) {
  std::vector<ConstraintSlack> slacks;
  slacks.push_back({ConstraintSlack::Kind::PowerBudget, -1, -1,
                    problem.tx_power - x.squaredNorm()});
  const rvec powers = problem.terminal_powers(x);
  for (int k = 0; k < problem.num_terminals(); ++k) {
    slacks.push_back({ConstraintSlack::Kind::TerminalLower, problem.terminal_cluster[k], k,
                      powers(k) - problem.lower_w});
    if (std::isfinite(problem.upper_w))
      slacks.push_back({ConstraintSlack::Kind::TerminalUpper, problem.terminal_cluster[k], k,
                        problem.upper_w - powers(k)});
  }
  return slacks;
}

}  // namespace wetsim::constrained
