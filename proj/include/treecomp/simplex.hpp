#pragma once

#include <Eigen/Core>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace treecomp {

struct IterationLimitExceeded : std::runtime_error {
  IterationLimitExceeded() : std::runtime_error("simplex iteration limit exceeded") {}
};

enum class SimplexStatus { optimal, infeasible, unbounded };

/// Numeric policy for the simplex engine. The exact instantiation uses
/// zero tolerances; the floating one uses the configured epsilons.
template <class S>
struct SimplexEps {
  S feas{};   // bound / feasibility slack
  S opt{};    // reduced-cost threshold
  S pivot{};  // entries at or below this magnitude are treated as zero
};

template <class S>
struct SimplexProblem {
  Eigen::Index m = 0;  // rows (a_i . x <= b_i after slack insertion: = b_i)
  Eigen::Index n = 0;  // structural variables
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> A;  // m x n
  Eigen::Matrix<S, Eigen::Dynamic, 1> b;
  Eigen::Matrix<S, Eigen::Dynamic, 1> c;
  std::vector<bool> has_lo, has_hi;
  Eigen::Matrix<S, Eigen::Dynamic, 1> lo, hi;  // valid where has_* is true
};

template <class S>
struct SimplexOutcome {
  SimplexStatus status = SimplexStatus::optimal;
  S objective{};
  Eigen::Matrix<S, Eigen::Dynamic, 1> x;          // structural values (optimal)
  Eigen::Matrix<S, Eigen::Dynamic, 1> dual_rows;  // y >= 0 for <= rows (optimal)
  Eigen::Matrix<S, Eigen::Dynamic, 1> red_costs;  // c + A^T y (optimal)
  Eigen::Matrix<S, Eigen::Dynamic, 1> farkas;     // infeasible certificate
  Eigen::Matrix<S, Eigen::Dynamic, 1> ray;        // unbounded direction
  long iterations = 0;
};

/// Bounded-variable primal simplex on a dense tableau. Two phases with
/// auxiliary artificials; Dantzig pricing, switching to Bland's rule after
/// 10*(m+n) consecutive degenerate pivots.
template <class S>
class Simplex {
 public:
  Simplex(const SimplexProblem<S>& p, SimplexEps<S> eps, long max_iterations)
      : p_(p), eps_(eps), max_iterations_(max_iterations) {}

  SimplexOutcome<S> solve() {
    setup();
    SimplexOutcome<S> out;
    if (phase1_needed_) {
      load_costs(true);
      run(true);
      S infeas = current_objective(true);
      if (is_positive(infeas, eps_.feas)) {
        out.status = SimplexStatus::infeasible;
        out.farkas.resize(p_.m);
        for (Eigen::Index i = 0; i < p_.m; ++i) out.farkas(i) = zrow_(slack_col(i));
        out.iterations = iterations_;
        return out;
      }
      purge_artificials();
    }
    load_costs(false);
    bool bounded = run(false);
    out.iterations = iterations_;
    if (!bounded) {
      out.status = SimplexStatus::unbounded;
      out.ray.resize(p_.n);
      for (Eigen::Index j = 0; j < p_.n; ++j) out.ray(j) = ray_[j];
      return out;
    }
    out.status = SimplexStatus::optimal;
    out.x.resize(p_.n);
    for (Eigen::Index j = 0; j < p_.n; ++j) out.x(j) = value_[j];
    out.objective = S(0);
    for (Eigen::Index j = 0; j < p_.n; ++j) out.objective += p_.c(j) * out.x(j);
    out.dual_rows.resize(p_.m);
    for (Eigen::Index i = 0; i < p_.m; ++i) out.dual_rows(i) = zrow_(slack_col(i));
    out.red_costs.resize(p_.n);
    for (Eigen::Index j = 0; j < p_.n; ++j) out.red_costs(j) = zrow_(j);
    return out;
  }

 private:
  enum class Stat { basic, at_lower, at_upper, at_zero, fixed };

  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

  Eigen::Index slack_col(Eigen::Index i) const { return p_.n + i; }

  static bool is_positive(const S& v, const S& tol) { return v > tol; }
  static bool is_negative(const S& v, const S& tol) { return v < -tol; }
  bool nonzero_pivot(const S& v) const { return v > eps_.pivot || v < -eps_.pivot; }

  void setup() {
    const Eigen::Index m = p_.m, n = p_.n;
    ncols_ = n + m;
    T_.setZero(m, ncols_);
    T_.leftCols(n) = p_.A;
    for (Eigen::Index i = 0; i < m; ++i) T_(i, slack_col(i)) = S(1);

    stat_.assign(static_cast<std::size_t>(ncols_), Stat::at_lower);
    value_.assign(static_cast<std::size_t>(ncols_), S(0));
    has_lo_.assign(static_cast<std::size_t>(ncols_), true);
    has_hi_.assign(static_cast<std::size_t>(ncols_), false);
    lo_.assign(static_cast<std::size_t>(ncols_), S(0));
    hi_.assign(static_cast<std::size_t>(ncols_), S(0));
    for (Eigen::Index j = 0; j < n; ++j) {
      has_lo_[j] = p_.has_lo[j];
      has_hi_[j] = p_.has_hi[j];
      if (p_.has_lo[j]) lo_[j] = p_.lo(j);
      if (p_.has_hi[j]) hi_[j] = p_.hi(j);
      if (p_.has_lo[j] && p_.has_hi[j] && lo_[j] == hi_[j]) {
        stat_[j] = Stat::fixed;
        value_[j] = lo_[j];
      } else if (p_.has_lo[j]) {
        stat_[j] = Stat::at_lower;
        value_[j] = lo_[j];
      } else if (p_.has_hi[j]) {
        stat_[j] = Stat::at_upper;
        value_[j] = hi_[j];
      } else {
        stat_[j] = Stat::at_zero;
        value_[j] = S(0);
      }
    }

    // Slack basis; rows whose slack would start negative get an artificial.
    basis_.resize(static_cast<std::size_t>(m));
    Vec residual = p_.b;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (value_[j] == S(0)) continue;
      residual -= p_.A.col(j) * value_[j];
    }
    phase1_needed_ = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (residual(i) >= S(0)) {
        basis_[static_cast<std::size_t>(i)] = slack_col(i);
        stat_[static_cast<std::size_t>(slack_col(i))] = Stat::basic;
        value_[static_cast<std::size_t>(slack_col(i))] = residual(i);
      } else {
        Eigen::Index art = ncols_;
        ++ncols_;
        T_.conservativeResize(Eigen::NoChange, ncols_);
        T_.col(art).setZero();
        T_(i, art) = S(-1);
        // Keep the tableau equal to B^{-1}[A I ...]: the basic artificial
        // column carries -1, so its row flips sign.
        T_.row(i) = -T_.row(i);
        stat_.push_back(Stat::basic);
        value_.push_back(-residual(i));
        has_lo_.push_back(true);
        has_hi_.push_back(false);
        lo_.push_back(S(0));
        hi_.push_back(S(0));
        artificials_.push_back(art);
        basis_[static_cast<std::size_t>(i)] = art;
        phase1_needed_ = true;
      }
    }
    zrow_.setZero(ncols_);
  }

  bool is_artificial(Eigen::Index j) const { return j >= p_.n + p_.m; }

  S cost_of(Eigen::Index j, bool phase1) const {
    if (phase1) return is_artificial(j) ? S(1) : S(0);
    if (j < p_.n) return p_.c(j);
    return S(0);
  }

  void load_costs(bool phase1) {
    zrow_.setZero(ncols_);
    for (Eigen::Index j = 0; j < ncols_; ++j) zrow_(j) = cost_of(j, phase1);
    for (Eigen::Index i = 0; i < p_.m; ++i) {
      const S cb = cost_of(basis_[static_cast<std::size_t>(i)], phase1);
      if (cb == S(0)) continue;
      zrow_ -= cb * T_.row(i).transpose();
    }
    for (Eigen::Index i = 0; i < p_.m; ++i) zrow_(basis_[static_cast<std::size_t>(i)]) = S(0);
  }

  S current_objective(bool phase1) const {
    S v(0);
    for (Eigen::Index j = 0; j < ncols_; ++j) {
      const S cj = cost_of(j, phase1);
      if (cj == S(0)) continue;
      v += cj * value_[static_cast<std::size_t>(j)];
    }
    return v;
  }

  /// After a feasible phase 1, pivot artificials out of the basis; a row
  /// with no eligible pivot is degenerate and its artificial stays fixed
  /// at zero.
  void purge_artificials() {
    for (Eigen::Index i = 0; i < p_.m; ++i) {
      Eigen::Index bj = basis_[static_cast<std::size_t>(i)];
      if (!is_artificial(bj)) continue;
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < p_.n + p_.m; ++j) {
        if (stat_[static_cast<std::size_t>(j)] == Stat::basic ||
            stat_[static_cast<std::size_t>(j)] == Stat::fixed)
          continue;
        if (nonzero_pivot(T_(i, j))) {
          enter = j;
          break;
        }
      }
      if (enter < 0) continue;  // redundant row
      int dir = T_(i, enter) > S(0) ? 1 : -1;
      pivot(enter, i, S(0), dir, true);
    }
    for (Eigen::Index a : artificials_) {
      if (stat_[static_cast<std::size_t>(a)] != Stat::basic) stat_[static_cast<std::size_t>(a)] = Stat::fixed;
      has_hi_[static_cast<std::size_t>(a)] = true;
      hi_[static_cast<std::size_t>(a)] = S(0);
    }
  }

  /// Returns false when the objective is unbounded (phase 2 only).
  bool run(bool phase1) {
    const long bland_trigger = 10 * static_cast<long>(p_.m + p_.n);
    long consecutive_degenerate = 0;
    bool bland = false;
    while (true) {
      if (++iterations_ > max_iterations_) throw IterationLimitExceeded();
      auto pick = choose_entering(phase1, bland);
      if (!pick) return true;  // optimal for this phase
      auto [q, dir] = *pick;
      RatioResult rr = ratio_test(q, dir);
      if (rr.t_unbounded) {
        if (phase1) throw IterationLimitExceeded();  // cannot happen with exact data
        build_ray(q, dir);
        return false;
      }
      if (rr.self_block) {
        bound_flip(q, dir, rr.t);
        consecutive_degenerate = 0;
        continue;
      }
      if (rr.t == S(0)) {
        if (++consecutive_degenerate > bland_trigger) bland = true;
      } else {
        consecutive_degenerate = 0;
      }
      pivot(q, rr.row, rr.t, dir, rr.leaves_to_lower);
    }
  }

  std::optional<std::pair<Eigen::Index, int>> choose_entering(bool phase1, bool bland) {
    Eigen::Index best = -1;
    int best_dir = 0;
    S best_mag(0);
    for (Eigen::Index j = 0; j < ncols_; ++j) {
      const Stat st = stat_[static_cast<std::size_t>(j)];
      if (st == Stat::basic || st == Stat::fixed) continue;
      if (!phase1 && is_artificial(j)) continue;
      const S& d = zrow_(j);
      int dir = 0;
      if ((st == Stat::at_lower || st == Stat::at_zero) && is_negative(d, eps_.opt)) dir = 1;
      if (dir == 0 && (st == Stat::at_upper || st == Stat::at_zero) && is_positive(d, eps_.opt)) dir = -1;
      if (dir == 0) continue;
      if (bland) return std::make_pair(j, dir);
      S mag = d < S(0) ? S(-d) : d;
      if (best < 0 || mag > best_mag) {
        best = j;
        best_dir = dir;
        best_mag = mag;
      }
    }
    if (best < 0) return std::nullopt;
    return std::make_pair(best, best_dir);
  }

  struct RatioResult {
    bool t_unbounded = false;
    bool self_block = false;
    S t{};
    Eigen::Index row = -1;
    bool leaves_to_lower = true;
  };

  RatioResult ratio_test(Eigen::Index q, int dir) {
    RatioResult rr;
    bool have = false;
    S best_t(0);
    Eigen::Index best_row = -1;
    bool best_to_lower = true;
    // Entering variable blocked by its own opposite bound.
    bool self_possible = false;
    S self_t(0);
    if (has_lo_[static_cast<std::size_t>(q)] && has_hi_[static_cast<std::size_t>(q)]) {
      self_possible = true;
      self_t = hi_[static_cast<std::size_t>(q)] - lo_[static_cast<std::size_t>(q)];
    }
    const S sdir = dir > 0 ? S(1) : S(-1);
    for (Eigen::Index i = 0; i < p_.m; ++i) {
      const S rate = sdir * T_(i, q);  // basic value changes by -rate * t
      if (!nonzero_pivot(rate)) continue;
      const Eigen::Index bj = basis_[static_cast<std::size_t>(i)];
      const auto bju = static_cast<std::size_t>(bj);
      S t_i;
      bool to_lower;
      if (rate > S(0)) {
        if (!has_lo_[bju]) continue;
        t_i = (value_[bju] - lo_[bju]) / rate;
        to_lower = true;
      } else {
        if (!has_hi_[bju]) continue;
        t_i = (hi_[bju] - value_[bju]) / (S(0) - rate);
        to_lower = false;
      }
      if (t_i < S(0)) t_i = S(0);  // numerical guard; exact arithmetic never goes negative
      if (!have || t_i < best_t ||
          (t_i == best_t && bj < basis_[static_cast<std::size_t>(best_row)])) {
        have = true;
        best_t = t_i;
        best_row = i;
        best_to_lower = to_lower;
      }
    }
    if (self_possible && (!have || self_t < best_t)) {
      rr.self_block = true;
      rr.t = self_t;
      return rr;
    }
    if (!have) {
      rr.t_unbounded = true;
      return rr;
    }
    rr.t = best_t;
    rr.row = best_row;
    rr.leaves_to_lower = best_to_lower;
    return rr;
  }

  void apply_value_shift(Eigen::Index q, int dir, const S& t) {
    if (t == S(0)) return;
    const S sdir = dir > 0 ? S(1) : S(-1);
    for (Eigen::Index i = 0; i < p_.m; ++i) {
      const Eigen::Index bj = basis_[static_cast<std::size_t>(i)];
      value_[static_cast<std::size_t>(bj)] -= sdir * T_(i, q) * t;
    }
    value_[static_cast<std::size_t>(q)] += sdir * t;
  }

  void bound_flip(Eigen::Index q, int dir, const S& t) {
    apply_value_shift(q, dir, t);
    stat_[static_cast<std::size_t>(q)] = dir > 0 ? Stat::at_upper : Stat::at_lower;
  }

  void pivot(Eigen::Index q, Eigen::Index row, const S& t, int dir, bool leaves_to_lower) {
    apply_value_shift(q, dir, t);
    const Eigen::Index leaving = basis_[static_cast<std::size_t>(row)];
    const auto lu = static_cast<std::size_t>(leaving);
    if (leaves_to_lower) {
      stat_[lu] = (has_hi_[lu] && hi_[lu] == lo_[lu]) ? Stat::fixed : Stat::at_lower;
      value_[lu] = lo_[lu];
    } else {
      stat_[lu] = (has_lo_[lu] && hi_[lu] == lo_[lu]) ? Stat::fixed : Stat::at_upper;
      value_[lu] = hi_[lu];
    }
    basis_[static_cast<std::size_t>(row)] = q;
    stat_[static_cast<std::size_t>(q)] = Stat::basic;

    const S piv = T_(row, q);
    T_.row(row) /= piv;
    for (Eigen::Index i = 0; i < p_.m; ++i) {
      if (i == row) continue;
      const S f = T_(i, q);
      if (f == S(0)) continue;
      T_.row(i) -= f * T_.row(row);
      T_(i, q) = S(0);
    }
    const S zf = zrow_(q);
    if (zf != S(0)) {
      zrow_ -= zf * T_.row(row).transpose();
      zrow_(q) = S(0);
    }
  }

  void build_ray(Eigen::Index q, int dir) {
    ray_.assign(static_cast<std::size_t>(p_.n), S(0));
    const S sdir = dir > 0 ? S(1) : S(-1);
    if (q < p_.n) ray_[static_cast<std::size_t>(q)] = sdir;
    for (Eigen::Index i = 0; i < p_.m; ++i) {
      const Eigen::Index bj = basis_[static_cast<std::size_t>(i)];
      if (bj < p_.n) ray_[static_cast<std::size_t>(bj)] = S(0) - sdir * T_(i, q);
    }
  }

  const SimplexProblem<S>& p_;
  SimplexEps<S> eps_;
  long max_iterations_;

  Eigen::Index ncols_ = 0;
  Mat T_;
  Vec zrow_;
  std::vector<Eigen::Index> basis_;
  std::vector<Stat> stat_;
  std::vector<S> value_;
  std::vector<bool> has_lo_, has_hi_;
  std::vector<S> lo_, hi_;
  std::vector<Eigen::Index> artificials_;
  std::vector<S> ray_;
  bool phase1_needed_ = false;
  long iterations_ = 0;
};

}  // namespace treecomp
