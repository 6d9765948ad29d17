#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "ctxlab/rational.hpp"

namespace ctxlab {

/// Zero and sign tests. Exact for rationals; a fixed tolerance for floating point.
template <typename Scalar>
struct ScalarTraits {
  static bool is_zero(const Scalar& x) { return x == 0; }
  static bool is_negative(const Scalar& x) { return x < 0; }
  static bool is_positive(const Scalar& x) { return x > 0; }
};

template <>
struct ScalarTraits<double> {
  static constexpr double kTolerance = 1e-11;
  static bool is_zero(double x) { return std::fabs(x) <= kTolerance; }
  static bool is_negative(double x) { return x < -kTolerance; }
  static bool is_positive(double x) { return x > kTolerance; }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <typename Scalar>
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Vector<Scalar> x;
  Scalar objective{0};
};

/// Two-phase tableau simplex for: minimize c.x subject to A x = b, x >= 0.
///
/// Pivoting follows Bland's rule (lowest-index entering column, ties in the ratio test
/// broken by lowest basic variable), so it terminates and its output is deterministic.
template <typename Scalar>
class StandardFormSimplex {
 public:
  using Traits = ScalarTraits<Scalar>;

  StandardFormSimplex(const Matrix<Scalar>& a, const Vector<Scalar>& b)
      : rows_(static_cast<std::size_t>(a.rows())),
        cols_(static_cast<std::size_t>(a.cols())),
        tableau_(a.rows() + 1, a.cols() + a.rows() + 1),
        basis_(rows_),
        active_(rows_, true) {
    tableau_.setZero();
    const auto rhs = static_cast<Eigen::Index>(cols_ + rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      const bool flip = Traits::is_negative(b(r));
      for (std::size_t j = 0; j < cols_; ++j) {
        const auto& v = a(r, static_cast<Eigen::Index>(j));
        if (!Traits::is_zero(v)) tableau_(r, static_cast<Eigen::Index>(j)) = flip ? Scalar(-v) : v;
      }
      tableau_(r, static_cast<Eigen::Index>(cols_ + i)) = 1;
      tableau_(r, rhs) = flip ? Scalar(-b(r)) : b(r);
      basis_[i] = cols_ + i;
    }
  }

  /// Phase 1. Returns false when A x = b, x >= 0 has no solution.
  bool make_feasible() {
    const auto obj = static_cast<Eigen::Index>(rows_);
    const auto width = tableau_.cols();
    for (Eigen::Index j = 0; j < width; ++j) tableau_(obj, j) = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      for (std::size_t j = 0; j < cols_; ++j) {
        const auto c = static_cast<Eigen::Index>(j);
        if (!Traits::is_zero(tableau_(r, c))) tableau_(obj, c) -= tableau_(r, c);
      }
      tableau_(obj, width - 1) -= tableau_(r, width - 1);
    }
    if (run(cols_ + rows_) == LpStatus::Unbounded) return false;  // cannot happen in phase 1
    if (Traits::is_negative(tableau_(obj, width - 1))) return false;
    drive_out_artificials();
    feasible_ = true;
    return true;
  }

  /// Phase 2 for objective c; requires a successful make_feasible().
  LpSolution<Scalar> minimize(const Vector<Scalar>& c) {
    LpSolution<Scalar> out;
    if (!feasible_ && !make_feasible()) return out;
    const auto obj = static_cast<Eigen::Index>(rows_);
    const auto width = tableau_.cols();
    for (Eigen::Index j = 0; j < width; ++j) tableau_(obj, j) = 0;
    for (std::size_t j = 0; j < cols_; ++j) tableau_(obj, static_cast<Eigen::Index>(j)) = c(static_cast<Eigen::Index>(j));
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!active_[i]) continue;
      const Scalar cost = c(static_cast<Eigen::Index>(basis_[i]));
      if (Traits::is_zero(cost)) continue;
      const auto r = static_cast<Eigen::Index>(i);
      for (Eigen::Index j = 0; j < width; ++j) {
        if (!Traits::is_zero(tableau_(r, j))) tableau_(obj, j) -= cost * tableau_(r, j);
      }
    }
    out.status = run(cols_);
    out.x = solution();
    out.objective = -tableau_(obj, width - 1);
    return out;
  }

  /// Current basic solution restricted to the original columns.
  Vector<Scalar> solution() const {
    Vector<Scalar> x = Vector<Scalar>::Zero(static_cast<Eigen::Index>(cols_));
    const auto rhs = tableau_.cols() - 1;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (active_[i] && basis_[i] < cols_) {
        x(static_cast<Eigen::Index>(basis_[i])) = tableau_(static_cast<Eigen::Index>(i), rhs);
      }
    }
    return x;
  }

  std::size_t pivots() const { return pivots_; }

 private:
  /// Iterates with entering columns restricted to [0, allowed).
  LpStatus run(std::size_t allowed) {
    const auto obj = static_cast<Eigen::Index>(rows_);
    const auto rhs = tableau_.cols() - 1;
    while (true) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (Traits::is_negative(tableau_(obj, static_cast<Eigen::Index>(j)))) {
          entering = j;
          break;
        }
      }
      if (!entering) return LpStatus::Optimal;
      const auto e = static_cast<Eigen::Index>(*entering);
      std::optional<std::size_t> leaving;
      Scalar best_ratio{0};
      for (std::size_t i = 0; i < rows_; ++i) {
        if (!active_[i]) continue;
        const auto r = static_cast<Eigen::Index>(i);
        if (!Traits::is_positive(tableau_(r, e))) continue;
        Scalar ratio = tableau_(r, rhs) / tableau_(r, e);
        if (!leaving || ratio < best_ratio ||
            (!(best_ratio < ratio) && basis_[i] < basis_[*leaving])) {
          leaving = i;
          best_ratio = std::move(ratio);
        }
      }
      if (!leaving) return LpStatus::Unbounded;
      pivot(*leaving, *entering);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    ++pivots_;
    const auto r = static_cast<Eigen::Index>(row);
    const auto e = static_cast<Eigen::Index>(col);
    const auto width = tableau_.cols();
    const Scalar inv = Scalar(1) / tableau_(r, e);
    nonzero_.clear();
    for (Eigen::Index j = 0; j < width; ++j) {
      if (!Traits::is_zero(tableau_(r, j))) {
        tableau_(r, j) *= inv;
        nonzero_.push_back(j);
      }
    }
    for (Eigen::Index i = 0; i < tableau_.rows(); ++i) {
      if (i == r || Traits::is_zero(tableau_(i, e))) continue;
      const Scalar factor = tableau_(i, e);
      for (auto j : nonzero_) tableau_(i, j) -= factor * tableau_(r, j);
      tableau_(i, e) = 0;
    }
    basis_[row] = col;
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (!active_[i] || basis_[i] < cols_) continue;
      const auto r = static_cast<Eigen::Index>(i);
      std::optional<std::size_t> replacement;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!Traits::is_zero(tableau_(r, static_cast<Eigen::Index>(j)))) {
          replacement = j;
          break;
        }
      }
      if (replacement) {
        pivot(i, *replacement);
      } else {
        active_[i] = false;  // linearly dependent constraint
      }
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> tableau_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
  std::vector<Eigen::Index> nonzero_;
  bool feasible_ = false;
  std::size_t pivots_ = 0;
};

/// A point x >= 0 with A x = b, if any.
template <typename Scalar>
std::optional<Vector<Scalar>> find_feasible_point(const Matrix<Scalar>& a, const Vector<Scalar>& b) {
  StandardFormSimplex<Scalar> lp(a, b);
  if (!lp.make_feasible()) return std::nullopt;
  return lp.solution();
}

template <typename Scalar>
LpSolution<Scalar> minimize(const Matrix<Scalar>& a, const Vector<Scalar>& b,
                            const Vector<Scalar>& c) {
  StandardFormSimplex<Scalar> lp(a, b);
  return lp.minimize(c);
}

}  // namespace ctxlab
