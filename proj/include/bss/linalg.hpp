#pragma once

#include <span>
#include <vector>

#include "bss/types.hpp"

namespace bss {

/// Least squares restricted to `support`: minimizing coefficients and the
/// minimum RSS. Rank-deficient submatrices yield the minimum-norm solution
/// (the RSS is still the unique minimum value). Empty support gives
/// beta = [] and rss = |y|^2.
SubsetSolution subset_rss(const Dataset& data, const SupportSet& support);

/// RSS increase from dropping `drop` out of `support`. Requires
/// drop ⊆ support. Nonnegative up to roundoff.
double gain(const Dataset& data, const SupportSet& support,
            const SupportSet& drop);

/// RSS decrease from adding `add` (disjoint from `support`) to the model.
/// Nonnegative up to roundoff.
double reduction(const Dataset& data, const SupportSet& support,
                 const SupportSet& add);

/// Largest eigenvalue of X'X by power iteration with a deterministic
/// start, converged to well below 1e-8 relative.
double spectral_bound(const Dataset& data);

/// Full-model least squares: the OLS solution when X has full column
/// rank, the minimum-norm least-squares solution otherwise (p > n or
/// rank-deficient X).
Vector full_least_squares(const Dataset& data);

/// Center every column of X and scale it to unit l2-norm, in place.
/// A constant column cannot be standardized; throws StandardizationError
/// naming the (1-based) column.
void standardize_columns(Matrix& X);

/// Center y and scale to unit l2-norm (the real-data protocol).
void standardize_response(Vector& y);

/// Incremental subset-RSS engine shared by the selectors. Maintains a
/// Cholesky factor of the Gram matrix of the current member columns and
/// answers add/drop queries without refitting from scratch. Gram columns
/// are cached lazily per evaluator. With `naive` set, every query is
/// answered by a dense from-scratch solve of the actual submatrix (the
/// slow reference path used for cross-checking).
///
/// Columns numerically dependent on the current members are tracked but
/// excluded from the factor; the reported RSS is unaffected, as adding a
/// dependent column cannot reduce the RSS.
class SubsetEvaluator {
 public:
  explicit SubsetEvaluator(const Dataset& data, bool naive = false);

  const Dataset& dataset() const { return *data_; }
  double yty() const { return yty_; }
  bool naive() const { return naive_; }

  /// q(X_S) for an arbitrary support, without touching the current model.
  double rss_of(std::span<const int> support);

  // Current-model API.
  void set_support(std::span<const int> support);
  void clear();
  const std::vector<int>& members() const { return members_; }
  double current_rss() const;
  void push(int j);
  void pop();

  /// q(S ∪ {j}) for j not in the current support S.
  double add_rss(int j);
  /// q(S ∪ {j1, j2}), j1 != j2, both outside S.
  double add_pair_rss(int j1, int j2);
  /// q(S \ {j}) for a current member j.
  double drop_rss(int j);
  /// q(S \ D) for D a subset of the current members.
  double drop_set_rss(std::span<const int> dropped);

 private:
  struct Factor {
    std::vector<double> L;    // packed row-major lower triangle
    std::vector<double> z;    // solution of L z = c_S over active columns
    std::vector<int> active;  // active member indices, factor order
    double rss = 0.0;

    int dim() const { return static_cast<int>(active.size()); }
    double& l(int r, int c) { return L[r * (r + 1) / 2 + c]; }
    double lat(int r, int c) const { return L[r * (r + 1) / 2 + c]; }
  };

  const Vector& gram_col(int i);
  double pair_dot(int a, int b);
  bool try_border(Factor& f, int j, const double* extra_dot, int extra_idx);
  void build_factor(Factor& f, std::span<const int> support);
  double dense_rss(std::span<const int> support) const;

  const Dataset* data_;
  bool naive_;
  double yty_;
  Vector xty_;
  Vector col_sq_;
  std::vector<Vector> gram_cols_;  // lazily filled columns of X'X

  std::vector<int> members_;
  Factor cur_;
  Factor scratch_;
  std::vector<double> wbuf_;
  std::vector<int> dbuf_;
};

}  // namespace bss
