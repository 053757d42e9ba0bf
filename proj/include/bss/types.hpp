#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace bss {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Error hierarchy. Preconditions violated by the caller throw
// InvalidArgumentError (or a subclass); environmental/runtime failures
// throw RuntimeError subclasses.
class InvalidArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidSupportError : public InvalidArgumentError {
 public:
  using InvalidArgumentError::InvalidArgumentError;
};

class InvalidConfigError : public InvalidArgumentError {
 public:
  using InvalidArgumentError::InvalidArgumentError;
};

class CombinatorialGuardError : public std::runtime_error {
 public:
  explicit CombinatorialGuardError(const std::string& what, double count)
      : std::runtime_error(what), subset_count(count) {}
  double subset_count;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CorruptFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StandardizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A regression problem: design matrix X (n observations by p predictors)
/// and response y. When `standardized` is true every column of X has mean
/// zero and unit l2-norm.
struct Dataset {
  Matrix X;
  Vector y;
  std::string name;
  bool standardized = false;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

/// Sorted set of distinct predictor indices. Indices are 0-based in the
/// API; file formats and CLI output use 1-based indices.
class SupportSet {
 public:
  SupportSet() = default;

  explicit SupportSet(std::vector<int> indices) : idx_(std::move(indices)) {
    std::sort(idx_.begin(), idx_.end());
    if (std::adjacent_find(idx_.begin(), idx_.end()) != idx_.end()) {
      throw InvalidSupportError("support contains duplicate indices");
    }
    if (!idx_.empty() && idx_.front() < 0) {
      throw InvalidSupportError("support contains a negative index");
    }
  }

  static SupportSet from_one_based(const std::vector<int>& one_based) {
    std::vector<int> zero;
    zero.reserve(one_based.size());
    for (int i : one_based) zero.push_back(i - 1);
    return SupportSet(std::move(zero));
  }

  const std::vector<int>& indices() const { return idx_; }

  std::vector<int> one_based() const {
    std::vector<int> out;
    out.reserve(idx_.size());
    for (int i : idx_) out.push_back(i + 1);
    return out;
  }

  int size() const { return static_cast<int>(idx_.size()); }
  bool empty() const { return idx_.empty(); }

  bool contains(int j) const {
    return std::binary_search(idx_.begin(), idx_.end(), j);
  }

  bool is_subset_of(const SupportSet& other) const {
    return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(),
                         idx_.end());
  }

  bool intersects(const SupportSet& other) const {
    auto a = idx_.begin();
    auto b = other.idx_.begin();
    while (a != idx_.end() && b != other.idx_.end()) {
      if (*a == *b) return true;
      if (*a < *b)
        ++a;
      else
        ++b;
    }
    return false;
  }

  SupportSet set_minus(const SupportSet& other) const {
    std::vector<int> out;
    std::set_difference(idx_.begin(), idx_.end(), other.idx_.begin(),
                        other.idx_.end(), std::back_inserter(out));
    SupportSet s;
    s.idx_ = std::move(out);
    return s;
  }

  SupportSet set_union(const SupportSet& other) const {
    std::vector<int> out;
    std::set_union(idx_.begin(), idx_.end(), other.idx_.begin(),
                   other.idx_.end(), std::back_inserter(out));
    SupportSet s;
    s.idx_ = std::move(out);
    return s;
  }

  /// Throws if any index falls outside [0, p).
  void check_range(Eigen::Index p) const {
    for (int i : idx_) {
      if (i < 0 || i >= p) {
        throw InvalidSupportError("support index " + std::to_string(i + 1) +
                                  " out of range 1.." + std::to_string(p));
      }
    }
  }

  bool operator==(const SupportSet& other) const = default;

 private:
  std::vector<int> idx_;
};

/// Least-squares solution restricted to a support: coefficients (aligned
/// with support.indices()) and the residual sum of squares.
struct SubsetSolution {
  SupportSet support;
  Vector beta;
  double rss = 0.0;
};

std::string join_one_based(const SupportSet& s, char sep = ';');

}  // namespace bss
