#include "bss/linalg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace bss {

namespace {

constexpr double kRankThreshold = 1e-12;   // QR pivot cutoff, relative
constexpr double kDepTol = 1e-11;          // Gram border pivot cutoff

Matrix gather_columns(const Matrix& X, std::span<const int> cols) {
  Matrix out(X.rows(), static_cast<Eigen::Index>(cols.size()));
  for (Eigen::Index c = 0; c < out.cols(); ++c) out.col(c) = X.col(cols[c]);
  return out;
}

}  // namespace

std::string join_one_based(const SupportSet& s, char sep) {
  std::ostringstream os;
  bool first = true;
  for (int i : s.indices()) {
    if (!first) os << sep;
    os << (i + 1);
    first = false;
  }
  return os.str();
}

SubsetSolution subset_rss(const Dataset& data, const SupportSet& support) {
  support.check_range(data.p());
  SubsetSolution sol;
  sol.support = support;
  if (support.empty()) {
    sol.beta = Vector(0);
    sol.rss = data.y.squaredNorm();
    return sol;
  }
  Matrix Xs = gather_columns(data.X, support.indices());
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Xs.rows(), Xs.cols());
  cod.setThreshold(kRankThreshold);
  cod.compute(Xs);
  sol.beta = cod.solve(data.y);
  sol.rss = (data.y - Xs * sol.beta).squaredNorm();
  return sol;
}

double gain(const Dataset& data, const SupportSet& support,
            const SupportSet& drop) {
  if (!drop.is_subset_of(support)) {
    throw InvalidArgumentError("drop set is not a subset of the support");
  }
  if (drop.empty()) return 0.0;
  double q_full = subset_rss(data, support).rss;
  double q_reduced = subset_rss(data, support.set_minus(drop)).rss;
  return q_reduced - q_full;
}

double reduction(const Dataset& data, const SupportSet& support,
                 const SupportSet& add) {
  if (add.intersects(support)) {
    throw InvalidArgumentError("add set overlaps the support");
  }
  if (add.empty()) return 0.0;
  double q_cur = subset_rss(data, support).rss;
  double q_grown = subset_rss(data, support.set_union(add)).rss;
  return q_cur - q_grown;
}

double spectral_bound(const Dataset& data) {
  const Eigen::Index p = data.p();
  if (p == 0) return 0.0;
  Vector v = Vector::Constant(p, 1.0 / std::sqrt(static_cast<double>(p)));
  double lambda = 0.0;
  constexpr int kMaxIters = 200000;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    Vector Xv = data.X * v;
    double lambda_new = Xv.squaredNorm();  // Rayleigh quotient, v is unit
    Vector w = data.X.transpose() * Xv;
    double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
    if (iter > 0 &&
        std::abs(lambda_new - lambda) <= 1e-13 * std::max(lambda_new, 1e-300)) {
      return lambda_new;
    }
    lambda = lambda_new;
    if (iter == 50000) {
      // Stalled: mix in a fixed pseudo-random direction in case the start
      // vector has negligible overlap with the dominant eigenspace.
      std::uint64_t s = 0x9e3779b97f4a7c15ull;
      for (Eigen::Index i = 0; i < p; ++i) {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        v[i] += 1e-3 * (static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5);
      }
      v.normalize();
    }
  }
  return lambda;
}

Vector full_least_squares(const Dataset& data) {
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(data.X.rows(),
                                                     data.X.cols());
  cod.setThreshold(kRankThreshold);
  cod.compute(data.X);
  return cod.solve(data.y);
}

void standardize_columns(Matrix& X) {
  const Eigen::Index n = X.rows();
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    auto col = X.col(j);
    if (n > 0 && col.maxCoeff() == col.minCoeff()) {
      throw StandardizationError("column " + std::to_string(j + 1) +
                                 " is constant and cannot be standardized");
    }
    col.array() -= col.mean();
    double nrm = col.norm();
    if (nrm == 0.0) {
      throw StandardizationError("column " + std::to_string(j + 1) +
                                 " is constant and cannot be standardized");
    }
    col /= nrm;
  }
}

void standardize_response(Vector& y) {
  y.array() -= y.mean();
  double nrm = y.norm();
  if (nrm == 0.0) {
    throw StandardizationError("response is constant and cannot be standardized");
  }
  y /= nrm;
}

// ---------------------------------------------------------------------------
// SubsetEvaluator

SubsetEvaluator::SubsetEvaluator(const Dataset& data, bool naive)
    : data_(&data), naive_(naive) {
  yty_ = data.y.squaredNorm();
  xty_ = data.X.transpose() * data.y;
  col_sq_ = data.X.colwise().squaredNorm();
  gram_cols_.resize(static_cast<std::size_t>(data.p()));
  cur_.rss = yty_;
}

const Vector& SubsetEvaluator::gram_col(int i) {
  Vector& col = gram_cols_[static_cast<std::size_t>(i)];
  if (col.size() == 0) {
    col = data_->X.transpose() * data_->X.col(i);
  }
  return col;
}

double SubsetEvaluator::pair_dot(int a, int b) {
  const Vector& ca = gram_cols_[static_cast<std::size_t>(a)];
  if (ca.size() != 0) return ca[b];
  const Vector& cb = gram_cols_[static_cast<std::size_t>(b)];
  if (cb.size() != 0) return cb[a];
  return data_->X.col(a).dot(data_->X.col(b));
}

double SubsetEvaluator::dense_rss(std::span<const int> support) const {
  if (support.empty()) return yty_;
  Matrix Xs = gather_columns(data_->X, support);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Xs.rows(), Xs.cols());
  cod.setThreshold(kRankThreshold);
  cod.compute(Xs);
  Vector beta = cod.solve(data_->y);
  return (data_->y - Xs * beta).squaredNorm();
}

// Extends f with column j. Returns false (and leaves f unchanged) when the
// column is numerically dependent on the active columns.
bool SubsetEvaluator::try_border(Factor& f, int j, const double* extra_dot,
                                 int extra_idx) {
  const int a = f.dim();
  // u = dots of x_j against the active columns, then forward-solve L w = u
  // in place.
  double wsq = 0.0;
  double wz = 0.0;
  wbuf_.resize(static_cast<std::size_t>(a));
  for (int r = 0; r < a; ++r) {
    int m = f.active[r];
    double u = (m == extra_idx && extra_dot) ? *extra_dot
                                             : gram_cols_[static_cast<std::size_t>(m)][j];
    double acc = u;
    const double* row = f.L.data() + r * (r + 1) / 2;
    for (int c = 0; c < r; ++c) acc -= row[c] * wbuf_[static_cast<std::size_t>(c)];
    double w = acc / row[r];
    wbuf_[static_cast<std::size_t>(r)] = w;
    wsq += w * w;
    wz += w * f.z[static_cast<std::size_t>(r)];
  }
  double d = col_sq_[j] - wsq;
  if (d <= kDepTol * col_sq_[j]) return false;
  double ell = std::sqrt(d);
  f.L.insert(f.L.end(), wbuf_.begin(), wbuf_.end());
  f.L.push_back(ell);
  double znew = (xty_[j] - wz) / ell;
  f.z.push_back(znew);
  f.active.push_back(j);
  f.rss -= znew * znew;
  return true;
}

void SubsetEvaluator::build_factor(Factor& f, std::span<const int> support) {
  f.L.clear();
  f.z.clear();
  f.active.clear();
  f.rss = yty_;
  for (int j : support) {
    gram_col(j);
    try_border(f, j, nullptr, -1);
  }
}

double SubsetEvaluator::rss_of(std::span<const int> support) {
  if (naive_) return dense_rss(support);
  build_factor(scratch_, support);
  return std::max(scratch_.rss, 0.0);
}

void SubsetEvaluator::clear() {
  members_.clear();
  cur_.L.clear();
  cur_.z.clear();
  cur_.active.clear();
  cur_.rss = yty_;
}

void SubsetEvaluator::set_support(std::span<const int> support) {
  clear();
  members_.assign(support.begin(), support.end());
  if (naive_) {
    cur_.rss = dense_rss(members_);
    return;
  }
  build_factor(cur_, support);
}

double SubsetEvaluator::current_rss() const { return std::max(cur_.rss, 0.0); }

void SubsetEvaluator::push(int j) {
  members_.push_back(j);
  if (naive_) {
    cur_.rss = dense_rss(members_);
    return;
  }
  gram_col(j);
  try_border(cur_, j, nullptr, -1);
}

void SubsetEvaluator::pop() {
  int j = members_.back();
  members_.pop_back();
  if (naive_) {
    cur_.rss = dense_rss(members_);
    return;
  }
  if (!cur_.active.empty() && cur_.active.back() == j) {
    int a = cur_.dim();
    double zlast = cur_.z.back();
    cur_.rss += zlast * zlast;
    cur_.z.pop_back();
    cur_.active.pop_back();
    cur_.L.resize(static_cast<std::size_t>(a * (a - 1) / 2));
  }
}

double SubsetEvaluator::add_rss(int j) {
  if (naive_) {
    std::vector<int> s = members_;
    s.push_back(j);
    return dense_rss(s);
  }
  const int a = cur_.dim();
  double wsq = 0.0;
  double wz = 0.0;
  wbuf_.resize(static_cast<std::size_t>(a));
  for (int r = 0; r < a; ++r) {
    double u = gram_cols_[static_cast<std::size_t>(cur_.active[r])][j];
    double acc = u;
    const double* row = cur_.L.data() + r * (r + 1) / 2;
    for (int c = 0; c < r; ++c) acc -= row[c] * wbuf_[static_cast<std::size_t>(c)];
    double w = acc / row[r];
    wbuf_[static_cast<std::size_t>(r)] = w;
    wsq += w * w;
    wz += w * cur_.z[static_cast<std::size_t>(r)];
  }
  double d = col_sq_[j] - wsq;
  if (d <= kDepTol * col_sq_[j]) return current_rss();
  double znew = xty_[j] - wz;
  return std::max(cur_.rss - znew * znew / d, 0.0);
}

double SubsetEvaluator::add_pair_rss(int j1, int j2) {
  if (naive_) {
    std::vector<int> s = members_;
    s.push_back(j1);
    s.push_back(j2);
    return dense_rss(s);
  }
  push(j1);
  double r = add_rss(j2);
  pop();
  return r;
}

double SubsetEvaluator::drop_rss(int j) {
  int arr[1] = {j};
  return drop_set_rss(arr);
}

double SubsetEvaluator::drop_set_rss(std::span<const int> dropped) {
  dbuf_.clear();
  for (int m : members_) {
    bool keep = true;
    for (int d : dropped) {
      if (m == d) {
        keep = false;
        break;
      }
    }
    if (keep) dbuf_.push_back(m);
  }
  if (naive_) return dense_rss(dbuf_);
  build_factor(scratch_, dbuf_);
  return std::max(scratch_.rss, 0.0);
}

}  // namespace bss
