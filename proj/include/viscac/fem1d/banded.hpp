#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace viscac::fem1d {

using cplx = std::complex<double>;

// Raised when a factorization pivot is zero or tiny relative to the matrix
// norm. Near an eigenfrequency of an undamped model this is the expected
// outcome, so callers usually catch it and record the failure.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(double pivot, double norm)
      : std::runtime_error(message(pivot, norm)), pivot_(pivot), norm_(norm) {}
  double pivot() const { return pivot_; }
  double norm() const { return norm_; }

 private:
  static std::string message(double pivot, double norm) {
    std::ostringstream os;
    os << "near-singular system: pivot " << pivot << " vs norm " << norm;
    return os.str();
  }
  double pivot_, norm_;
};

// Band matrix with kl sub- and ku super-diagonals. Rows store kl extra
// super-diagonals to hold fill-in from partial pivoting.
class BandedComplexMatrix {
 public:
  BandedComplexMatrix() = default;
  BandedComplexMatrix(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), w_(2 * kl + ku + 1), data_(std::size_t(n) * w_) {}

  int size() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }

  bool in_band(int i, int j) const { return j - i >= -kl_ && j - i <= ku_; }

  cplx operator()(int i, int j) const { return in_band(i, j) ? raw(i, j) : cplx{}; }
  void add(int i, int j, cplx v) {
    if (!in_band(i, j)) throw std::out_of_range("entry outside band");
    raw(i, j) += v;
  }
  void set(int i, int j, cplx v) {
    if (!in_band(i, j)) throw std::out_of_range("entry outside band");
    raw(i, j) = v;
  }

  std::vector<cplx> multiply(const std::vector<cplx>& x) const {
    std::vector<cplx> y(n_);
    for (int i = 0; i < n_; ++i) {
      cplx s = 0;
      for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j) s += raw(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  double norm_inf() const {
    double m = 0;
    for (int i = 0; i < n_; ++i) {
      double s = 0;
      for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j) s += std::abs(raw(i, j));
      m = std::max(m, s);
    }
    return m;
  }

  // Essential condition x_c = value: clears row and column c, moving the
  // column into rhs.
  void constrain(int c, cplx value, std::vector<cplx>& rhs) {
    for (int i = std::max(0, c - ku_); i <= std::min(n_ - 1, c + kl_); ++i) {
      if (i == c) continue;
      rhs[i] -= raw(i, c) * value;
      raw(i, c) = 0;
    }
    for (int j = std::max(0, c - kl_); j <= std::min(n_ - 1, c + ku_); ++j) raw(c, j) = 0;
    raw(c, c) = 1;
    rhs[c] = value;
  }

  cplx& raw(int i, int j) { return data_[std::size_t(i) * w_ + (j - i + kl_)]; }
  const cplx& raw(int i, int j) const { return data_[std::size_t(i) * w_ + (j - i + kl_)]; }

 private:
  int n_ = 0, kl_ = 0, ku_ = 0, w_ = 1;
  std::vector<cplx> data_;
};

class BandedLU {
 public:
  static constexpr double default_pivot_tol = 1e-10;

  explicit BandedLU(BandedComplexMatrix A, double pivot_tol = default_pivot_tol)
      : lu_(std::move(A)) {
    const int n = lu_.size(), kl = lu_.kl(), ku = lu_.ku();
    norm_ = lu_.norm_inf();
    piv_.resize(n);
    min_pivot_ = n > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    for (int k = 0; k < n; ++k) {
      const int last = std::min(n - 1, k + kl);
      const int jmax = std::min(n - 1, k + kl + ku);
      int p = k;
      double best = std::abs(lu_.raw(k, k));
      for (int i = k + 1; i <= last; ++i) {
        const double v = std::abs(lu_.raw(i, k));
        if (v > best) best = v, p = i;
      }
      piv_[k] = p;
      if (p != k)
        for (int j = k; j <= jmax; ++j) std::swap(lu_.raw(k, j), lu_.raw(p, j));
      min_pivot_ = std::min(min_pivot_, best);
      if (best == 0.0) throw SingularSystemError(0.0, norm_);
      const cplx inv = 1.0 / lu_.raw(k, k);
      for (int i = k + 1; i <= last; ++i) {
        cplx& lik = lu_.raw(i, k);
        if (lik == cplx{}) continue;
        lik *= inv;
        for (int j = k + 1; j <= jmax; ++j) lu_.raw(i, j) -= lik * lu_.raw(k, j);
      }
    }
    if (min_pivot_ < pivot_tol * norm_) throw SingularSystemError(min_pivot_, norm_);
  }

  double min_pivot() const { return min_pivot_; }
  double norm() const { return norm_; }

  std::vector<cplx> solve(std::vector<cplx> b) const {
    const int n = lu_.size(), kl = lu_.kl(), ku = lu_.ku();
    if (int(b.size()) != n) throw std::invalid_argument("rhs size mismatch");
    for (int k = 0; k < n; ++k) {
      if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
      for (int i = k + 1; i <= std::min(n - 1, k + kl); ++i) b[i] -= lu_.raw(i, k) * b[k];
    }
    for (int k = n - 1; k >= 0; --k) {
      cplx s = b[k];
      for (int j = k + 1; j <= std::min(n - 1, k + kl + ku); ++j) s -= lu_.raw(k, j) * b[j];
      b[k] = s / lu_.raw(k, k);
    }
    return b;
  }

 private:
  BandedComplexMatrix lu_;
  std::vector<int> piv_;
  double norm_ = 0, min_pivot_ = 0;
};

inline std::vector<cplx> solve_banded(const BandedComplexMatrix& A, const std::vector<cplx>& rhs,
                                      double pivot_tol = BandedLU::default_pivot_tol) {
  return BandedLU(A, pivot_tol).solve(rhs);
}

}  // namespace viscac::fem1d
