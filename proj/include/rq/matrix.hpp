#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "rq/error.hpp"
#include "rq/scalar.hpp"

namespace rq::num {

template <class C>
using Vec = std::vector<C>;

// Dense row-major matrix of complex scalars. Everything in this artifact is
// tiny (n <= ~30), so the solvers below favor determinism over asymptotics.
template <class C>
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, C(0)) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = C(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  C& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const C& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Vec<C> row(std::size_t i) const {
    return Vec<C>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
  }
  Vec<C> col(std::size_t j) const {
    Vec<C> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  void set_row(std::size_t i, const Vec<C>& v) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
  }
  void set_col(std::size_t j, const Vec<C>& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  bool finite() const {
    for (const auto& z : a_)
      if (!rq::finite(z)) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<C> a_;
};

// --- vector ops ------------------------------------------------------------

template <class C>
inline C hdot(const Vec<C>& a, const Vec<C>& b) {  // conjugate-linear in a
  C s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += cconj(a[i]) * b[i];
  return s;
}

template <class C>
inline C bdot(const Vec<C>& a, const Vec<C>& b) {  // plain bilinear pairing
  C s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class C>
inline real_t<C> norm2(const Vec<C>& a) {
  real_t<C> s(0);
  for (const auto& z : a) s += abs2(z);
  using std::sqrt;
  return sqrt(s);
}

template <class C>
inline void scale(Vec<C>& a, const C& c) {
  for (auto& z : a) z *= c;
}

template <class C>
inline void axpy(Vec<C>& y, const C& c, const Vec<C>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
}

template <class C>
inline Vec<C> vsub(const Vec<C>& a, const Vec<C>& b) {
  Vec<C> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

template <class C>
inline Vec<C> vadd(const Vec<C>& a, const Vec<C>& b) {
  Vec<C> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

template <class C>
inline Vec<C> conj_vec(const Vec<C>& a) {
  Vec<C> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = cconj(a[i]);
  return r;
}

// --- matrix ops ------------------------------------------------------------

template <class C>
inline Mat<C> matmul(const Mat<C>& A, const Mat<C>& B) {
  Mat<C> R(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t k = 0; k < A.cols(); ++k) {
      const C aik = A(i, k);
      if (aik == C(0)) continue;
      for (std::size_t j = 0; j < B.cols(); ++j) R(i, j) += aik * B(k, j);
    }
  return R;
}

template <class C>
inline Vec<C> matvec(const Mat<C>& A, const Vec<C>& x) {
  Vec<C> y(A.rows(), C(0));
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) y[i] += A(i, j) * x[j];
  return y;
}

template <class C>
inline Mat<C> transpose(const Mat<C>& A) {
  Mat<C> R(A.cols(), A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) R(j, i) = A(i, j);
  return R;
}

template <class C>
inline Mat<C> conj_transpose(const Mat<C>& A) {
  Mat<C> R(A.cols(), A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) R(j, i) = cconj(A(i, j));
  return R;
}

template <class C>
inline real_t<C> frobenius(const Mat<C>& A) {
  real_t<C> s(0);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) s += abs2(A(i, j));
  using std::sqrt;
  return sqrt(s);
}

// LU with partial pivoting; returns det, optionally solves. Pivot rule:
// largest |entry|, ties to the smallest row index.
template <class C>
inline C determinant(Mat<C> A) {
  if (A.rows() != A.cols()) fail(errc::bad_argument, "determinant needs a square matrix");
  const std::size_t n = A.rows();
  C det(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    auto best = abs2(A(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (abs2(A(i, k)) > best) {
        best = abs2(A(i, k));
        piv = i;
      }
    if (best == real_t<C>(0)) return C(0);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      det = -det;
    }
    det *= A(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      C f = A(i, k) / A(k, k);
      if (f == C(0)) continue;
      for (std::size_t j = k; j < n; ++j) A(i, j) -= f * A(k, j);
    }
  }
  return det;
}

template <class C>
inline Vec<C> lu_solve(Mat<C> A, Vec<C> b) {
  const std::size_t n = A.rows();
  if (A.cols() != n || b.size() != n) fail(errc::bad_argument, "lu_solve shape mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    auto best = abs2(A(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (abs2(A(i, k)) > best) {
        best = abs2(A(i, k));
        piv = i;
      }
    if (best == real_t<C>(0)) fail(errc::singular_form, "lu_solve: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      C f = A(i, k) / A(k, k);
      if (f == C(0)) continue;
      for (std::size_t j = k; j < n; ++j) A(i, j) -= f * A(k, j);
      b[i] -= f * b[k];
    }
  }
  Vec<C> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    C s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= A(ii, j) * x[j];
    x[ii] = s / A(ii, ii);
  }
  return x;
}

template <class C>
inline Mat<C> inverse(const Mat<C>& A) {
  const std::size_t n = A.rows();
  Mat<C> inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vec<C> e(n, C(0));
    e[j] = C(1);
    inv.set_col(j, lu_solve(A, e));
  }
  return inv;
}

// --- Hermitian Jacobi eigensolver -------------------------------------------

template <class C>
struct EigenSym {
  Vec<real_t<C>> values;  // descending
  Mat<C> vectors;         // columns, unitary
};

// Cyclic complex Jacobi for Hermitian matrices. Deterministic sweep order and
// a fixed rotation convention make the output reproducible bit-for-bit.
template <class C>
inline EigenSym<C> eigen_hermitian(Mat<C> H) {
  using R = real_t<C>;
  using std::abs;
  using std::sqrt;
  const std::size_t n = H.rows();
  if (H.cols() != n) fail(errc::bad_argument, "eigen_hermitian needs a square matrix");
  Mat<C> V = Mat<C>::identity(n);
  R scale_ref(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale_ref = std::max(scale_ref, cabs(H(i, j)));
  if (scale_ref == R(0)) scale_ref = R(1);
  const R stop = scale_ref * field<C>::eps() * R(n);

  for (int sweep = 0; sweep < 64; ++sweep) {
    R off(0);
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, cabs(H(p, q)));
    if (off <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const C beta = H(p, q);
        const R b = cabs(beta);
        if (b <= stop * R(0.01)) continue;
        const C phase = beta / C(b);
        const R alpha = re(H(p, p));
        const R gamma = re(H(q, q));
        const R tau = (gamma - alpha) / (R(2) * b);
        R t;
        if (tau >= R(0))
          t = R(-1) / (tau + sqrt(R(1) + tau * tau));
        else
          t = R(1) / (-tau + sqrt(R(1) + tau * tau));
        const R c = R(1) / sqrt(R(1) + t * t);
        const R s = t * c;
        // columns p,q of H and V: right-multiply by the rotation
        for (std::size_t i = 0; i < n; ++i) {
          const C hp = H(i, p), hq = H(i, q);
          H(i, p) = C(c) * hp + C(s) * cconj(phase) * hq;
          H(i, q) = -C(s) * phase * hp + C(c) * hq;
          const C vp = V(i, p), vq = V(i, q);
          V(i, p) = C(c) * vp + C(s) * cconj(phase) * vq;
          V(i, q) = -C(s) * phase * vp + C(c) * vq;
        }
        // rows p,q: left-multiply by the conjugate transpose
        for (std::size_t j = 0; j < n; ++j) {
          const C hp = H(p, j), hq = H(q, j);
          H(p, j) = C(c) * hp + C(s) * phase * hq;
          H(q, j) = -C(s) * cconj(phase) * hp + C(c) * hq;
        }
      }
    }
  }

  EigenSym<C> out;
  out.values.resize(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Vec<R> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = re(H(i, i));
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a2, std::size_t b2) { return diag[a2] > diag[b2]; });
  out.vectors = Mat<C>(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = diag[order[k]];
    Vec<C> v = V.col(order[k]);
    // canonical phase: largest-|entry| coordinate made real positive
    std::size_t imax = 0;
    R best(0);
    for (std::size_t i = 0; i < n; ++i)
      if (abs2(v[i]) > best) {
        best = abs2(v[i]);
        imax = i;
      }
    if (best > R(0)) {
      C ph = v[imax] / C(cabs(v[imax]));
      scale(v, cconj(ph));
    }
    out.vectors.set_col(k, v);
  }
  return out;
}

// --- singular values / null space -------------------------------------------

template <class C>
struct SvdVia {
  Vec<real_t<C>> singular;  // descending
  Mat<C> right;             // right singular vectors as columns
};

// Singular values via the Hermitian eigenproblem of A^H A. The squaring costs
// half the working digits, which the 128-bit default leaves plenty of.
template <class C>
inline SvdVia<C> singular_values(const Mat<C>& A) {
  using std::sqrt;
  auto H = matmul(conj_transpose(A), A);
  auto eig = eigen_hermitian(H);
  SvdVia<C> out;
  out.right = eig.vectors;
  out.singular.resize(eig.values.size());
  for (std::size_t i = 0; i < eig.values.size(); ++i) {
    auto v = eig.values[i];
    out.singular[i] = v > real_t<C>(0) ? real_t<C>(sqrt(v)) : real_t<C>(0);
  }
  return out;
}

// The eigenproblem of A^H A squares the singular values, so they cannot be
// resolved below ~sqrt(eps) relative. Rank decisions clamp to that floor;
// at the 128-bit working precision the floor sits far under every tolerance
// used in this artifact.
template <class C>
inline real_t<C> kernel_floor() {
  using std::sqrt;
  return sqrt(field<C>::eps()) * real_t<C>(64);
}

// Orthonormal basis of the numerical kernel: singular values below
// tol * sigma_max count as zero.
template <class C>
inline std::vector<Vec<C>> null_space(const Mat<C>& A, const real_t<C>& tol) {
  if (!(tol > real_t<C>(0))) fail(errc::bad_argument, "null_space: tol must be positive");
  if (!A.finite()) fail(errc::non_finite, "null_space: non-finite entries");
  const real_t<C> tol_eff = tol > kernel_floor<C>() ? tol : kernel_floor<C>();
  auto svd = singular_values(A);
  std::vector<Vec<C>> basis;
  if (svd.singular.empty()) return basis;
  const auto smax = svd.singular.front();
  for (std::size_t i = 0; i < svd.singular.size(); ++i)
    if (smax == real_t<C>(0) || svd.singular[i] <= tol_eff * smax)
      basis.push_back(svd.right.col(i));
  return basis;
}

template <class C>
inline std::size_t numerical_rank(const Mat<C>& A, const real_t<C>& tol) {
  const real_t<C> tol_eff = tol > kernel_floor<C>() ? tol : kernel_floor<C>();
  auto svd = singular_values(A);
  if (svd.singular.empty()) return 0;
  const auto smax = svd.singular.front();
  if (smax == real_t<C>(0)) return 0;
  std::size_t r = 0;
  for (const auto& s : svd.singular)
    if (s > tol_eff * smax) ++r;
  return r;
}

// Largest principal angle between the column spans of two orthonormal sets.
template <class C>
inline double max_principal_angle(const std::vector<Vec<C>>& U, const std::vector<Vec<C>>& W) {
  if (U.size() != W.size()) return 3.14159265358979323846;
  const std::size_t k = U.size();
  Mat<C> G(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) G(i, j) = hdot(U[i], W[j]);
  auto sv = singular_values(G);
  double smin = 1.0;
  for (const auto& s : sv.singular) smin = std::min(smin, field<C>::to_double(s));
  smin = std::clamp(smin, -1.0, 1.0);
  return std::acos(smin);
}

// --- congruence split --------------------------------------------------------

enum class SplitPivot { largest_self_pairing, keep_order };

// Gram-Schmidt with respect to the symmetric bilinear form of S. Returns T
// with T^t S T = I. Pivoting picks the remaining vector with the largest
// |self-pairing| (ties to the smallest index); a seeded start basis with
// keep_order preserves continuity along parameter paths.
template <class C>
inline Mat<C> congruence_split(const Mat<C>& S, const real_t<C>& tol,
                               const Mat<C>* seed_basis = nullptr,
                               SplitPivot pivot_mode = SplitPivot::largest_self_pairing) {
  using R = real_t<C>;
  const std::size_t n = S.rows();
  if (S.cols() != n) fail(errc::bad_argument, "congruence_split needs a square matrix");
  if (!S.finite()) fail(errc::non_finite, "congruence_split: non-finite entries");
  R scale_ref = frobenius(S);
  if (scale_ref == R(0)) fail(errc::singular_form, "congruence_split: zero form");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (cabs(S(i, j) - S(j, i)) > tol * scale_ref)
        fail(errc::bad_argument, "congruence_split: matrix not symmetric");

  std::vector<Vec<C>> work(n);
  for (std::size_t j = 0; j < n; ++j)
    work[j] = seed_basis ? seed_basis->col(j) : Mat<C>::identity(n).col(j);

  auto pair_with = [&](const Vec<C>& u, const Vec<C>& v) {
    Vec<C> Sv = matvec(S, v);
    return bdot(u, Sv);
  };

  Mat<C> T(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    if (pivot_mode == SplitPivot::largest_self_pairing) {
      R best(-1);
      for (std::size_t j = k; j < n; ++j) {
        R mag = cabs(pair_with(work[j], work[j]));
        if (mag > best) {
          best = mag;
          piv = j;
        }
      }
      // all self-pairings can vanish on a nonsingular form (zero diagonal);
      // mix in the partner with the largest cross-pairing and re-pivot
      if (best < tol * scale_ref) {
        std::size_t bi = k, bj = k + 1;
        R bmag(-1);
        for (std::size_t i2 = k; i2 < n; ++i2)
          for (std::size_t j2 = i2 + 1; j2 < n; ++j2) {
            R mag = cabs(pair_with(work[i2], work[j2]));
            if (mag > bmag) {
              bmag = mag;
              bi = i2;
              bj = j2;
            }
          }
        if (bmag < tol * scale_ref)
          fail(errc::singular_form, "congruence_split: form vanishes on the remaining basis");
        axpy(work[bi], C(1), work[bj]);
        piv = bi;
      }
    }
    if (piv != k) std::swap(work[piv], work[k]);
    C b = pair_with(work[k], work[k]);
    if (cabs(b) < tol * scale_ref * norm2(work[k]) * norm2(work[k]))
      fail(errc::singular_form, "congruence_split: pivot self-pairing below tolerance");
    C factor = canonical_sqrt(C(1) / b);
    Vec<C> col = work[k];
    scale(col, factor);
    if (seed_basis) {
      // branch continuity: align with the seed column rather than the cut
      C align = bdot(conj_vec(seed_basis->col(k)), col);
      if (re(align) < R(0)) scale(col, C(-1));
    }
    T.set_col(k, col);
    for (std::size_t j = k + 1; j < n; ++j) {
      C proj = pair_with(work[j], col);
      axpy(work[j], -proj, col);
    }
  }
  return T;
}

template <class C>
inline real_t<C> congruence_residual(const Mat<C>& S, const Mat<C>& T) {
  auto M = matmul(transpose(T), matmul(S, T));
  for (std::size_t i = 0; i < M.rows(); ++i) M(i, i) -= C(1);
  return frobenius(M);
}

// --- damped least squares -----------------------------------------------------

// Solve (J^H J + mu I) x = J^H b by Cholesky; used by the Gauss-Newton core.
// Returns nullopt when the damped normal matrix is still numerically singular.
template <class C>
inline std::optional<Vec<C>> normal_solve(const Mat<C>& J, const Vec<C>& b, const real_t<C>& mu) {
  using R = real_t<C>;
  using std::sqrt;
  const std::size_t n = J.cols();
  Mat<C> H = matmul(conj_transpose(J), J);
  R diag_scale(0);
  for (std::size_t i = 0; i < n; ++i) diag_scale = std::max(diag_scale, re(H(i, i)));
  if (diag_scale == R(0)) diag_scale = R(1);
  for (std::size_t i = 0; i < n; ++i) H(i, i) += C(mu * diag_scale);
  Vec<C> rhs = matvec(conj_transpose(J), b);

  // complex Cholesky H = L L^H
  Mat<C> L(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      C s = H(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * cconj(L(j, k));
      if (i == j) {
        R d = re(s);
        if (!(d > diag_scale * field<C>::eps() * R(0.25))) return std::nullopt;
        L(i, j) = C(sqrt(d));
      } else {
        L(i, j) = s / L(j, j);
      }
    }
  }
  Vec<C> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    C s = rhs[i];
    for (std::size_t k = 0; k < i; ++k) s -= L(i, k) * y[k];
    y[i] = s / L(i, i);
  }
  Vec<C> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    C s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= cconj(L(k, ii)) * x[k];
    x[ii] = s / L(ii, ii);
  }
  return x;
}

// LU with partial pivoting, factored once for repeated solves.
template <class C>
class LuFactors {
 public:
  explicit LuFactors(Mat<C> A) : lu_(std::move(A)), perm_(lu_.rows()) {
    const std::size_t n = lu_.rows();
    if (lu_.cols() != n) fail(errc::bad_argument, "LuFactors needs a square matrix");
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      auto best = abs2(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i)
        if (abs2(lu_(i, k)) > best) {
          best = abs2(lu_(i, k));
          piv = i;
        }
      if (best == real_t<C>(0)) fail(errc::singular_form, "LuFactors: singular matrix");
      if (piv != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
        std::swap(perm_[k], perm_[piv]);
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        lu_(i, k) /= lu_(k, k);
        const C f = lu_(i, k);
        if (f == C(0)) continue;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
  }

  Vec<C> solve(const Vec<C>& b) const {
    const std::size_t n = lu_.rows();
    Vec<C> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      C s = b[perm_[i]];
      for (std::size_t k = 0; k < i; ++k) s -= lu_(i, k) * y[k];
      y[i] = s;
    }
    Vec<C> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
      C s = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) s -= lu_(ii, k) * x[k];
      x[ii] = s / lu_(ii, ii);
    }
    return x;
  }

 private:
  Mat<C> lu_;
  std::vector<std::size_t> perm_;
};

// Min-norm least squares via the Hermitian eigendecomposition of J^H J;
// eigenvalues below rcond * largest are treated as zero.
template <class C>
inline Vec<C> pinv_solve(const Mat<C>& J, const Vec<C>& b, const real_t<C>& rcond) {
  using R = real_t<C>;
  Mat<C> H = matmul(conj_transpose(J), J);
  Vec<C> rhs = matvec(conj_transpose(J), b);
  auto eig = eigen_hermitian(H);
  const std::size_t n = H.rows();
  R lmax = eig.values.empty() ? R(0) : eig.values.front();
  Vec<C> x(n, C(0));
  for (std::size_t k = 0; k < n; ++k) {
    if (!(eig.values[k] > rcond * lmax)) continue;
    Vec<C> vk = eig.vectors.col(k);
    C coef = hdot(vk, rhs) / C(eig.values[k]);
    axpy(x, coef, vk);
  }
  return x;
}

}  // namespace rq::num
