#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "rq/error.hpp"
#include "rq/matrix.hpp"
#include "rq/scalar.hpp"

namespace rq::geom {

using num::Mat;
using num::Vec;

inline constexpr double kPairingTol = 1e-10;
inline constexpr double kRankTol = 1e-10;

// Point of P^n. Canonical representative: divide by the largest-magnitude
// coordinate (ties to the smallest index), which makes that coordinate 1.
template <class C>
class ProjPoint {
 public:
  ProjPoint() = default;
  explicit ProjPoint(Vec<C> coords) : coords_(std::move(coords)) {
    for (const auto& c : coords_) require_finite(c, "ProjPoint coordinate");
    normalize();
  }

  std::size_t ambient_dim() const { return coords_.size() - 1; }
  const Vec<C>& coords() const { return coords_; }
  const C& operator[](std::size_t i) const { return coords_[i]; }

  ProjPoint conj() const { return ProjPoint(num::conj_vec(coords_)); }

  void normalize() {
    std::size_t imax = 0;
    real_t<C> best(0);
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      auto m = abs2(coords_[i]);
      if (m > best) {
        best = m;
        imax = i;
      }
    }
    if (best == real_t<C>(0)) fail(errc::bad_argument, "ProjPoint: zero coordinate vector");
    const C pivot = coords_[imax];
    for (auto& c : coords_) c /= pivot;
    coords_[imax] = C(1);
  }

  double max_imag_abs() const {
    double m = 0;
    for (const auto& c : coords_) m = std::max(m, std::abs(field<C>::to_double(im(c))));
    return m;
  }

 private:
  Vec<C> coords_;
};

// chordal (sine) distance on P^n, insensitive to representatives; computed as
// a projection residual so small distances are resolved down to epsilon
template <class C>
inline double proj_distance(const Vec<C>& a, const Vec<C>& b) {
  auto na = num::norm2(a), nb = num::norm2(b);
  if (na == real_t<C>(0) || nb == real_t<C>(0)) return 1.0;
  Vec<C> u = a, v = b;
  num::scale(u, C(real_t<C>(1) / na));
  num::scale(v, C(real_t<C>(1) / nb));
  C h = num::hdot(v, u);
  num::axpy(u, -h, v);
  return std::min(1.0, field<C>::to_double(num::norm2(u)));
}

template <class C>
inline double proj_distance(const ProjPoint<C>& a, const ProjPoint<C>& b) {
  return proj_distance(a.coords(), b.coords());
}

// Involution on indices: pairing[i] == i declares a real point, a 2-cycle
// (i, j) declares a conjugate pair.
using Pairing = std::vector<std::size_t>;

template <class C>
class PointConfig {
 public:
  PointConfig() = default;
  PointConfig(std::vector<ProjPoint<C>> points, Pairing pairing)
      : points_(std::move(points)), pairing_(std::move(pairing)) {
    validate();
  }
  // configuration without real structure (synthetic complex instances)
  explicit PointConfig(std::vector<ProjPoint<C>> points) : points_(std::move(points)) {}

  const std::vector<ProjPoint<C>>& points() const { return points_; }
  const ProjPoint<C>& point(std::size_t i) const { return points_[i]; }
  const Pairing& pairing() const { return pairing_; }
  std::size_t size() const { return points_.size(); }
  std::size_t ambient_dim() const { return points_.empty() ? 0 : points_[0].ambient_dim(); }

  bool is_real_set() const { return !pairing_.empty(); }
  bool is_real_index(std::size_t i) const { return is_real_set() && pairing_[i] == i; }
  std::size_t real_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < pairing_.size(); ++i)
      if (pairing_[i] == i) ++n;
    return n;
  }

  PointConfig conj() const {
    std::vector<ProjPoint<C>> pts;
    pts.reserve(points_.size());
    for (const auto& p : points_) pts.push_back(p.conj());
    if (!is_real_set()) return PointConfig(std::move(pts));
    return PointConfig(std::move(pts), pairing_);
  }

 private:
  void validate() const {
    if (points_.size() != pairing_.size())
      fail(errc::inconsistent_input, "PointConfig: pairing size mismatch");
    for (std::size_t i = 0; i < pairing_.size(); ++i) {
      std::size_t j = pairing_[i];
      if (j >= pairing_.size() || pairing_[j] != i)
        fail(errc::inconsistent_input, "PointConfig: pairing is not an involution");
      if (j == i) {
        if (points_[i].max_imag_abs() > kPairingTol)
          fail(errc::inconsistent_input, "PointConfig: declared-real point has imaginary parts");
      } else {
        const auto& a = points_[i].coords();
        const auto& b = points_[j].coords();
        for (std::size_t k = 0; k < a.size(); ++k)
          if (dabs(C(b[k] - cconj(a[k]))) > kPairingTol)
            fail(errc::inconsistent_input, "PointConfig: declared pair is not conjugate");
      }
    }
  }

  std::vector<ProjPoint<C>> points_;
  Pairing pairing_;
};

// Greedy conjugation matching for convenience ingestion; declared pairings in
// input files remain the source of truth.
template <class C>
inline Pairing detect_real_structure(const std::vector<ProjPoint<C>>& points, double tol) {
  const std::size_t n = points.size();
  Pairing pairing(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (pairing[i] != n) continue;
    ProjPoint<C> pc = points[i].conj();
    if (proj_distance(points[i], pc) < tol) {
      pairing[i] = i;
      continue;
    }
    std::size_t match = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || pairing[j] != n) continue;
      if (proj_distance(points[j], pc) < tol) {
        if (match != n) fail(errc::ambiguous_pairing, "two candidate conjugate partners within tol");
        match = j;
      }
    }
    if (match == n) fail(errc::not_real_set, "point has no conjugate partner");
    pairing[i] = match;
    pairing[match] = i;
  }
  return pairing;
}

// --- quadratic forms ---------------------------------------------------------

// Monomial order shared with veronese_row:
//   x0^2, x0x1, x0x2, x0x3, x1^2, x1x2, x1x3, x2^2, x2x3, x3^2.
template <class C>
class QuadricForm {
 public:
  QuadricForm() = default;
  explicit QuadricForm(Mat<C> gram) : gram_(std::move(gram)) {
    const std::size_t n = gram_.rows();
    if (gram_.cols() != n) fail(errc::bad_argument, "QuadricForm: square gram required");
    // symmetry exact by storage: average and mirror
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        C avg = (gram_(i, j) + gram_(j, i)) / C(2);
        gram_(i, j) = avg;
        gram_(j, i) = avg;
      }
    if (frobenius(gram_) == real_t<C>(0)) fail(errc::bad_argument, "QuadricForm: zero form");
  }

  static QuadricForm from_coeff_vector(std::size_t ambient_dim, const Vec<C>& v) {
    const std::size_t n = ambient_dim + 1;
    Mat<C> g(n, n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        if (i == j)
          g(i, i) = v[k];
        else {
          g(i, j) = v[k] / C(2);
          g(j, i) = v[k] / C(2);
        }
        ++k;
      }
    return QuadricForm(std::move(g));
  }

  Vec<C> coeff_vector() const {
    const std::size_t n = gram_.rows();
    Vec<C> v;
    v.reserve(n * (n + 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) v.push_back(i == j ? gram_(i, i) : C(2) * gram_(i, j));
    return v;
  }

  const Mat<C>& gram() const { return gram_; }
  std::size_t ambient_dim() const { return gram_.rows() - 1; }

  C evaluate(const Vec<C>& x) const {
    C s(0);
    const std::size_t n = gram_.rows();
    for (std::size_t i = 0; i < n; ++i) {
      C row(0);
      for (std::size_t j = 0; j < n; ++j) row += gram_(i, j) * x[j];
      s += x[i] * row;
    }
    return s;
  }
  C evaluate(const ProjPoint<C>& p) const { return evaluate(p.coords()); }

  // |p^t G p| / (||G|| ||p||^2): scale-free incidence residual
  double residual(const Vec<C>& x) const {
    auto nx = num::norm2(x);
    auto ng = frobenius(gram_);
    if (nx == real_t<C>(0) || ng == real_t<C>(0)) return 1.0;
    return field<C>::to_double(cabs(evaluate(x)) / (ng * nx * nx));
  }
  double residual(const ProjPoint<C>& p) const { return residual(p.coords()); }

  QuadricForm conj() const {
    Mat<C> g(gram_.rows(), gram_.cols());
    for (std::size_t i = 0; i < gram_.rows(); ++i)
      for (std::size_t j = 0; j < gram_.cols(); ++j) g(i, j) = cconj(gram_(i, j));
    return QuadricForm(std::move(g));
  }

  double max_imag_abs() const {
    double m = 0;
    for (std::size_t i = 0; i < gram_.rows(); ++i)
      for (std::size_t j = 0; j < gram_.cols(); ++j)
        m = std::max(m, std::abs(field<C>::to_double(im(gram_(i, j)))));
    return m;
  }

 private:
  Mat<C> gram_;
};

// Degree-2 Veronese evaluation for P^3 in the documented monomial order.
template <class C>
inline Vec<C> veronese_row(const ProjPoint<C>& p) {
  if (p.ambient_dim() != 3) fail(errc::bad_argument, "veronese_row: point must live in P^3");
  const auto& x = p.coords();
  return {x[0] * x[0], x[0] * x[1], x[0] * x[2], x[0] * x[3], x[1] * x[1],
          x[1] * x[2], x[1] * x[3], x[2] * x[2], x[2] * x[3], x[3] * x[3]};
}

// --- linear subspaces ---------------------------------------------------------

// Subspace of dimension k stored by k+1 spanning points.
template <class C>
class LinearSubspace {
 public:
  LinearSubspace() = default;
  explicit LinearSubspace(std::vector<ProjPoint<C>> span) : span_(std::move(span)) {
    if (span_.empty()) fail(errc::bad_argument, "LinearSubspace: empty span");
    Mat<C> m = span_matrix();
    if (num::numerical_rank(m, real_t<C>(field<C>::from_double(kRankTol))) != span_.size())
      fail(errc::rank_deficient, "LinearSubspace: span is numerically dependent");
  }

  std::size_t ambient_dim() const { return span_[0].ambient_dim(); }
  std::size_t dim() const { return span_.size() - 1; }
  const std::vector<ProjPoint<C>>& span() const { return span_; }

  Mat<C> span_matrix() const {  // rows are span-point coordinates
    Mat<C> m(span_.size(), ambient_dim() + 1);
    for (std::size_t i = 0; i < span_.size(); ++i) m.set_row(i, span_[i].coords());
    return m;
  }

  // orthonormal rows spanning the same space (deterministic MGS with pivoting)
  Mat<C> orthonormal_rows() const {
    Mat<C> m = span_matrix();
    std::vector<Vec<C>> rows;
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
    std::vector<Vec<C>> out;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      std::size_t piv = k;
      real_t<C> best(-1);
      for (std::size_t j = k; j < rows.size(); ++j) {
        auto nj = num::norm2(rows[j]);
        if (nj > best) {
          best = nj;
          piv = j;
        }
      }
      std::swap(rows[piv], rows[k]);
      Vec<C> v = rows[k];
      auto nv = num::norm2(v);
      num::scale(v, C(1) / C(nv));
      out.push_back(v);
      for (std::size_t j = k + 1; j < rows.size(); ++j) {
        C proj = num::hdot(v, rows[j]);
        num::axpy(rows[j], -proj, v);
      }
    }
    Mat<C> res(out.size(), ambient_dim() + 1);
    for (std::size_t i = 0; i < out.size(); ++i) res.set_row(i, out[i]);
    return res;
  }

  LinearSubspace conj() const {
    std::vector<ProjPoint<C>> s;
    s.reserve(span_.size());
    for (const auto& p : span_) s.push_back(p.conj());
    return LinearSubspace(std::move(s));
  }

  // distance of a projective point to this subspace (chordal)
  double distance(const ProjPoint<C>& p) const {
    Mat<C> B = orthonormal_rows();
    Vec<C> x = p.coords();
    auto nx = num::norm2(x);
    num::scale(x, C(1) / C(nx));
    Vec<C> r = x;
    for (std::size_t i = 0; i < B.rows(); ++i) {
      Vec<C> b = B.row(i);
      C proj = num::hdot(b, x);
      num::axpy(r, -proj, b);
    }
    return field<C>::to_double(num::norm2(r));
  }

  bool is_real(double tol = kPairingTol) const {
    Mat<C> a = orthonormal_rows();
    Mat<C> b = conj().orthonormal_rows();
    std::vector<Vec<C>> av, bv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      av.push_back(a.row(i));
      bv.push_back(b.row(i));
    }
    return num::max_principal_angle(av, bv) < tol * 1e4 + 1e-8;
  }

 private:
  std::vector<ProjPoint<C>> span_;
};

// dim of intersection via numerical rank of stacked spans; empty -> -1
template <class C>
inline int subspace_intersection_dim(const LinearSubspace<C>& a, const LinearSubspace<C>& b) {
  if (a.ambient_dim() != b.ambient_dim())
    fail(errc::bad_argument, "subspace_intersection_dim: ambient mismatch");
  const std::size_t n1 = a.dim() + 1, n2 = b.dim() + 1;
  Mat<C> stacked(n1 + n2, a.ambient_dim() + 1);
  Mat<C> ma = a.span_matrix(), mb = b.span_matrix();
  for (std::size_t i = 0; i < n1; ++i) stacked.set_row(i, ma.row(i));
  for (std::size_t i = 0; i < n2; ++i) stacked.set_row(n1 + i, mb.row(i));
  std::size_t rho = num::numerical_rank(stacked, real_t<C>(field<C>::from_double(kRankTol)));
  return static_cast<int>(n1 + n2) - static_cast<int>(rho) - 1;
}

// apply a projective transformation (coordinates act on the left)
template <class C>
inline ProjPoint<C> transform(const Mat<C>& g, const ProjPoint<C>& p) {
  return ProjPoint<C>(num::matvec(g, p.coords()));
}

template <class C>
inline PointConfig<C> transform(const Mat<C>& g, const PointConfig<C>& cfg) {
  std::vector<ProjPoint<C>> pts;
  pts.reserve(cfg.size());
  for (const auto& p : cfg.points()) pts.push_back(transform(g, p));
  return PointConfig<C>(std::move(pts), cfg.pairing());
}

template <class C>
inline LinearSubspace<C> transform(const Mat<C>& g, const LinearSubspace<C>& L) {
  std::vector<ProjPoint<C>> pts;
  for (const auto& p : L.span()) pts.push_back(transform(g, p));
  return LinearSubspace<C>(std::move(pts));
}

// quadric transforms by the inverse substitution: x -> g^{-1} x
template <class C>
inline QuadricForm<C> transform(const Mat<C>& g, const QuadricForm<C>& Q) {
  Mat<C> gi = num::inverse(g);
  return QuadricForm<C>(num::matmul(num::transpose(gi), num::matmul(Q.gram(), gi)));
}

}  // namespace rq::geom
