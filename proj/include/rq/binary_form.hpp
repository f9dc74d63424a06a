#pragma once

#include <cstddef>
#include <vector>

#include "rq/error.hpp"
#include "rq/matrix.hpp"
#include "rq/scalar.hpp"

namespace rq::num {

// Homogeneous binary form of fixed degree. Coefficients are ordered by
// descending power of the first variable:
//   p(x, y) = c[0] x^d + c[1] x^(d-1) y + ... + c[d] y^d.
template <class C>
class BinaryForm {
 public:
  BinaryForm() = default;
  BinaryForm(std::size_t degree, Vec<C> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != degree + 1) fail(errc::bad_argument, "BinaryForm: coefficient count");
    for (const auto& c : coeffs_) require_finite(c, "BinaryForm coefficient");
  }

  static BinaryForm normalized(std::size_t degree, Vec<C> coeffs) {
    BinaryForm f(degree, std::move(coeffs));
    f.normalize();
    return f;
  }

  std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  const Vec<C>& coeffs() const { return coeffs_; }
  Vec<C>& coeffs() { return coeffs_; }

  C eval(const C& x, const C& y) const {
    // homogeneous Horner in the non-dominant variable
    const std::size_t d = degree();
    if (cabs(x) >= cabs(y)) {
      C acc = coeffs_[d];
      C xp(1);
      for (std::size_t i = d; i-- > 0;) {
        xp *= x;
        acc = acc * y + coeffs_[i] * xp;
      }
      return acc;
    }
    C acc = coeffs_[0];
    C yp(1);
    for (std::size_t i = 1; i <= d; ++i) {
      yp *= y;
      acc = acc * x + coeffs_[i] * yp;
    }
    return acc;
  }

  // dehomogenized p(t, 1)
  C eval_affine(const C& t) const {
    C acc(0);
    for (const auto& c : coeffs_) acc = acc * t + c;
    return acc;
  }

  BinaryForm derivative_x() const {
    std::size_t d = degree();
    if (d == 0) return BinaryForm(0, {C(0)});
    Vec<C> out(d);
    for (std::size_t i = 0; i < d; ++i) out[i] = coeffs_[i] * C(double(d - i));
    return BinaryForm(d - 1, out);
  }

  BinaryForm derivative_y() const {
    std::size_t d = degree();
    if (d == 0) return BinaryForm(0, {C(0)});
    Vec<C> out(d);
    for (std::size_t i = 0; i < d; ++i) out[i] = coeffs_[i + 1] * C(double(i + 1));
    return BinaryForm(d - 1, out);
  }

  real_t<C> max_coeff_abs() const {
    real_t<C> m(0);
    for (const auto& c : coeffs_) m = std::max(m, cabs(c));
    return m;
  }

  bool is_zero(const real_t<C>& tol = real_t<C>(0)) const { return !(max_coeff_abs() > tol); }

  // scale so the largest-magnitude coefficient has magnitude 1
  void normalize() {
    auto m = max_coeff_abs();
    if (m == real_t<C>(0)) fail(errc::bad_argument, "BinaryForm: all coefficients zero");
    for (auto& c : coeffs_) c /= C(m);
  }

  BinaryForm conj() const {
    Vec<C> out(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = cconj(coeffs_[i]);
    return BinaryForm(degree(), out);
  }

  // substitution (x, y) -> (a x + b y, c x + d y)
  BinaryForm substitute(const C& a, const C& b, const C& c, const C& d) const {
    std::size_t deg = degree();
    Vec<C> acc(1, C(0));
    acc.reserve(deg + 1);
    // build sum coeffs_[i] * (a x + b y)^(d-i) (c x + d y)^i by running products
    Vec<Vec<C>> pow_l(deg + 1), pow_r(deg + 1);
    pow_l[0] = {C(1)};
    pow_r[0] = {C(1)};
    for (std::size_t k = 1; k <= deg; ++k) {
      pow_l[k] = mul_linear(pow_l[k - 1], a, b);
      pow_r[k] = mul_linear(pow_r[k - 1], c, d);
    }
    Vec<C> out(deg + 1, C(0));
    for (std::size_t i = 0; i <= deg; ++i) {
      Vec<C> term = mul_dense(pow_l[deg - i], pow_r[i]);
      for (std::size_t j = 0; j < term.size(); ++j) out[j] += coeffs_[i] * term[j];
    }
    return BinaryForm(deg, out);
  }

 private:
  static Vec<C> mul_linear(const Vec<C>& p, const C& a, const C& b) {
    Vec<C> r(p.size() + 1, C(0));
    for (std::size_t i = 0; i < p.size(); ++i) {
      r[i] += p[i] * a;
      r[i + 1] += p[i] * b;
    }
    return r;
  }
  static Vec<C> mul_dense(const Vec<C>& p, const Vec<C>& q) {
    Vec<C> r(p.size() + q.size() - 1, C(0));
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
  }

  Vec<C> coeffs_;
};

template <class C>
inline BinaryForm<C> multiply(const BinaryForm<C>& p, const BinaryForm<C>& q) {
  Vec<C> r(p.degree() + q.degree() + 1, C(0));
  for (std::size_t i = 0; i <= p.degree(); ++i)
    for (std::size_t j = 0; j <= q.degree(); ++j) r[i + j] += p.coeffs()[i] * q.coeffs()[j];
  return BinaryForm<C>(p.degree() + q.degree(), r);
}

template <class C>
inline BinaryForm<C> add(const BinaryForm<C>& p, const BinaryForm<C>& q) {
  if (p.degree() != q.degree()) fail(errc::bad_argument, "BinaryForm add: degree mismatch");
  Vec<C> r(p.degree() + 1);
  for (std::size_t i = 0; i <= p.degree(); ++i) r[i] = p.coeffs()[i] + q.coeffs()[i];
  return BinaryForm<C>(p.degree(), r);
}

template <class C>
inline BinaryForm<C> scaled(const BinaryForm<C>& p, const C& c) {
  Vec<C> r = p.coeffs();
  for (auto& z : r) z *= c;
  return BinaryForm<C>(p.degree(), r);
}

// Sylvester resultant of two binary forms.
template <class C>
inline C resultant(const BinaryForm<C>& p, const BinaryForm<C>& q) {
  const std::size_t m = p.degree(), n = q.degree();
  Mat<C> S(m + n, m + n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= m; ++j) S(i, i + j) = p.coeffs()[j];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= n; ++j) S(n + i, i + j) = q.coeffs()[j];
  return determinant(S);
}

}  // namespace rq::num
