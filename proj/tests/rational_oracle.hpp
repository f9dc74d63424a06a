#pragma once

// Test-only exact arithmetic helpers: complex rationals and the expanded
// determinant of a matrix pencil. These stay independent of the numeric
// implementation paths they cross-check.

#include <vector>

#include "rq/matrix.hpp"
#include "rq/scalar.hpp"

namespace rqtest {

struct QC {  // complex number with exact rational parts
  rq::Rational re{0}, im{0};
  QC() = default;
  QC(rq::Rational r, rq::Rational i) : re(std::move(r)), im(std::move(i)) {}
  explicit QC(long v) : re(v), im(0) {}
};

inline QC operator+(const QC& a, const QC& b) { return {a.re + b.re, a.im + b.im}; }
inline QC operator-(const QC& a, const QC& b) { return {a.re - b.re, a.im - b.im}; }
inline QC operator*(const QC& a, const QC& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

using QPoly = std::vector<QC>;  // ascending powers

inline QPoly padd(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), QC(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = r[i] + a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = r[i] + b[i];
  return r;
}

inline QPoly pmul(const QPoly& a, const QPoly& b) {
  QPoly r(a.size() + b.size() - 1, QC(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  return r;
}

inline QPoly pneg(const QPoly& a) {
  QPoly r = a;
  for (auto& c : r) c = QC(0) - c;
  return r;
}

// det(A + t B) expanded exactly by cofactor recursion over QPoly entries
inline QPoly pencil_det_exact(const std::vector<std::vector<QC>>& A,
                              const std::vector<std::vector<QC>>& B) {
  const std::size_t n = A.size();
  std::vector<std::vector<QPoly>> M(n, std::vector<QPoly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M[i][j] = QPoly{A[i][j], B[i][j]};

  struct Rec {
    static QPoly det(const std::vector<std::vector<QPoly>>& m, std::vector<std::size_t> cols) {
      const std::size_t row = m.size() - cols.size();
      if (cols.size() == 1) return m[row][cols[0]];
      QPoly acc{QC(0)};
      for (std::size_t k = 0; k < cols.size(); ++k) {
        std::vector<std::size_t> rest;
        for (std::size_t j = 0; j < cols.size(); ++j)
          if (j != k) rest.push_back(cols[j]);
        QPoly sub = det(m, rest);
        QPoly term = pmul(m[row][cols[k]], sub);
        acc = padd(acc, (k % 2 == 0) ? term : pneg(term));
      }
      return acc;
    }
  };
  std::vector<std::size_t> cols(n);
  for (std::size_t i = 0; i < n; ++i) cols[i] = i;
  return Rec::det(M, cols);
}

template <class C>
inline C qc_to_scalar(const QC& q) {
  using R = rq::real_t<C>;
  return C(rq::rational_to_real<R>(q.re), rq::rational_to_real<R>(q.im));
}

}  // namespace rqtest
