#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rational_oracle.hpp"
#include "rq/binary_form.hpp"
#include "rq/gauss_newton.hpp"
#include "rq/matrix.hpp"
#include "rq/rng.hpp"
#include "rq/roots.hpp"
#include "rq/scalar.hpp"

using namespace rq;
using num::BinaryForm;
using num::Mat;
using num::Vec;

namespace {

template <class C>
Mat<C> random_matrix(Rng rng, std::size_t r, std::size_t c, bool complex_entries = true) {
  Mat<C> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m(i, j) = C(field<C>::from_double(rng.normal()),
                  field<C>::from_double(complex_entries ? rng.normal() : 0.0));
  return m;
}

}  // namespace

TEST_CASE("null_space: full-rank identity has empty kernel") {
  auto I = Mat<c128>::identity(4);
  auto basis = num::null_space(I, real_t<c128>(field<c128>::from_double(1e-12)));
  CHECK(basis.empty());
}

TEST_CASE("null_space: kernel dimension and orthonormality on seeded wide matrices") {
  Rng rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    auto A = random_matrix<c128>(rng.fork(trial), 8, 10);
    auto basis = num::null_space(A, real_t<c128>(field<c128>::from_double(1e-10)));
    REQUIRE(basis.size() == 2);
    for (const auto& v : basis) {
      auto Av = num::matvec(A, v);
      CHECK(field<c128>::to_double(num::norm2(Av)) < 1e-28);
      CHECK(std::abs(field<c128>::to_double(num::norm2(v)) - 1.0) < 1e-30);
    }
    CHECK(dabs(num::hdot(basis[0], basis[1])) < 1e-30);
  }
}

TEST_CASE("null_space: row scaling spans the same subspace") {
  Rng rng(7);
  auto A = random_matrix<c128>(rng, 8, 10);
  auto b1 = num::null_space(A, real_t<c128>(field<c128>::from_double(1e-10)));
  Mat<c128> B = A;
  for (std::size_t i = 0; i < 8; ++i) {
    c128 s(field<c128>::from_double(0.1 + i * 0.7), field<c128>::from_double(1.3 - 0.2 * i));
    for (std::size_t j = 0; j < 10; ++j) B(i, j) = A(i, j) * s;
  }
  auto b2 = num::null_space(B, real_t<c128>(field<c128>::from_double(1e-10)));
  REQUIRE(b2.size() == b1.size());
  CHECK(num::max_principal_angle(b1, b2) < 1e-8);
}

TEST_CASE("null_space rejects non-finite input") {
  Mat<c53> A(2, 2);
  A(0, 0) = c53(std::numeric_limits<double>::quiet_NaN(), 0);
  CHECK_THROWS_AS(num::null_space(A, 1e-10), Error);
}

TEST_CASE("determinant and lu_solve against exact rationals") {
  Rng rng(11);
  std::vector<std::vector<rqtest::QC>> Aq(4, std::vector<rqtest::QC>(4));
  Mat<c128> A(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      long nre = static_cast<long>(rng.next_u64() % 19) - 9;
      long nim = static_cast<long>(rng.next_u64() % 19) - 9;
      Aq[i][j] = rqtest::QC(Rational(nre, 3), Rational(nim, 5));
      A(i, j) = rqtest::qc_to_scalar<c128>(Aq[i][j]);
    }
  // exact det via the pencil expansion with B = 0 (constant term)
  std::vector<std::vector<rqtest::QC>> Z(4, std::vector<rqtest::QC>(4, rqtest::QC(0)));
  auto poly = rqtest::pencil_det_exact(Aq, Z);
  c128 expected = rqtest::qc_to_scalar<c128>(poly[0]);
  c128 got = num::determinant(A);
  CHECK(dabs(c128(got - expected)) < 1e-30);
}

TEST_CASE("BinaryForm::eval matches the naive monomial sum in both branches") {
  Rng rng(64);
  for (int trial = 0; trial < 20; ++trial) {
    Vec<c128> cs(5);
    auto sub = rng.fork(trial);
    for (auto& c : cs)
      c = c128(field<c128>::from_double(sub.normal()), field<c128>::from_double(sub.normal()));
    BinaryForm<c128> f(4, cs);
    for (double scale : {0.2, 1.0, 5.0}) {  // exercise |x|<|y|, ~equal, |x|>|y|
      c128 x(field<c128>::from_double(scale * sub.normal()),
             field<c128>::from_double(scale * sub.normal()));
      c128 y(field<c128>::from_double(sub.normal()), field<c128>::from_double(sub.normal()));
      c128 naive(0);
      for (int i = 0; i <= 4; ++i) {
        c128 term = cs[i];
        for (int k = 0; k < 4 - i; ++k) term *= x;
        for (int k = 0; k < i; ++k) term *= y;
        naive += term;
      }
      CHECK(dabs(c128(f.eval(x, y) - naive)) < 1e-30 * (1 + dabs(naive)));
    }
  }
}

TEST_CASE("poly_roots: quartic lambda^4 - 1") {
  BinaryForm<c128> p(4, {c128(1), c128(0), c128(0), c128(0), c128(-1)});
  auto roots = num::poly_roots(p);
  REQUIRE(roots.size() == 4);
  for (const auto& r : roots) {
    CHECK(r.multiplicity == 1);
    CHECK(!r.at_infinity());
    auto t = r.affine();
    CHECK(dabs(c128(t * t * t * t - c128(1))) < 1e-35);
  }
  // sorted by (re, im): -1, -i, i, 1
  CHECK(dabs(c128(roots[0].affine() + c128(1))) < 1e-35);
  CHECK(dabs(c128(roots[1].affine() + c128(0, 1))) < 1e-35);
  CHECK(dabs(c128(roots[2].affine() - c128(0, 1))) < 1e-35);
  CHECK(dabs(c128(roots[3].affine() - c128(1))) < 1e-35);
}

TEST_CASE("poly_roots: lambda^2 mu^2 has 0 and infinity with multiplicity 2") {
  BinaryForm<c128> p(4, {c128(0), c128(0), c128(1), c128(0), c128(0)});
  auto roots = num::poly_roots(p);
  REQUIRE(roots.size() == 2);
  CHECK(!roots[0].at_infinity());
  CHECK(dabs(roots[0].x) < 1e-20);
  CHECK(roots[0].multiplicity == 2);
  CHECK(roots[1].at_infinity());
  CHECK(roots[1].multiplicity == 2);
}

TEST_CASE("poly_roots: backward error certificate below 1e-2 * working epsilon") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Vec<c128> cs(6);
    auto sub = rng.fork(trial);
    for (auto& c : cs)
      c = c128(field<c128>::from_double(sub.normal()), field<c128>::from_double(sub.normal()));
    BinaryForm<c128> p(5, cs);
    auto roots = num::poly_roots(p);
    int total = 0;
    for (const auto& r : roots) total += r.multiplicity;
    CHECK(total == 5);
    const double eps_w = field<c128>::to_double(field<c128>::eps());
    for (const auto& r : roots) CHECK(r.backward_error < 1e-2 * eps_w);
  }
}

TEST_CASE("poly_roots: factorization multiplies back to the input form") {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    Vec<c128> cs(5);
    auto sub = rng.fork(trial);
    for (auto& c : cs)
      c = c128(field<c128>::from_double(sub.normal()), field<c128>::from_double(sub.normal()));
    BinaryForm<c128> p = BinaryForm<c128>::normalized(4, cs);
    auto roots = num::poly_roots(p);
    auto prod = num::expand_roots(roots, 4);
    // match scale on the largest input coefficient
    std::size_t imax = 0;
    for (std::size_t i = 0; i < 5; ++i)
      if (cabs(p.coeffs()[i]) > cabs(p.coeffs()[imax])) imax = i;
    c128 s = p.coeffs()[imax] / prod.coeffs()[imax];
    double err = 0;
    for (std::size_t i = 0; i < 5; ++i)
      err = std::max(err, dabs(c128(prod.coeffs()[i] * s - p.coeffs()[i])));
    CHECK(err < 1e-9);
  }
}

TEST_CASE("poly_roots on rational quartic matches exact expansion roots") {
  // p = (t - 1/2)(t + 1/3)(t - 2)(t + 3), expanded exactly then solved
  Rational a(1, 2), b(-1, 3), c(2), d(-3);
  // elementary symmetric functions
  Rational e1 = a + b + c + d;
  Rational e2 = a * b + a * c + a * d + b * c + b * d + c * d;
  Rational e3 = a * b * c + a * b * d + a * c * d + b * c * d;
  Rational e4 = a * b * c * d;
  using R = real_t<c128>;
  BinaryForm<c128> p(4, {c128(1), c128(rational_to_real<R>(-e1)), c128(rational_to_real<R>(e2)),
                         c128(rational_to_real<R>(-e3)), c128(rational_to_real<R>(e4))});
  auto roots = num::poly_roots(p);
  REQUIRE(roots.size() == 4);
  std::vector<double> expected{-3.0, -1.0 / 3.0, 0.5, 2.0};
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(field<c128>::to_double(re(roots[i].affine())) - expected[i]) < 1e-30);
}

TEST_CASE("congruence_split: identity stays identity") {
  auto I = Mat<c128>::identity(4);
  auto T = num::congruence_split(I, real_t<c128>(field<c128>::from_double(1e-20)));
  CHECK(field<c128>::to_double(num::frobenius(num::matmul(num::transpose(T), num::matmul(I, T)))) ==
        doctest::Approx(2.0));
  for (int i = 0; i < 4; ++i) CHECK(dabs(c128(T(i, i) - c128(1))) < 1e-30);
}

TEST_CASE("congruence_split: diag(1,1,1,-1) yields diag(1,1,1,i)") {
  Mat<c128> S = Mat<c128>::identity(4);
  S(3, 3) = c128(-1);
  auto T = num::congruence_split(S, real_t<c128>(field<c128>::from_double(1e-20)));
  CHECK(dabs(c128(T(3, 3) - c128(0, 1))) < 1e-30);
  CHECK(field<c128>::to_double(num::congruence_residual(S, T)) < 1e-30);
}

TEST_CASE("congruence_split: random full-rank symmetric, residual < 1e-10 and reproducible") {
  Rng rng(21);
  for (int trial = 0; trial < 8; ++trial) {
    auto sub = rng.fork(trial);
    auto Araw = random_matrix<c128>(sub, 4, 4);
    Mat<c128> S(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) S(i, j) = Araw(i, j) + Araw(j, i);
    auto T1 = num::congruence_split(S, real_t<c128>(field<c128>::from_double(1e-12)));
    auto T2 = num::congruence_split(S, real_t<c128>(field<c128>::from_double(1e-12)));
    CHECK(field<c128>::to_double(num::congruence_residual(S, T1)) < 1e-10);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(T1(i, j) == T2(i, j));  // bit-for-bit
  }
}

TEST_CASE("congruence_split rejects singular forms") {
  Mat<c128> S(3, 3);
  S(0, 0) = c128(1);
  S(1, 1) = c128(1);  // rank 2
  CHECK_THROWS_AS(num::congruence_split(S, real_t<c128>(field<c128>::from_double(1e-12))), Error);
}

TEST_CASE("gauss_newton: x^2 - 4 from x0 = 3") {
  auto res = [](const Vec<c128>& x) { return Vec<c128>{x[0] * x[0] - c128(4)}; };
  num::GNOptions<c128> opt;
  opt.tol = field<c128>::from_double(1e-12);
  auto r = num::gauss_newton(res, Vec<c128>{c128(3)}, opt);
  CHECK(r.converged);
  CHECK(dabs(c128(r.x[0] - c128(2))) < 1e-12);
}

TEST_CASE("gauss_newton: divergence is a signal, not an exception") {
  // residual bounded away from zero: no solution exists
  auto res = [](const Vec<c53>& x) { return Vec<c53>{x[0] * x[0] + c53(1), x[0] + c53(2), x[0] - c53(2)}; };
  num::GNOptions<c53> opt;
  opt.tol = 1e-10;
  opt.max_iter = 40;
  auto r = num::gauss_newton(res, Vec<c53>{c53(10)}, opt);
  CHECK(!r.converged);
  CHECK(r.diverged);
}

TEST_CASE("finite-difference Jacobian matches analytic on seeded systems") {
  Rng rng(77);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto sub = rng.fork(trial);
    // quadratic map F_i(x) = sum_j a_ij x_j^2 + b_ij x_j
    Mat<c128> A = random_matrix<c128>(sub, 3, 3), B = random_matrix<c128>(sub, 3, 3);
    auto res = [&](const Vec<c128>& x) {
      Vec<c128> f(3, c128(0));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) f[i] += A(i, j) * x[j] * x[j] + B(i, j) * x[j];
      return f;
    };
    Vec<c128> x(3);
    for (auto& xi : x)
      xi = c128(field<c128>::from_double(sub.normal()), field<c128>::from_double(sub.normal()));
    auto J = num::fd_jacobian<c128>(res, x, 3);
    double max_rel = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        c128 exact = c128(2) * A(i, j) * x[j] + B(i, j);
        double denom = std::max(1.0, dabs(exact));
        max_rel = std::max(max_rel, dabs(c128(J(i, j) - exact)) / denom);
      }
    CHECK(max_rel < 1e-6);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("pencil determinant interpolation data: exact rational oracle") {
  // det(A + tB) for rational symmetric A, B expanded exactly; evaluated at
  // sample nodes it must agree with the numeric LU determinant.
  Rng rng(5);
  std::vector<std::vector<rqtest::QC>> Aq(4, std::vector<rqtest::QC>(4)),
      Bq(4, std::vector<rqtest::QC>(4));
  Mat<c128> A(4, 4), B(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      long ar = static_cast<long>(rng.next_u64() % 11) - 5;
      long br = static_cast<long>(rng.next_u64() % 11) - 5;
      Aq[i][j] = Aq[j][i] = rqtest::QC(Rational(ar, 2), Rational(0));
      Bq[i][j] = Bq[j][i] = rqtest::QC(Rational(br, 4), Rational(0));
      A(i, j) = A(j, i) = rqtest::qc_to_scalar<c128>(Aq[i][j]);
      B(i, j) = B(j, i) = rqtest::qc_to_scalar<c128>(Bq[i][j]);
    }
  auto poly = rqtest::pencil_det_exact(Aq, Bq);
  REQUIRE(poly.size() == 5);
  for (int node = -2; node <= 2; ++node) {
    Mat<c128> M(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) M(i, j) = A(i, j) + c128(double(node)) * B(i, j);
    c128 lhs = num::determinant(M);
    rqtest::QC acc(0);
    rqtest::QC tq(Rational(node), Rational(0));
    for (std::size_t k = poly.size(); k-- > 0;) acc = acc * tq + poly[k];
    CHECK(dabs(c128(lhs - rqtest::qc_to_scalar<c128>(acc))) < 1e-30);
  }
}
