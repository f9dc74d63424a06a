#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rational_oracle.hpp"
#include "rq/projective.hpp"
#include "test_helpers.hpp"

using namespace rq;
using geom::LinearSubspace;
using geom::PointConfig;
using geom::ProjPoint;
using geom::QuadricForm;
using num::Mat;
using num::Vec;

TEST_CASE("ProjPoint normalization: idempotent and conjugation-equivariant") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = rqtest::random_complex_point<c128>(rng);
    ProjPoint<c128> again(p.coords());
    for (int i = 0; i < 4; ++i) CHECK(p[i] == again[i]);
    auto lhs = p.conj();
    ProjPoint<c128> rhs(num::conj_vec(p.coords()));
    for (int i = 0; i < 4; ++i) CHECK(dabs(c128(lhs[i] - rhs[i])) < 1e-36);
  }
}

TEST_CASE("veronese_row on the documented examples") {
  ProjPoint<c128> e0(Vec<c128>{c128(1), c128(0), c128(0), c128(0)});
  auto row = geom::veronese_row(e0);
  CHECK(dabs(c128(row[0] - c128(1))) == 0.0);
  for (int i = 1; i < 10; ++i) CHECK(dabs(row[i]) == 0.0);

  ProjPoint<c128> ones(Vec<c128>{c128(1), c128(1), c128(1), c128(1)});
  for (const auto& v : geom::veronese_row(ones)) CHECK(dabs(c128(v - c128(1))) == 0.0);
}

TEST_CASE("veronese_row pairs with quadric coefficient vectors") {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    Mat<c128> g(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        g(i, j) = rqtest::random_complex<c128>(rng);
        g(j, i) = g(i, j);
      }
    QuadricForm<c128> Q(g);
    auto p = rqtest::random_complex_point<c128>(rng);
    c128 direct = Q.evaluate(p);
    c128 via = num::bdot(geom::veronese_row(p), Q.coeff_vector());
    CHECK(dabs(c128(direct - via)) < 1e-35);
  }
}

TEST_CASE("veronese_row is degree-2 homogeneous") {
  Rng rng(3);
  auto p = rqtest::random_complex_point<c128>(rng);
  c128 scale = rqtest::random_complex<c128>(rng);
  Vec<c128> scaled = p.coords();
  num::scale(scaled, scale);
  auto r1 = geom::veronese_row(p);
  // build the raw monomials of the scaled representative
  Vec<c128> x = scaled;
  Vec<c128> r2{x[0] * x[0], x[0] * x[1], x[0] * x[2], x[0] * x[3], x[1] * x[1],
               x[1] * x[2], x[1] * x[3], x[2] * x[2], x[2] * x[3], x[3] * x[3]};
  for (int i = 0; i < 10; ++i)
    CHECK(dabs(c128(r2[i] - scale * scale * r1[i])) < 1e-33 * (1 + dabs(scale * scale)));
}

TEST_CASE("evaluate matches exact rational arithmetic") {
  std::vector<std::vector<rqtest::QC>> Gq(4, std::vector<rqtest::QC>(4));
  Mat<c128> G(4, 4);
  Rng rng(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      long a = static_cast<long>(rng.next_u64() % 15) - 7;
      long b = static_cast<long>(rng.next_u64() % 15) - 7;
      Gq[i][j] = Gq[j][i] = rqtest::QC(Rational(a, 4), Rational(b, 8));
      G(i, j) = G(j, i) = rqtest::qc_to_scalar<c128>(Gq[i][j]);
    }
  std::vector<rqtest::QC> xq;
  Vec<c128> x(4);
  for (int i = 0; i < 4; ++i) {
    long a = static_cast<long>(rng.next_u64() % 9) - 4;
    long b = static_cast<long>(rng.next_u64() % 9) - 4;
    xq.push_back(rqtest::QC(Rational(a, 2), Rational(b, 3)));
    x[i] = rqtest::qc_to_scalar<c128>(xq[i]);
  }
  rqtest::QC acc(0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) acc = acc + xq[i] * Gq[i][j] * xq[j];
  QuadricForm<c128> Q(G);
  CHECK(dabs(c128(Q.evaluate(x) - rqtest::qc_to_scalar<c128>(acc))) < 1e-30);
}

TEST_CASE("empty quadric evaluates to 1 at (1:0:0:0)") {
  QuadricForm<c128> Q(Mat<c128>::identity(4));
  ProjPoint<c128> p(Vec<c128>{c128(1), c128(0), c128(0), c128(0)});
  CHECK(dabs(c128(Q.evaluate(p) - c128(1))) == 0.0);
}

TEST_CASE("detect_real_structure: real points, conjugate pairs, missing partner") {
  Rng rng(5);
  std::vector<ProjPoint<c128>> real_pts;
  for (int i = 0; i < 8; ++i) real_pts.push_back(rqtest::random_real_point<c128>(rng));
  auto pairing = geom::detect_real_structure(real_pts, 1e-10);
  for (std::size_t i = 0; i < 8; ++i) CHECK(pairing[i] == i);

  std::vector<ProjPoint<c128>> paired;
  for (int i = 0; i < 4; ++i) {
    auto p = rqtest::random_complex_point<c128>(rng);
    paired.push_back(p);
    paired.push_back(p.conj());
  }
  auto pairing2 = geom::detect_real_structure(paired, 1e-10);
  for (std::size_t i = 0; i < 8; i += 2) {
    CHECK(pairing2[i] == i + 1);
    CHECK(pairing2[i + 1] == i);
  }

  std::vector<ProjPoint<c128>> broken = paired;
  broken.pop_back();
  CHECK_THROWS_AS(geom::detect_real_structure(broken, 1e-10), Error);
}

TEST_CASE("PointConfig: pairing is an involution and conjugation permutes by it") {
  auto cfg = rqtest::random_octet<c128>(Rng(6), 4);
  const auto& pr = cfg.pairing();
  for (std::size_t i = 0; i < cfg.size(); ++i) CHECK(pr[pr[i]] == i);
  auto cj = cfg.conj();
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    double d = geom::proj_distance(cj.point(i), cfg.point(pr[i]));
    CHECK(d < 1e-12);
  }
}

TEST_CASE("subspace_intersection_dim") {
  Rng rng(7);
  // identical subspaces: dim k
  std::vector<ProjPoint<c128>> span;
  for (int i = 0; i < 3; ++i) span.push_back(rqtest::random_complex_point<c128>(rng, 5));
  LinearSubspace<c128> L(span);
  CHECK(geom::subspace_intersection_dim(L, L) == 2);

  // two random lines in P^3 are disjoint
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<ProjPoint<c128>> s1{rqtest::random_complex_point<c128>(rng),
                                    rqtest::random_complex_point<c128>(rng)};
    std::vector<ProjPoint<c128>> s2{rqtest::random_complex_point<c128>(rng),
                                    rqtest::random_complex_point<c128>(rng)};
    CHECK(geom::subspace_intersection_dim(LinearSubspace<c128>(s1), LinearSubspace<c128>(s2)) ==
          -1);
  }

  // L_+ and L_- of the empty quadric in P^3 are disjoint
  Vec<c128> w0{c128(1), c128(0, 1), c128(0), c128(0)};
  Vec<c128> w1{c128(0), c128(0), c128(1), c128(0, 1)};
  LinearSubspace<c128> Lp({ProjPoint<c128>(w0), ProjPoint<c128>(w1)});
  auto Lm = Lp.conj();
  CHECK(geom::subspace_intersection_dim(Lp, Lm) == -1);
  // and both lie on the empty quadric
  QuadricForm<c128> QE(Mat<c128>::identity(4));
  for (const auto& pt : Lp.span()) CHECK(QE.residual(pt) < 1e-30);
}

TEST_CASE("declared pairing violations are rejected") {
  Rng rng(8);
  auto a = rqtest::random_complex_point<c128>(rng);
  auto b = rqtest::random_complex_point<c128>(rng);  // not conj(a)
  geom::Pairing pairing{1, 0};
  CHECK_THROWS_AS(PointConfig<c128>({a, b}, pairing), Error);
  // declared-real point with imaginary parts
  geom::Pairing self{0};
  CHECK_THROWS_AS(PointConfig<c128>({a}, self), Error);
}
