#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rational_oracle.hpp"
#include "rq/pencil.hpp"
#include "test_helpers.hpp"

using namespace rq;
using geom::PointConfig;
using geom::ProjPoint;
using geom::QuadricForm;
using num::Mat;
using num::Vec;
using rqtest::random_octet;
using rqtest::random_real_pencil;
using rqtest::sample_base_point;

namespace {

pencil::Pencil<c128> diag_pencil() {
  Mat<c128> ga = Mat<c128>::identity(4);
  Mat<c128> gb(4, 4);
  for (int i = 0; i < 4; ++i) gb(i, i) = c128(double(i + 1));
  return pencil::Pencil<c128>(QuadricForm<c128>(ga), QuadricForm<c128>(gb), true);
}

}  // namespace

TEST_CASE("discriminant of diag(1,1,1,1) + t diag(1,2,3,4)") {
  auto disc = pencil::discriminant(diag_pencil());
  REQUIRE(disc.roots.size() == 4);
  CHECK(disc.distinct_flag);
  std::vector<double> expected{-1.0, -0.5, -1.0 / 3.0, -0.25};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(field<c128>::to_double(re(disc.roots[i].affine())) - expected[i]) < 1e-30);
    CHECK(std::abs(field<c128>::to_double(im(disc.roots[i].affine()))) < 1e-30);
  }
}

TEST_CASE("discriminant matches exact rational determinant expansion") {
  Rng rng(31);
  // rational symmetric grams, orthonormalization skipped on purpose
  std::vector<std::vector<rqtest::QC>> Aq(4, std::vector<rqtest::QC>(4)),
      Bq(4, std::vector<rqtest::QC>(4));
  Mat<c128> A(4, 4), B(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      long ar = static_cast<long>(rng.next_u64() % 13) - 6;
      long br = static_cast<long>(rng.next_u64() % 13) - 6;
      Aq[i][j] = Aq[j][i] = rqtest::QC(Rational(ar, 3), Rational(0));
      Bq[i][j] = Bq[j][i] = rqtest::QC(Rational(br, 2), Rational(0));
      A(i, j) = A(j, i) = rqtest::qc_to_scalar<c128>(Aq[i][j]);
      B(i, j) = B(j, i) = rqtest::qc_to_scalar<c128>(Bq[i][j]);
    }
  pencil::Pencil<c128> p{QuadricForm<c128>(A), QuadricForm<c128>(B), true};
  auto disc = pencil::discriminant(p);
  auto exact = rqtest::pencil_det_exact(Aq, Bq);  // ascending in t
  for (int k = 0; k < 5; ++k) {
    c128 want = rqtest::qc_to_scalar<c128>(exact[k]);
    c128 got = disc.quartic.coeffs()[4 - k];
    CHECK(dabs(c128(got - want)) < 1e-28);
  }
  // and the roots of the numeric quartic kill the exact polynomial
  for (const auto& rt : disc.roots) {
    if (rt.at_infinity()) continue;
    c128 t = rt.affine();
    c128 val(0);
    for (std::size_t k = exact.size(); k-- > 0;)
      val = val * t + rqtest::qc_to_scalar<c128>(exact[k]);
    CHECK(dabs(val) < 1e-25);
  }
}

TEST_CASE("pencil_through: 8 generic points give a kernel of dimension 2") {
  for (int trial = 0; trial < 4; ++trial) {
    std::size_t n_real = 2 * (trial % 5);
    auto cfg = random_octet<c128>(Rng(100 + trial), n_real);
    auto p = pencil::pencil_through(cfg);
    CHECK(p.real_basis());
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(p.a().residual(cfg.point(i)) < 1e-10);
      CHECK(p.b().residual(cfg.point(i)) < 1e-10);
    }
    // orthonormal coefficient vectors
    auto va = p.a().coeff_vector(), vb = p.b().coeff_vector();
    CHECK(std::abs(field<c128>::to_double(num::norm2(va)) - 1.0) < 1e-12);
    CHECK(std::abs(field<c128>::to_double(num::norm2(vb)) - 1.0) < 1e-12);
    CHECK(dabs(num::hdot(va, vb)) < 1e-12);
  }
}

TEST_CASE("pencil_through rejects wrong arity") {
  auto cfg8 = random_octet<c128>(Rng(5), 8);
  std::vector<ProjPoint<c128>> pts(cfg8.points().begin(), cfg8.points().end());
  Rng extra(99);
  pts.push_back(rqtest::random_real_point<c128>(extra));
  geom::Pairing pairing(9);
  for (std::size_t i = 0; i < 9; ++i) pairing[i] = i < 8 ? cfg8.pairing()[i] : 8;
  PointConfig<c128> cfg9(pts, pairing);
  CHECK_THROWS_AS(pencil::pencil_through(cfg9), Error);
}

TEST_CASE("pencil_through recovers a known pencil from sampled base points") {
  auto known = random_real_pencil<c128>(Rng(2024));
  Rng rng(7);
  std::vector<ProjPoint<c128>> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(sample_base_point(known, rng.fork(i)));
  PointConfig<c128> cfg(pts);  // complex sample set, no pairing
  auto rec = pencil::pencil_through(cfg);
  std::vector<Vec<c128>> span1{known.a().coeff_vector(), known.b().coeff_vector()};
  std::vector<Vec<c128>> span2{rec.a().coeff_vector(), rec.b().coeff_vector()};
  CHECK(num::max_principal_angle(span1, span2) < 1e-8);
}

TEST_CASE("parametrize: Segre member x0 x3 - x1 x2") {
  Mat<c128> g(4, 4);
  g(0, 3) = c128(0.5);
  g(3, 0) = c128(0.5);
  g(1, 2) = c128(-0.5);
  g(2, 1) = c128(-0.5);
  Mat<c128> ga = Mat<c128>::identity(4);  // any second member; unused at t=0
  pencil::Pencil<c128> p{QuadricForm<c128>(g), QuadricForm<c128>(ga), true};
  auto [plus, minus] = pencil::parametrize(p, c128(0));
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    c128 s = rqtest::random_complex<c128>(rng), t = rqtest::random_complex<c128>(rng);
    c128 u = rqtest::random_complex<c128>(rng), v = rqtest::random_complex<c128>(rng);
    auto x = plus.eval_sigma(s, t, u, v);
    CHECK(plus.form.residual(x) < 1e-30);
    auto xm = minus.eval_sigma(u, v, s, t);
    for (int i = 0; i < 4; ++i) CHECK(dabs(c128(x[i] - xm[i])) < 1e-30);
  }
}

TEST_CASE("parametrize: sigma residual below 1e-9 on generic members") {
  auto p = random_real_pencil<c128>(Rng(55));
  Rng rng(4);
  for (int trial = 0; trial < 3; ++trial) {
    c128 t = rqtest::random_complex<c128>(rng);
    auto [plus, minus] = pencil::parametrize(p, t);
    for (int k = 0; k < 20; ++k) {
      c128 s = rqtest::random_complex<c128>(rng), tt = rqtest::random_complex<c128>(rng);
      c128 u = rqtest::random_complex<c128>(rng), v = rqtest::random_complex<c128>(rng);
      auto x = plus.eval_sigma(s, tt, u, v);
      CHECK(plus.form.residual(x) < 1e-9);
    }
  }
}

TEST_CASE("parametrize near a discriminant root raises SingularForm") {
  auto p = diag_pencil();
  CHECK_THROWS_AS(pencil::parametrize(p, c128(-1.0 + 1e-18)), Error);
}

TEST_CASE("pull_back: round trip and off-quadric rejection") {
  auto p = random_real_pencil<c128>(Rng(77));
  auto [plus, minus] = pencil::parametrize(p, c128(0.3));
  Rng rng(8);
  for (int k = 0; k < 10; ++k) {
    c128 s = rqtest::random_complex<c128>(rng), t = rqtest::random_complex<c128>(rng);
    c128 u = rqtest::random_complex<c128>(rng), v = rqtest::random_complex<c128>(rng);
    auto x = plus.eval_sigma(s, t, u, v);
    ProjPoint<c128> q(x);
    auto [pf, ps] = pencil::pull_back(plus, q);
    // recovered parameters match up to scale
    CHECK(dabs(c128(pf.first * t - pf.second * s)) < 1e-25 * (1 + dabs(s) + dabs(t)));
    CHECK(dabs(c128(ps.first * v - ps.second * u)) < 1e-25 * (1 + dabs(u) + dabs(v)));
  }
  CHECK_THROWS_AS(pencil::pull_back(plus, rqtest::random_complex_point<c128>(rng)), Error);
}

TEST_CASE("pull_back: the 8 base points pull back to distinct parameter pairs") {
  auto cfg = random_octet<c128>(Rng(4242), 4);
  auto p = pencil::pencil_through(cfg);
  auto disc = pencil::discriminant(p);
  // pick a member parameter away from the roots
  c128 t(0.11, 0.23);
  double sep = 1e9;
  for (const auto& rt : disc.roots)
    if (!rt.at_infinity()) sep = std::min(sep, dabs(c128(rt.affine() - t)));
  REQUIRE(sep > 1e-7);
  auto [plus, minus] = pencil::parametrize(p, t);
  std::vector<std::pair<std::pair<c128, c128>, std::pair<c128, c128>>> params;
  for (std::size_t i = 0; i < 8; ++i) params.push_back(pencil::pull_back(plus, cfg.point(i)));
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j) {
      Vec<c128> pi{params[i].first.first, params[i].first.second};
      Vec<c128> pj{params[j].first.first, params[j].first.second};
      Vec<c128> qi{params[i].second.first, params[i].second.second};
      Vec<c128> qj{params[j].second.first, params[j].second.second};
      bool same = geom::proj_distance<c128>(pi, pj) < 1e-9 &&
                  geom::proj_distance<c128>(qi, qj) < 1e-9;
      CHECK(!same);
    }
}

TEST_CASE("real_form: empty, split, non-real") {
  Mat<c128> ga = Mat<c128>::identity(4);
  Mat<c128> gb(4, 4);
  for (int i = 0; i < 4; ++i) gb(i, i) = c128(double(i + 1));
  pencil::Pencil<c128> p{QuadricForm<c128>(ga), QuadricForm<c128>(gb), true};
  CHECK(pencil::real_form(p, c128(0)) == pencil::RealFormKind::empty);
  CHECK(pencil::real_form(p, c128(0, 1)) == pencil::RealFormKind::non_real);

  Mat<c128> gs(4, 4);
  gs(0, 3) = c128(0.5);
  gs(3, 0) = c128(0.5);
  gs(1, 2) = c128(-0.5);
  gs(2, 1) = c128(-0.5);
  pencil::Pencil<c128> ps{QuadricForm<c128>(gs), QuadricForm<c128>(ga), true};
  CHECK(pencil::real_form(ps, c128(0)) == pencil::RealFormKind::split);
}

TEST_CASE("discriminant roots of a real octet close under conjugation") {
  auto cfg = random_octet<c128>(Rng(909), 2);
  auto p = pencil::pencil_through(cfg);
  auto disc = pencil::discriminant(p);
  REQUIRE(disc.roots.size() == 4);
  for (const auto& r : disc.roots) {
    bool matched = false;
    for (const auto& r2 : disc.roots) {
      Vec<c128> a{cconj(r.x), cconj(r.y)};
      Vec<c128> b{r2.x, r2.y};
      if (geom::proj_distance<c128>(a, b) < 1e-20) matched = true;
    }
    CHECK(matched);
  }
}

TEST_CASE("pencil_through is PGL(4)-equivariant") {
  auto cfg = random_octet<c128>(Rng(60), 4);
  auto p1 = pencil::pencil_through(cfg);
  Rng rng(61);
  Mat<c128> g(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = rqtest::random_real<c128>(rng);
  auto cfg2 = geom::transform(g, cfg);
  auto p2 = pencil::pencil_through(cfg2);
  // transformed original forms must span the same 2-plane as the new basis
  auto qa = geom::transform(g, p1.a()), qb = geom::transform(g, p1.b());
  auto normalize = [](Vec<c128> v) {
    auto n = num::norm2(v);
    num::scale(v, c128(1) / c128(n));
    return v;
  };
  std::vector<Vec<c128>> s1{normalize(qa.coeff_vector()), normalize(qb.coeff_vector())};
  std::vector<Vec<c128>> s2{normalize(p2.a().coeff_vector()), normalize(p2.b().coeff_vector())};
  // orthonormalize s1 for the principal-angle routine
  c128 proj = num::hdot(s1[0], s1[1]);
  num::axpy(s1[1], -proj, s1[0]);
  s1[1] = normalize(s1[1]);
  CHECK(num::max_principal_angle(s1, s2) < 1e-8);
}

TEST_CASE("cross-ratio multiset is stable under basis rotation") {
  auto cfg = random_octet<c128>(Rng(321), 6);
  auto p = pencil::pencil_through(cfg);
  auto d1 = pencil::discriminant(p);
  auto d2 = pencil::discriminant(p.rotated(0.37));
  REQUIRE(d1.distinct_flag);
  REQUIRE(d2.distinct_flag);
  auto m1 = pencil::cross_ratio_multiset<c128>(d1.roots);
  auto m2 = pencil::cross_ratio_multiset<c128>(d2.roots);
  for (std::size_t i = 0; i < 6; ++i) CHECK(dabs(c128(m1[i] - m2[i])) < 1e-7);
}

TEST_CASE("seeded path continuation keeps sigma continuous") {
  auto p = random_real_pencil<c128>(Rng(31337));
  c128 t0(1.0, 0.4);
  auto disc = pencil::discriminant(p);
  for (const auto& rt : disc.roots)
    if (!rt.at_infinity()) REQUIRE(dabs(c128(rt.affine() - t0)) > 0.4);
  auto [prev, prev_minus] = pencil::parametrize(p, t0);
  const double h = 1e-3;
  for (int k = 1; k <= 20; ++k) {
    c128 t = t0 + c128(double(k) * h);
    auto [cur, cur_minus] = pencil::parametrize(p, t, &prev);
    double diff = 0;
    for (int c = 0; c < 4; ++c)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          diff = std::max(diff, dabs(c128(cur.sigma[c](i, j) - prev.sigma[c](i, j))));
    CHECK(diff < 10 * h);
    prev = cur;
  }
}

TEST_CASE("real split member: conjugation preserves the marked ruling") {
  // signature (2,2) member of a real pencil: conj(sigma(conj params)) lands in
  // the same pi1-fiber, so the conjugation is ruling-preserving
  Mat<c128> gs(4, 4);
  gs(0, 3) = c128(0.5);
  gs(3, 0) = c128(0.5);
  gs(1, 2) = c128(-0.5);
  gs(2, 1) = c128(-0.5);
  Mat<c128> ga = Mat<c128>::identity(4);
  pencil::Pencil<c128> p{QuadricForm<c128>(gs), QuadricForm<c128>(ga), true};
  auto [plus, minus] = pencil::parametrize(p, c128(0));
  REQUIRE(pencil::real_form(p, c128(0)) == pencil::RealFormKind::split);
  Rng rng(17);
  c128 s = rqtest::random_complex<c128>(rng), t = rqtest::random_complex<c128>(rng);
  auto conj_image = [&](const c128& u, const c128& v) {
    auto x = plus.eval_sigma(cconj(s), cconj(t), cconj(u), cconj(v));
    for (auto& c : x) c = cconj(c);
    return ProjPoint<c128>(x);
  };
  c128 u1 = rqtest::random_complex<c128>(rng), v1 = rqtest::random_complex<c128>(rng);
  c128 u2 = rqtest::random_complex<c128>(rng), v2 = rqtest::random_complex<c128>(rng);
  auto [f1, s1] = pencil::pull_back(plus, conj_image(u1, v1));
  auto [f2, s2] = pencil::pull_back(plus, conj_image(u2, v2));
  Vec<c128> a{f1.first, f1.second}, b{f2.first, f2.second};
  CHECK(geom::proj_distance<c128>(a, b) < 1e-8);
}
