#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rq/octets.hpp"
#include "rq/quartics.hpp"
#include "test_helpers.hpp"

using namespace rq;
using geom::PointConfig;
using geom::ProjPoint;
using geom::QuadricForm;
using num::BinaryForm;
using num::Mat;
using num::Vec;
using quartics::Reality;

namespace {

// Synthetic planted instance: a random marked quadric, a random (1,3) curve
// on it, and 8 points sampled from the curve. The pencil through the points
// contains the quadric, whose parameter is recovered by projection.
struct Planted {
  PointConfig<c128> config;
  pencil::Pencil<c128> p;
  c128 t_star;
  BinaryForm<c128> g1, g2;
  std::array<BinaryForm<c128>, 4> coords;
};

Planted plant_instance(std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 20; ++attempt) {
    Rng sub = rng.fork(attempt);
    // random complex symmetric quadric
    Mat<c128> g(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        g(i, j) = rqtest::random_complex<c128>(sub);
        g(j, i) = g(i, j);
      }
    QuadricForm<c128> Q(g);
    pencil::Pencil<c128> tmp(Q, Q, false);  // only for parametrize()
    pencil::MarkedMember<c128> member;
    try {
      auto [plus, minus] = pencil::parametrize(tmp, c128(0));
      member = plus;
    } catch (const Error&) {
      continue;
    }
    Vec<c128> c1(4), c2(4);
    for (auto& c : c1) c = rqtest::random_complex<c128>(sub);
    for (auto& c : c2) c = rqtest::random_complex<c128>(sub);
    BinaryForm<c128> g1(3, c1), g2(3, c2);
    // curve: x(u,v) = sigma(g1(u,v), g2(u,v), u, v)
    std::array<BinaryForm<c128>, 4> coords;
    for (int k = 0; k < 4; ++k) {
      Vec<c128> cs(5, c128(0));
      for (int j = 0; j < 4; ++j) {
        cs[j] += member.sigma[k](0, 0) * g1.coeffs()[j] + member.sigma[k](1, 0) * g2.coeffs()[j];
        cs[j + 1] += member.sigma[k](0, 1) * g1.coeffs()[j] + member.sigma[k](1, 1) * g2.coeffs()[j];
      }
      coords[k] = BinaryForm<c128>(4, cs);
    }
    std::vector<ProjPoint<c128>> pts;
    for (int i = 0; i < 8; ++i) {
      // parameters spread over P^1: ratio of complex normals
      c128 num_ = rqtest::random_complex<c128>(sub), den = rqtest::random_complex<c128>(sub);
      if (dabs(den) < 1e-3) den = c128(1);
      c128 w = num_ / den;
      pts.push_back(ProjPoint<c128>(quartics::detail::eval_coords(coords, w)));
    }
    PointConfig<c128> cfg(pts);
    pencil::Pencil<c128> pen;
    try {
      pen = pencil::pencil_through(cfg);
      auto disc = pencil::discriminant(pen);
      if (!disc.distinct_flag) continue;
    } catch (const Error&) {
      continue;
    }
    // parameter of Q in the pencil basis
    auto va = pen.a().coeff_vector();
    auto vb = pen.b().coeff_vector();
    auto vq = Q.coeff_vector();
    c128 alpha = num::hdot(va, vq), beta = num::hdot(vb, vq);
    // residual of Q against the pencil plane must vanish
    Vec<c128> recon(10, c128(0));
    num::axpy(recon, alpha, va);
    num::axpy(recon, beta, vb);
    if (geom::proj_distance<c128>(recon, vq) > 1e-20) continue;
    if (dabs(alpha) < 1e-6) continue;  // t* at infinity: resample
    Planted out{cfg, pen, beta / alpha, g1, g2, coords};
    return out;
  }
  fail(errc::no_solution_found, "plant_instance: no generic instance found");
}

}  // namespace

TEST_CASE("incidence_det vanishes at the planted parameter and not elsewhere") {
  auto inst = plant_instance(7);
  double at_star = 1e300;
  for (auto ruling : {pencil::Ruling::plus, pencil::Ruling::minus}) {
    try {
      at_star = std::min(at_star,
                         dabs(quartics::incidence_det(inst.p, inst.t_star, ruling, inst.config)));
    } catch (const Error&) {
    }
  }
  CHECK(at_star < 1e-9);

  // generic parameters, away from all four solutions and the discriminant
  // roots, stay far from zero in both rulings
  auto sols = quartics::find_marked_quadrics(inst.p, inst.config);
  auto disc = pencil::discriminant(inst.p);
  Rng rng(3);
  int checked = 0;
  for (int trial = 0; trial < 24 && checked < 5; ++trial) {
    c128 t = rqtest::random_complex<c128>(rng);
    Vec<c128> tp{t, c128(1)};
    double sep = 1e300;
    for (const auto& s : sols) {
      auto [l, m] = s.param_p1();
      Vec<c128> b{l, m};
      sep = std::min(sep, geom::proj_distance<c128>(tp, b));
    }
    for (const auto& rt : disc.roots) {
      Vec<c128> b{rt.x, rt.y};
      sep = std::min(sep, geom::proj_distance<c128>(tp, b));
    }
    if (sep < 0.1) continue;
    double dmin = 1e300;
    try {
      for (auto ruling : {pencil::Ruling::plus, pencil::Ruling::minus})
        dmin = std::min(dmin, dabs(quartics::incidence_det(inst.p, t, ruling, inst.config)));
    } catch (const Error&) {
      continue;
    }
    // the synthetic family keeps a modest generic floor, many orders above
    // the solution values
    CHECK(dmin > 1e-10);
    CHECK(dmin > 1e3 * std::max(at_star, 1e-30));
    ++checked;
  }
  CHECK(checked >= 3);
}

TEST_CASE("row rescaling invariance of the incidence determinant") {
  auto inst = plant_instance(11);
  Rng rng(5);
  c128 t = c128(0.17, 0.39);
  auto [plus, minus] = pencil::parametrize(inst.p, t);
  auto M1 = quartics::incidence_matrix(plus, inst.config);
  // scaling a point's homogeneous parameters rescales its row; normalization
  // keeps |det| fixed, so rebuild with scaled pulled-back parameters
  auto [st, uv] = pencil::pull_back(plus, inst.config.point(3));
  c128 sc = rqtest::random_complex<c128>(rng);
  Vec<c128> row = quartics::incidence_row<c128>({st.first * sc, st.second * sc},
                                                {uv.first * sc, uv.second * sc});
  auto n = num::norm2(row);
  num::scale(row, c128(1) / c128(n));
  Mat<c128> M2 = M1;
  M2.set_row(3, row);
  CHECK(std::abs(dabs(num::determinant(M1)) - dabs(num::determinant(M2))) < 1e-25);
}

TEST_CASE("find_marked_quadrics recovers the planted parameter") {
  auto inst = plant_instance(13);
  auto sols = quartics::find_marked_quadrics(inst.p, inst.config);
  REQUIRE(sols.size() == 4);
  double best = 1e300;
  for (const auto& s : sols) {
    auto [l, m] = s.param_p1();
    Vec<c128> a{l, m}, b{inst.t_star, c128(1)};
    best = std::min(best, geom::proj_distance<c128>(a, b));
  }
  CHECK(best < 1e-8);
}

TEST_CASE("planted curve is recovered with proportional cubics") {
  auto inst = plant_instance(17);
  auto sols = quartics::find_marked_quadrics(inst.p, inst.config);
  REQUIRE(sols.size() == 4);
  // the planted solution is the one at t_star
  const quartics::MarkedQuadricSolution<c128>* planted = nullptr;
  for (const auto& s : sols) {
    auto [l, m] = s.param_p1();
    Vec<c128> a{l, m}, b{inst.t_star, c128(1)};
    if (geom::proj_distance<c128>(a, b) < 1e-8) planted = &s;
  }
  REQUIRE(planted != nullptr);
  auto curve = quartics::curve_on_quadric(*planted, inst.config);
  auto quartic = quartics::assemble_quartic(curve, inst.config);
  CHECK(quartic.max_residual < 1e-10);
  // compare canonicalized planted coords against the recovered curve
  auto canon_planted = quartics::canonicalize(inst.coords, inst.config, 1e-6);
  REQUIRE(canon_planted.has_value());
  CHECK(quartics::canonical_distance(canon_planted->first, quartic.coords) < 1e-7);
}

TEST_CASE("generic octet: four curves, free point property, holdout invariance") {
  auto cfg = rqtest::random_octet<c128>(Rng(2025), 4);
  auto p = pencil::pencil_through(cfg);
  auto res = quartics::enumerate_quartics(p, cfg);
  REQUIRE(res.curves.size() == 4);
  for (const auto& q : res.curves) CHECK(q.max_residual < 1e-8);

  // free-point property for every solution and every holdout choice
  for (const auto& sol : res.solutions) {
    std::array<BinaryForm<c128>, 4> first_coords;
    for (std::size_t h = 0; h < 8; ++h) {
      auto b = quartics::curve_on_quadric(sol, cfg, h);  // throws on failure
      if (h == 0) {
        auto q = quartics::assemble_quartic(b, cfg);
        first_coords = q.coords;
      }
    }
    // holdout choice does not change the curve
    auto b7 = quartics::curve_on_quadric(sol, cfg, 7);
    auto q7 = quartics::assemble_quartic(b7, cfg);
    CHECK(quartics::canonical_distance(first_coords, q7.coords) < 1e-7);
  }
}

TEST_CASE("real octet: solution parameters close under conjugation") {
  auto cfg = rqtest::random_octet<c128>(Rng(31), 2);
  auto p = pencil::pencil_through(cfg);
  auto sols = quartics::find_marked_quadrics(p, cfg);
  REQUIRE(sols.size() == 4);
  for (const auto& s : sols) {
    auto [l, m] = s.param_p1();
    Vec<c128> target{cconj(l), cconj(m)};
    double best = 1e300;
    for (const auto& s2 : sols) {
      auto [l2, m2] = s2.param_p1();
      Vec<c128> b{l2, m2};
      best = std::min(best, geom::proj_distance<c128>(target, b));
    }
    CHECK(best < 1e-8);
  }
}

TEST_CASE("oracle agrees with the pencil-based enumeration") {
  auto cfg = rqtest::random_octet<c128>(Rng(77), 4);
  auto p = pencil::pencil_through(cfg);
  auto res = quartics::enumerate_quartics(p, cfg);
  REQUIRE(res.curves.size() == 4);
  quartics::OracleOptions opt;
  opt.restarts = 120;
  opt.seed = 99;
  auto oracle = quartics::oracle_enumerate(cfg, opt);
  CHECK(oracle.size() == 4);
  auto rep = quartics::cross_check(res.curves, oracle);
  CHECK(rep.success);
  CHECK(rep.max_distance < 1e-6);
}

TEST_CASE("reality classes match the row structure") {
  // row 2c: four real curves
  auto oct = octets::octet_for_row(octets::RowKind::row2c, 5);
  auto p = pencil::pencil_through(oct.config);
  auto res = quartics::enumerate_quartics(p, oct.config);
  REQUIRE(res.curves.size() == 4);
  CHECK(res.real_split == 4);
  CHECK(res.real_twisted == 0);
  CHECK(res.complex_pairs == 0);
}

TEST_CASE("row 3: two split and two twisted real curves") {
  auto oct = octets::octet_for_row(octets::RowKind::row3, 8);
  auto p = pencil::pencil_through(oct.config);
  auto res = quartics::enumerate_quartics(p, oct.config);
  REQUIRE(res.curves.size() == 4);
  CHECK(res.real_split == 2);
  CHECK(res.real_twisted == 2);
  CHECK(res.complex_pairs == 0);
}

TEST_CASE("conjugation equivariance of the enumeration") {
  auto cfg = rqtest::random_octet<c128>(Rng(123), 2);
  auto p = pencil::pencil_through(cfg);
  auto res = quartics::enumerate_quartics(p, cfg);
  auto cfg_c = cfg.conj();
  auto p_c = pencil::pencil_through(cfg_c);
  auto res_c = quartics::enumerate_quartics(p_c, cfg_c);
  REQUIRE(res.curves.size() == 4);
  REQUIRE(res_c.curves.size() == 4);
  // conj of each canonical curve must appear among the conj-config curves
  // canonicalized with the conjugated gauge points
  for (const auto& q : res.curves) {
    std::array<BinaryForm<c128>, 4> conj_coords;
    for (int k = 0; k < 4; ++k) conj_coords[k] = q.coords[k].conj();
    auto canon = quartics::canonicalize(conj_coords, cfg_c, 1e-6);
    REQUIRE(canon.has_value());
    double best = 1e300;
    for (const auto& q2 : res_c.curves)
      best = std::min(best, quartics::canonical_distance(canon->first, q2.coords));
    CHECK(best < 1e-6);
  }
}

TEST_CASE("PGL(4,R) equivariance: reality classes are invariant") {
  auto oct = octets::octet_for_row(octets::RowKind::row2b, 9);
  auto p = pencil::pencil_through(oct.config);
  auto res = quartics::enumerate_quartics(p, oct.config);
  Rng rng(5150);
  Mat<c128> g(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = rqtest::random_real<c128>(rng);
  auto cfg2 = geom::transform(g, oct.config);
  auto p2 = pencil::pencil_through(cfg2);
  auto res2 = quartics::enumerate_quartics(p2, cfg2);
  CHECK(res.real_split == res2.real_split);
  CHECK(res.real_twisted == res2.real_twisted);
  CHECK(res.complex_pairs == res2.complex_pairs);
}

TEST_CASE("each curve lies on exactly one member") {
  auto cfg = rqtest::random_octet<c128>(Rng(555), 0);
  auto p = pencil::pencil_through(cfg);
  auto res = quartics::enumerate_quartics(p, cfg);
  REQUIRE(res.curves.size() == 4);
  Rng rng(556);
  for (std::size_t i = 0; i < res.curves.size(); ++i) {
    // samples of curve i must stay off members at distant parameters
    auto [li, mi] = res.curves[i].member_param;
    for (int trial = 0; trial < 4; ++trial) {
      c128 t(rqtest::random_complex<c128>(rng));
      Vec<c128> a{t, c128(1)}, b{li, mi};
      if (geom::proj_distance<c128>(a, b) < 1e-3) continue;
      auto member = p.member(t);
      double worst_off = 0;
      for (int s = 0; s < 6; ++s) {
        c128 w = rqtest::random_complex<c128>(rng);
        auto x = quartics::detail::eval_coords(res.curves[i].coords, w);
        worst_off = std::max(worst_off, member.residual(x));
      }
      CHECK(worst_off > 1e-4);
    }
  }
}
