#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rq/ellreal.hpp"
#include "rq/octets.hpp"
#include "test_helpers.hpp"

using namespace rq;
using ell::Parity;
using ell::Pi1Class;
using num::Mat;
using num::Vec;
using octets::RowKind;

TEST_CASE("trace: two-oval pencil with even hyperplane class") {
  auto [p, traced] = octets::pencil_with_topology<c128>({2, Parity::even}, 1);
  CHECK(traced.count() == 2);
  for (const auto& comp : traced.components) CHECK(comp.pi1 == Pi1Class::trivial);
}

TEST_CASE("trace: two-oval pencil with odd hyperplane class") {
  auto [p, traced] = octets::pencil_with_topology<c128>({2, Parity::odd}, 2);
  CHECK(traced.count() == 2);
  for (const auto& comp : traced.components) CHECK(comp.pi1 == Pi1Class::nontrivial);
}

TEST_CASE("trace: one-oval pencil") {
  auto [p, traced] = octets::pencil_with_topology<c128>({1, Parity::even}, 3);
  CHECK(traced.count() == 1);
}

TEST_CASE("trace: empty locus is certified, not just unfound") {
  auto [p, traced] = octets::pencil_with_topology<c128>({0, Parity::even}, 4);
  CHECK(traced.count() == 0);
  CHECK(traced.empty_certified);
}

TEST_CASE("loops close at the start or its antipode") {
  auto [p, traced] = octets::pencil_with_topology<c128>({2, Parity::odd}, 5);
  for (const auto& comp : traced.components) {
    REQUIRE(comp.samples.size() > 4);
    const auto& first = comp.samples.front();
    const auto& last = comp.samples.back();
    double ds = ell::detail::dist4(last, first);
    Vec<c53> anti(4);
    for (int i = 0; i < 4; ++i) anti[i] = -first[i];
    double da = ell::detail::dist4(last, anti);
    CHECK(std::min(ds, da) < 1e-6);
    CHECK((comp.pi1 == Pi1Class::nontrivial) == (da < ds));
  }
}

TEST_CASE("pi1 antipodal classification agrees with hyperplane parity") {
  int checked = 0;
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    auto want = (seed % 2 == 0) ? octets::Topology{2, Parity::even}
                                : octets::Topology{2, Parity::odd};
    auto [p, traced] = octets::pencil_with_topology<c128>(want, seed);
    Rng rng(seed);
    for (const auto& comp : traced.components) {
      for (int t = 0; t < 5; ++t) {
        Vec<c53> h(4);
        for (auto& c : h) h[&c - h.data()] = c53(rng.normal());
        CHECK(ell::pi1_by_hyperplane(comp, h) == comp.pi1);
        ++checked;
      }
    }
  }
  CHECK(checked >= 40);
}

TEST_CASE("octet sampled on a two-oval curve re-traces to two ovals") {
  auto oct = octets::octet_for_row(RowKind::row2c, 11);
  auto p = pencil::pencil_through(oct.config);
  auto traced = ell::trace_real_locus(pencil::pencil_cast<c53>(p));
  CHECK(traced.count() == 2);
}

TEST_CASE("point_parities: distributions and conjugate pairs") {
  auto want = octets::row_topology(RowKind::row2b);
  auto [p, traced] = octets::pencil_with_topology<c128>(want, 21);

  auto oct31 = octets::octet_on_pencil(p, traced, {3, 1}, 2, 22);
  auto pd31 = ell::point_parities(pencil::pencil_cast<c53>(p), traced, oct31.config);
  CHECK(pd31.p_parity == Parity::odd);
  CHECK(pd31.per_component_real_point_counts[0] + pd31.per_component_real_point_counts[1] == 4);

  auto oct22 = octets::octet_on_pencil(p, traced, {2, 2}, 2, 23);
  auto pd22 = ell::point_parities(pencil::pencil_cast<c53>(p), traced, oct22.config);
  CHECK(pd22.p_parity == Parity::even);

  auto oct00 = octets::octet_on_pencil(p, traced, {0, 0}, 4, 24);
  auto pd00 = ell::point_parities(pencil::pencil_cast<c53>(p), traced, oct00.config);
  CHECK(pd00.p_parity == Parity::even);
  CHECK(pd00.per_component_real_point_counts == std::vector<int>{0, 0});
  CHECK(pd00.h4_parity == Parity::even);
}

TEST_CASE("point_parities rejects off-curve points") {
  auto [p, traced] = octets::pencil_with_topology<c128>({2, Parity::even}, 31);
  auto oct = octets::octet_on_pencil(p, traced, {2, 2}, 2, 32);
  // swap a declared-real point for a random one
  std::vector<geom::ProjPoint<c128>> pts(oct.config.points().begin(), oct.config.points().end());
  Rng rng(33);
  pts[0] = rqtest::random_real_point<c128>(rng);
  geom::PointConfig<c128> bad(pts, oct.config.pairing());
  CHECK_THROWS_AS(ell::point_parities(pencil::pencil_cast<c53>(p), traced, bad), Error);
}

TEST_CASE("classify implements the table") {
  ell::ParityData pd;
  pd.h4_parity = Parity::even;
  pd.p_parity = Parity::even;

  auto r1 = ell::classify(1, pd, true);
  CHECK(r1.real_with_points == 2);
  CHECK(r1.real_empty == 0);
  CHECK(r1.complex_pairs == 1);

  pd.h4_parity = Parity::odd;
  pd.p_parity = Parity::even;
  auto r2a = ell::classify(2, pd, false);
  CHECK(r2a.real_with_points == 0);
  CHECK(r2a.complex_pairs == 2);

  pd.h4_parity = Parity::even;
  pd.p_parity = Parity::odd;
  auto r2b = ell::classify(2, pd, true);
  CHECK(r2b.real_with_points == 0);
  CHECK(r2b.complex_pairs == 2);

  pd.p_parity = Parity::even;
  auto r2c = ell::classify(2, pd, true);
  CHECK(r2c.real_with_points == 4);

  pd.h4_parity = Parity::odd;
  pd.p_parity = Parity::odd;
  auto r2d = ell::classify(2, pd, true);
  CHECK(r2d.real_with_points == 4);

  pd.p_parity = Parity::even;
  auto r3 = ell::classify(0, pd, false);
  CHECK(r3.real_with_points == 2);
  CHECK(r3.real_empty == 2);
  CHECK(r3.complex_pairs == 0);

  CHECK_THROWS_AS(ell::classify(0, pd, true), Error);
  // the sum rule holds on every row
  for (auto r : {r1, r2a, r2b, r2c, r2d, r3})
    CHECK(r.real_with_points + r.real_empty + 2 * r.complex_pairs == 4);
}

TEST_CASE("parity_obstruction") {
  using ell::Obstruction;
  CHECK(ell::parity_obstruction(4, Parity::even, Parity::odd) == Obstruction::obstructed);
  CHECK(ell::parity_obstruction(4, Parity::even, Parity::even) == Obstruction::not_obstructed);
  CHECK(ell::parity_obstruction(4, Parity::odd, Parity::odd) == Obstruction::not_obstructed);
  CHECK(ell::parity_obstruction(4, Parity::odd, Parity::even) == Obstruction::obstructed);
  // h even, p odd stays obstructed for every even degree
  for (int d = 4; d <= 12; d += 2)
    CHECK(ell::parity_obstruction(d, Parity::even, Parity::odd) == Obstruction::obstructed);
  CHECK_THROWS_AS(ell::parity_obstruction(3, Parity::even, Parity::even), Error);
}

TEST_CASE("tracing is invariant under real projective transformations") {
  auto [p, traced] = octets::pencil_with_topology<c128>({2, Parity::odd}, 41);
  Rng rng(42);
  Mat<c128> g(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = rqtest::random_real<c128>(rng);
  auto qa = geom::transform(g, p.a());
  auto qb = geom::transform(g, p.b());
  auto p2 = octets::detail::make_pencil(qa, qb, true);
  auto traced2 = ell::trace_real_locus(pencil::pencil_cast<c53>(p2));
  CHECK(traced2.count() == traced.count());
  int nt1 = 0, nt2 = 0;
  for (const auto& c : traced.components)
    if (c.pi1 == Pi1Class::nontrivial) ++nt1;
  for (const auto& c : traced2.components)
    if (c.pi1 == Pi1Class::nontrivial) ++nt2;
  CHECK(nt1 == nt2);
}
