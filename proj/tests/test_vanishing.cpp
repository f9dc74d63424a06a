#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rq/vanishing.hpp"
#include "test_helpers.hpp"

using namespace rq;
using geom::LinearSubspace;
using geom::PointConfig;
using geom::ProjPoint;
using num::Mat;
using num::Vec;
namespace vn = rq::vanishing;

TEST_CASE("empty_quadric: identity gram, empty real locus, contains L_plus") {
  auto Q = vn::empty_quadric<c128>(1);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(dabs(c128(Q.gram()(i, j) - (i == j ? c128(1) : c128(0)))) == 0.0);
  // min of the form over the unit sphere is 1 (sum of squares of unit vectors)
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    Vec<c128> x(4);
    for (auto& c : x) c = rqtest::random_real<c128>(rng);
    auto n = num::norm2(x);
    num::scale(x, c128(1) / c128(n));
    CHECK(std::abs(field<c128>::to_double(re(Q.evaluate(x))) - 1.0) < 1e-30);
  }
  Vec<c128> w0{c128(1), c128(0, 1), c128(0), c128(0)};
  Vec<c128> w1{c128(0), c128(0), c128(1), c128(0, 1)};
  LinearSubspace<c128> Lp({ProjPoint<c128>(w0), ProjPoint<c128>(w1)});
  for (const auto& p : Lp.span()) CHECK(Q.residual(p) < 1e-30);
}

TEST_CASE("family_subspaces: four disjoint same-family lines on the empty quadric in P^3") {
  auto [lines, pairing] = vn::family_subspaces<c128>(1, 4, 7);
  REQUIRE(lines.size() == 4);
  auto Q = vn::empty_quadric<c128>(1);
  for (const auto& L : lines)
    for (const auto& p : L.span()) CHECK(Q.residual(p) < 1e-10);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      int dim = geom::subspace_intersection_dim(lines[i], lines[j]);
      CHECK(dim == -1);
      CHECK(((dim % 2 + 2) % 2) == (1 % 2));  // dim = -1 matches 2n-1 = 1 mod 2
    }
  // two conjugate pairs
  CHECK(pairing[0] == 1);
  CHECK(pairing[2] == 3);
  for (std::size_t i = 0; i < 4; i += 2) {
    auto cj = lines[i].conj();
    auto a = cj.orthonormal_rows();
    auto b = lines[pairing[i]].orthonormal_rows();
    std::vector<Vec<c128>> av{a.row(0), a.row(1)}, bv{b.row(0), b.row(1)};
    CHECK(num::max_principal_angle(av, bv) < 1e-9);
  }
}

TEST_CASE("family_subspaces: six disjoint 3-planes on the empty quadric in P^7") {
  auto [subs, pairing] = vn::family_subspaces<c128>(2, 6, 11);
  REQUIRE(subs.size() == 6);
  auto Q = vn::empty_quadric<c128>(3);
  for (const auto& L : subs) {
    CHECK(L.dim() == 3);
    for (const auto& p : L.span()) CHECK(Q.residual(p) < 1e-10);
  }
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j)
      CHECK(geom::subspace_intersection_dim(subs[i], subs[j]) == -1);
}

TEST_CASE("lines_meeting_four: generic real lines in P^3 give two lines") {
  Rng rng(5);
  std::vector<LinearSubspace<c128>> L;
  for (int i = 0; i < 4; ++i)
    L.push_back(LinearSubspace<c128>(
        {rqtest::random_real_point<c128>(rng), rqtest::random_real_point<c128>(rng)}));
  auto lines = vn::lines_meeting_four(L[0], L[1], L[2], L[3]);
  int total = 0;
  for (const auto& l : lines) total += l.multiplicity;
  CHECK(total == 2);
  // each line meets all four constraints
  for (const auto& l : lines)
    for (int i = 0; i < 4; ++i)
      CHECK(geom::subspace_intersection_dim(l.line, L[i]) >= 0);
}

TEST_CASE("lines_meeting_four: the same-family configuration has no real line") {
  auto cfg = vn::lines_config(1, 3);
  auto lines = vn::lines_meeting_four(cfg.subspaces[0], cfg.subspaces[1], cfg.subspaces[2],
                                      cfg.subspaces[3]);
  REQUIRE(lines.size() == 2);
  for (const auto& l : lines) CHECK(!l.real);
  // the two lines form a conjugate pair
  auto a = lines[0].line.conj().orthonormal_rows();
  auto b = lines[1].line.orthonormal_rows();
  std::vector<Vec<c128>> av{a.row(0), a.row(1)}, bv{b.row(0), b.row(1)};
  CHECK(num::max_principal_angle(av, bv) < 1e-7);
}

TEST_CASE("lines_meeting_four: r = 2 in P^5 gives three lines with a real one") {
  auto cfg = vn::control_lines_config(2, 17);
  auto lines = vn::lines_meeting_four(cfg.subspaces[0], cfg.subspaces[1], cfg.subspaces[2],
                                      cfg.subspaces[3]);
  int total = 0, real_count = 0;
  for (const auto& l : lines) {
    total += l.multiplicity;
    if (l.real) ++real_count;
  }
  CHECK(total == 3);
  CHECK(real_count >= 1);
}

TEST_CASE("perturbed lines configuration still has no real line") {
  auto cfg = vn::lines_config(1, 3);
  auto pert = vn::perturb(cfg, 1e-3, 99);
  auto lines = vn::lines_meeting_four(pert.subspaces[0], pert.subspaces[1], pert.subspaces[2],
                                      pert.subspaces[3]);
  REQUIRE(lines.size() == 2);
  for (const auto& l : lines) CHECK(!l.real);
}

TEST_CASE("perturb with eps = 0 is the identity") {
  auto cfg = vn::lines_config(1, 3);
  auto same = vn::perturb(cfg, 0.0, 1);
  for (std::size_t i = 0; i < cfg.subspaces.size(); ++i)
    for (std::size_t k = 0; k < cfg.subspaces[i].span().size(); ++k)
      for (int j = 0; j < 4; ++j)
        CHECK(dabs(c128(cfg.subspaces[i].span()[k][j] - same.subspaces[i].span()[k][j])) == 0.0);
}

TEST_CASE("conics_case2: generic real control has four verified conics") {
  auto cfg = vn::conics_case2_config(5, /*want_vanishing=*/false);
  auto conics = vn::conics_case2_run<c128>(cfg);
  REQUIRE(conics.size() == 4);
  int real_count = 0;
  for (const auto& c : conics) {
    CHECK(c.worst_residual < 1e-8);
    if (c.real) ++real_count;
  }
  CHECK(real_count >= 1);
  CHECK(real_count == cfg.expected_real);
}

TEST_CASE("conics_case2: conjugate configuration with no real conics") {
  auto cfg = vn::conics_case2_config(5, /*want_vanishing=*/true);
  auto conics = vn::conics_case2_run<c128>(cfg);
  REQUIRE(conics.size() == 4);
  for (const auto& c : conics) {
    CHECK(c.worst_residual < 1e-8);
    CHECK(!c.real);
  }
  // conjugation closure: the conic multiset is closed under conjugation
  for (const auto& c : conics) {
    std::vector<num::BinaryForm<c128>> conj_coords;
    for (const auto& f : c.coords) conj_coords.push_back(f.conj());
    bool matched = false;
    for (const auto& c2 : conics)
      if (falsify::same_image(conj_coords, c2.coords, 1e-6)) matched = true;
    CHECK(matched);
  }
}

TEST_CASE("conics_case3_config: basis identity and fiber structure") {
  auto cfg = vn::conics_case3_config(9);
  REQUIRE(cfg.subspaces.size() == 8);
  CHECK(std::stod(cfg.metadata.at("basis_identity_residual")) < 1e-10);
  // conjugation pairing of the fibers
  for (std::size_t i = 0; i < 8; i += 2) CHECK(cfg.subspace_pairing[i] == i + 1);
}

TEST_CASE("twisted cubic through six points: real sextets give one real curve") {
  for (std::uint64_t seed : {1ull, 2ull}) {
    // mixed: 2 real + 2 conjugate pairs
    Rng rng(seed * 1000 + 77);
    std::vector<ProjPoint<c128>> pts;
    geom::Pairing pairing(6);
    pts.push_back(rqtest::random_real_point<c128>(rng));
    pairing[0] = 0;
    pts.push_back(rqtest::random_real_point<c128>(rng));
    pairing[1] = 1;
    for (int i = 0; i < 2; ++i) {
      auto p = rqtest::random_complex_point<c128>(rng);
      pts.push_back(p);
      pts.push_back(p.conj());
      pairing[2 + 2 * i] = 3 + 2 * i;
      pairing[3 + 2 * i] = 2 + 2 * i;
    }
    PointConfig<c128> cfg(pts, pairing);
    auto tc = vn::twisted_cubic_through6(cfg, seed, 120);
    CHECK(tc.real);
    CHECK(tc.worst_residual < 1e-8);
  }
}

TEST_CASE("twisted cubic: planted instance is recovered") {
  Rng rng(404);
  falsify::CurveCoords<c128> planted;
  for (int k = 0; k < 4; ++k) {
    Vec<c128> cs(4);
    for (auto& c : cs) c = rqtest::random_real<c128>(rng);
    planted.push_back(num::BinaryForm<c128>(3, cs));
  }
  std::vector<ProjPoint<c128>> pts;
  geom::Pairing pairing(6);
  for (int i = 0; i < 6; ++i) {
    c128 w = rqtest::random_real<c128>(rng);
    pts.push_back(ProjPoint<c128>(falsify::eval_curve(planted, w, c128(1))));
    pairing[i] = i;
  }
  PointConfig<c128> cfg(pts, pairing);
  auto tc = vn::twisted_cubic_through6(cfg, 5, 120);
  CHECK(tc.real);
  CHECK(falsify::same_image(tc.coords, planted, 1e-6));
}

TEST_CASE("plane cubics: generic real octet has 12 singular members") {
  Rng rng(31);
  std::vector<ProjPoint<c128>> pts;
  geom::Pairing pairing(8);
  for (int i = 0; i < 8; ++i) {
    pts.push_back(rqtest::random_real_point<c128>(rng, 2));
    pairing[i] = i;
  }
  PointConfig<c128> cfg(pts, pairing);
  auto pencil12 = vn::plane_cubics_through8(cfg, 3, 2500);
  REQUIRE(pencil12.singular_members.size() == 12);
  int real_irr = 0;
  for (const auto& m : pencil12.singular_members)
    if (m.lambda_real && m.irreducible) ++real_irr;
  // reported, not asserted: a generic real octet has a real irreducible subset
  CHECK(real_irr >= 1);
}

TEST_CASE("plane cubics: perturbed empty-conic octet has no real irreducible member") {
  auto cfg = vn::plane_cubics_config(1e-2, 8);
  auto pencil12 = vn::plane_cubics_through8(cfg.points, 3, 2500);
  REQUIRE(pencil12.singular_members.size() == 12);
  for (const auto& m : pencil12.singular_members) CHECK(!(m.lambda_real && m.irreducible));
}

TEST_CASE("plane cubics: unperturbed points on the empty conic are degenerate") {
  auto cfg = vn::plane_cubics_config(0.0, 8);
  CHECK_THROWS_AS(vn::plane_cubics_through8(cfg.points, 3, 100), Error);
}

TEST_CASE("podd: (1,1) distribution classifies to no real curves and enumerates none") {
  auto cfg = vn::podd_vanishing_config(2, {1, 1}, 21);
  auto p = pencil::pencil_through(cfg.points);
  auto traced = ell::trace_real_locus(pencil::pencil_cast<c53>(p));
  REQUIRE(traced.count() == 2);
  auto parities = ell::point_parities(pencil::pencil_cast<c53>(p), traced, cfg.points);
  CHECK(parities.h4_parity == ell::Parity::even);
  CHECK(parities.p_parity == ell::Parity::odd);
  auto pred = ell::classify(2, parities, true);
  CHECK(pred.real_with_points == 0);
  CHECK(pred.complex_pairs == 2);
  auto res = quartics::enumerate_quartics(p, cfg.points);
  REQUIRE(res.curves.size() == 4);
  CHECK(res.real_split == 0);
  CHECK(res.real_twisted == 0);
  CHECK(res.complex_pairs == 2);
}

TEST_CASE("podd rejects even distributions") {
  CHECK_THROWS_AS(vn::podd_config(2, {2, 2}, 3), Error);
}

TEST_CASE("cubic family configs pass the structural checks") {
  for (const char* which : {"cubics-2p", "cubics-3p", "cubics-4p"}) {
    auto cfg = vn::cubic_family_config(which, 13);
    auto checks = vn::cubic_config_checks(cfg);
    for (const auto& c : checks) {
      INFO(which, " ", c.name, " ", c.note);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("a broken configuration fails the disjointness check") {
  auto cfg = vn::cubic_family_config("cubics-4p", 13);
  // duplicate one line: two constraints in a common fiber and not disjoint
  cfg.subspaces[2] = cfg.subspaces[0];
  cfg.subspaces[3] = cfg.subspaces[1];
  auto checks = vn::cubic_config_checks(cfg);
  bool disjoint_pass = true;
  for (const auto& c : checks)
    if (c.name == "eight_disjoint_constraints") disjoint_pass = c.pass;
  CHECK(!disjoint_pass);
}

TEST_CASE("higher_odd_config: d = 3 matches cubics-2p shape; d = 5 has 8 points + 4 lines") {
  auto c3 = vn::higher_odd_config(3, 5);
  CHECK(c3.points.size() == 4);
  CHECK(c3.subspaces.size() == 4);
  auto c5 = vn::higher_odd_config(5, 5);
  CHECK(c5.points.size() == 8);
  CHECK(c5.subspaces.size() == 4);
  auto Q = vn::empty_quadric<c128>(1);
  for (std::size_t i = 0; i < c5.points.size(); ++i) CHECK(Q.residual(c5.points.point(i)) < 1e-10);
}

TEST_CASE("falsification: lines vanishing config is consistent, control is refuted") {
  auto cfg = vn::lines_config(1, 3);
  auto v = vn::falsification_search(cfg, "line", 400, 5);
  CHECK(v.real_solutions_found == 0);
  CHECK(v.status == vn::VerdictStatus::vanishing_consistent);

  auto ctrl = vn::control_lines_config(1, 23);
  auto vc = vn::falsification_search(ctrl, "line", 400, 5);
  CHECK(vc.real_solutions_found >= 1);
  CHECK(vc.status == vn::VerdictStatus::refuted);
}

TEST_CASE("falsification: planted cubic control is found") {
  auto ctrl = vn::control_config("control-cubics", 31);
  auto v = vn::falsification_search(ctrl, "cubic", 500, 11);
  CHECK(v.real_solutions_found >= 1);
}

TEST_CASE("falsification: cubics-2p reports no real cubic") {
  auto cfg = vn::cubic_family_config("cubics-2p", 13);
  auto v = vn::falsification_search(cfg, "cubic", 500, 11, vn::cubic_config_checks(cfg));
  CHECK(v.real_solutions_found == 0);
  CHECK(v.status == vn::VerdictStatus::vanishing_consistent);
}

TEST_CASE("verdict monotonicity: more attempts never flip refuted to consistent") {
  auto ctrl = vn::control_lines_config(1, 23);
  auto v1 = vn::falsification_search(ctrl, "line", 300, 5);
  auto v2 = vn::falsification_search(ctrl, "line", 600, 5);
  REQUIRE(v1.status == vn::VerdictStatus::refuted);
  CHECK(v2.real_solutions_found >= v1.real_solutions_found);
  CHECK(v2.status == vn::VerdictStatus::refuted);
}
