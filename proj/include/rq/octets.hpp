#pragma once

// Octet generators with controlled real topology. A pencil with the target
// topology is built from a bidegree-(2,2) form on the split quadric (or from
// definite members for the empty case), verified by tracing, and points are
// sampled on the base curve per the requested distribution.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "rq/ellreal.hpp"
#include "rq/error.hpp"
#include "rq/pencil.hpp"
#include "rq/projective.hpp"
#include "rq/quartics.hpp"
#include "rq/rng.hpp"
#include "rq/scalar.hpp"

namespace rq::octets {

using geom::PointConfig;
using geom::ProjPoint;
using geom::QuadricForm;
using num::Mat;
using num::Vec;
using pencil::Pencil;

enum class RowKind { row1, row2a, row2b, row2c, row2d, row3 };

inline const char* row_name(RowKind r) {
  switch (r) {
    case RowKind::row1: return "1";
    case RowKind::row2a: return "2a";
    case RowKind::row2b: return "2b";
    case RowKind::row2c: return "2c";
    case RowKind::row2d: return "2d";
    case RowKind::row3: return "3";
  }
  return "?";
}

namespace detail {

// bidegree (da, db) coefficient tensor in s^{da-a} t^a u^{db-b} v^b
template <class C>
struct BiForm {
  std::size_t da = 0, db = 0;
  Mat<C> coef;  // (da+1) x (db+1)
  BiForm(std::size_t a, std::size_t b) : da(a), db(b), coef(a + 1, b + 1) {}
};

template <class C>
inline BiForm<C> bimul(const BiForm<C>& f, const BiForm<C>& g) {
  BiForm<C> out(f.da + g.da, f.db + g.db);
  for (std::size_t a1 = 0; a1 <= f.da; ++a1)
    for (std::size_t b1 = 0; b1 <= f.db; ++b1)
      for (std::size_t a2 = 0; a2 <= g.da; ++a2)
        for (std::size_t b2 = 0; b2 <= g.db; ++b2)
          out.coef(a1 + a2, b1 + b2) += f.coef(a1, b1) * g.coef(a2, b2);
  return out;
}

template <class C>
inline BiForm<C> biadd(const BiForm<C>& f, const BiForm<C>& g, const C& scale_g) {
  BiForm<C> out = f;
  for (std::size_t a = 0; a <= f.da; ++a)
    for (std::size_t b = 0; b <= f.db; ++b) out.coef(a, b) += scale_g * g.coef(a, b);
  return out;
}

// Segre coordinates x = (su, sv, tu, tv) as (1,1) forms
template <class C>
inline std::array<BiForm<C>, 4> segre_coords() {
  std::array<BiForm<C>, 4> x{BiForm<C>(1, 1), BiForm<C>(1, 1), BiForm<C>(1, 1), BiForm<C>(1, 1)};
  x[0].coef(0, 0) = C(1);
  x[1].coef(0, 1) = C(1);
  x[2].coef(1, 0) = C(1);
  x[3].coef(1, 1) = C(1);
  return x;
}

template <class C>
inline Mat<C> segre_gram() {
  Mat<C> g(4, 4);
  g(0, 3) = C(0.5);
  g(3, 0) = C(0.5);
  g(1, 2) = C(-0.5);
  g(2, 1) = C(-0.5);
  return g;  // x0 x3 - x1 x2
}

// restriction of a quadric coefficient vector to the split quadric as a
// bidegree (2,2) form
template <class C>
inline Vec<C> restrict_to_torus(const Vec<C>& quad_coeffs) {
  auto x = segre_coords<C>();
  QuadricForm<C> Q = QuadricForm<C>::from_coeff_vector(3, quad_coeffs);
  BiForm<C> acc(2, 2);
  const auto& g = Q.gram();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (g(i, j) == C(0)) continue;
      BiForm<C> prod = bimul(x[i], x[j]);
      acc = biadd(acc, prod, g(i, j));
    }
  Vec<C> out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) out.push_back(acc.coef(a, b));
  return out;
}

// solve for a real quadric whose torus restriction is the target (2,2) form
template <class C>
inline QuadricForm<C> quadric_with_restriction(const BiForm<C>& target) {
  Mat<C> M(9, 10);
  for (int j = 0; j < 10; ++j) {
    Vec<C> e(10, C(0));
    e[j] = C(1);
    auto col = restrict_to_torus<C>(e);
    for (int i = 0; i < 9; ++i) M(i, j) = col[i];
  }
  Vec<C> rhs;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) rhs.push_back(target.coef(a, b));
  Vec<C> coeffs = num::pinv_solve(M, rhs, real_t<C>(field<C>::from_double(1e-12)));
  return QuadricForm<C>::from_coeff_vector(3, coeffs);
}

// orthonormalize the coefficient vectors of two quadrics into a pencil
template <class C>
inline Pencil<C> make_pencil(const QuadricForm<C>& A, const QuadricForm<C>& B, bool real_basis) {
  auto va = A.coeff_vector();
  auto na = num::norm2(va);
  num::scale(va, C(real_t<C>(1) / na));
  auto vb = B.coeff_vector();
  C proj = num::hdot(va, vb);
  num::axpy(vb, -proj, va);
  auto nb = num::norm2(vb);
  num::scale(vb, C(real_t<C>(1) / nb));
  return Pencil<C>(QuadricForm<C>::from_coeff_vector(3, va),
                   QuadricForm<C>::from_coeff_vector(3, vb), real_basis);
}

template <class C>
inline QuadricForm<C> random_real_quadric(Rng& rng) {
  Mat<C> g(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      g(i, j) = C(field<C>::from_double(rng.normal()));
      g(j, i) = g(i, j);
    }
  return QuadricForm<C>(g);
}

}  // namespace detail

// target topology of the real base locus
struct Topology {
  int count = 0;
  ell::Parity h4 = ell::Parity::even;  // meaningful when count == 2
};

inline Topology row_topology(RowKind kind) {
  switch (kind) {
    case RowKind::row1: return {1, ell::Parity::even};
    case RowKind::row2a: return {2, ell::Parity::odd};
    case RowKind::row2b: return {2, ell::Parity::even};
    case RowKind::row2c: return {2, ell::Parity::even};
    case RowKind::row2d: return {2, ell::Parity::odd};
    case RowKind::row3: return {0, ell::Parity::even};
  }
  return {};
}

// real-point distribution over components plus conjugate-pair count
inline std::pair<std::vector<int>, int> row_distribution(RowKind kind) {
  switch (kind) {
    case RowKind::row1: return {{2}, 3};
    case RowKind::row2a: return {{2, 2}, 2};
    case RowKind::row2b: return {{1, 1}, 3};
    case RowKind::row2c: return {{2, 2}, 2};
    case RowKind::row2d: return {{1, 1}, 3};
    case RowKind::row3: return {{}, 4};
  }
  return {};
}

// Build a real pencil whose traced topology matches the target; seeds walk
// deterministically until the trace verifies.
template <class C>
inline std::pair<Pencil<C>, ell::OvalDecomposition<c53>> pencil_with_topology(
    const Topology& want, std::uint64_t seed) {
  using detail::BiForm;
  for (std::uint64_t sub = 0; sub < 40; ++sub) {
    Rng rng(seed * 1000003u + sub);
    Pencil<C> cand;
    if (want.count == 0) {
      Mat<C> ga = Mat<C>::identity(4);
      cand = detail::make_pencil(QuadricForm<C>(ga), detail::random_real_quadric<C>(rng), true);
    } else if (want.count == 1) {
      // sphere cut by a perturbed paraboloid: one real circle survives
      Mat<C> ga = Mat<C>::identity(4);
      ga(3, 3) = C(-1);
      Mat<C> gb(4, 4);
      gb(0, 0) = C(1);
      gb(1, 1) = C(1);
      gb(2, 3) = C(-0.5);
      gb(3, 2) = C(-0.5);
      auto pert = detail::random_real_quadric<C>(rng);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) gb(i, j) += C(0.05) * pert.gram()(i, j);
      cand = detail::make_pencil(QuadricForm<C>(ga), QuadricForm<C>(gb), true);
    } else {
      // split quadric plus a quadric whose torus restriction has the target
      // zero set: two (1,1) loops for H4 even, two ruling-parallel loops for odd
      BiForm<C> f0(2, 2);
      if (want.h4 == ell::Parity::even) {
        BiForm<C> g1(1, 1), g2(1, 1);
        g1.coef(0, 1) = C(1);   // sv
        g1.coef(1, 0) = C(-1);  // -tu
        g2.coef(0, 0) = C(1);   // su
        g2.coef(1, 1) = C(1);   // tv
        f0 = detail::bimul(g1, g2);
      } else {
        BiForm<C> q1(2, 0), q2(0, 2);
        q1.coef(0, 0) = C(1);  // s^2
        q1.coef(2, 0) = C(1);  // t^2
        q2.coef(0, 0) = C(1);  // u^2
        q2.coef(0, 2) = C(-4);  // -4 v^2
        f0 = detail::bimul(q1, q2);
      }
      BiForm<C> noise(2, 2);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) noise.coef(a, b) = C(field<C>::from_double(rng.normal()));
      f0 = detail::biadd(f0, noise, C(0.18));
      QuadricForm<C> Q2 = detail::quadric_with_restriction(f0);
      cand = detail::make_pencil(QuadricForm<C>(detail::segre_gram<C>()), Q2, true);
    }
    try {
      auto disc = pencil::discriminant(cand);
      if (!disc.distinct_flag) continue;
      auto traced = ell::trace_real_locus(pencil::pencil_cast<c53>(cand));
      if (traced.count() != want.count) continue;
      if (want.count == 2) {
        bool all_trivial = true;
        for (const auto& comp : traced.components)
          if (comp.pi1 == ell::Pi1Class::nontrivial) all_trivial = false;
        ell::Parity h = all_trivial ? ell::Parity::even : ell::Parity::odd;
        if (h != want.h4) continue;
        // mixed pi1 classes would be inconsistent
        auto c0 = traced.components[0].pi1, c1 = traced.components[1].pi1;
        if (c0 != c1) continue;
      }
      if (want.count == 0 && !traced.empty_certified) continue;
      return {cand, traced};
    } catch (const Error&) {
      continue;
    }
  }
  fail(errc::no_solution_found, "pencil_with_topology: no verified pencil in the seed budget");
}

// polish a double-precision sample to a real point on the base curve; the
// gauge is adapted to the start so the correction stays local to its oval
template <class C>
inline std::optional<ProjPoint<C>> polish_real_point(const Pencil<C>& p, const Vec<c53>& sample,
                                                     Rng& rng) {
  (void)rng;
  Vec<C> start(4), gauge(4);
  for (int i = 0; i < 4; ++i) start[i] = C(field<C>::from_double(re(sample[i])));
  auto n2 = num::bdot(num::conj_vec(start), start);
  for (int i = 0; i < 4; ++i) gauge[i] = cconj(start[i]) / n2;
  auto pt = pencil::base_curve_point(p, start, gauge);
  if (!pt) return std::nullopt;
  if (pt->max_imag_abs() > 0) {  // real start, real gauge: stays real
    Vec<C> flat(4);
    for (int i = 0; i < 4; ++i) flat[i] = C(re((*pt)[i]));
    return ProjPoint<C>(flat);
  }
  return pt;
}

// conjugate pair on the base curve, bounded away from the real locus
template <class C>
inline std::optional<std::pair<ProjPoint<C>, ProjPoint<C>>> sample_conj_pair(const Pencil<C>& p,
                                                                             Rng& rng) {
  for (int attempt = 0; attempt < 40; ++attempt) {
    Vec<C> start(4), gauge(4);
    for (auto& c : start)
      c = C(field<C>::from_double(rng.normal()), field<C>::from_double(rng.normal()));
    for (auto& c : gauge) c = C(field<C>::from_double(rng.normal()));
    auto pt = pencil::base_curve_point(p, start, gauge);
    if (!pt) continue;
    if (pt->max_imag_abs() < 1e-3) continue;  // too close to the real locus
    auto q = pt->conj();
    if (p.a().residual(q) > 1e-12 || p.b().residual(q) > 1e-12) continue;
    return std::make_pair(*pt, q);
  }
  return std::nullopt;
}

struct OctetResult {
  PointConfig<c128> config;
  Pencil<c128> source_pencil;
  std::vector<int> real_distribution;
  int conj_pairs = 0;
};

// octet sampled on a pencil's base curve with a prescribed per-component
// distribution of declared-real points; with verify_enumerable the sampled
// configuration must also admit a clean 4-solution enumeration
inline OctetResult octet_on_pencil(const Pencil<c128>& p,
                                   const ell::OvalDecomposition<c53>& traced,
                                   const std::vector<int>& real_per_component, int n_pairs,
                                   std::uint64_t seed, bool verify_enumerable = true) {
  if (real_per_component.size() != static_cast<std::size_t>(traced.count()))
    fail(errc::bad_argument, "octet_on_pencil: distribution does not match components");
  int n_real = 0;
  for (int c : real_per_component) n_real += c;
  if (n_real + 2 * n_pairs != 8) fail(errc::bad_argument, "octet_on_pencil: needs 8 points");

  for (std::uint64_t attempt = 0; attempt < 30; ++attempt) {
    Rng rng(seed * 7919u + attempt + 1);
    std::vector<ProjPoint<c128>> pts;
    geom::Pairing pairing(8);
    bool ok = true;
    std::size_t idx = 0;
    for (std::size_t comp = 0; comp < real_per_component.size() && ok; ++comp) {
      const auto& samples = traced.components[comp].samples;
      for (int k = 0; k < real_per_component[comp] && ok; ++k) {
        std::size_t pick = rng.next_u64() % samples.size();
        auto pt = polish_real_point(p, samples[pick], rng);
        if (!pt) {
          ok = false;
          break;
        }
        pts.push_back(*pt);
        pairing[idx] = idx;
        ++idx;
      }
    }
    for (int k = 0; k < n_pairs && ok; ++k) {
      auto pair = sample_conj_pair(p, rng);
      if (!pair) {
        ok = false;
        break;
      }
      pts.push_back(pair->first);
      pts.push_back(pair->second);
      pairing[idx] = idx + 1;
      pairing[idx + 1] = idx;
      idx += 2;
    }
    if (!ok) continue;
    try {
      PointConfig<c128> cfg(pts, pairing);
      // genericity: the octet must recover the pencil
      auto rec = pencil::pencil_through(cfg);
      std::vector<Vec<c128>> s1{p.a().coeff_vector(), p.b().coeff_vector()};
      std::vector<Vec<c128>> s2{rec.a().coeff_vector(), rec.b().coeff_vector()};
      if (num::max_principal_angle(s1, s2) > 1e-8) continue;
      auto disc = pencil::discriminant(rec);
      if (!disc.distinct_flag) continue;
      if (verify_enumerable) quartics::find_marked_quadrics(rec, cfg);
      OctetResult out{cfg, p, real_per_component, n_pairs};
      return out;
    } catch (const Error&) {
      continue;
    }
  }
  fail(errc::no_solution_found, "octet_on_pencil: sampling budget exhausted");
}

// bundled-fixture generator for a classification row
inline OctetResult octet_for_row(RowKind kind, std::uint64_t seed) {
  auto want = row_topology(kind);
  auto [p, traced] = pencil_with_topology<c128>(want, seed);
  auto [dist, pairs] = row_distribution(kind);
  return octet_on_pencil(p, traced, dist, pairs, seed);
}

}  // namespace rq::octets
