#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "rq/error.hpp"
#include "rq/matrix.hpp"
#include "rq/pencil.hpp"
#include "rq/rng.hpp"
#include "rq/roots.hpp"
#include "rq/scalar.hpp"

namespace rq::ell {

using num::Mat;
using num::Vec;
using pencil::Pencil;

enum class Pi1Class { trivial, nontrivial };
enum class Parity { even, odd };

template <class C>
struct TracedComponent {
  std::vector<Vec<C>> samples;  // unit representatives on S^3
  Pi1Class pi1 = Pi1Class::trivial;
};

template <class C>
struct OvalDecomposition {
  std::vector<TracedComponent<C>> components;
  bool empty_certified = false;  // meaningful when no components were found
  double step = 0.0;
  int count() const { return static_cast<int>(components.size()); }
};

struct TraceOptions {
  double step0 = 1e-2;
  double step_max = 2e-2;
  double step_floor = 1e-8;
  double corrector_tol = 1e-11;
  int seeds = 64;
  std::uint64_t seed = 0x0E11;
};

namespace detail {

template <class C>
struct CurveSystem {
  const Pencil<C>* p;

  Vec<C> residual(const Vec<C>& x) const {
    Vec<C> f(3);
    f[0] = p->a().evaluate(x);
    f[1] = p->b().evaluate(x);
    C n(0);
    for (const auto& xi : x) n += xi * xi;
    f[2] = n - C(1);
    return f;
  }

  Mat<C> jacobian(const Vec<C>& x) const {
    Mat<C> J(3, 4);
    Vec<C> ga = num::matvec(p->a().gram(), x);
    Vec<C> gb = num::matvec(p->b().gram(), x);
    for (int j = 0; j < 4; ++j) {
      J(0, j) = C(2) * ga[j];
      J(1, j) = C(2) * gb[j];
      J(2, j) = C(2) * x[j];
    }
    return J;
  }

  // project back onto {A = B = 0, |x| = 1}; returns correction distance or -1
  double correct(Vec<C>& x, double tol) const {
    using R = real_t<C>;
    Vec<C> start = x;
    for (int it = 0; it < 40; ++it) {
      Vec<C> f = residual(x);
      R rn = num::norm2(f);
      if (field<C>::to_double(rn) < tol) {
        return field<C>::to_double(num::norm2(num::vsub(x, start)));
      }
      Mat<C> J = jacobian(x);
      Vec<C> negf(3);
      for (int i = 0; i < 3; ++i) negf[i] = -f[i];
      auto delta = num::normal_solve(J, negf, R(0));
      if (!delta) {
        auto d2 = num::normal_solve(J, negf, field<C>::eps() * R(1e3));
        if (!d2) return -1.0;
        delta = d2;
      }
      x = num::vadd(x, *delta);
    }
    return -1.0;
  }

  Vec<C> tangent(const Vec<C>& x) const {
    auto basis = num::null_space(jacobian(x), real_t<C>(field<C>::from_double(1e-7)));
    if (basis.size() != 1) fail(errc::tracing_stalled, "tangent space is not one-dimensional");
    Vec<C> t = basis[0];
    // strip numerical imaginary drift, renormalize
    for (auto& c : t) c = C(re(c));
    auto n = num::norm2(t);
    num::scale(t, C(real_t<C>(1) / n));
    return t;
  }
};

template <class C>
inline double dist4(const Vec<C>& a, const Vec<C>& b) {
  double s = 0;
  for (int i = 0; i < 4; ++i) {
    double d = field<C>::to_double(re(a[i])) - field<C>::to_double(re(b[i]));
    s += d * d;
  }
  return std::sqrt(s);
}

template <class C>
inline double dist4_projective(const Vec<C>& a, const Vec<C>& b) {
  Vec<C> nb(4);
  for (int i = 0; i < 4; ++i) nb[i] = -b[i];
  return std::min(dist4(a, b), dist4(a, nb));
}

template <class C>
inline double dist_to_component(const TracedComponent<C>& comp, const Vec<C>& x) {
  double best = 1e30;
  for (const auto& s : comp.samples) best = std::min(best, dist4_projective(s, x));
  return best;
}

// trace one closed component from an on-curve seed
template <class C>
inline TracedComponent<C> trace_component(const CurveSystem<C>& sys, Vec<C> x0,
                                          const TraceOptions& opt) {
  TracedComponent<C> comp;
  comp.samples.push_back(x0);
  Vec<C> x = x0;
  Vec<C> tan = sys.tangent(x0);
  double h = opt.step0;
  double arc = 0.0;
  bool homing = false;
  Vec<C> target;
  const int max_steps = 400000;

  for (int step_i = 0; step_i < max_steps; ++step_i) {
    Vec<C> tprev = tan;
    Vec<C> xc;
    double used = h;
    for (;;) {
      xc = x;
      num::axpy(xc, C(field<C>::from_double(used)), tan);
      auto n = num::norm2(xc);
      num::scale(xc, C(real_t<C>(1) / n));
      double moved = sys.correct(xc, opt.corrector_tol);
      if (moved >= 0 && moved < 0.5 * used) break;
      used *= 0.5;
      if (used < opt.step_floor)
        fail(errc::tracing_stalled, "corrector step underflow: rerun at higher precision");
    }
    Vec<C> tnew = sys.tangent(xc);
    // keep orientation
    double dot = 0;
    for (int i = 0; i < 4; ++i)
      dot += field<C>::to_double(re(tprev[i])) * field<C>::to_double(re(tnew[i]));
    if (dot < 0) {
      for (auto& c : tnew) c = -c;
      dot = -dot;
    }
    if (dot < 0.98 && used > opt.step_floor * 4 && !homing) {
      h = std::max(used * 0.5, opt.step_floor * 2);
      continue;  // too much turning: retry shorter from the same point
    }
    x = xc;
    tan = tnew;
    arc += used;
    comp.samples.push_back(x);
    if (dot > 0.9995) h = std::min(used * 1.4, opt.step_max);
    else h = used;

    if (!homing && arc > 4 * opt.step0) {
      double d_start = dist4(x, x0);
      Vec<C> anti(4);
      for (int i = 0; i < 4; ++i) anti[i] = -x0[i];
      double d_anti = dist4(x, anti);
      double close = std::min(d_start, d_anti);
      if (close < 1.8 * used) {
        homing = true;
        target = (d_start <= d_anti) ? x0 : anti;
        comp.pi1 = (d_start <= d_anti) ? Pi1Class::trivial : Pi1Class::nontrivial;
      }
    }
    if (homing) {
      double d = dist4(x, target);
      if (d < 1e-7) {
        comp.samples.push_back(target);
        return comp;
      }
      // step along the tangent toward the target
      double towards = 0;
      for (int i = 0; i < 4; ++i)
        towards += field<C>::to_double(re(tan[i])) *
                   (field<C>::to_double(re(target[i])) - field<C>::to_double(re(x[i])));
      if (towards < 0)
        for (auto& c : tan) c = -c;
      h = std::min(h, std::max(0.55 * d, opt.step_floor * 2));
    }
  }
  fail(errc::tracing_stalled, "component did not close within the step budget");
}

// seeds from the curve restricted to a random real projective plane
template <class C>
inline std::vector<Vec<C>> plane_seeds(const Pencil<C>& p, Rng rng) {
  using R = real_t<C>;
  std::vector<Vec<C>> seeds;
  // random orthonormal real triple in R^4
  std::vector<Vec<C>> basis;
  for (int k = 0; k < 3; ++k) {
    Vec<C> v(4);
    for (auto& c : v) c = C(field<C>::from_double(rng.normal()));
    for (const auto& b : basis) {
      C proj = num::hdot(b, v);
      num::axpy(v, -proj, b);
    }
    auto n = num::norm2(v);
    if (field<C>::to_double(n) < 1e-8) return seeds;
    num::scale(v, C(R(1) / n));
    basis.push_back(v);
  }
  auto restrict_form = [&](const Mat<C>& G) {
    Mat<C> D(3, 3);
    for (int a2 = 0; a2 < 3; ++a2) {
      Vec<C> gb = num::matvec(G, basis[a2]);
      for (int b2 = 0; b2 < 3; ++b2) D(a2, b2) = num::bdot(basis[b2], gb);
    }
    return D;
  };
  Mat<C> CA = restrict_form(p.a().gram());
  Mat<C> CB = restrict_form(p.b().gram());

  // cubic det(CA + t CB), real roots give degenerate conics of the pencil
  Vec<C> dets(4);
  const double nodes[4] = {0.0, 1.0, -1.0, 2.0};
  Mat<C> vmat(4, 4);
  for (int k = 0; k < 4; ++k) {
    C t(nodes[k]);
    Mat<C> M(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) M(i, j) = CA(i, j) + t * CB(i, j);
    dets[k] = num::determinant(M);
    C pw(1);
    for (int j2 = 0; j2 < 4; ++j2) {
      vmat(k, j2) = pw;
      pw *= t;
    }
  }
  Vec<C> coeff_asc;
  try {
    coeff_asc = num::lu_solve(vmat, dets);
  } catch (const Error&) {
    return seeds;
  }
  Vec<C> coeff_desc(4);
  for (int k = 0; k < 4; ++k) coeff_desc[k] = coeff_asc[3 - k];
  num::BinaryForm<C> cubic(3, coeff_desc);
  if (cubic.is_zero(real_t<C>(field<C>::from_double(1e-14)))) return seeds;
  std::vector<num::P1Root<C>> roots;
  try {
    roots = num::poly_roots(cubic);
  } catch (const Error&) {
    return seeds;
  }

  for (const auto& rt : roots) {
    Mat<C> D(3, 3);
    if (rt.at_infinity()) {
      D = CB;
    } else {
      if (std::abs(field<C>::to_double(im(rt.affine()))) > 1e-9) continue;
      C t(re(rt.affine()));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) D(i, j) = CA(i, j) + t * CB(i, j);
    }
    auto eig = num::eigen_hermitian(D);  // real symmetric here
    // identify the near-kernel direction (smallest |eigenvalue|)
    int ksmall = 0;
    double small = 1e300;
    for (int i = 0; i < 3; ++i) {
      double m = std::abs(field<C>::to_double(eig.values[i]));
      if (m < small) {
        small = m;
        ksmall = i;
      }
    }
    std::array<int, 2> rest{};
    int w = 0;
    for (int i = 0; i < 3; ++i)
      if (i != ksmall) rest[w++] = i;
    double ea = field<C>::to_double(eig.values[rest[0]]);
    double eb = field<C>::to_double(eig.values[rest[1]]);
    if (ea * eb > 0) continue;  // degenerate conic with a single real point
    Vec<C> va = eig.vectors.col(rest[0]);
    Vec<C> vb = eig.vectors.col(rest[1]);
    Vec<C> vs = eig.vectors.col(ksmall);
    double rfac = std::sqrt(std::abs(eb) / std::max(std::abs(ea), 1e-300));
    for (int sgn = -1; sgn <= 1; sgn += 2) {
      // line direction d with D(d) ~ 0
      Vec<C> d(3);
      for (int i = 0; i < 3; ++i)
        d[i] = C(field<C>::from_double(rfac * sgn)) * va[i] + vb[i];
      for (auto& c : d) c = C(re(c));
      // intersect the line span{d, vs} with the conic CB
      auto q = [&](const Vec<C>& u, const Vec<C>& v) {
        Vec<C> gv = num::matvec(CB, v);
        return num::bdot(u, gv);
      };
      C a2 = q(vs, vs), a1 = C(2) * q(d, vs), a0 = q(d, d);
      // roots of a2 tau^2 + a1 tau + a0 (line param x = d + tau vs)
      std::vector<C> taus;
      double sa2 = dabs(a2), sa1 = dabs(a1), sa0 = dabs(a0);
      double sc = std::max({sa2, sa1, sa0, 1e-300});
      if (sa2 / sc < 1e-12) {
        if (sa1 / sc > 1e-12) taus.push_back(-a0 / a1);
      } else {
        C disc = a1 * a1 - C(4) * a2 * a0;
        C sq = csqrt(disc);
        taus.push_back((-a1 + sq) / (C(2) * a2));
        taus.push_back((-a1 - sq) / (C(2) * a2));
      }
      for (const auto& tau : taus) {
        if (std::abs(field<C>::to_double(im(tau))) > 1e-8) continue;
        Vec<C> y(3);
        for (int i = 0; i < 3; ++i) y[i] = d[i] + C(re(tau)) * vs[i];
        Vec<C> x(4, C(0));
        for (int i = 0; i < 3; ++i) num::axpy(x, y[i], basis[i]);
        for (auto& c : x) c = C(re(c));
        auto n = num::norm2(x);
        if (field<C>::to_double(n) < 1e-12) continue;
        num::scale(x, C(real_t<C>(1) / n));
        seeds.push_back(x);
      }
    }
  }
  return seeds;
}

}  // namespace detail

// Coarse grid plus a Lipschitz bound on A^2 + B^2 over S^3. True means the
// real base locus is certifiably empty.
template <class C>
inline bool certify_empty_locus(const Pencil<C>& p) {
  Mat<c53> GA = pencil::mat_cast<c53>(p.a().gram());
  Mat<c53> GB = pencil::mat_cast<c53>(p.b().gram());
  double na = field<c53>::to_double(num::frobenius(GA));
  double nb = field<c53>::to_double(num::frobenius(GB));
  double lip = 4.0 * (na * na + nb * nb);
  auto value = [&](const std::array<double, 4>& x) {
    double a = 0, b = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        a += x[i] * re(GA(i, j)) * x[j];
        b += x[i] * re(GB(i, j)) * x[j];
      }
    return a * a + b * b;
  };
  for (int m : {17, 33, 65}) {
    double cover = 1.7320508075688772 / (m - 1);  // sqrt(3) * h/2 with h = 2/(m-1)
    double fmin = 1e300;
    for (int face = 0; face < 8; ++face) {
      int axis = face / 2;
      double fixed = (face % 2 == 0) ? 1.0 : -1.0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k) {
            std::array<double, 3> free_coords{-1.0 + 2.0 * i / (m - 1), -1.0 + 2.0 * j / (m - 1),
                                              -1.0 + 2.0 * k / (m - 1)};
            std::array<double, 4> x{};
            int w = 0;
            for (int a2 = 0; a2 < 4; ++a2) x[a2] = (a2 == axis) ? fixed : free_coords[w++];
            double n = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
            for (auto& c : x) c /= n;
            fmin = std::min(fmin, value(x));
            if (fmin <= lip * cover) break;
          }
    }
    if (fmin - 1e-12 > lip * cover) return true;
  }
  return false;
}

// Predictor-corrector tracing of {A = B = 0} on unit representatives in S^3.
template <class C>
inline OvalDecomposition<C> trace_real_locus(const Pencil<C>& p,
                                             const TraceOptions& opt = TraceOptions{}) {
  if (!p.real_basis()) fail(errc::bad_argument, "trace_real_locus needs a real-basis pencil");
  OvalDecomposition<C> out;
  out.step = opt.step0;
  detail::CurveSystem<C> sys{&p};
  Rng rng(opt.seed);
  for (int k = 0; k < opt.seeds; ++k) {
    auto seeds = detail::plane_seeds(p, rng.fork(k));
    for (auto& s : seeds) {
      if (sys.correct(s, opt.corrector_tol) < 0) continue;
      bool known = false;
      for (const auto& comp : out.components)
        if (detail::dist_to_component(comp, s) < 2.5 * opt.step0) known = true;
      if (known) continue;
      out.components.push_back(detail::trace_component(sys, s, opt));
      if (out.components.size() > 2)
        fail(errc::tracing_stalled, "more than two components traced: non-generic input");
    }
  }
  if (out.components.empty()) out.empty_certified = certify_empty_locus(p);

  // disjointness validation
  for (std::size_t i = 0; i < out.components.size(); ++i)
    for (std::size_t j = i + 1; j < out.components.size(); ++j) {
      double dmin = 1e300;
      for (const auto& s : out.components[i].samples)
        dmin = std::min(dmin, detail::dist_to_component(out.components[j], s));
      if (dmin <= 10 * opt.step0)
        fail(errc::tracing_stalled, "traced components are not separated");
    }
  return out;
}

// Parity of intersections with a real hyperplane: the cross-check oracle for
// the antipodal-closure pi1 classification.
template <class C>
inline Pi1Class pi1_by_hyperplane(const TracedComponent<C>& comp, const Vec<C>& h) {
  int changes = 0;
  double prev = 0.0;
  bool have_prev = false;
  for (const auto& s : comp.samples) {
    double v = field<C>::to_double(re(num::bdot(h, s)));
    if (std::abs(v) < 1e-13) continue;  // grazing sample: skip
    if (have_prev && ((prev > 0) != (v > 0))) ++changes;
    prev = v;
    have_prev = true;
  }
  return (changes % 2 == 0) ? Pi1Class::trivial : Pi1Class::nontrivial;
}

struct ParityData {
  Parity h4_parity = Parity::even;
  Parity p_parity = Parity::even;
  std::vector<int> per_component_real_point_counts;
};

// Real topology data + declared-real point placement -> parities of H4 and [P].
// Membership is checked against the curve itself (correction distance < 1e-6);
// the polyline only decides which component carries the point.
template <class C, class CP>
inline ParityData point_parities(const Pencil<C>& p, const OvalDecomposition<C>& ovals,
                                 const geom::PointConfig<CP>& config) {
  ParityData out;
  out.per_component_real_point_counts.assign(ovals.components.size(), 0);
  detail::CurveSystem<C> sys{&p};
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (!config.is_real_index(i)) continue;
    Vec<C> x(4);
    for (int k = 0; k < 4; ++k)
      x[k] = C(field<C>::from_double(field<CP>::to_double(re(config.point(i)[k]))));
    auto n = num::norm2(x);
    num::scale(x, C(real_t<C>(1) / n));
    double moved = sys.correct(x, 1e-12);
    if (moved < 0 || moved > 1e-6)
      fail(errc::point_off_curve, "declared-real point is not on the real locus");
    double best = 1e300;
    std::size_t best_comp = 0;
    for (std::size_t c = 0; c < ovals.components.size(); ++c) {
      double d = detail::dist_to_component(ovals.components[c], x);
      if (d < best) {
        best = d;
        best_comp = c;
      }
    }
    if (ovals.components.empty() || best > 3.0 * ovals.step)
      fail(errc::point_off_curve, "declared-real point could not be assigned to a component");
    out.per_component_real_point_counts[best_comp] += 1;
  }
  bool h4_even = true;
  for (const auto& comp : ovals.components)
    if (comp.pi1 == Pi1Class::nontrivial) h4_even = false;
  out.h4_parity = h4_even ? Parity::even : Parity::odd;
  bool p_even = true;
  for (int c : out.per_component_real_point_counts)
    if (c % 2 != 0) p_even = false;
  out.p_parity = p_even ? Parity::even : Parity::odd;
  if (ovals.count() == 2) {
    int a = out.per_component_real_point_counts[0] % 2;
    int b = out.per_component_real_point_counts[1] % 2;
    if (a != b)
      fail(errc::inconsistent_input, "per-component real point parities disagree");
  }
  return out;
}

// on-curve membership residual used by callers before point_parities
template <class C, class CP>
inline double curve_residual(const Pencil<C>& p, const geom::ProjPoint<CP>& pt) {
  Vec<C> x(4);
  for (int k = 0; k < 4; ++k) x[k] = convert_scalar<C>(pt[k]);
  auto n = num::norm2(x);
  num::scale(x, C(real_t<C>(1) / n));
  detail::CurveSystem<C> sys{&p};
  Vec<C> y = x;
  double moved = sys.correct(y, 1e-12);
  if (moved < 0) return 1e300;
  return moved;
}

struct PredictedCounts {
  int real_with_points = 0;
  int real_empty = 0;
  int complex_pairs = 0;
};

// The classification table: component count and parities to predicted counts.
inline PredictedCounts classify(int count, const ParityData& parities, bool has_real_points) {
  PredictedCounts out;
  if (count == 1) {
    out = {2, 0, 1};
  } else if (count == 2) {
    bool h_even = parities.h4_parity == Parity::even;
    bool p_even = parities.p_parity == Parity::even;
    if (h_even != p_even)
      out = {0, 0, 2};
    else
      out = {4, 0, 0};
  } else if (count == 0) {
    if (has_real_points)
      fail(errc::inconsistent_input, "declared-real points with an empty real locus");
    out = {2, 2, 0};
  } else {
    fail(errc::inconsistent_input, "component count outside {0,1,2}");
  }
  if (out.real_with_points + out.real_empty + 2 * out.complex_pairs != 4)
    fail(errc::inconsistent_input, "classification row violates the total count");
  return out;
}

enum class Obstruction { obstructed, not_obstructed };

// Parity obstruction for degree-d curves through points on a two-oval curve:
// obstructed iff a*H4 + P is odd for every 0 < a < d/2.
inline Obstruction parity_obstruction(int d, Parity h4, Parity p) {
  if (d < 4 || d % 2 != 0) fail(errc::bad_argument, "parity_obstruction needs even d >= 4");
  for (int a = 1; 2 * a < d; ++a) {
    int cls = (a * (h4 == Parity::odd ? 1 : 0) + (p == Parity::odd ? 1 : 0)) % 2;
    if (cls == 0) return Obstruction::not_obstructed;
  }
  return Obstruction::obstructed;
}

}  // namespace rq::ell
