#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "rq/binary_form.hpp"
#include "rq/error.hpp"
#include "rq/scalar.hpp"

namespace rq::num {

// A root of a binary form in P^1. Components are stored at working precision;
// `backward_error` certifies the refined (internally promoted) root against
// the input coefficients, so it sits far below working epsilon even though
// the stored representative is rounded.
template <class C>
struct P1Root {
  C x, y;  // projective representative, y real >= 0
  int multiplicity = 1;
  double backward_error = 0.0;
  bool at_infinity() const { return y == C(0); }
  C affine() const { return x / y; }
};

namespace detail {

template <class P>
inline P horner(const Vec<P>& c, const P& t) {
  P acc(0);
  for (const auto& ci : c) acc = acc * t + ci;
  return acc;
}

template <class P>
inline Vec<P> derivative(const Vec<P>& c) {
  if (c.size() <= 1) return {P(0)};
  Vec<P> d(c.size() - 1);
  const std::size_t deg = c.size() - 1;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) d[i] = c[i] * P(double(deg - i));
  return d;
}

// backward error of a projective root against the homogeneous form
template <class P>
inline real_t<P> projective_backward_error(const Vec<P>& coeffs, const P& x, const P& y) {
  using R = real_t<P>;
  using std::sqrt;
  const std::size_t d = coeffs.size() - 1;
  R nrm = sqrt(abs2(x) + abs2(y));
  if (nrm == R(0)) return R(0);
  P xn = x / P(nrm), yn = y / P(nrm);
  P value(0);
  R scale_eval(0);
  P xp(1);
  Vec<P> xpow(d + 1), ypow(d + 1);
  xpow[0] = P(1);
  ypow[0] = P(1);
  for (std::size_t i = 1; i <= d; ++i) {
    xpow[i] = xpow[i - 1] * xn;
    ypow[i] = ypow[i - 1] * yn;
  }
  for (std::size_t i = 0; i <= d; ++i) {
    P term = coeffs[i] * xpow[d - i] * ypow[i];
    value += term;
    scale_eval += cabs(coeffs[i]) * cabs(xpow[d - i]) * cabs(ypow[i]);
  }
  if (scale_eval == R(0)) return R(0);
  return cabs(value) / scale_eval;
}

}  // namespace detail

// All projective roots of a binary form with multiplicities. Affine roots are
// found by Durand-Kerner at working precision, polished by Newton at promoted
// precision until the backward error clears 1e-2 * working epsilon, then
// clustered into multiple roots only when the merged root still certifies.
// Output is sorted by (Re, Im) of the affine representative; (1:0) last.
template <class C>
inline std::vector<P1Root<C>> poly_roots(const BinaryForm<C>& input) {
  using R = real_t<C>;
  using P = promoted_t<C>;
  using PR = real_t<P>;
  using std::sqrt;
  if (input.degree() < 1) fail(errc::bad_argument, "poly_roots: degree must be >= 1");
  BinaryForm<C> form = input;
  form.normalize();
  const std::size_t d = form.degree();
  const R eps_w = field<C>::eps();

  // roots at infinity <-> vanishing leading coefficients
  std::size_t k_inf = 0;
  while (k_inf < d && cabs(form.coeffs()[k_inf]) <= R(64) * eps_w) ++k_inf;

  const std::size_t da = d - k_inf;  // affine degree
  std::vector<C> affine_roots;
  if (da > 0) {
    Vec<C> q(form.coeffs().begin() + k_inf, form.coeffs().end());
    const C lead = q[0];
    for (auto& c : q) c /= lead;
    // Cauchy bound for the start circle
    R bound(0);
    for (std::size_t i = 1; i < q.size(); ++i) bound = std::max(bound, cabs(q[i]));
    bound += R(1);
    std::vector<C> z(da);
    C w(0.4, 0.9);
    C zp(1);
    for (std::size_t j = 0; j < da; ++j) {
      zp *= w;
      z[j] = C(bound) * zp;
    }
    const R tol_dk = eps_w * R(16);
    for (int iter = 0; iter < 600; ++iter) {
      R max_step(0);
      for (std::size_t j = 0; j < da; ++j) {
        C num = detail::horner(q, z[j]);
        C den(1);
        for (std::size_t k2 = 0; k2 < da; ++k2)
          if (k2 != j) den *= (z[j] - z[k2]);
        if (den == C(0)) {
          z[j] += C(1e-6 * (1 + double(j)));
          max_step = R(1);
          continue;
        }
        C step = num / den;
        z[j] -= step;
        max_step = std::max(max_step, cabs(step));
      }
      if (max_step < tol_dk * bound) break;
    }
    affine_roots.assign(z.begin(), z.end());
  }

  // promoted polish of each root individually
  Vec<P> pc(form.coeffs().size());
  for (std::size_t i = 0; i < pc.size(); ++i) pc[i] = convert_scalar<P>(form.coeffs()[i]);
  Vec<P> q_aff(pc.begin() + k_inf, pc.end());
  Vec<P> q_aff_d = detail::derivative(q_aff);
  const PR be_target = PR(0.01) * PR(field<C>::to_double(eps_w));

  std::vector<P> polished(affine_roots.size());
  for (std::size_t j = 0; j < affine_roots.size(); ++j) {
    P r = convert_scalar<P>(affine_roots[j]);
    for (int it = 0; it < 120; ++it) {
      if (detail::projective_backward_error(pc, r, P(1)) <= be_target * PR(0.1)) break;
      P fv = detail::horner(q_aff, r);
      P dv = detail::horner(q_aff_d, r);
      if (dv == P(0)) break;
      r -= fv / dv;
    }
    polished[j] = r;
  }

  // cluster polished roots; merges must re-certify or they are rolled back
  std::vector<int> cluster(polished.size(), -1);
  std::vector<std::vector<std::size_t>> groups;
  const PR tol_cluster = PR(1e-10);
  for (std::size_t j = 0; j < polished.size(); ++j) {
    bool placed = false;
    for (std::size_t g = 0; g < groups.size() && !placed; ++g) {
      P rep = polished[groups[g][0]];
      PR sc = PR(1) + cabs(rep);
      if (cabs(polished[j] - rep) <= tol_cluster * sc) {
        groups[g].push_back(j);
        placed = true;
      }
    }
    if (!placed) groups.push_back({j});
  }

  struct Found {
    P value;
    int mult;
    PR be;
  };
  std::vector<Found> found;
  for (auto& g : groups) {
    if (g.size() == 1) {
      P r = polished[g[0]];
      found.push_back({r, 1, detail::projective_backward_error(pc, r, P(1))});
      continue;
    }
    // centroid, then Newton on the (m-1)-th derivative
    P centroid(0);
    for (auto idx : g) centroid += polished[idx];
    centroid /= P(double(g.size()));
    Vec<P> qd = q_aff;
    for (std::size_t k2 = 1; k2 < g.size(); ++k2) qd = detail::derivative(qd);
    Vec<P> qdd = detail::derivative(qd);
    P r = centroid;
    for (int it = 0; it < 80; ++it) {
      P fv = detail::horner(qd, r);
      P dv = detail::horner(qdd, r);
      if (dv == P(0)) break;
      P step = fv / dv;
      r -= step;
      if (cabs(step) <= PR(field<P>::eps()) * (PR(1) + cabs(r)) * PR(16)) break;
    }
    PR be = detail::projective_backward_error(pc, r, P(1));
    if (be <= be_target) {
      found.push_back({r, static_cast<int>(g.size()), be});
    } else {
      for (auto idx : g) {
        P rr = polished[idx];
        found.push_back({rr, 1, detail::projective_backward_error(pc, rr, P(1))});
      }
    }
  }

  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
    auto ra = re(a.value), rb = re(b.value);
    if (ra != rb) return ra < rb;
    return im(a.value) < im(b.value);
  });

  std::vector<P1Root<C>> out;
  for (const auto& f : found) {
    P1Root<C> root;
    PR nrm = sqrt(PR(1) + abs2(f.value));
    root.x = convert_scalar<C>(P(f.value / P(nrm)));
    root.y = convert_scalar<C>(P(P(1) / P(nrm)));
    root.multiplicity = f.mult;
    root.backward_error = field<P>::to_double(f.be);
    out.push_back(root);
  }
  if (k_inf > 0) {
    P1Root<C> inf;
    inf.x = C(1);
    inf.y = C(0);
    inf.multiplicity = static_cast<int>(k_inf);
    inf.backward_error = 0.0;
    out.push_back(inf);
  }
  return out;
}

// Multiply the root factorization back out; test oracle for poly_roots.
template <class C>
inline BinaryForm<C> expand_roots(const std::vector<P1Root<C>>& roots, std::size_t degree) {
  BinaryForm<C> acc(0, {C(1)});
  for (const auto& r : roots)
    for (int m = 0; m < r.multiplicity; ++m)
      acc = multiply(acc, BinaryForm<C>(1, {r.y, -r.x}));
  if (acc.degree() != degree) fail(errc::bad_argument, "expand_roots: degree mismatch");
  return acc;
}

}  // namespace rq::num
