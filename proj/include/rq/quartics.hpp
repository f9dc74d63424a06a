#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rq/binary_form.hpp"
#include "rq/ellreal.hpp"
#include "rq/error.hpp"
#include "rq/gauss_newton.hpp"
#include "rq/matrix.hpp"
#include "rq/pencil.hpp"
#include "rq/projective.hpp"
#include "rq/rng.hpp"
#include "rq/scalar.hpp"

namespace rq::quartics {

using geom::PointConfig;
using geom::ProjPoint;
using num::BinaryForm;
using num::Mat;
using num::Vec;
using pencil::MarkedMember;
using pencil::Pencil;
using pencil::Ruling;

// --- incidence machinery ------------------------------------------------------

// Row of the bidegree-(1,3) incidence system at pulled-back parameters:
// monomials s u^3, s u^2 v, s u v^2, s v^3, t u^3, ..., t v^3. Parameter
// pairs are brought to unit norm first; the row then lands within a bounded
// factor of unit norm, which keeps the 8x8 system well conditioned.
template <class C>
inline Vec<C> incidence_row(const std::pair<C, C>& st, const std::pair<C, C>& uv) {
  using R = real_t<C>;
  using std::sqrt;
  R ns = sqrt(abs2(st.first) + abs2(st.second));
  R nu = sqrt(abs2(uv.first) + abs2(uv.second));
  const C s = st.first / C(ns), t = st.second / C(ns);
  const C u = uv.first / C(nu), v = uv.second / C(nu);
  Vec<C> cub{u * u * u, u * u * v, u * v * v, v * v * v};
  Vec<C> row(8);
  for (int j = 0; j < 4; ++j) {
    row[j] = s * cub[j];
    row[4 + j] = t * cub[j];
  }
  return row;
}

template <class C>
inline Mat<C> incidence_matrix(const MarkedMember<C>& m, const PointConfig<C>& config,
                               bool normalize_rows = true) {
  Mat<C> M(config.size(), 8);
  for (std::size_t i = 0; i < config.size(); ++i) {
    auto [st, uv] = pencil::pull_back(m, config.point(i));
    Vec<C> row = incidence_row(st, uv);
    if (normalize_rows) {
      auto n = num::norm2(row);
      num::scale(row, C(real_t<C>(1) / n));
    }
    M.set_row(i, row);
  }
  return M;
}

// |det| of the normalized 8x8 incidence matrix: scale-stable, zero exactly at
// members carrying a (1,3) curve through all 8 points in the given ruling.
template <class C>
inline C incidence_det(const Pencil<C>& p, const C& t, Ruling ruling,
                       const PointConfig<C>& config,
                       const MarkedMember<C>* seed_from = nullptr) {
  auto [plus, minus] = pencil::parametrize(p, t, seed_from);
  const MarkedMember<C>& m = (ruling == Ruling::plus) ? plus : minus;
  return num::determinant(incidence_matrix(m, config));
}

// --- solutions -----------------------------------------------------------------

template <class C>
struct MarkedQuadricSolution {
  C t{};                   // member parameter in the solution's chart
  bool swapped_chart = false;  // member = B + t A when true
  Ruling ruling = Ruling::plus;
  MarkedMember<C> member;
  int incidence_rank = 0;
  Vec<C> kernel_vector;  // 8 coefficients of the bidegree form

  // member parameter as a point of P^1 in the chart-0 basis (A + t B)
  std::pair<C, C> param_p1() const {
    return swapped_chart ? std::make_pair(C(1), t) : std::make_pair(t, C(1));
  }
  bool param_real(double tol = 1e-7) const {
    auto [l, m] = param_p1();
    Vec<C> a{l, m}, b{cconj(l), cconj(m)};
    return geom::proj_distance<C>(a, b) < tol;
  }
};

template <class C>
struct BidegreeCurve {
  BinaryForm<C> g1, g2;  // the degree-3 map (u:v) -> (g1 : g2)
  MarkedQuadricSolution<C> source;
};

enum class Reality { real_split, real_twisted, complex_member };

template <class C>
struct QuarticCurve {
  std::array<BinaryForm<C>, 4> coords;  // canonical gauge coefficients
  Vec<C> preimages;                     // affine parameters of the 8 points
  Reality reality = Reality::complex_member;
  int partner_index = -1;
  double max_residual = 0.0;
  std::pair<C, C> member_param{C(0), C(1)};
  bool member_real = false;
};

// --- canonical gauge ------------------------------------------------------------

namespace detail {

// three orthonormal vectors spanning the Hermitian complement of p
template <class C>
inline std::array<Vec<C>, 3> orth_complement(const Vec<C>& p) {
  using R = real_t<C>;
  std::size_t imax = 0;
  R best(0);
  for (std::size_t i = 0; i < 4; ++i)
    if (abs2(p[i]) > best) {
      best = abs2(p[i]);
      imax = i;
    }
  auto np2 = num::norm2(p);
  Vec<C> pn = p;
  num::scale(pn, C(R(1) / np2));
  std::array<Vec<C>, 3> out;
  std::size_t w = 0;
  std::vector<Vec<C>> acc;
  for (std::size_t j = 0; j < 4; ++j) {
    if (j == imax) continue;
    Vec<C> v(4, C(0));
    v[j] = C(1);
    C proj = num::hdot(pn, v);
    num::axpy(v, -proj, pn);
    for (const auto& b : acc) {
      C pr = num::hdot(b, v);
      num::axpy(v, -pr, b);
    }
    auto n = num::norm2(v);
    num::scale(v, C(R(1) / n));
    acc.push_back(v);
    out[w++] = v;
  }
  return out;
}

// evaluate the 4 coordinate forms at an affine parameter
template <class C>
inline Vec<C> eval_coords(const std::array<BinaryForm<C>, 4>& coords, const C& w) {
  Vec<C> x(4);
  for (int k = 0; k < 4; ++k) x[k] = coords[k].eval_affine(w);
  return x;
}

template <class C>
inline Vec<C> eval_coords_proj(const std::array<BinaryForm<C>, 4>& coords, const C& u,
                               const C& v) {
  Vec<C> x(4);
  for (int k = 0; k < 4; ++k) x[k] = coords[k].eval(u, v);
  return x;
}

// all preimages of a point under the degree-4 map, by root-finding on the
// best cross-pair and filtering on full proportionality
template <class C>
inline std::vector<std::pair<C, C>> point_preimages(const std::array<BinaryForm<C>, 4>& coords,
                                                    const ProjPoint<C>& p, double tol = 1e-6) {
  using R = real_t<C>;
  std::size_t k1 = 0, k2 = 1;
  R b1(-1), b2(-1);
  for (std::size_t k = 0; k < 4; ++k) {
    auto m = abs2(p[k]);
    if (m > b1) {
      b2 = b1;
      k2 = k1;
      b1 = m;
      k1 = k;
    } else if (m > b2) {
      b2 = m;
      k2 = k;
    }
  }
  // p[k2] x_{k1}(w) - p[k1] x_{k2}(w) = 0
  Vec<C> cs(5);
  for (int j = 0; j < 5; ++j)
    cs[j] = p[k2] * coords[k1].coeffs()[j] - p[k1] * coords[k2].coeffs()[j];
  BinaryForm<C> f(4, cs);
  std::vector<std::pair<C, C>> out;
  if (f.is_zero(R(field<C>::from_double(1e-14)))) return out;
  for (const auto& rt : num::poly_roots(f)) {
    Vec<C> x = eval_coords_proj(coords, rt.x, rt.y);
    if (geom::proj_distance<C>(x, p.coords()) < tol) out.push_back({rt.x, rt.y});
  }
  return out;
}

// Moebius matrix M with M(1:0) = pinf, M(0:1) = p0, M(1:1) = p1 (2-vectors)
template <class C>
inline Mat<C> moebius_through(const std::pair<C, C>& p0, const std::pair<C, C>& p1,
                              const std::pair<C, C>& pinf) {
  Mat<C> A(2, 2);
  A(0, 0) = pinf.first;
  A(1, 0) = pinf.second;
  A(0, 1) = p0.first;
  A(1, 1) = p0.second;
  Vec<C> rhs{p1.first, p1.second};
  Vec<C> ab = num::lu_solve(A, rhs);
  Mat<C> M(2, 2);
  M(0, 0) = ab[0] * pinf.first;
  M(1, 0) = ab[0] * pinf.second;
  M(0, 1) = ab[1] * p0.first;
  M(1, 1) = ab[1] * p0.second;
  return M;
}

}  // namespace detail

// Canonical representative of a degree-4 parametrized curve through the
// configuration: preimages of points 1, 2, 3 moved to 0, 1, infinity and the
// scale fixed by x(1,1) = p2's representative.
template <class C>
inline std::optional<std::pair<std::array<BinaryForm<C>, 4>, Vec<C>>> canonicalize(
    const std::array<BinaryForm<C>, 4>& coords, const PointConfig<C>& config,
    double preimage_tol = 1e-6) {
  std::vector<std::pair<C, C>> pre(config.size());
  for (std::size_t i = 0; i < config.size(); ++i) {
    auto cands = detail::point_preimages(coords, config.point(i), preimage_tol);
    if (cands.empty()) return std::nullopt;
    // deterministic choice: best residual
    double best = 1e300;
    std::size_t bi = 0;
    for (std::size_t k = 0; k < cands.size(); ++k) {
      Vec<C> x = detail::eval_coords_proj(coords, cands[k].first, cands[k].second);
      double d = geom::proj_distance<C>(x, config.point(i).coords());
      if (d < best) {
        best = d;
        bi = k;
      }
    }
    pre[i] = cands[bi];
  }
  Mat<C> M = detail::moebius_through(pre[0], pre[1], pre[2]);
  std::array<BinaryForm<C>, 4> out;
  for (int k = 0; k < 4; ++k)
    out[k] = coords[k].substitute(M(0, 0), M(0, 1), M(1, 0), M(1, 1));
  // scale: x(1,1) = rho * p1rep; divide by rho
  Vec<C> x11 = detail::eval_coords(out, C(1));
  const auto& p2 = config.point(1).coords();
  std::size_t imax = 0;
  real_t<C> best(0);
  for (std::size_t i = 0; i < 4; ++i)
    if (abs2(p2[i]) > best) {
      best = abs2(p2[i]);
      imax = i;
    }
  C rho = x11[imax] / p2[imax];
  if (cabs(rho) == real_t<C>(0)) return std::nullopt;
  for (int k = 0; k < 4; ++k) {
    Vec<C> cs = out[k].coeffs();
    for (auto& c : cs) c /= rho;
    out[k] = BinaryForm<C>(4, cs);
  }
  // remaining preimages in the new parameter
  Mat<C> Minv = num::inverse(M);
  Vec<C> ws(config.size());
  for (std::size_t i = 0; i < config.size(); ++i) {
    C a = Minv(0, 0) * pre[i].first + Minv(0, 1) * pre[i].second;
    C b = Minv(1, 0) * pre[i].first + Minv(1, 1) * pre[i].second;
    ws[i] = (i == 2) ? C(0) : a / b;  // point 3 sits at infinity; store 0 placeholder
  }
  return std::make_pair(out, ws);
}

// A genuine space quartic: coefficient matrix of rank 4 (the image spans P^3)
// and no common root of the four forms (the map is a morphism).
template <class C>
inline bool nondegenerate_quartic(const std::array<BinaryForm<C>, 4>& coords) {
  Mat<C> cm(4, 5);
  double scale_ref = 0;
  for (int k = 0; k < 4; ++k) {
    cm.set_row(k, coords[k].coeffs());
    for (const auto& c : coords[k].coeffs()) scale_ref = std::max(scale_ref, dabs(c));
  }
  if (scale_ref == 0) return false;
  if (num::numerical_rank(cm, real_t<C>(field<C>::from_double(1e-8))) != 4) return false;
  // base-point freeness: at every root of the first nonzero form, another
  // coordinate form must survive
  int lead = -1;
  for (int k = 0; k < 4; ++k)
    if (coords[k].max_coeff_abs() > real_t<C>(field<C>::from_double(1e-10 * scale_ref))) {
      lead = k;
      break;
    }
  if (lead < 0) return false;
  std::vector<num::P1Root<C>> roots;
  try {
    roots = num::poly_roots(coords[lead]);
  } catch (const Error&) {
    return false;
  }
  for (const auto& rt : roots) {
    double other = 0;
    for (int k = 0; k < 4; ++k) {
      if (k == lead) continue;
      other = std::max(other, dabs(coords[k].eval(rt.x, rt.y)));
    }
    if (other < 1e-7 * scale_ref) return false;
  }
  return true;
}

// scale-free distance between canonical coefficient sets
template <class C>
inline double canonical_distance(const std::array<BinaryForm<C>, 4>& a,
                                 const std::array<BinaryForm<C>, 4>& b) {
  double scale_ref = 0, diff = 0;
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 5; ++j) {
      scale_ref = std::max(scale_ref, dabs(a[k].coeffs()[j]));
      diff = std::max(diff, dabs(C(a[k].coeffs()[j] - b[k].coeffs()[j])));
    }
  return scale_ref > 0 ? diff / scale_ref : diff;
}

// max incidence residual of a parametrized curve against the configuration
template <class C>
inline double incidence_residual(const std::array<BinaryForm<C>, 4>& coords,
                                 const PointConfig<C>& config) {
  double worst = 0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    auto cands = detail::point_preimages(coords, config.point(i), 1e-2);
    double best = 1e300;
    for (const auto& c : cands) {
      Vec<C> x = detail::eval_coords_proj(coords, c.first, c.second);
      best = std::min(best, geom::proj_distance<C>(x, config.point(i).coords()));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

// --- gauge-fixed refinement -------------------------------------------------------

namespace detail {

// Shared residual system for refinement: unknowns z = (c_{k,2} (4),
// c_{k,3} (4), mu, nu, rho, w_4..w_8 (5)); equations: 3 projections for each
// of points 4..8 plus rho - 1. Starts must be near genuine solutions; the
// multistart exploration lives on the reduced system below.
template <class C>
struct GaugeSystem {
  const PointConfig<C>* config;
  std::array<std::array<Vec<C>, 3>, 5> projectors;  // p^perp for points 4..8

  explicit GaugeSystem(const PointConfig<C>& cfg) : config(&cfg) {
    for (int i = 0; i < 5; ++i)
      projectors[i] = orth_complement(cfg.point(3 + i).coords());
  }

  std::array<BinaryForm<C>, 4> coords_from(const Vec<C>& z) const {
    const auto& p1 = config->point(0).coords();
    const auto& p2 = config->point(1).coords();
    const auto& p3 = config->point(2).coords();
    const C &mu = z[8], &nu = z[9], &rho = z[10];
    std::array<BinaryForm<C>, 4> coords;
    for (int k = 0; k < 4; ++k) {
      Vec<C> cs(5);
      cs[0] = nu * p3[k];
      cs[2] = z[k];
      cs[3] = z[4 + k];
      cs[4] = mu * p1[k];
      cs[1] = rho * p2[k] - cs[0] - cs[2] - cs[3] - cs[4];
      coords[k] = BinaryForm<C>(4, cs);
    }
    return coords;
  }

  // canonical coordinates: divide by rho so x(1,1) is the p2 representative
  std::array<BinaryForm<C>, 4> canonical_coords_from(const Vec<C>& z) const {
    auto coords = coords_from(z);
    C rho = z[10];
    for (int k = 0; k < 4; ++k) {
      Vec<C> cs = coords[k].coeffs();
      for (auto& c : cs) c /= rho;
      coords[k] = BinaryForm<C>(4, cs);
    }
    return coords;
  }

  Vec<C> operator()(const Vec<C>& z) const {
    auto coords = coords_from(z);
    Vec<C> f(16);
    for (int i = 0; i < 5; ++i) {
      Vec<C> x = eval_coords(coords, z[11 + i]);
      for (int j = 0; j < 3; ++j) f[3 * i + j] = num::hdot(projectors[i][j], x);
    }
    f[15] = z[10] - C(1);
    return f;
  }

  // analytic Jacobian: the residual is linear in the coefficients and
  // polynomial in the preimage parameters
  Mat<C> jacobian(const Vec<C>& z) const {
    const auto& p1 = config->point(0).coords();
    const auto& p2 = config->point(1).coords();
    const auto& p3 = config->point(2).coords();
    auto coords = coords_from(z);
    Mat<C> J(16, 16);
    for (int i = 0; i < 5; ++i) {
      const C w = z[11 + i];
      const C w2 = w * w, w3 = w2 * w, w4 = w3 * w;
      for (int j = 0; j < 3; ++j) {
        const auto& q = projectors[i][j];
        for (int k = 0; k < 4; ++k) {
          const C qk = cconj(q[k]);
          J(3 * i + j, k) += qk * (w2 - w3);      // c_{k,2}
          J(3 * i + j, 4 + k) += qk * (w - w3);   // c_{k,3}
          J(3 * i + j, 8) += qk * p1[k] * (C(1) - w3);
          J(3 * i + j, 9) += qk * p3[k] * (w4 - w3);
          J(3 * i + j, 10) += qk * p2[k] * w3;
        }
        // derivative in the preimage parameter of this block
        C dx(0);
        for (int k = 0; k < 4; ++k) {
          const auto& cs = coords[k].coeffs();
          C d = C(4) * cs[0] * w3 + C(3) * cs[1] * w2 + C(2) * cs[2] * w + cs[3];
          dx += cconj(q[k]) * d;
        }
        J(3 * i + j, 11 + i) = dx;
      }
    }
    J(15, 10) = C(1);
    return J;
  }
};

}  // namespace detail

// Gauss-Newton refinement of canonical coefficients against the original 8
// incidence conditions under the fixed gauge. Returns refined coefficients
// and preimages.
template <class C>
inline std::pair<std::array<BinaryForm<C>, 4>, Vec<C>> refine_canonical(
    const std::array<BinaryForm<C>, 4>& coords, const Vec<C>& preimages,
    const PointConfig<C>& config, double tol = 1e-12) {
  detail::GaugeSystem<C> sys(config);
  Vec<C> z(16);
  // read off gauge unknowns from the canonical coefficients
  const auto& p1 = config.point(0).coords();
  const auto& p3 = config.point(2).coords();
  std::size_t i1 = 0, i3 = 0;
  real_t<C> b1(0), b3(0);
  for (std::size_t i = 0; i < 4; ++i) {
    if (abs2(p1[i]) > b1) {
      b1 = abs2(p1[i]);
      i1 = i;
    }
    if (abs2(p3[i]) > b3) {
      b3 = abs2(p3[i]);
      i3 = i;
    }
  }
  for (int k = 0; k < 4; ++k) {
    z[k] = coords[k].coeffs()[2];
    z[4 + k] = coords[k].coeffs()[3];
  }
  z[8] = coords[i1].coeffs()[4] / p1[i1];
  z[9] = coords[i3].coeffs()[0] / p3[i3];
  z[10] = C(1);
  for (int i = 0; i < 5; ++i) z[11 + i] = preimages[3 + i];

  num::GNOptions<C> opt;
  opt.tol = field<C>::from_double(tol);
  opt.max_iter = 60;
  auto jac = [&](const Vec<C>& zz, const Vec<C>&) { return sys.jacobian(zz); };
  auto res = num::gauss_newton(sys, jac, z, opt);
  if (!res.converged)
    fail(errc::refinement_diverged, "gauge-fixed refinement did not converge");
  auto refined = sys.coords_from(res.x);
  Vec<C> ws = preimages;
  for (int i = 0; i < 5; ++i) ws[3 + i] = res.x[11 + i];
  ws[0] = C(0);
  ws[1] = C(1);
  return {refined, ws};
}

// --- scan for the marked quadrics -------------------------------------------------

struct ScanOptions {
  int n_samples = 512;
  double dip_threshold = 0.08;
  double min_root_distance = 1e-7;
  std::uint64_t seed = 0xC0DE;
};

namespace detail {

// locally holomorphic det along a continued branch, for secant refinement.
// Row scales are captured on the first evaluation and frozen so later values
// stay comparable and the zero locus is untouched.
template <class C>
struct BranchDet {
  const Pencil<C>* p;
  const PointConfig<C>* config;
  Ruling ruling;
  MarkedMember<C> seed;
  Vec<real_t<C>> fixed_norms;

  C operator()(const C& t) {
    auto [plus, minus] = pencil::parametrize(*p, t, &seed);
    const MarkedMember<C>& m = (ruling == Ruling::plus) ? plus : minus;
    seed = plus;  // continue the branch
    const bool capture = fixed_norms.empty();
    if (capture) fixed_norms.resize(8);
    Mat<C> M(8, 8);
    for (std::size_t i = 0; i < config->size(); ++i) {
      auto [st, uv] = pencil::pull_back(m, config->point(i));
      Vec<C> row = incidence_row(st, uv);
      if (capture) fixed_norms[i] = num::norm2(row);
      num::scale(row, C(real_t<C>(1) / fixed_norms[i]));
      M.set_row(i, row);
    }
    return num::determinant(M);
  }
};

struct RawCandidate {
  c53 t;
  bool swapped_chart;
  Ruling ruling;
};

// scan one chart of the pencil at double precision; one parametrization per
// grid point serves both rulings (the minus rows just swap the factors)
inline void scan_chart(const Pencil<c53>& p, const PointConfig<c53>& config, bool swapped,
                       const std::vector<double>& radii, double real_lo, double real_hi,
                       const ScanOptions& opt, std::vector<RawCandidate>& out,
                       const std::vector<c53>& avoid) {
  auto near_avoid = [&](const c53& t) {
    for (const auto& a : avoid)
      if (std::abs(t - a) < 1e-5) return true;
    return false;
  };
  std::vector<std::vector<c53>> paths;
  for (double r : radii) {
    std::vector<c53> path;
    for (int k = 0; k <= opt.n_samples; ++k) {
      double a = 2.0 * M_PI * k / opt.n_samples;
      path.push_back(c53(r * std::cos(a), r * std::sin(a)));
    }
    paths.push_back(path);
  }
  if (real_hi > real_lo) {
    std::vector<c53> path;
    for (int k = 0; k <= opt.n_samples; ++k)
      path.push_back(c53(real_lo + (real_hi - real_lo) * k / opt.n_samples, 0.0));
    paths.push_back(path);
  }
  for (const auto& path : paths) {
    std::vector<double> vplus(path.size(), 1e300), vminus(path.size(), 1e300);
    std::optional<MarkedMember<c53>> seed;
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (near_avoid(path[k])) {
        seed.reset();
        continue;
      }
      try {
        auto [plus, minus] = pencil::parametrize(p, path[k], seed ? &*seed : nullptr);
        seed = plus;
        Mat<c53> mp(8, 8), mm(8, 8);
        for (std::size_t i = 0; i < 8; ++i) {
          auto [st, uv] = pencil::pull_back(plus, config.point(i));
          Vec<c53> rp = incidence_row(st, uv);
          Vec<c53> rm = incidence_row(uv, st);
          num::scale(rp, c53(1.0 / field<c53>::to_double(num::norm2(rp))));
          num::scale(rm, c53(1.0 / field<c53>::to_double(num::norm2(rm))));
          mp.set_row(i, rp);
          mm.set_row(i, rm);
        }
        vplus[k] = std::abs(num::determinant(mp));
        vminus[k] = std::abs(num::determinant(mm));
      } catch (const Error&) {
        seed.reset();
      }
    }
    for (std::size_t k = 1; k + 1 < path.size(); ++k) {
      if (vplus[k] <= opt.dip_threshold && vplus[k] <= vplus[k - 1] && vplus[k] <= vplus[k + 1])
        out.push_back({path[k], swapped, Ruling::plus});
      if (vminus[k] <= opt.dip_threshold && vminus[k] <= vminus[k - 1] &&
          vminus[k] <= vminus[k + 1])
        out.push_back({path[k], swapped, Ruling::minus});
    }
  }
}

}  // namespace detail

template <class C>
struct FindDiagnostics {
  int raw_candidates = 0;
  int refined = 0;
  int polish_runs = 0;
  long polish_evals = 0;
  bool fallback_grid_used = false;
  std::vector<std::pair<C, C>> accepted_params;  // member parameters in P^1
};

// Locate the marked quadrics solving the incidence problem by scanning
// |incidence_det| over both charts and rulings, refining by secant on the
// locally-continued branch, then polishing at working precision. The count of
// 4 is checked afterwards: it is the paper-level contract, not an input.
template <class C>
inline std::vector<MarkedQuadricSolution<C>> find_marked_quadrics(
    const Pencil<C>& p, const PointConfig<C>& config, const ScanOptions& opt = ScanOptions{},
    FindDiagnostics<C>* diag_out = nullptr) {
  auto disc = pencil::discriminant(p);
  if (!disc.distinct_flag)
    fail(errc::degenerate_pencil, "find_marked_quadrics needs distinct discriminant roots");

  // double-precision copies for the scan
  Pencil<c53> pd = pencil::pencil_cast<c53>(p);
  std::vector<ProjPoint<c53>> pts53;
  for (std::size_t i = 0; i < config.size(); ++i) {
    Vec<c53> v(4);
    for (int k = 0; k < 4; ++k) v[k] = convert_scalar<c53>(config.point(i)[k]);
    pts53.push_back(ProjPoint<c53>(v));
  }
  PointConfig<c53> cfg53(pts53);

  auto chart_roots = [&](bool swapped) {
    std::vector<c53> roots;
    for (const auto& rt : disc.roots) {
      c53 x = convert_scalar<c53>(rt.x), y = convert_scalar<c53>(rt.y);
      c53 num_ = swapped ? y : x;
      c53 den = swapped ? x : y;
      if (std::abs(den) > 1e-9 * std::abs(num_)) roots.push_back(num_ / den);
    }
    return roots;
  };

  // geometric ladder of circle radii spanning the discriminant-root scale;
  // spacing tight enough that every zero sits radially near some circle
  auto radii_for = [&](const std::vector<c53>& roots, double factor) {
    double rmin = 1e9, rmax = 0;
    for (const auto& r : roots) {
      double m = std::abs(r);
      if (m > 1e-6) rmin = std::min(rmin, m);
      rmax = std::max(rmax, m);
    }
    if (rmax == 0) {
      rmin = 0.5;
      rmax = 2.0;
    }
    rmin = std::max(rmin, 1e-3);
    rmax = std::max(rmax, rmin);
    std::vector<double> radii;
    for (double r = 0.35 * rmin; r <= 2.8 * rmax; r *= factor) radii.push_back(r);
    return radii;
  };

  std::vector<detail::RawCandidate> raw;
  for (bool swapped : {false, true}) {
    Pencil<c53> chart = swapped ? pd.swapped() : pd;
    auto roots = chart_roots(swapped);
    auto radii = radii_for(roots, 1.22);
    double lo = 1e9, hi = -1e9;
    for (const auto& r : roots)
      if (std::abs(r.imag()) < 1e-7) {
        lo = std::min(lo, r.real());
        hi = std::max(hi, r.real());
      }
    double margin = (hi > lo) ? 0.35 * (hi - lo) : 0.0;
    detail::scan_chart(chart, cfg53, swapped, radii, lo - margin, hi + margin, opt, raw, roots);
  }

  FindDiagnostics<C> diag;
  diag.raw_candidates = static_cast<int>(raw.size());

  // secant refinement at double, then polish at working precision
  std::vector<std::pair<c53, c53>> polished53;
  auto refine_candidate = [&](const detail::RawCandidate& cand)
      -> std::optional<MarkedQuadricSolution<C>> {
    Pencil<c53> chart53 = cand.swapped_chart ? pd.swapped() : pd;
    // ruling labels are path-local: re-identify against a fresh
    // parametrization by whichever determinant actually dips
    detail::BranchDet<c53> f{&chart53, &cfg53, cand.ruling, {}, {}};
    try {
      auto [plus, minus] = pencil::parametrize(chart53, cand.t);
      double dp = std::abs(num::determinant(incidence_matrix(plus, cfg53)));
      double dm = std::abs(num::determinant(incidence_matrix(minus, cfg53)));
      f.ruling = (dp <= dm) ? Ruling::plus : Ruling::minus;
      f.seed = plus;
    } catch (const Error&) {
      return std::nullopt;
    }
    c53 t0 = cand.t, t1 = cand.t * c53(1.0 + 1e-6) + c53(1e-9, 1e-9);
    c53 f0, f1;
    try {
      f0 = f(t0);
      f1 = f(t1);
    } catch (const Error&) {
      return std::nullopt;
    }
    for (int it = 0; it < 60; ++it) {
      if (std::abs(f1 - f0) == 0.0) break;
      c53 t2 = t1 - f1 * (t1 - t0) / (f1 - f0);
      t0 = t1;
      f0 = f1;
      t1 = t2;
      try {
        f1 = f(t1);
      } catch (const Error&) {
        return std::nullopt;
      }
      if (std::abs(t1 - t0) < 1e-14 * (1.0 + std::abs(t1))) break;
    }
    if (std::abs(f1) > 1e-9) return std::nullopt;
    // the scanned det also dips into discriminant roots, where the
    // parametrization degenerates; solutions are smooth members only
    for (const auto& rroot : chart_roots(cand.swapped_chart))
      if (std::abs(t1 - rroot) < 1e-4 * (1.0 + std::abs(t1))) return std::nullopt;
    // skip double-precision duplicates before the expensive polish
    {
      c53 l = cand.swapped_chart ? c53(1) : t1;
      c53 m = cand.swapped_chart ? t1 : c53(1);
      double nn = std::sqrt(std::norm(l) + std::norm(m));
      l /= nn;
      m /= nn;
      for (const auto& seen : polished53) {
        c53 cross = l * seen.second - m * seen.first;
        if (std::abs(cross) < 1e-9) return std::nullopt;
      }
      polished53.push_back({l, m});
    }

    // working-precision polish; ruling identified by the smaller determinant
    Pencil<C> chart = cand.swapped_chart ? p.swapped() : p;
    C t = convert_scalar<C>(t1);
    Ruling ruling = Ruling::plus;
    try {
      auto [plus, minus] = pencil::parametrize(chart, t);
      auto dp = cabs(num::determinant(incidence_matrix(plus, config)));
      auto dm = cabs(num::determinant(incidence_matrix(minus, config)));
      ruling = (dp <= dm) ? Ruling::plus : Ruling::minus;
    } catch (const Error&) {
      return std::nullopt;
    }
    diag.polish_runs += 1;
    detail::BranchDet<C> fh{&chart, &config, ruling, {}, {}};
    try {
      auto [plus, minus] = pencil::parametrize(chart, t);
      fh.seed = plus;
    } catch (const Error&) {
      return std::nullopt;
    }
    C ta = t, tb = t * C(field<C>::from_double(1.0 + 1e-12));
    C fa, fb;
    try {
      fa = fh(ta);
      fb = fh(tb);
    } catch (const Error&) {
      return std::nullopt;
    }
    const double f_start = field<C>::to_double(cabs(fb));
    for (int it = 0; it < 48; ++it) {
      diag.polish_evals += 1;
      if (cabs(C(fb - fa)) == real_t<C>(0)) break;
      C tc = tb - fb * (tb - ta) / (fb - fa);
      ta = tb;
      fa = fb;
      tb = tc;
      try {
        fb = fh(tb);
      } catch (const Error&) {
        return std::nullopt;
      }
      double fmag = field<C>::to_double(cabs(fb));
      if (fmag < 1e-26) break;  // far below any scattered dip
      if (it == 11 && fmag > 1e-3 * std::max(f_start, 1e-12)) return std::nullopt;
      if (cabs(C(tb - ta)) < field<C>::eps() * real_t<C>(1e4) * (real_t<C>(1) + cabs(tb))) break;
    }

    MarkedQuadricSolution<C> sol;
    sol.t = tb;
    sol.swapped_chart = cand.swapped_chart;
    try {
      auto [plus, minus] = pencil::parametrize(chart, tb);
      sol.ruling = ruling;
      sol.member = (ruling == Ruling::plus) ? plus : minus;
      Mat<C> M = incidence_matrix(sol.member, config);
      auto sv = num::singular_values(M);
      double s0 = field<C>::to_double(sv.singular[0]);
      double s6 = field<C>::to_double(sv.singular[6]);
      double s7 = field<C>::to_double(sv.singular[7]);
      // a polished zero at working precision sits many orders below the
      // scatter produced by nearby ill-conditioned dips
      if (s7 / s0 > 1e-18 || s6 / s0 < 1e-6) return std::nullopt;
      sol.incidence_rank = 7;
      sol.kernel_vector = sv.right.col(7);
    } catch (const Error&) {
      return std::nullopt;
    }
    return sol;
  };

  std::vector<MarkedQuadricSolution<C>> sols;
  auto push_dedup = [&](const MarkedQuadricSolution<C>& s) {
    auto [l, m] = s.param_p1();
    Vec<C> a{l, m};
    for (const auto& e : sols) {
      auto [l2, m2] = e.param_p1();
      Vec<C> b{l2, m2};
      if (geom::proj_distance<C>(a, b) < 1e-7) return;
    }
    sols.push_back(s);
  };
  for (const auto& cand : raw) {
    auto s = refine_candidate(cand);
    if (s) push_dedup(*s);
  }
  diag.refined = static_cast<int>(sols.size());

  if (sols.size() != 4) {
    // denser polar fallback grid over both charts before giving up
    diag.fallback_grid_used = true;
    std::vector<detail::RawCandidate> raw2;
    for (bool swapped : {false, true}) {
      Pencil<c53> chart = swapped ? pd.swapped() : pd;
      auto roots = chart_roots(swapped);
      auto radii = radii_for(roots, 1.1);
      ScanOptions o2 = opt;
      o2.dip_threshold = std::max(0.15, 2 * opt.dip_threshold);
      detail::scan_chart(chart, cfg53, swapped, radii, -25.0, 25.0, o2, raw2, roots);
    }
    for (const auto& cand : raw2) {
      auto s = refine_candidate(cand);
      if (s) push_dedup(*s);
    }
  }

  for (const auto& s : sols) diag.accepted_params.push_back(s.param_p1());
  if (diag_out) *diag_out = diag;
  if (sols.size() != 4)
    fail(errc::root_count_mismatch,
         "expected 4 marked quadrics, found " + std::to_string(sols.size()) + " (raw dips " +
             std::to_string(raw.size()) + ")");

  std::sort(sols.begin(), sols.end(), [](const auto& a, const auto& b) {
    auto [la, ma] = a.param_p1();
    auto [lb, mb] = b.param_p1();
    // sort by the affine representative in chart 0, infinities last
    bool ia = cabs(ma) < real_t<C>(1e-12), ib = cabs(mb) < real_t<C>(1e-12);
    if (ia != ib) return ib;
    if (ia && ib) return false;
    C ta = la / ma, tb2 = lb / mb;
    if (re(ta) != re(tb2)) return re(ta) < re(tb2);
    return im(ta) < im(tb2);
  });
  return sols;
}

// --- curve extraction ----------------------------------------------------------

// Unique bidegree-(1,3) curve on a solution member through 7 of the 8 points;
// the held-out point's incidence comes for free and is enforced.
template <class C>
inline BidegreeCurve<C> curve_on_quadric(const MarkedQuadricSolution<C>& sol,
                                         const PointConfig<C>& config,
                                         std::size_t holdout_index = 7) {
  Mat<C> rows = incidence_matrix(sol.member, config);
  Mat<C> sub(7, 8);
  std::size_t w = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    if (i == holdout_index) continue;
    sub.set_row(w++, rows.row(i));
  }
  auto sv = num::singular_values(sub);
  double s0 = field<C>::to_double(sv.singular[0]);
  double s6 = field<C>::to_double(sv.singular[6]);
  double s7 = field<C>::to_double(sv.singular[7]);
  if (s6 / s0 < 1e-6) fail(errc::rank_deficient, "incidence rank below 7 at holdout system");
  (void)s7;
  Vec<C> g = sv.right.col(7);
  double free_resid = dabs(num::bdot(rows.row(holdout_index), g));
  if (free_resid > 1e-8)
    fail(errc::free_point_failed,
         "holdout incidence residual " + std::to_string(free_resid) + " exceeds 1e-8");
  // F = s A(u,v) + t B(u,v); the graph is (s:t) = (-B : A)(u,v)
  Vec<C> acoef(g.begin(), g.begin() + 4);
  Vec<C> bcoef(g.begin() + 4, g.end());
  for (auto& c : bcoef) c = -c;
  BidegreeCurve<C> out{BinaryForm<C>(3, bcoef), BinaryForm<C>(3, acoef), sol};
  if (dabs(num::resultant(out.g1, out.g2)) < 1e-10)
    fail(errc::rank_deficient, "bidegree curve has a common factor: degenerate solution");
  return out;
}

// Compose the graph with the member parametrization, canonicalize, and refine.
template <class C>
inline QuarticCurve<C> assemble_quartic(const BidegreeCurve<C>& b, const PointConfig<C>& config) {
  const auto& m = b.source.member;
  std::array<BinaryForm<C>, 4> coords;
  for (int k = 0; k < 4; ++k) {
    // x_k = S(0,0) g1 u + S(0,1) g1 v + S(1,0) g2 u + S(1,1) g2 v
    Vec<C> cs(5, C(0));
    auto add_term = [&](const BinaryForm<C>& g, const C& coef, int shift) {
      // multiply degree-3 form by u (shift 0) or v (shift 1)
      for (int j = 0; j < 4; ++j) cs[j + shift] += coef * g.coeffs()[j];
    };
    add_term(b.g1, m.sigma[k](0, 0), 0);
    add_term(b.g1, m.sigma[k](0, 1), 1);
    add_term(b.g2, m.sigma[k](1, 0), 0);
    add_term(b.g2, m.sigma[k](1, 1), 1);
    coords[k] = BinaryForm<C>(4, cs);
  }
  auto canon = canonicalize(coords, config, 1e-4);
  if (!canon) fail(errc::refinement_diverged, "canonicalization failed on assembled curve");
  auto [refined, ws] = refine_canonical(canon->first, canon->second, config);

  QuarticCurve<C> out;
  out.coords = refined;
  out.preimages = ws;
  out.member_param = b.source.param_p1();
  out.member_real = b.source.param_real();
  out.max_residual = incidence_residual(refined, config);
  if (out.max_residual > 1e-10)
    fail(errc::refinement_diverged, "post-refinement incidence residual too large");
  if (!nondegenerate_quartic(out.coords))
    fail(errc::rank_deficient, "assembled curve is degenerate");
  return out;
}

// Reality class from the member parameter and its real form.
template <class C>
inline Reality reality_of_curve(const Pencil<C>& p, const MarkedQuadricSolution<C>& sol) {
  if (!p.real_basis()) fail(errc::bad_argument, "reality_of_curve needs a real pencil basis");
  if (!sol.param_real()) return Reality::complex_member;
  Pencil<C> chart = sol.swapped_chart ? p.swapped() : p;
  auto rf = pencil::real_form(chart, C(re(sol.t)));
  if (rf == pencil::RealFormKind::split) return Reality::real_split;
  if (rf == pencil::RealFormKind::empty) return Reality::real_twisted;
  fail(errc::inconsistent_input,
       "solution member has sphere signature: inconsistent with a real (1,3) class");
}

// The conjugation of a real curve acts on the parameter by an antiholomorphic
// involution beta with x(beta(w)) ~ conj(x(w)), beta(w) = M(conj w) for a
// Moebius matrix M with M conj(M) = lambda I. lambda < 0 is the
// fixed-point-free class, conjugate to (s:t) -> (-conj t : conj s).
template <class C>
struct ConjugationInvolution {
  Mat<C> moebius;     // 2x2 matrix M
  double lambda = 0;  // M conj(M) = lambda I
  double residual = 1e300;
  bool fixed_point_free() const { return lambda < 0; }
};

template <class C>
inline std::optional<ConjugationInvolution<C>> conjugation_involution(
    const std::array<BinaryForm<C>, 4>& coords, double tol = 1e-8) {
  // three sample parameters and the preimages of their conjugated images
  const std::pair<C, C> samples[3] = {{C(0.31, 0.17), C(1)},
                                      {C(1.22, -0.41), C(1)},
                                      {C(-0.57, 0.83), C(1)}};
  std::pair<C, C> images[3];
  for (int k = 0; k < 3; ++k) {
    Vec<C> x = detail::eval_coords_proj(coords, samples[k].first, samples[k].second);
    for (auto& c : x) c = cconj(c);
    auto cands = detail::point_preimages(coords, ProjPoint<C>(x), 1e-6);
    if (cands.empty()) return std::nullopt;
    double best = 1e300;
    std::size_t bi = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      Vec<C> y = detail::eval_coords_proj(coords, cands[i].first, cands[i].second);
      double d = geom::proj_distance<C>(y, x);
      if (d < best) {
        best = d;
        bi = i;
      }
    }
    images[k] = cands[bi];
  }
  // M maps conj(sample_k) to image_k
  auto conj_pair = [](const std::pair<C, C>& p) {
    return std::make_pair(cconj(p.first), cconj(p.second));
  };
  Mat<C> Msrc = detail::moebius_through(conj_pair(samples[0]), conj_pair(samples[1]),
                                        conj_pair(samples[2]));
  Mat<C> Mdst = detail::moebius_through(images[0], images[1], images[2]);
  Mat<C> M = num::matmul(Mdst, num::inverse(Msrc));
  // normalize scale
  real_t<C> nm = num::frobenius(M);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) M(i, j) /= C(nm);

  ConjugationInvolution<C> out;
  out.moebius = M;
  Mat<C> Mc(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) Mc(i, j) = cconj(M(i, j));
  Mat<C> N = num::matmul(M, Mc);
  double off = std::max(dabs(N(0, 1)), dabs(N(1, 0)));
  double diag_dev = dabs(C(N(0, 0) - N(1, 1)));
  double lam_im = std::abs(field<C>::to_double(im(N(0, 0))));
  if (off > 1e-6 || diag_dev > 1e-6 || lam_im > 1e-6) return std::nullopt;
  out.lambda = field<C>::to_double(re(N(0, 0)));

  // verification: conj(x(w)) ~ x(M(conj w)) on fresh samples
  Rng rng(0x7157);
  double worst = 0;
  for (int trial = 0; trial < 8; ++trial) {
    C u(field<C>::from_double(rng.normal()), field<C>::from_double(rng.normal()));
    C v(field<C>::from_double(rng.normal()), field<C>::from_double(rng.normal()));
    C bu = M(0, 0) * cconj(u) + M(0, 1) * cconj(v);
    C bv = M(1, 0) * cconj(u) + M(1, 1) * cconj(v);
    Vec<C> lhs = detail::eval_coords_proj(coords, bu, bv);
    Vec<C> rhs = detail::eval_coords_proj(coords, u, v);
    for (auto& c : rhs) c = cconj(c);
    worst = std::max(worst, geom::proj_distance<C>(lhs, rhs));
  }
  out.residual = worst;
  if (worst > tol) return std::nullopt;
  return out;
}

// Twisted-real curves carry the fixed-point-free involution class.
template <class C>
inline bool twisted_involution_check(const std::array<BinaryForm<C>, 4>& coords,
                                     double tol = 1e-8) {
  auto inv = conjugation_involution(coords, tol);
  return inv && inv->fixed_point_free();
}

// --- end-to-end enumeration -------------------------------------------------------

template <class C>
struct EnumerationResult {
  std::vector<QuarticCurve<C>> curves;
  std::vector<MarkedQuadricSolution<C>> solutions;
  int real_split = 0, real_twisted = 0, complex_pairs = 0;
};

template <class C>
inline EnumerationResult<C> enumerate_quartics(const Pencil<C>& p, const PointConfig<C>& config,
                                               const ScanOptions& opt = ScanOptions{}) {
  EnumerationResult<C> out;
  out.solutions = find_marked_quadrics(p, config, opt);
  for (const auto& sol : out.solutions) {
    auto b = curve_on_quadric(sol, config);
    auto q = assemble_quartic(b, config);
    if (p.real_basis()) {
      Reality r = reality_of_curve(p, sol);
      q.reality = r;
      if (r == Reality::real_split) ++out.real_split;
      if (r == Reality::real_twisted) {
        ++out.real_twisted;
        if (!twisted_involution_check(q.coords))
          fail(errc::inconsistent_input, "twisted curve fails the involution check");
      }
    }
    out.curves.push_back(std::move(q));
  }
  // conjugate partners among complex members
  for (std::size_t i = 0; i < out.curves.size(); ++i) {
    if (out.curves[i].reality != Reality::complex_member || !p.real_basis()) continue;
    for (std::size_t j = 0; j < out.curves.size(); ++j) {
      if (i == j) continue;
      auto [li, mi] = out.curves[i].member_param;
      auto [lj, mj] = out.curves[j].member_param;
      Vec<C> a{cconj(li), cconj(mi)}, b2{lj, mj};
      if (geom::proj_distance<C>(a, b2) < 1e-6) out.curves[i].partner_index = static_cast<int>(j);
    }
  }
  if (p.real_basis()) {
    int complex_count = 0;
    for (const auto& q : out.curves)
      if (q.reality == Reality::complex_member) ++complex_count;
    if (complex_count % 2 != 0)
      fail(errc::inconsistent_input, "complex member curves do not pair up");
    out.complex_pairs = complex_count / 2;
  }
  return out;
}

// --- brute-force oracle ------------------------------------------------------------

struct OracleOptions {
  int restarts = 4000;
  std::uint64_t seed = 1;
  double converge_tol = 1e-9;
  double dedup_tol = 1e-6;
};

template <class C>
struct OracleSolution {
  std::array<BinaryForm<C>, 4> coords;
  Vec<C> preimages;
  int hits = 0;
};

// Exploration runs on the parameter-reduced incidence system: with the three
// gauge preimages pinned, the 20 curve coefficients are the kernel of a 24x20
// linear system A(w) built from the five free preimages, so solutions are the
// zeros of a square 5-dimensional holomorphic map. Restarts are gamma-trick
// parameter-homotopy paths from configurations sampled on random planted
// curves (whose preimages are known exactly) to the target configuration.
// A naive descent multistart settles into zero-residual families of
// base-point curves instead: with enough free preimages at a common base
// point every incidence condition vanishes identically. Each find is
// polished on the gauge-fixed 16-unknown/16-equation system at working
// precision.
namespace detail {

template <class C>
struct ReducedIncidence {
  std::array<std::array<Vec<C>, 3>, 8> projectors;
  Mat<C> lam;   // 19x24 fixed random row mixer
  Vec<C> ell;   // 20-dim normalization functional
  Mat<C> wmix;  // 5x24 fixed random residual projector

  explicit ReducedIncidence(const PointConfig<C>& cfg) {
    init_mixers();
    set_config(cfg);
  }

  void init_mixers() {
    Rng rng(0x0E11A);
    lam = Mat<C>(19, 24);
    for (std::size_t i = 0; i < 19; ++i)
      for (std::size_t j = 0; j < 24; ++j)
        lam(i, j) = C(field<C>::from_double(rng.normal()), field<C>::from_double(rng.normal()));
    ell.resize(20);
    for (auto& c : ell)
      c = C(field<C>::from_double(rng.normal()), field<C>::from_double(rng.normal()));
    wmix = Mat<C>(5, 24);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 24; ++j)
        wmix(i, j) = C(field<C>::from_double(rng.normal()), field<C>::from_double(rng.normal()));
  }

  // swap in a new configuration; the fixed random mixers stay put
  void set_config(const PointConfig<C>& cfg) {
    for (int i = 0; i < 8; ++i) projectors[i] = orth_complement(cfg.point(i).coords());
  }

  // three incidence rows of point `pi` at parameter (u:v), and optionally the
  // derivative rows with respect to the affine parameter (u varies, v = 1)
  void point_rows(std::size_t pi, const C& u, const C& v, Mat<C>& A, std::size_t row0,
                  Mat<C>* dA = nullptr) const {
    Vec<C> up(5), vp(5);
    up[0] = C(1);
    vp[0] = C(1);
    for (int k = 1; k < 5; ++k) {
      up[k] = up[k - 1] * u;
      vp[k] = vp[k - 1] * v;
    }
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 4; ++k)
        for (int d = 0; d < 5; ++d) {
          C mono = up[4 - d] * vp[d];
          A(row0 + j, 5 * k + d) = cconj(projectors[pi][j][k]) * mono;
          if (dA) {
            C dmono = (d == 4) ? C(0) : C(double(4 - d)) * up[3 - d] * vp[d];
            (*dA)(j, 5 * k + d) = cconj(projectors[pi][j][k]) * dmono;
          }
        }
  }

  Mat<C> assemble(const Vec<C>& w, std::array<Mat<C>, 5>* deriv = nullptr) const {
    Mat<C> A(24, 20);
    point_rows(0, C(0), C(1), A, 0);
    point_rows(1, C(1), C(1), A, 3);
    point_rows(2, C(1), C(0), A, 6);
    for (int i = 0; i < 5; ++i) {
      if (deriv) (*deriv)[i] = Mat<C>(3, 20);
      point_rows(3 + i, w[i], C(1), A, 9 + 3 * i, deriv ? &(*deriv)[i] : nullptr);
    }
    return A;
  }

  Mat<C> square_system(const Mat<C>& A) const {
    Mat<C> M(20, 20);
    for (std::size_t i = 0; i < 19; ++i)
      for (std::size_t j = 0; j < 20; ++j) {
        C s(0);
        for (std::size_t k = 0; k < 24; ++k) s += lam(i, k) * A(k, j);
        M(i, j) = s;
      }
    for (std::size_t j = 0; j < 20; ++j) M(19, j) = ell[j];
    return M;
  }

  // kernel-style coefficient vector at w; nullopt on a singular square system
  std::optional<Vec<C>> coefficients(const Vec<C>& w) const {
    Mat<C> A = assemble(w);
    try {
      num::LuFactors<C> lu(square_system(A));
      Vec<C> e(20, C(0));
      e[19] = C(1);
      return lu.solve(e);
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  Vec<C> residual(const Vec<C>& w) const {
    const C nan_val(field<C>::from_double(std::numeric_limits<double>::quiet_NaN()));
    Vec<C> G(5, nan_val);
    Mat<C> A = assemble(w);
    std::optional<num::LuFactors<C>> lu;
    try {
      lu.emplace(square_system(A));
    } catch (const Error&) {
      return G;
    }
    Vec<C> e(20, C(0));
    e[19] = C(1);
    Vec<C> c = lu->solve(e);
    Vec<C> r = num::matvec(A, c);
    for (int i = 0; i < 5; ++i) {
      C s(0);
      for (std::size_t k = 0; k < 24; ++k) s += wmix(i, k) * r[k];
      G[i] = s;
    }
    return G;
  }

  // fused residual+Jacobian Newton corrector for path tracking: one assembly
  // and one LU factorization per iteration, square solve for the step
  bool newton_correct(Vec<C>& w, double tol, int max_iter) const {
    for (int it = 0; it < max_iter; ++it) {
      std::array<Mat<C>, 5> dA;
      Mat<C> A = assemble(w, &dA);
      std::optional<num::LuFactors<C>> lu;
      try {
        lu.emplace(square_system(A));
      } catch (const Error&) {
        return false;
      }
      Vec<C> e(20, C(0));
      e[19] = C(1);
      Vec<C> c = lu->solve(e);
      Vec<C> r = num::matvec(A, c);
      Vec<C> G(5);
      for (int i = 0; i < 5; ++i) {
        C s(0);
        for (std::size_t k = 0; k < 24; ++k) s += wmix(i, k) * r[k];
        G[i] = s;
      }
      double gn = field<C>::to_double(num::norm2(G));
      if (!std::isfinite(gn)) return false;
      if (gn < tol) return true;
      Mat<C> J(5, 5);
      for (int i = 0; i < 5; ++i) {
        Vec<C> dAc(3, C(0));
        for (int j = 0; j < 3; ++j) {
          C s(0);
          for (std::size_t col = 0; col < 20; ++col) s += dA[i](j, col) * c[col];
          dAc[j] = s;
        }
        Vec<C> rhs(20, C(0));
        for (std::size_t row = 0; row < 19; ++row) {
          C s(0);
          for (int j = 0; j < 3; ++j) s += lam(row, 9 + 3 * i + j) * dAc[j];
          rhs[row] = -s;
        }
        Vec<C> dc = lu->solve(rhs);
        Vec<C> dr = num::matvec(A, dc);
        for (int j = 0; j < 3; ++j) dr[9 + 3 * i + j] += dAc[j];
        for (int row = 0; row < 5; ++row) {
          C s(0);
          for (std::size_t k = 0; k < 24; ++k) s += wmix(row, k) * dr[k];
          J(row, i) = s;
        }
      }
      Vec<C> negG(5);
      for (int i = 0; i < 5; ++i) negG[i] = -G[i];
      Vec<C> delta;
      try {
        delta = num::lu_solve(J, negG);
      } catch (const Error&) {
        return false;
      }
      if (!num::vec_finite(delta)) return false;
      w = num::vadd(w, delta);
    }
    // accept when the final residual is already below tolerance
    Vec<C> G = residual(w);
    return num::vec_finite(G) && field<C>::to_double(num::norm2(G)) < tol;
  }

  Mat<C> jacobian(const Vec<C>& w) const {
    std::array<Mat<C>, 5> dA;
    Mat<C> A = assemble(w, &dA);
    num::LuFactors<C> lu(square_system(A));
    Vec<C> e(20, C(0));
    e[19] = C(1);
    Vec<C> c = lu.solve(e);
    Mat<C> J(5, 5);
    for (int i = 0; i < 5; ++i) {
      // dM_i = lam[:, rows of point 3+i] * dA_i, extended by a zero ell row
      Vec<C> dAc(3, C(0));
      for (int j = 0; j < 3; ++j) {
        C s(0);
        for (std::size_t col = 0; col < 20; ++col) s += dA[i](j, col) * c[col];
        dAc[j] = s;
      }
      Vec<C> rhs(20, C(0));
      for (std::size_t row = 0; row < 19; ++row) {
        C s(0);
        for (int j = 0; j < 3; ++j) s += lam(row, 9 + 3 * i + j) * dAc[j];
        rhs[row] = -s;
      }
      Vec<C> dc = lu.solve(rhs);
      // dr = dA_i c (three rows) + A dc
      Vec<C> dr = num::matvec(A, dc);
      for (int j = 0; j < 3; ++j) dr[9 + 3 * i + j] += dAc[j];
      for (int row = 0; row < 5; ++row) {
        C s(0);
        for (std::size_t k = 0; k < 24; ++k) s += wmix(row, k) * dr[k];
        J(row, i) = s;
      }
    }
    return J;
  }
};

}  // namespace detail

template <class C>
inline std::vector<OracleSolution<C>> oracle_enumerate(const PointConfig<C>& config,
                                                       const OracleOptions& opt = OracleOptions{}) {
  // exploration at double precision
  std::vector<ProjPoint<c53>> pts53;
  for (std::size_t i = 0; i < config.size(); ++i) {
    Vec<c53> v(4);
    for (int k = 0; k < 4; ++k) v[k] = convert_scalar<c53>(config.point(i)[k]);
    pts53.push_back(ProjPoint<c53>(v));
  }
  PointConfig<c53> cfg53(pts53);
  Rng rng(opt.seed);

  // Eight gauge rotations: paths alternate which point triple is pinned at
  // (0, 1, infinity), so solutions sitting at extreme parameters in one gauge
  // remain reachable in another. Endpoints are canonicalized back to the
  // standard gauge before deduplication.
  std::vector<PointConfig<c53>> rot_cfgs;
  std::vector<std::vector<ProjPoint<c53>>> rot_pts(8);
  for (int s = 0; s < 8; ++s) {
    std::vector<ProjPoint<c53>> pts;
    for (int i = 0; i < 8; ++i) pts.push_back(pts53[(i + s) % 8]);
    rot_pts[s] = pts;
    rot_cfgs.emplace_back(pts);
  }
  std::vector<detail::ReducedIncidence<c53>> reds;
  reds.reserve(8);
  for (int s = 0; s < 8; ++s) reds.emplace_back(rot_cfgs[s]);

  std::vector<OracleSolution<c53>> found53;
  for (int path_i = 0; path_i < opt.restarts; ++path_i) {
    Rng sub = rng.fork(path_i);
    const int rot = path_i % 8;
    auto& red_track = reds[rot];
    const auto& target = rot_pts[rot];
    auto config_at = [&](const std::vector<Vec<c53>>& q, const c53& gamma, double t) {
      std::vector<ProjPoint<c53>> pts;
      for (std::size_t i = 0; i < 8; ++i) {
        Vec<c53> v(4);
        for (int k = 0; k < 4; ++k)
          v[k] = (1.0 - t) * gamma * q[i][k] + t * target[i].coords()[k];
        pts.push_back(ProjPoint<c53>(v));
      }
      return PointConfig<c53>(std::move(pts));
    };
    // random planted start curve with spread preimages
    std::array<BinaryForm<c53>, 4> start_coords;
    bool bad = false;
    for (int k = 0; k < 4; ++k) {
      Vec<c53> cs(5);
      for (auto& c : cs) c = c53(sub.normal(), sub.normal());
      start_coords[k] = BinaryForm<c53>(4, cs);
    }
    Vec<c53> v8(8);
    for (int i = 0; i < 8 && !bad; ++i) {
      for (int attempt = 0;; ++attempt) {
        if (attempt > 24) {
          bad = true;
          break;
        }
        c53 a(sub.normal(), sub.normal()), b(sub.normal(), sub.normal());
        if (std::abs(b) < 1e-6) continue;
        c53 w = a / b;
        if (std::abs(w) > 50.0) continue;
        bool clash = false;
        for (int j = 0; j < i; ++j)
          if (std::abs(w - v8[j]) < 0.08) clash = true;
        if (!clash) {
          v8[i] = w;
          break;
        }
      }
    }
    if (bad) continue;
    std::vector<Vec<c53>> q(8);
    for (int i = 0; i < 8; ++i) q[i] = detail::eval_coords(start_coords, v8[i]);
    Mat<c53> M = detail::moebius_through<c53>({v8[0], c53(1)}, {v8[1], c53(1)}, {v8[2], c53(1)});
    Mat<c53> Minv = num::inverse(M);
    Vec<c53> w(5);
    bool w_ok = true;
    for (int i = 0; i < 5; ++i) {
      c53 a = Minv(0, 0) * v8[3 + i] + Minv(0, 1);
      c53 b = Minv(1, 0) * v8[3 + i] + Minv(1, 1);
      if (std::abs(b) < 1e-8 * std::abs(a))
        w_ok = false;
      else
        w[i] = a / b;
      if (std::abs(w[i]) > 1e4) w_ok = false;
    }
    if (!w_ok) continue;
    c53 gamma(std::cos(sub.uniform(0.0, 6.283185307179586)),
              std::sin(sub.uniform(0.0, 6.283185307179586)));

    // predictor-corrector tracking of the reduced system from t=0 to t=1
    double t = 0.0, dt = 0.1;
    Vec<c53> w_prev = w;
    double t_prev = 0.0;
    bool failed = false;
    int steps = 0;
    while (t < 1.0 && !failed) {
      if (++steps > 600) {
        failed = true;
        break;
      }
      double tn = std::min(1.0, t + dt);
      Vec<c53> wp = w;
      if (tn > t && t > t_prev) {
        double r = (tn - t) / (t - t_prev);
        for (int i = 0; i < 5; ++i) wp[i] = w[i] + c53(r) * (w[i] - w_prev[i]);
      }
      PointConfig<c53> cfg_t = config_at(q, gamma, tn);
      red_track.set_config(cfg_t);
      Vec<c53> wc = wp;
      bool ok = red_track.newton_correct(wc, 1e-10, 6);
      if (ok) {
        w_prev = w;
        t_prev = t;
        w = wc;
        t = tn;
        dt = std::min(0.3, dt * 1.6);
      } else {
        dt *= 0.4;
        if (dt < 1e-7) failed = true;
      }
    }
    if (failed || t < 1.0) continue;

    // endpoint validation on the target configuration
    red_track.set_config(rot_cfgs[rot]);
    if (!red_track.newton_correct(w, 1e-12, 16)) continue;
    auto c = red_track.coefficients(w);
    if (!c) continue;
    std::array<BinaryForm<c53>, 4> coords;
    for (int k = 0; k < 4; ++k) {
      Vec<c53> cs(c->begin() + 5 * k, c->begin() + 5 * k + 5);
      coords[k] = BinaryForm<c53>(4, cs);
    }
    Mat<c53> A = red_track.assemble(w);
    double full = field<c53>::to_double(num::norm2(num::matvec(A, *c)));
    double cscale = field<c53>::to_double(num::norm2(*c));
    if (full > 1e-7 * std::max(1.0, cscale)) continue;
    if (!nondegenerate_quartic(coords)) continue;
    // canonicalize to the standard gauge (points 0, 1, 2 of the input order)
    auto canon = canonicalize(coords, cfg53, 1e-5);
    if (!canon) continue;

    bool merged = false;
    for (auto& f : found53) {
      if (canonical_distance(f.coords, canon->first) < opt.dedup_tol) {
        ++f.hits;
        merged = true;
        break;
      }
    }
    if (!merged) {
      OracleSolution<c53> s;
      s.coords = canon->first;
      s.preimages = canon->second;
      s.hits = 1;
      found53.push_back(std::move(s));
    }
  }

  // polish every distinct solution at working precision on the gauge-fixed
  // 16-unknown/16-equation system (rho gauge: starts are genuine solutions)
  std::vector<OracleSolution<C>> out;
  detail::GaugeSystem<C> sys(config);
  for (const auto& f : found53) {
    Vec<C> z(16);
    const auto& p1 = config.point(0).coords();
    const auto& p3 = config.point(2).coords();
    std::size_t i1 = 0, i3 = 0;
    real_t<C> b1(0), b3(0);
    for (std::size_t i2 = 0; i2 < 4; ++i2) {
      if (abs2(p1[i2]) > b1) {
        b1 = abs2(p1[i2]);
        i1 = i2;
      }
      if (abs2(p3[i2]) > b3) {
        b3 = abs2(p3[i2]);
        i3 = i2;
      }
    }
    for (int k = 0; k < 4; ++k) {
      z[k] = convert_scalar<C>(f.coords[k].coeffs()[2]);
      z[4 + k] = convert_scalar<C>(f.coords[k].coeffs()[3]);
    }
    z[8] = convert_scalar<C>(f.coords[i1].coeffs()[4]) / p1[i1];
    z[9] = convert_scalar<C>(f.coords[i3].coeffs()[0]) / p3[i3];
    z[10] = C(1);
    for (int i = 0; i < 5; ++i) z[11 + i] = convert_scalar<C>(f.preimages[3 + i]);
    num::GNOptions<C> gopt;
    gopt.tol = field<C>::from_double(1e-12);
    gopt.max_iter = 60;
    auto jac = [&](const Vec<C>& zz, const Vec<C>&) { return sys.jacobian(zz); };
    auto res = num::gauss_newton(sys, jac, z, gopt);
    if (!res.converged) continue;
    OracleSolution<C> s;
    s.coords = sys.coords_from(res.x);
    s.preimages = Vec<C>{C(0), C(1), C(0), res.x[11], res.x[12], res.x[13], res.x[14], res.x[15]};
    s.hits = f.hits;
    bool dup = false;
    for (const auto& e : out)
      if (canonical_distance(e.coords, s.coords) < opt.dedup_tol) dup = true;
    if (!dup) out.push_back(std::move(s));
  }
  return out;
}

// --- cross-check ----------------------------------------------------------------------

struct MatchReport {
  bool success = false;
  double max_distance = 0.0;
  int matched = 0;
  int unmatched_main = 0;
  int unmatched_oracle = 0;
};

template <class C>
inline MatchReport cross_check(const std::vector<QuarticCurve<C>>& main_list,
                               const std::vector<OracleSolution<C>>& oracle_list,
                               double tol = 1e-6) {
  MatchReport rep;
  const std::size_t n = main_list.size(), m = oracle_list.size();
  std::vector<bool> used(m, false);
  double worst = 0.0;
  int matched = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = 1e300;
    std::size_t bj = m;
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      double d = canonical_distance(main_list[i].coords, oracle_list[j].coords);
      if (d < best) {
        best = d;
        bj = j;
      }
    }
    if (bj < m && best < tol) {
      used[bj] = true;
      ++matched;
      worst = std::max(worst, best);
    }
  }
  rep.matched = matched;
  rep.max_distance = worst;
  rep.unmatched_main = static_cast<int>(n) - matched;
  rep.unmatched_oracle = static_cast<int>(m) - matched;
  rep.success = (n == m) && rep.unmatched_main == 0;
  return rep;
}

}  // namespace rq::quartics
