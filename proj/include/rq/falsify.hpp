#pragma once

// Real-incidence search machinery shared by the vanishing-configuration
// verifiers: real-parametrized rational curves of a given degree meeting
// point and subspace constraints, solved by seeded multistart.
//
// Curve coefficients are real unknowns. Each constraint carries its own
// incidence parameter: a real unknown for real constraints, a complex one
// (two real slots) for complex constraints, since a real curve meets a
// complex constraint at a complex parameter. Only one representative of each
// conjugate constraint pair enters the system: a real curve through it meets
// the partner automatically, and the geometric re-verification step checks
// every constraint anyway. Scale and real-Moebius freedom (4 real dimensions)
// are cut by seeded random affine gauge equations.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rq/binary_form.hpp"
#include "rq/error.hpp"
#include "rq/gauss_newton.hpp"
#include "rq/matrix.hpp"
#include "rq/projective.hpp"
#include "rq/rng.hpp"
#include "rq/roots.hpp"
#include "rq/scalar.hpp"

namespace rq::falsify {

using geom::LinearSubspace;
using geom::ProjPoint;
using num::BinaryForm;
using num::Mat;
using num::Vec;

// degree-d map P^1 -> P^m as m+1 binary forms
template <class C>
using CurveCoords = std::vector<BinaryForm<C>>;

template <class C>
inline Vec<C> eval_curve(const CurveCoords<C>& coords, const C& u, const C& v) {
  Vec<C> x(coords.size());
  for (std::size_t k = 0; k < coords.size(); ++k) x[k] = coords[k].eval(u, v);
  return x;
}

// distance from a point to the image of a parametrized curve: root-find on the
// cross pair of the two largest point coordinates, then filter
template <class C>
inline double curve_point_distance(const CurveCoords<C>& coords, const ProjPoint<C>& p) {
  const std::size_t m = coords.size();
  std::size_t k1 = 0, k2 = 1;
  real_t<C> b1(-1), b2(-1);
  for (std::size_t k = 0; k < m; ++k) {
    auto mag = abs2(p[k]);
    if (mag > b1) {
      b2 = b1;
      k2 = k1;
      b1 = mag;
      k1 = k;
    } else if (mag > b2) {
      b2 = mag;
      k2 = k;
    }
  }
  const std::size_t d = coords[0].degree();
  Vec<C> cs(d + 1);
  for (std::size_t j = 0; j <= d; ++j)
    cs[j] = p[k2] * coords[k1].coeffs()[j] - p[k1] * coords[k2].coeffs()[j];
  BinaryForm<C> f(d, cs);
  if (f.is_zero(real_t<C>(field<C>::from_double(1e-13)))) return 1.0;
  double best = 1.0;
  try {
    for (const auto& rt : num::poly_roots(f)) {
      Vec<C> x = eval_curve(coords, rt.x, rt.y);
      best = std::min(best, geom::proj_distance<C>(x, p.coords()));
    }
  } catch (const Error&) {
    return 1.0;
  }
  return best;
}

// parameter of the closest curve point to a target point (nullopt when the
// curve misses it at the given tolerance)
template <class C>
inline std::optional<std::pair<C, C>> best_param(const CurveCoords<C>& coords,
                                                 const ProjPoint<C>& p, double tol = 1e-6) {
  const std::size_t m = coords.size();
  std::size_t k1 = 0, k2 = 1;
  real_t<C> b1(-1), b2(-1);
  for (std::size_t k = 0; k < m; ++k) {
    auto mag = abs2(p[k]);
    if (mag > b1) {
      b2 = b1;
      k2 = k1;
      b1 = mag;
      k1 = k;
    } else if (mag > b2) {
      b2 = mag;
      k2 = k;
    }
  }
  const std::size_t d = coords[0].degree();
  Vec<C> cs(d + 1);
  for (std::size_t j = 0; j <= d; ++j)
    cs[j] = p[k2] * coords[k1].coeffs()[j] - p[k1] * coords[k2].coeffs()[j];
  BinaryForm<C> f(d, cs);
  if (f.is_zero(real_t<C>(field<C>::from_double(1e-13)))) return std::nullopt;
  double best = 1.0;
  std::optional<std::pair<C, C>> arg;
  try {
    for (const auto& rt : num::poly_roots(f)) {
      Vec<C> x = eval_curve(coords, rt.x, rt.y);
      double dist = geom::proj_distance<C>(x, p.coords());
      if (dist < best) {
        best = dist;
        arg = std::make_pair(rt.x, rt.y);
      }
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  if (best > tol) return std::nullopt;
  return arg;
}

// distance-style residual for "curve meets subspace": scan the roots of one
// complement form and take the smallest joint residual of the others
template <class C>
inline double curve_subspace_distance(const CurveCoords<C>& coords, const LinearSubspace<C>& L) {
  Mat<C> span = L.orthonormal_rows();
  auto comp = num::null_space(span, real_t<C>(field<C>::from_double(1e-10)));
  for (auto& v : comp) v = num::conj_vec(v);  // hdot convention below
  if (comp.empty()) return 0.0;
  const std::size_t d = coords[0].degree();
  Vec<C> cs(d + 1, C(0));
  for (std::size_t k = 0; k < coords.size(); ++k)
    for (std::size_t j = 0; j <= d; ++j) cs[j] += cconj(comp[0][k]) * coords[k].coeffs()[j];
  BinaryForm<C> f(d, cs);
  if (f.is_zero(real_t<C>(field<C>::from_double(1e-13)))) return 0.0;
  double best = 1.0;
  try {
    for (const auto& rt : num::poly_roots(f)) {
      Vec<C> x = eval_curve(coords, rt.x, rt.y);
      auto nx = num::norm2(x);
      if (field<C>::to_double(nx) == 0.0) continue;
      double worst_other = 0.0;
      for (std::size_t c = 1; c < comp.size(); ++c)
        worst_other =
            std::max(worst_other, field<C>::to_double(cabs(num::hdot(comp[c], x)) / nx));
      best = std::min(best, worst_other);
    }
  } catch (const Error&) {
    return 1.0;
  }
  return best;
}

// --- constraints -----------------------------------------------------------------

template <class C>
struct IncidenceConstraint {
  enum class Kind { through_point, meet_subspace };
  Kind kind;
  ProjPoint<C> point;              // valid for through_point
  LinearSubspace<C> subspace;      // valid for meet_subspace
  std::vector<Vec<C>> complement;  // orthonormal complement functionals
  bool is_real = false;            // real forms: real incidence parameter

  double geometric_distance(const CurveCoords<C>& coords) const {
    return kind == Kind::through_point ? curve_point_distance(coords, point)
                                       : curve_subspace_distance(coords, subspace);
  }
};

namespace detail {

template <class C>
inline bool forms_are_real(const std::vector<Vec<C>>& forms) {
  for (const auto& f : forms)
    for (const auto& c : f)
      if (std::abs(field<C>::to_double(im(c))) > 1e-11) return false;
  return true;
}

}  // namespace detail

template <class C>
inline IncidenceConstraint<C> make_point_constraint(const ProjPoint<C>& p) {
  IncidenceConstraint<C> c{IncidenceConstraint<C>::Kind::through_point, p, {}, {}, false};
  const std::size_t n = p.coords().size();
  Vec<C> pn = p.coords();
  auto np = num::norm2(pn);
  num::scale(pn, C(real_t<C>(1) / np));
  std::size_t imax = 0;
  real_t<C> best(0);
  for (std::size_t i = 0; i < n; ++i)
    if (abs2(pn[i]) > best) {
      best = abs2(pn[i]);
      imax = i;
    }
  for (std::size_t j = 0; j < n; ++j) {
    if (j == imax) continue;
    Vec<C> v(n, C(0));
    v[j] = C(1);
    C proj = num::hdot(pn, v);
    num::axpy(v, -proj, pn);
    for (const auto& b : c.complement) {
      C pr = num::hdot(b, v);
      num::axpy(v, -pr, b);
    }
    auto nv = num::norm2(v);
    num::scale(v, C(real_t<C>(1) / nv));
    c.complement.push_back(v);
  }
  c.is_real = p.max_imag_abs() < 1e-10 && detail::forms_are_real(c.complement);
  return c;
}

template <class C>
inline IncidenceConstraint<C> make_subspace_constraint(const LinearSubspace<C>& L) {
  IncidenceConstraint<C> c{IncidenceConstraint<C>::Kind::meet_subspace, {}, L, {}, false};
  // forms are applied through hdot, so the Hermitian complement is needed:
  // the conjugate of the bilinear kernel of the span
  for (auto& v : num::null_space(L.orthonormal_rows(), real_t<C>(field<C>::from_double(1e-10))))
    c.complement.push_back(num::conj_vec(v));
  c.is_real = detail::forms_are_real(c.complement);
  return c;
}

// --- the tracked search engine ------------------------------------------------------

// With three incidence parameters pinned at 0, 1, infinity, the curve
// coefficients are the kernel of a linear system A(w) over the remaining
// parameters, one complex unknown per constraint. Solutions of the incidence
// problem are zeros of the reduced square map W * A(w) c(w) with c(w) the
// ell-normalized kernel vector. Search attempts are gamma-trick homotopy
// paths from configurations planted on random curves (with known parameters)
// to the target configuration; endpoints are validated geometrically and
// tested for realness. A descent multistart on the real incidence system
// collapses onto base-point curves instead, where enough coinciding
// parameters make every incidence condition vanish identically.
template <class C>
struct GeneralReduced {
  int degree;
  int ambient;
  std::vector<IncidenceConstraint<C>> constraints;
  std::size_t coeff_n = 0;  // (ambient+1)(degree+1)
  std::size_t rows_r = 0;   // total condition rows
  std::size_t free_f = 0;   // free parameters (constraints minus 3)
  Mat<C> lam;               // (coeff_n - 1) x rows_r
  Vec<C> ell;               // coeff_n
  Mat<C> wmix;              // free_f x rows_r

  GeneralReduced(int d, int m, std::vector<IncidenceConstraint<C>> cons, std::uint64_t seed)
      : degree(d), ambient(m), constraints(std::move(cons)) {
    if (constraints.size() < 3) fail(errc::bad_argument, "GeneralReduced needs >= 3 constraints");
    coeff_n = static_cast<std::size_t>(m + 1) * (d + 1);
    rows_r = 0;
    for (const auto& c : constraints) rows_r += c.complement.size();
    free_f = constraints.size() - 3;
    Rng rng(seed ^ 0x9E3779B97F4A7C15ull);
    auto rnd = [&]() {
      return C(field<C>::from_double(rng.normal()), field<C>::from_double(rng.normal()));
    };
    lam = Mat<C>(coeff_n - 1, rows_r);
    for (std::size_t i = 0; i + 1 < coeff_n; ++i)
      for (std::size_t j = 0; j < rows_r; ++j) lam(i, j) = rnd();
    ell.resize(coeff_n);
    for (auto& c : ell) c = rnd();
    wmix = Mat<C>(free_f, rows_r);
    for (std::size_t i = 0; i < free_f; ++i)
      for (std::size_t j = 0; j < rows_r; ++j) wmix(i, j) = rnd();
  }

  std::pair<C, C> param_of(const Vec<C>& w, std::size_t ci) const {
    if (ci == 0) return {C(0), C(1)};
    if (ci == 1) return {C(1), C(1)};
    if (ci == 2) return {C(1), C(0)};
    return {w[ci - 3], C(1)};
  }

  // condition rows of constraint ci at parameter (u:v); optional derivative
  // with respect to the affine parameter
  void rows_at(std::size_t ci, const C& u, const C& v, Mat<C>& A, std::size_t row0,
               Mat<C>* dA = nullptr) const {
    const auto& forms = constraints[ci].complement;
    Vec<C> up(degree + 1), vp(degree + 1);
    up[0] = C(1);
    vp[0] = C(1);
    for (int k = 1; k <= degree; ++k) {
      up[k] = up[k - 1] * u;
      vp[k] = vp[k - 1] * v;
    }
    for (std::size_t j = 0; j < forms.size(); ++j)
      for (int k = 0; k <= ambient; ++k)
        for (int dd = 0; dd <= degree; ++dd) {
          C mono = up[degree - dd] * vp[dd];
          A(row0 + j, k * (degree + 1) + dd) = cconj(forms[j][k]) * mono;
          if (dA) {
            C dmono = (dd == degree) ? C(0) : C(double(degree - dd)) * up[degree - dd - 1] * vp[dd];
            (*dA)(j, k * (degree + 1) + dd) = cconj(forms[j][k]) * dmono;
          }
        }
  }

  Mat<C> assemble(const Vec<C>& w, std::vector<Mat<C>>* deriv = nullptr,
                  std::vector<std::size_t>* row_of = nullptr) const {
    Mat<C> A(rows_r, coeff_n);
    std::size_t row = 0;
    for (std::size_t ci = 0; ci < constraints.size(); ++ci) {
      auto [u, v] = param_of(w, ci);
      Mat<C>* dst = nullptr;
      if (deriv && ci >= 3) {
        deriv->at(ci - 3) = Mat<C>(constraints[ci].complement.size(), coeff_n);
        dst = &deriv->at(ci - 3);
      }
      if (row_of) (*row_of)[ci] = row;
      rows_at(ci, u, v, A, row, dst);
      row += constraints[ci].complement.size();
    }
    return A;
  }

  Mat<C> square_system(const Mat<C>& A) const {
    Mat<C> M(coeff_n, coeff_n);
    for (std::size_t i = 0; i + 1 < coeff_n; ++i)
      for (std::size_t j = 0; j < coeff_n; ++j) {
        C s(0);
        for (std::size_t k = 0; k < rows_r; ++k) s += lam(i, k) * A(k, j);
        M(i, j) = s;
      }
    for (std::size_t j = 0; j < coeff_n; ++j) M(coeff_n - 1, j) = ell[j];
    return M;
  }

  std::optional<Vec<C>> coefficients(const Vec<C>& w) const {
    Mat<C> A = assemble(w);
    try {
      num::LuFactors<C> lu(square_system(A));
      Vec<C> e(coeff_n, C(0));
      e[coeff_n - 1] = C(1);
      return lu.solve(e);
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  CurveCoords<C> coords_of(const Vec<C>& c) const {
    CurveCoords<C> coords;
    for (int k = 0; k <= ambient; ++k) {
      Vec<C> cs(c.begin() + k * (degree + 1), c.begin() + (k + 1) * (degree + 1));
      coords.push_back(BinaryForm<C>(degree, cs));
    }
    return coords;
  }

  // fused Newton corrector on the free parameters
  bool newton_correct(Vec<C>& w, double tol, int max_iter) const {
    for (int it = 0; it < max_iter; ++it) {
      std::vector<Mat<C>> dA(free_f);
      std::vector<std::size_t> row_of(constraints.size());
      Mat<C> A = assemble(w, &dA, &row_of);
      std::optional<num::LuFactors<C>> lu;
      try {
        lu.emplace(square_system(A));
      } catch (const Error&) {
        return false;
      }
      Vec<C> e(coeff_n, C(0));
      e[coeff_n - 1] = C(1);
      Vec<C> c = lu->solve(e);
      Vec<C> r = num::matvec(A, c);
      Vec<C> G(free_f);
      for (std::size_t i = 0; i < free_f; ++i) {
        C s(0);
        for (std::size_t k = 0; k < rows_r; ++k) s += wmix(i, k) * r[k];
        G[i] = s;
      }
      double gn = field<C>::to_double(num::norm2(G));
      if (!std::isfinite(gn)) return false;
      if (gn < tol) return true;
      Mat<C> J(free_f, free_f);
      for (std::size_t i = 0; i < free_f; ++i) {
        const std::size_t nrows = constraints[i + 3].complement.size();
        const std::size_t r0 = row_of[i + 3];
        Vec<C> dAc(nrows, C(0));
        for (std::size_t j = 0; j < nrows; ++j) {
          C s(0);
          for (std::size_t col = 0; col < coeff_n; ++col) s += dA[i](j, col) * c[col];
          dAc[j] = s;
        }
        Vec<C> rhs(coeff_n, C(0));
        for (std::size_t row = 0; row + 1 < coeff_n; ++row) {
          C s(0);
          for (std::size_t j = 0; j < nrows; ++j) s += lam(row, r0 + j) * dAc[j];
          rhs[row] = -s;
        }
        Vec<C> dc = lu->solve(rhs);
        Vec<C> dr = num::matvec(A, dc);
        for (std::size_t j = 0; j < nrows; ++j) dr[r0 + j] += dAc[j];
        for (std::size_t row = 0; row < free_f; ++row) {
          C s(0);
          for (std::size_t k = 0; k < rows_r; ++k) s += wmix(row, k) * dr[k];
          J(row, i) = s;
        }
      }
      Vec<C> negG(free_f);
      for (std::size_t i = 0; i < free_f; ++i) negG[i] = -G[i];
      Vec<C> delta;
      bool solved = false;
      try {
        delta = num::lu_solve(J, negG);
        solved = num::vec_finite(delta);
      } catch (const Error&) {
      }
      if (!solved) {
        // positive-dimensional solution sets leave J rank-deficient: take a
        // damped least-squares step instead
        auto d2 = num::normal_solve(J, negG, real_t<C>(field<C>::from_double(1e-10)));
        if (!d2 || !num::vec_finite(*d2)) return false;
        delta = *d2;
      }
      w = num::vadd(w, delta);
    }
    Vec<C> G(free_f, C(0));
    {
      auto c = coefficients(w);
      if (!c) return false;
      Mat<C> A = assemble(w);
      Vec<C> r = num::matvec(A, *c);
      for (std::size_t i = 0; i < free_f; ++i) {
        C s(0);
        for (std::size_t k = 0; k < rows_r; ++k) s += wmix(i, k) * r[k];
        G[i] = s;
      }
    }
    return num::vec_finite(G) && field<C>::to_double(num::norm2(G)) < tol;
  }
};

template <class C>
struct RealCurveFind {
  CurveCoords<C> coords;
  bool real = false;
  double worst_constraint_residual = 1.0;
  int hits = 0;
};

// geometric re-verification of a candidate against every constraint
template <class C>
inline double verify_against_constraints(const CurveCoords<C>& coords,
                                         const std::vector<IncidenceConstraint<C>>& constraints) {
  double worst = 0;
  for (const auto& c : constraints) worst = std::max(worst, c.geometric_distance(coords));
  return worst;
}

// Two parametrized curves with the same image (up to reparametrization)
template <class C>
inline bool same_image(const CurveCoords<C>& a, const CurveCoords<C>& b, double tol) {
  for (int k = 0; k < 8; ++k) {
    double u = -2.1 + 0.6 * k;
    Vec<C> x = eval_curve(a, C(field<C>::from_double(u)), C(1));
    ProjPoint<C> p(x);
    if (curve_point_distance(b, p) > tol) return false;
  }
  return true;
}

template <class C>
inline bool image_is_real(const CurveCoords<C>& coords, double tol = 1e-6) {
  CurveCoords<C> conj_coords;
  for (const auto& f : coords) conj_coords.push_back(f.conj());
  return same_image(coords, conj_coords, tol);
}

struct SearchOptions {
  long attempts = 1000;
  std::uint64_t seed = 7;
  double converge_tol = 1e-10;
  double verify_tol = 1e-8;
  double dedup_tol = 1e-6;
  // for underdetermined families: per-path random real point constraints that
  // slice the moduli down to a finite problem; the slices rotate with the
  // attempt index so the family is covered across attempts
  int slice_real_points = 0;
};

struct SearchReport {
  std::vector<RealCurveFind<c53>> all_finds;  // distinct complex solutions
  int real_found = 0;
  int complex_found = 0;
  long paths_run = 0;
  long paths_converged = 0;
};

// Homotopy-tracked search for curves meeting the target constraints.
template <class C>
inline SearchReport tracked_search(int degree, int ambient,
                                   const std::vector<IncidenceConstraint<C>>& target,
                                   const SearchOptions& opt) {
  // double-precision copies of the target constraint data
  const std::size_t n_base = target.size();
  std::vector<std::vector<Vec<c53>>> target_data(n_base);  // span vectors (or the point)
  std::vector<int> span_size(n_base);
  for (std::size_t i = 0; i < n_base; ++i) {
    if (target[i].kind == IncidenceConstraint<C>::Kind::through_point) {
      Vec<c53> v(ambient + 1);
      for (int k = 0; k <= ambient; ++k) v[k] = convert_scalar<c53>(target[i].point[k]);
      target_data[i].push_back(v);
      span_size[i] = 1;
    } else {
      for (const auto& p : target[i].subspace.span()) {
        Vec<c53> v(ambient + 1);
        for (int k = 0; k <= ambient; ++k) v[k] = convert_scalar<c53>(p[k]);
        target_data[i].push_back(v);
      }
      span_size[i] = static_cast<int>(target_data[i].size());
    }
  }

  SearchReport rep;
  Rng rng(opt.seed);
  for (long path_i = 0; path_i < opt.attempts; ++path_i) {
    rep.paths_run += 1;
    Rng sub = rng.fork(static_cast<std::uint64_t>(path_i));
    auto rnd = [&]() { return c53(sub.normal(), sub.normal()); };
    // per-path slice data for underdetermined families
    std::vector<std::vector<Vec<c53>>> path_target = target_data;
    std::vector<int> path_span = span_size;
    for (int s = 0; s < opt.slice_real_points; ++s) {
      Vec<c53> v(ambient + 1);
      for (auto& c : v) c = c53(sub.normal(), 0.0);
      path_target.push_back({v});
      path_span.push_back(1);
    }
    const std::size_t n_cons = path_target.size();
    // planted start curve and its constraint data
    CurveCoords<c53> planted;
    for (int k = 0; k <= ambient; ++k) {
      Vec<c53> cs(degree + 1);
      for (auto& c : cs) c = rnd();
      planted.push_back(BinaryForm<c53>(degree, cs));
    }
    Vec<c53> w0(n_cons >= 3 ? n_cons - 3 : 0);
    std::vector<std::vector<Vec<c53>>> start_data(n_cons);
    bool bad = false;
    for (std::size_t i = 0; i < n_cons && !bad; ++i) {
      c53 u, v;
      if (i == 0) {
        u = c53(0);
        v = c53(1);
      } else if (i == 1) {
        u = c53(1);
        v = c53(1);
      } else if (i == 2) {
        u = c53(1);
        v = c53(0);
      } else {
        c53 a = rnd(), b = rnd();
        if (std::abs(b) < 1e-6) {
          bad = true;
          break;
        }
        w0[i - 3] = a / b;
        if (std::abs(w0[i - 3]) > 1e4) bad = true;
        u = w0[i - 3];
        v = c53(1);
      }
      Vec<c53> on_curve = eval_curve(planted, u, v);
      start_data[i].push_back(on_curve);
      for (int extra = 1; extra < path_span[i]; ++extra) {
        Vec<c53> q(ambient + 1);
        for (auto& c : q) c = rnd();
        start_data[i].push_back(q);
      }
    }
    if (bad) continue;
    c53 gamma(std::cos(sub.uniform(0.0, 6.283185307179586)),
              std::sin(sub.uniform(0.0, 6.283185307179586)));

    auto constraints_at = [&](double t) {
      std::vector<IncidenceConstraint<c53>> cons;
      for (std::size_t i = 0; i < n_cons; ++i) {
        if (path_span[i] == 1) {
          Vec<c53> v(ambient + 1);
          for (int k = 0; k <= ambient; ++k)
            v[k] = (1.0 - t) * gamma * start_data[i][0][k] + t * path_target[i][0][k];
          cons.push_back(make_point_constraint<c53>(ProjPoint<c53>(v)));
        } else {
          std::vector<ProjPoint<c53>> span;
          for (int j = 0; j < path_span[i]; ++j) {
            Vec<c53> v(ambient + 1);
            for (int k = 0; k <= ambient; ++k)
              v[k] = (1.0 - t) * gamma * start_data[i][j][k] + t * path_target[i][j][k];
            span.push_back(ProjPoint<c53>(v));
          }
          cons.push_back(make_subspace_constraint<c53>(LinearSubspace<c53>(span)));
        }
      }
      return cons;
    };

    // track from t = 0 to t = 1
    double t = 0.0, dt = 0.1;
    Vec<c53> w = w0, w_prev = w0;
    double t_prev = 0.0;
    bool failed = false;
    int steps = 0;
    while (t < 1.0 && !failed) {
      if (++steps > 700) {
        failed = true;
        break;
      }
      double tn = std::min(1.0, t + dt);
      Vec<c53> wp = w;
      if (tn > t && t > t_prev) {
        double rr = (tn - t) / (t - t_prev);
        for (std::size_t i = 0; i < wp.size(); ++i) wp[i] = w[i] + c53(rr) * (w[i] - w_prev[i]);
      }
      bool ok = false;
      try {
        auto cons_t = constraints_at(tn);
        GeneralReduced<c53> red(degree, ambient, cons_t, opt.seed);
        Vec<c53> wc = wp;
        ok = red.newton_correct(wc, 1e-9, 7);
        if (ok) {
          double move = 0;
          for (std::size_t i = 0; i < wc.size(); ++i)
            move = std::max(move, std::abs(wc[i] - w[i]));
          if (move > 1.5 + 4.0 * dt) ok = false;
          if (ok) {
            w_prev = w;
            t_prev = t;
            w = wc;
            t = tn;
            dt = std::min(0.25, dt * 1.5);
          }
        }
      } catch (const Error&) {
        ok = false;
      }
      if (!ok) {
        dt *= 0.4;
        if (dt < 1e-7) failed = true;
      }
    }
    if (failed || t < 1.0) continue;

    // endpoint validation on the exact target constraints (slices included in
    // the solve; verification below restricts to the original constraints)
    std::vector<IncidenceConstraint<c53>> cons1;
    for (std::size_t i = 0; i < n_cons; ++i) {
      if (path_span[i] == 1)
        cons1.push_back(make_point_constraint<c53>(ProjPoint<c53>(path_target[i][0])));
      else {
        std::vector<ProjPoint<c53>> span;
        for (int j = 0; j < path_span[i]; ++j) span.push_back(ProjPoint<c53>(path_target[i][j]));
        cons1.push_back(make_subspace_constraint<c53>(LinearSubspace<c53>(span)));
      }
    }
    GeneralReduced<c53> red1(degree, ambient, cons1, opt.seed);
    Vec<c53> wend = w;
    if (!red1.newton_correct(wend, 1e-11, 20)) continue;
    auto c = red1.coefficients(wend);
    if (!c) continue;
    auto coords = red1.coords_of(*c);
    double cmax = 0;
    for (const auto& f : coords) cmax = std::max(cmax, field<c53>::to_double(f.max_coeff_abs()));
    if (cmax < 1e-10) continue;
    Mat<c53> A = red1.assemble(wend);
    double full = field<c53>::to_double(num::norm2(num::matvec(A, *c)));
    if (full > 1e-7 * std::max(1.0, field<c53>::to_double(num::norm2(*c)))) continue;
    std::vector<IncidenceConstraint<c53>> cons_orig(cons1.begin(), cons1.begin() + n_base);
    double worst = verify_against_constraints(coords, cons_orig);
    if (worst > opt.verify_tol) continue;
    rep.paths_converged += 1;
    bool merged = false;
    for (auto& f : rep.all_finds)
      if (same_image(f.coords, coords, 10 * opt.dedup_tol)) {
        ++f.hits;
        merged = true;
        break;
      }
    if (!merged) {
      RealCurveFind<c53> f;
      f.coords = coords;
      f.worst_constraint_residual = worst;
      f.real = image_is_real(coords, 1e-6);
      f.hits = 1;
      rep.all_finds.push_back(std::move(f));
    }
  }
  for (const auto& f : rep.all_finds) {
    if (f.real)
      rep.real_found += 1;
    else
      rep.complex_found += 1;
  }
  return rep;
}

}  // namespace rq::falsify
