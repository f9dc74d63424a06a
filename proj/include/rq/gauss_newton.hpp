#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "rq/matrix.hpp"
#include "rq/scalar.hpp"

namespace rq::num {

template <class C>
struct GNOptions {
  int max_iter = 80;
  real_t<C> tol = real_t<C>(0);       // success: residual < tol and step < tol
  double residual_blowup = 1e10;      // divergence bound relative to start
  double step_cap = 0.0;              // 0 = uncapped
};

// Divergence is a signal ("this start found nothing"), never an exception.
template <class C>
struct GNResult {
  Vec<C> x;
  real_t<C> residual_norm{};
  real_t<C> step_norm{};
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
};

template <class C>
inline bool vec_finite(const Vec<C>& v) {
  for (const auto& z : v)
    if (!finite(z)) return false;
  return true;
}

// Central-difference Jacobian along the real direction; exact for the
// holomorphic residual maps used throughout, step chosen by precision.
template <class C, class F>
inline Mat<C> fd_jacobian(F&& residual, const Vec<C>& x, std::size_t out_dim) {
  using R = real_t<C>;
  using std::cbrt;
  const R h0 = field<C>::from_double(
      std::cbrt(field<C>::to_double(field<C>::eps())));
  Mat<C> J(out_dim, x.size());
  Vec<C> xp = x, xm = x;
  for (std::size_t j = 0; j < x.size(); ++j) {
    R h = h0 * (R(1) + cabs(x[j]));
    xp[j] = x[j] + C(h);
    xm[j] = x[j] - C(h);
    Vec<C> fp = residual(xp);
    Vec<C> fm = residual(xm);
    for (std::size_t i = 0; i < out_dim; ++i) J(i, j) = (fp[i] - fm[i]) / C(R(2) * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return J;
}

template <class C, class FRes, class FJac>
inline GNResult<C> gauss_newton(FRes&& residual, FJac&& jacobian, Vec<C> x0,
                                const GNOptions<C>& opt) {
  using R = real_t<C>;
  GNResult<C> out;
  out.x = std::move(x0);
  if (!vec_finite(out.x)) {
    out.diverged = true;
    return out;
  }
  Vec<C> F = residual(out.x);
  if (!vec_finite(F)) {
    out.diverged = true;
    return out;
  }
  R rnorm = norm2(F);
  const R r_start = rnorm;
  R mu(0);
  const R mu_floor = field<C>::eps() * R(16);

  for (int iter = 0; iter < opt.max_iter; ++iter) {
    out.iterations = iter + 1;
    Mat<C> J = jacobian(out.x, F);
    bool stepped = false;
    for (int attempt = 0; attempt < 24 && !stepped; ++attempt) {
      Vec<C> negF(F.size());
      for (std::size_t i = 0; i < F.size(); ++i) negF[i] = -F[i];
      auto delta = normal_solve(J, negF, mu);
      if (!delta) {
        mu = (mu == R(0)) ? mu_floor : mu * R(10);
        continue;
      }
      R dn = norm2(*delta);
      if (opt.step_cap > 0.0 && field<C>::to_double(dn) > opt.step_cap) {
        C shrink = C(field<C>::from_double(opt.step_cap) / dn);
        scale(*delta, shrink);
        dn = norm2(*delta);
      }
      Vec<C> xc = vadd(out.x, *delta);
      Vec<C> Fc = residual(xc);
      if (vec_finite(Fc)) {
        R rc = norm2(Fc);
        if (rc < rnorm || (rc == rnorm && dn == R(0))) {
          out.x = std::move(xc);
          F = std::move(Fc);
          rnorm = rc;
          out.step_norm = dn;
          mu = mu / R(4);
          if (mu < mu_floor) mu = R(0);
          stepped = true;
          break;
        }
      }
      mu = (mu == R(0)) ? mu_floor : mu * R(10);
    }
    out.residual_norm = rnorm;
    if (rnorm < opt.tol && stepped && out.step_norm < opt.tol) {
      out.converged = true;
      return out;
    }
    if (!stepped) {
      out.diverged = !(rnorm < opt.tol);
      out.converged = rnorm < opt.tol;
      return out;
    }
    if (field<C>::to_double(rnorm) >
        opt.residual_blowup * (field<C>::to_double(r_start) + 1.0)) {
      out.diverged = true;
      return out;
    }
  }
  out.residual_norm = rnorm;
  out.converged = rnorm < opt.tol && out.step_norm < opt.tol;
  out.diverged = !out.converged;
  return out;
}

// finite-difference flavor
template <class C, class FRes>
inline GNResult<C> gauss_newton(FRes&& residual, Vec<C> x0, const GNOptions<C>& opt) {
  auto jac = [&](const Vec<C>& x, const Vec<C>& Fx) {
    return fd_jacobian<C>(residual, x, Fx.size());
  };
  return gauss_newton(residual, jac, std::move(x0), opt);
}

}  // namespace rq::num
