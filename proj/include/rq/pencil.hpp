#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "rq/binary_form.hpp"
#include "rq/error.hpp"
#include "rq/gauss_newton.hpp"
#include "rq/matrix.hpp"
#include "rq/projective.hpp"
#include "rq/roots.hpp"
#include "rq/scalar.hpp"

namespace rq::pencil {

using geom::PointConfig;
using geom::ProjPoint;
using geom::QuadricForm;
using num::BinaryForm;
using num::Mat;
using num::P1Root;
using num::Vec;

// The pencil of quadrics through 8 points: members are A + t B (t = infinity
// reachable through swapped()). Basis coefficient vectors are orthonormal and
// real whenever the source configuration is a real set.
template <class C>
class Pencil {
 public:
  Pencil() = default;
  Pencil(QuadricForm<C> a, QuadricForm<C> b, bool real_basis)
      : a_(std::move(a)), b_(std::move(b)), real_basis_(real_basis) {}

  const QuadricForm<C>& a() const { return a_; }
  const QuadricForm<C>& b() const { return b_; }
  bool real_basis() const { return real_basis_; }

  Mat<C> gram_at(const C& t) const {
    Mat<C> g = a_.gram();
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) += t * b_.gram()(i, j);
    return g;
  }

  QuadricForm<C> member(const C& t) const { return QuadricForm<C>(gram_at(t)); }

  Pencil swapped() const { return Pencil(b_, a_, real_basis_); }

  // basis rotation by a real angle, preserving orthonormality and realness
  Pencil rotated(double theta) const {
    const C c(field<C>::from_double(std::cos(theta)));
    const C s(field<C>::from_double(std::sin(theta)));
    Mat<C> ga = a_.gram(), gb = b_.gram();
    Mat<C> na(4, 4), nb(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        na(i, j) = c * ga(i, j) + s * gb(i, j);
        nb(i, j) = -s * ga(i, j) + c * gb(i, j);
      }
    return Pencil(QuadricForm<C>(na), QuadricForm<C>(nb), real_basis_);
  }

 private:
  QuadricForm<C> a_, b_;
  bool real_basis_ = false;
};

template <class C>
struct DiscriminantData {
  BinaryForm<C> quartic;            // det(mu A + lambda B) as a form in (lambda:mu)
  std::vector<P1Root<C>> roots;     // poly_roots convention
  bool distinct_flag = false;
};

// det(A + t B) sampled at 5 nodes and interpolated to a quartic in t.
template <class C>
inline DiscriminantData<C> discriminant(const Pencil<C>& p) {
  using R = real_t<C>;
  const int nodes[5] = {0, 1, -1, 2, -2};
  Mat<C> vmat(5, 5);
  Vec<C> rhs(5);
  for (int k = 0; k < 5; ++k) {
    C t(double(nodes[k]));
    rhs[k] = num::determinant(p.gram_at(t));
    C pw(1);
    for (int j = 0; j < 5; ++j) {
      vmat(k, j) = pw;
      pw *= t;
    }
  }
  Vec<C> a = num::lu_solve(vmat, rhs);  // a[k] multiplies t^k
  // scale reference: determinant of a pencil member is quartic in the gram
  R gs = std::max(num::frobenius(p.a().gram()), num::frobenius(p.b().gram()));
  R scale_ref = gs * gs * gs * gs;
  R amax(0);
  for (const auto& c : a) amax = std::max(amax, cabs(c));
  if (!(amax > scale_ref * field<C>::eps() * R(1e6)))
    fail(errc::degenerate_pencil, "discriminant quartic is numerically zero");

  Vec<C> coeffs(5);  // descending powers of lambda, member = A + (lambda/mu) B
  for (int k = 0; k < 5; ++k) coeffs[k] = a[4 - k];
  DiscriminantData<C> out{BinaryForm<C>(4, coeffs), {}, false};
  out.roots = num::poly_roots(out.quartic);

  bool distinct = out.roots.size() == 4;
  for (std::size_t i = 0; i < out.roots.size() && distinct; ++i) {
    if (out.roots[i].multiplicity != 1) distinct = false;
    for (std::size_t j = i + 1; j < out.roots.size() && distinct; ++j) {
      Vec<C> ri{out.roots[i].x, out.roots[i].y}, rj{out.roots[j].x, out.roots[j].y};
      if (geom::proj_distance<C>(ri, rj) <= 1e-8) distinct = false;
    }
  }
  out.distinct_flag = distinct;
  return out;
}

// Cross-ratio multiset of the 4 discriminant roots: a numerical invariant of
// the pencil under basis changes (Moebius action on the parameter).
template <class C>
inline std::vector<C> cross_ratio_multiset(const std::vector<P1Root<C>>& roots) {
  if (roots.size() != 4) fail(errc::bad_argument, "cross_ratio_multiset needs 4 distinct roots");
  auto bracket = [&](int i, int j) {
    return roots[i].x * roots[j].y - roots[j].x * roots[i].y;
  };
  // the six values of the cross ratio under permutations
  static const int perms[6][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2},
                                  {0, 1, 3, 2}, {0, 2, 3, 1}, {0, 3, 2, 1}};
  std::vector<C> vals;
  for (const auto& pm : perms) {
    C num_ = bracket(pm[0], pm[2]) * bracket(pm[1], pm[3]);
    C den = bracket(pm[0], pm[3]) * bracket(pm[1], pm[2]);
    vals.push_back(num_ / den);
  }
  std::sort(vals.begin(), vals.end(), [](const C& a, const C& b) {
    if (re(a) != re(b)) return re(a) < re(b);
    return im(a) < im(b);
  });
  return vals;
}

enum class Ruling { plus, minus };
enum class RealFormKind { split, sphere, empty, non_real };

// Smooth member with a marked ruling and its bidegree-(1,1) parametrization
// sigma: x_k = p^t S_k q with p = (s:t), q = (u:v).
template <class C>
struct MarkedMember {
  C t{};
  QuadricForm<C> form;
  Mat<C> split;      // T with T^t G T = I
  Mat<C> split_inv;  // cached inverse
  std::array<Mat<C>, 4> sigma;
  Ruling ruling = Ruling::plus;

  Vec<C> eval_sigma(const C& p0, const C& p1, const C& q0, const C& q1) const {
    Vec<C> x(4);
    for (int k = 0; k < 4; ++k) {
      const Mat<C>& S = sigma[k];
      x[k] = p0 * (S(0, 0) * q0 + S(0, 1) * q1) + p1 * (S(1, 0) * q0 + S(1, 1) * q1);
    }
    return x;
  }

  MarkedMember swapped_ruling() const {
    MarkedMember m = *this;
    for (int k = 0; k < 4; ++k) m.sigma[k] = num::transpose(sigma[k]);
    m.ruling = (ruling == Ruling::plus) ? Ruling::minus : Ruling::plus;
    return m;
  }
};

// Parametrize the member A + tB. With a seed the Gram-Schmidt start basis is
// taken from the previous member so sigma varies continuously along a path
// and ruling labels stay path-consistent.
template <class C>
inline std::pair<MarkedMember<C>, MarkedMember<C>> parametrize(
    const Pencil<C>& p, const C& t, const MarkedMember<C>* seed_from = nullptr) {
  using R = real_t<C>;
  Mat<C> G = p.gram_at(t);
  Mat<C> T;
  if (seed_from) {
    T = num::congruence_split(G, R(field<C>::from_double(1e-10)), &seed_from->split,
                              num::SplitPivot::keep_order);
  } else {
    T = num::congruence_split(G, R(field<C>::from_double(1e-10)));
  }

  MarkedMember<C> plus;
  plus.t = t;
  plus.form = QuadricForm<C>(G);
  plus.split = T;
  plus.split_inv = num::inverse(T);
  plus.ruling = Ruling::plus;

  // y-coordinates of Sum y_k^2 = 0 as bilinear forms of the Segre factors:
  //   y0 = (su + tv)/2, y1 = (su - tv)/(2i), y2 = (sv - tu)/2, y3 = (sv + tu)/(2i)
  const C half(0.5), mhalf_i(0.0, -0.5);
  std::array<Mat<C>, 4> Y;
  for (auto& m : Y) m = Mat<C>(2, 2);
  Y[0](0, 0) = half;
  Y[0](1, 1) = half;
  Y[1](0, 0) = mhalf_i;
  Y[1](1, 1) = -mhalf_i;
  Y[2](0, 1) = half;
  Y[2](1, 0) = -half;
  Y[3](0, 1) = mhalf_i;
  Y[3](1, 0) = mhalf_i;

  for (int k = 0; k < 4; ++k) {
    Mat<C> S(2, 2);
    for (int m = 0; m < 4; ++m)
      for (int i2 = 0; i2 < 2; ++i2)
        for (int j2 = 0; j2 < 2; ++j2) S(i2, j2) += T(k, m) * Y[m](i2, j2);
    plus.sigma[k] = S;
  }
  MarkedMember<C> minus = plus.swapped_ruling();
  return {plus, minus};
}

// Parameter pair with sigma(params) = q, via the inverse coordinate change
// and a rank decision between the two 2x2 subproblems.
template <class C>
inline std::pair<std::pair<C, C>, std::pair<C, C>> pull_back(const MarkedMember<C>& m,
                                                             const ProjPoint<C>& q) {
  if (m.form.residual(q) > 1e-8) fail(errc::not_on_quadric, "pull_back: point is off the member");
  Vec<C> y = num::matvec(m.split_inv, q.coords());
  const C i_unit(0, 1);
  // invert the y-forms: a = su, b = tv, c = sv, d = tu
  C a = y[0] + i_unit * y[1];
  C b = y[0] - i_unit * y[1];
  C c = y[2] + i_unit * y[3];
  C d = -(y[2] - i_unit * y[3]);
  // minus-ruling stores the transposed tensors; factors swap
  C s0, s1, u0, u1;
  if (abs2(a) + abs2(d) >= abs2(c) + abs2(b)) {
    s0 = a;
    s1 = d;
  } else {
    s0 = c;
    s1 = b;
  }
  if (abs2(a) + abs2(c) >= abs2(d) + abs2(b)) {
    u0 = a;
    u1 = c;
  } else {
    u0 = d;
    u1 = b;
  }
  std::pair<C, C> first{s0, s1}, second{u0, u1};
  if (m.ruling == Ruling::minus) std::swap(first, second);

  // residual check in the marked parametrization
  Vec<C> img = m.eval_sigma(first.first, first.second, second.first, second.second);
  double dist = geom::proj_distance<C>(img, q.coords());
  if (dist > 1e-8) fail(errc::not_on_quadric, "pull_back: parameter residual too large");
  return {first, second};
}

// Signature-based real form of a member of a real-basis pencil.
template <class C>
inline RealFormKind real_form(const Pencil<C>& p, const C& t) {
  using R = real_t<C>;
  if (!p.real_basis()) fail(errc::bad_argument, "real_form needs a real-basis pencil");
  if (std::abs(field<C>::to_double(im(t))) > 1e-8) return RealFormKind::non_real;
  Mat<C> G = p.gram_at(C(re(t)));
  auto eig = num::eigen_hermitian(G);
  R scale_ref(0);
  for (const auto& v : eig.values) scale_ref = std::max(scale_ref, R(abs(v)));
  int pos = 0, neg = 0;
  for (const auto& v : eig.values) {
    if (v > scale_ref * R(1e-9))
      ++pos;
    else if (v < -scale_ref * R(1e-9))
      ++neg;
    else
      fail(errc::signature_borderline, "real_form: eigenvalue within signature threshold");
  }
  if (pos == 2 && neg == 2) return RealFormKind::split;
  if ((pos == 3 && neg == 1) || (pos == 1 && neg == 3)) return RealFormKind::sphere;
  if (pos == 4 || neg == 4) return RealFormKind::empty;
  fail(errc::signature_borderline, "real_form: unexpected signature");
}

namespace detail {

// realify a conjugation-stable complex kernel basis
template <class C>
inline std::optional<std::vector<Vec<C>>> real_kernel_basis(const std::vector<Vec<C>>& kernel) {
  using R = real_t<C>;
  const std::size_t n = kernel[0].size();
  std::vector<Vec<C>> cand;
  for (const auto& v : kernel) {
    Vec<C> rep(n), imp(n);
    for (std::size_t i = 0; i < n; ++i) {
      rep[i] = C(re(v[i]));
      imp[i] = C(im(v[i]));
    }
    cand.push_back(rep);
    cand.push_back(imp);
  }
  std::vector<Vec<C>> out;
  for (std::size_t k = 0; k < cand.size() && out.size() < kernel.size(); ++k) {
    std::size_t piv = k;
    R best(-1);
    for (std::size_t j = k; j < cand.size(); ++j) {
      auto nj = num::norm2(cand[j]);
      if (nj > best) {
        best = nj;
        piv = j;
      }
    }
    std::swap(cand[piv], cand[k]);
    Vec<C> v = cand[k];
    auto nv = num::norm2(v);
    if (field<C>::to_double(nv) < 1e-12) break;
    num::scale(v, C(R(1) / nv));
    out.push_back(v);
    for (std::size_t j = k + 1; j < cand.size(); ++j) {
      C proj = num::hdot(v, cand[j]);
      num::axpy(cand[j], -proj, v);
    }
  }
  if (out.size() != kernel.size()) return std::nullopt;
  return out;
}

}  // namespace detail

// The unique pencil of quadrics through 8 points: kernel of the 8x10 Veronese
// matrix, realified for real sets, then Moebius-normalized so the
// discriminant roots sit at bounded parameters.
template <class C>
inline Pencil<C> pencil_through(const PointConfig<C>& config) {
  using R = real_t<C>;
  if (config.size() != 8 || config.ambient_dim() != 3)
    fail(errc::degenerate_config, "pencil_through expects exactly 8 points in P^3");
  Mat<C> V(8, 10);
  for (std::size_t i = 0; i < 8; ++i) V.set_row(i, geom::veronese_row(config.point(i)));
  auto kernel = num::null_space(V, R(field<C>::from_double(1e-10)));
  if (kernel.size() != 2)
    fail(errc::degenerate_config,
         "pencil_through: Veronese kernel dimension is " + std::to_string(kernel.size()));

  bool real_basis = false;
  if (config.is_real_set()) {
    auto rk = detail::real_kernel_basis<C>(kernel);
    if (!rk) fail(errc::degenerate_config, "pencil_through: failed to realify kernel basis");
    kernel = *rk;
    real_basis = true;
  } else {
    for (auto& v : kernel) {
      std::size_t imax = 0;
      R best(0);
      for (std::size_t i = 0; i < v.size(); ++i)
        if (abs2(v[i]) > best) {
          best = abs2(v[i]);
          imax = i;
        }
      C ph = v[imax] / C(cabs(v[imax]));
      num::scale(v, cconj(ph));
    }
  }

  Pencil<C> p(QuadricForm<C>::from_coeff_vector(3, kernel[0]),
              QuadricForm<C>::from_coeff_vector(3, kernel[1]), real_basis);

  // keep discriminant roots at bounded parameters: first angle from a fixed
  // list whose rotated basis has all |roots| <= 8
  static const double angles[] = {0.0,     M_PI / 7, 2 * M_PI / 7, 3 * M_PI / 7,
                                  4 * M_PI / 7, 5 * M_PI / 7, 6 * M_PI / 7};
  double best_angle = 0.0, best_score = -1.0;
  for (double th : angles) {
    Pencil<C> cand = (th == 0.0) ? p : p.rotated(th);
    double worst = 0.0;
    try {
      auto disc = discriminant(cand);
      for (const auto& rt : disc.roots)
        worst = std::max(worst, rt.at_infinity() ? 1e30 : dabs(rt.affine()));
    } catch (const Error&) {
      worst = 1e30;
    }
    if (worst <= 8.0) {
      best_angle = th;
      best_score = worst;
      break;
    }
    if (best_score < 0 || worst < best_score) {
      best_angle = th;
      best_score = worst;
    }
  }
  if (best_angle != 0.0) p = p.rotated(best_angle);

  for (std::size_t i = 0; i < 8; ++i) {
    if (p.a().residual(config.point(i)) > 1e-10 || p.b().residual(config.point(i)) > 1e-10)
      fail(errc::degenerate_config, "pencil_through: basis fails to vanish at a source point");
  }
  return p;
}

template <class To, class From>
inline Mat<To> mat_cast(const Mat<From>& m) {
  Mat<To> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = convert_scalar<To>(m(i, j));
  return out;
}

template <class To, class From>
inline Pencil<To> pencil_cast(const Pencil<From>& p) {
  return Pencil<To>(QuadricForm<To>(mat_cast<To>(p.a().gram())),
                    QuadricForm<To>(mat_cast<To>(p.b().gram())), p.real_basis());
}

// Land on the base curve {A = B = 0} from a start point, holding the affine
// gauge <g, x> = 1. Returns the point when the solve converges.
template <class C>
inline std::optional<ProjPoint<C>> base_curve_point(const Pencil<C>& p, const Vec<C>& start,
                                                    const Vec<C>& gauge) {
  auto resid = [&](const Vec<C>& x) {
    Vec<C> f(3);
    f[0] = p.a().evaluate(x);
    f[1] = p.b().evaluate(x);
    f[2] = num::bdot(gauge, x) - C(1);
    return f;
  };
  num::GNOptions<C> opt;
  opt.tol = field<C>::eps() * real_t<C>(1e6);
  opt.max_iter = 120;
  auto r = num::gauss_newton(resid, start, opt);
  if (!r.converged) return std::nullopt;
  return ProjPoint<C>(r.x);
}

}  // namespace rq::pencil
