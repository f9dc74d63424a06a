#pragma once

// Shared generators for the geometry test suites.

#include <vector>

#include "rq/pencil.hpp"
#include "rq/projective.hpp"
#include "rq/rng.hpp"
#include "rq/scalar.hpp"

namespace rqtest {

using rq::Rng;
using rq::field;
using rq::geom::PointConfig;
using rq::geom::ProjPoint;
using rq::num::Mat;
using rq::num::Vec;

template <class C>
inline C random_complex(Rng& rng, double scale = 1.0) {
  return C(field<C>::from_double(scale * rng.normal()),
           field<C>::from_double(scale * rng.normal()));
}

template <class C>
inline C random_real(Rng& rng, double scale = 1.0) {
  return C(field<C>::from_double(scale * rng.normal()));
}

template <class C>
inline ProjPoint<C> random_real_point(Rng& rng, std::size_t ambient = 3) {
  Vec<C> v(ambient + 1);
  for (auto& c : v) c = random_real<C>(rng);
  return ProjPoint<C>(v);
}

template <class C>
inline ProjPoint<C> random_complex_point(Rng& rng, std::size_t ambient = 3) {
  Vec<C> v(ambient + 1);
  for (auto& c : v) c = random_complex<C>(rng);
  return ProjPoint<C>(v);
}

// real set of 8 points: n_real declared-real points plus conjugate pairs
template <class C>
inline PointConfig<C> random_octet(Rng rng, std::size_t n_real) {
  std::vector<ProjPoint<C>> pts;
  rq::geom::Pairing pairing(8);
  for (std::size_t i = 0; i < n_real; ++i) {
    pts.push_back(random_real_point<C>(rng));
    pairing[i] = i;
  }
  for (std::size_t i = n_real; i < 8; i += 2) {
    auto p = random_complex_point<C>(rng);
    pts.push_back(p);
    pts.push_back(p.conj());
    pairing[i] = i + 1;
    pairing[i + 1] = i;
  }
  return PointConfig<C>(std::move(pts), pairing);
}

// random real symmetric pencil with orthonormalized coefficient vectors
template <class C>
inline rq::pencil::Pencil<C> random_real_pencil(Rng rng) {
  using rq::geom::QuadricForm;
  auto sym = [&](Rng& r) {
    Mat<C> g(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        g(i, j) = random_real<C>(r);
        g(j, i) = g(i, j);
      }
    return g;
  };
  Mat<C> ga = sym(rng), gb = sym(rng);
  QuadricForm<C> A(ga), B(gb);
  // orthonormalize coefficient vectors
  auto va = A.coeff_vector();
  auto nva = rq::num::norm2(va);
  rq::num::scale(va, C(1) / C(nva));
  auto vb = B.coeff_vector();
  C proj = rq::num::hdot(va, vb);
  rq::num::axpy(vb, -proj, va);
  auto nvb = rq::num::norm2(vb);
  rq::num::scale(vb, C(1) / C(nvb));
  return rq::pencil::Pencil<C>(QuadricForm<C>::from_coeff_vector(3, va),
                               QuadricForm<C>::from_coeff_vector(3, vb), true);
}

// point on the base curve of a pencil from a seeded start (complex in general)
template <class C>
inline ProjPoint<C> sample_base_point(const rq::pencil::Pencil<C>& p, Rng rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vec<C> start(4), gauge(4);
    for (auto& c : start) c = random_complex<C>(rng);
    for (auto& c : gauge) c = random_real<C>(rng);
    auto pt = rq::pencil::base_curve_point(p, start, gauge);
    if (pt) return *pt;
  }
  rq::fail(rq::errc::no_solution_found, "sample_base_point: no convergence");
}

}  // namespace rqtest
