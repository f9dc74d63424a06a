#pragma once

#include <boost/multiprecision/complex_adaptor.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include "rq/error.hpp"

namespace rq {

namespace mp = boost::multiprecision;

namespace detail {
template <unsigned Bits>
using bin_float = mp::backends::cpp_bin_float<Bits, mp::backends::digit_base_2>;
template <unsigned Bits>
using bin_complex = mp::number<mp::complex_adaptor<bin_float<Bits>>, mp::et_off>;
}  // namespace detail

// Working complex scalars at the three supported precisions. The default
// working precision carries a 128-bit significand; 53 is the hardware path
// used inside search loops, 256 the head-room path for refinement oracles.
using c53 = std::complex<double>;
using c128 = detail::bin_complex<128>;
using c256 = detail::bin_complex<256>;
using c512 = detail::bin_complex<512>;

using Rational = mp::cpp_rational;

template <class C>
struct field;

template <>
struct field<c53> {
  using complex_type = c53;
  using real_type = double;
  using promoted = c128;
  static constexpr int significand_bits = 53;
  static real_type eps() { return std::numeric_limits<double>::epsilon(); }
  static bool finite(const real_type& x) { return std::isfinite(x); }
  static double to_double(const real_type& x) { return x; }
  static real_type from_double(double x) { return x; }
  static real_type from_string(const std::string& s) { return std::stod(s); }
  static std::string to_string(const real_type& x, int digits = 17) {
    std::ostringstream os;
    os << std::setprecision(digits) << x;
    return os.str();
  }
};

template <unsigned Bits>
struct mp_field_base {
  using complex_type = detail::bin_complex<Bits>;
  using real_type = typename complex_type::value_type;
  static constexpr int significand_bits = static_cast<int>(Bits);
  static real_type eps() { return std::numeric_limits<real_type>::epsilon(); }
  static bool finite(const real_type& x) {
    using mp::isinf;
    using mp::isnan;
    return !isnan(x) && !isinf(x);
  }
  static double to_double(const real_type& x) { return x.template convert_to<double>(); }
  static real_type from_double(double x) { return real_type(x); }
  static real_type from_string(const std::string& s) { return real_type(s); }
  static std::string to_string(const real_type& x, int digits = 0) {
    if (digits <= 0) digits = static_cast<int>(Bits * 0.302) + 2;
    return x.str(digits, std::ios_base::scientific);
  }
};

template <>
struct field<c128> : mp_field_base<128> {
  using promoted = c256;
};
template <>
struct field<c256> : mp_field_base<256> {
  using promoted = c512;
};
template <>
struct field<c512> : mp_field_base<512> {
  using promoted = c512;
};

template <class C>
using real_t = typename field<C>::real_type;
template <class C>
using promoted_t = typename field<C>::promoted;

// --- small helpers shared by every numeric module -------------------------

template <class C>
inline real_t<C> re(const C& z) {
  return z.real();
}
template <class C>
inline real_t<C> im(const C& z) {
  return z.imag();
}

template <class C>
inline real_t<C> abs2(const C& z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

template <class C>
inline real_t<C> cabs(const C& z) {
  using std::abs;
  return abs(z);
}

template <class C>
inline C cconj(const C& z) {
  using std::conj;
  return conj(z);
}

template <class C>
inline C csqrt(const C& z) {
  using std::sqrt;
  return sqrt(z);
}

// Square root with a fixed half-plane convention: Re > 0, or Re == 0 and
// Im >= 0. Makes congruence factors reproducible bit-for-bit.
template <class C>
inline C canonical_sqrt(const C& z) {
  C s = csqrt(z);
  if (re(s) < 0 || (re(s) == 0 && im(s) < 0)) s = -s;
  return s;
}

template <class C>
inline bool finite(const C& z) {
  return field<C>::finite(z.real()) && field<C>::finite(z.imag());
}

template <class C>
inline void require_finite(const C& z, const char* where) {
  if (!finite(z)) fail(errc::non_finite, where);
}

template <class C>
inline double dabs(const C& z) {
  return field<C>::to_double(cabs(z));
}

// Cross-precision conversion by components (exact when widening).
template <class To, class From>
inline To convert_scalar(const From& z) {
  using FF = field<From>;
  using TF = field<To>;
  if constexpr (std::is_same_v<To, From>) {
    return z;
  } else if constexpr (FF::significand_bits <= 53 || TF::significand_bits <= 53) {
    return To(TF::from_double(FF::to_double(z.real())), TF::from_double(FF::to_double(z.imag())));
  } else {
    return To(typename TF::real_type(z.real()), typename TF::real_type(z.imag()));
  }
}

inline double rational_to_double(const Rational& q) { return q.template convert_to<double>(); }

template <class R>
inline R rational_to_real(const Rational& q) {
  if constexpr (std::is_same_v<R, double>) {
    return q.template convert_to<double>();
  } else {
    return R(mp::cpp_int(numerator(q)).str()) / R(mp::cpp_int(denominator(q)).str());
  }
}

}  // namespace rq
