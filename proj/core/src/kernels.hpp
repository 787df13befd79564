#pragma once

// Branch-free sin/cos of 2*pi*a for arrays. glibc on the target gives the
// compiler no vector sincos, and gcc will not vectorise the reductions below
// through omp simd, so the loops use explicit 4-lane vectors.

#include <cstddef>
#include <cstring>

#include "distlab/types.hpp"

namespace distlab::kernel {

typedef double v4d __attribute__((vector_size(32)));

inline v4d load4(const double* p) {
  v4d v;
  std::memcpy(&v, p, sizeof v);
  return v;
}

inline void store4(double* p, v4d v) { std::memcpy(p, &v, sizeof v); }

inline double hsum(v4d v) { return (v[0] + v[1]) + (v[2] + v[3]); }

template <class T>
struct CosSinT {
  T c, s;
};

// cos and sin of 2*pi*a; absolute error ~1e-15 for |a| < 2^50.
template <class T>
inline CosSinT<T> sincos_turns_t(T a) {
  const double magic = 6755399441055744.0;  // 1.5 * 2^52, rounds to nearest
  T f = a - ((a + magic) - magic);           // [-1/2, 1/2]
  T t = f * (kTwoPi / 8.0);                  // |t| <= pi/8
  T t2 = t * t;
  T sn = t * (1.0 + t2 * (-1.0 / 6 + t2 * (1.0 / 120 + t2 * (-1.0 / 5040 +
             t2 * (1.0 / 362880 + t2 * (-1.0 / 39916800 + t2 * (1.0 / 6227020800.0)))))));
  T cs = 1.0 + t2 * (-0.5 + t2 * (1.0 / 24 + t2 * (-1.0 / 720 + t2 * (1.0 / 40320 +
             t2 * (-1.0 / 3628800 + t2 * (1.0 / 479001600 + t2 * (-1.0 / 87178291200.0)))))));
  for (int k = 0; k < 3; ++k) {
    T s2 = 2.0 * sn * cs;
    T c2 = (cs - sn) * (cs + sn);
    sn = s2;
    cs = c2;
  }
  return {cs, sn};
}

// cos only, same reduction; the double-angle steps need no sine.
template <class T>
inline T cos_turns_t(T a) {
  const double magic = 6755399441055744.0;
  T f = a - ((a + magic) - magic);
  T t = f * (kTwoPi / 8.0);
  T t2 = t * t;
  T cs = 1.0 + t2 * (-0.5 + t2 * (1.0 / 24 + t2 * (-1.0 / 720 + t2 * (1.0 / 40320 +
             t2 * (-1.0 / 3628800 + t2 * (1.0 / 479001600 + t2 * (-1.0 / 87178291200.0)))))));
  for (int k = 0; k < 3; ++k) cs = 2.0 * cs * cs - 1.0;
  return cs;
}

using CosSin = CosSinT<double>;

inline CosSin sincos_turns(double a) { return sincos_turns_t<double>(a); }

// sum_i w_i exp(-2 pi i a_i)
inline cdouble phase_sum(const double* a, const double* w, std::size_t n) {
  v4d re = {0, 0, 0, 0}, im = {0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    CosSinT<v4d> e = sincos_turns_t(load4(a + i));
    v4d wv = load4(w + i);
    re += wv * e.c;
    im -= wv * e.s;
  }
  double r = hsum(re), m = hsum(im);
  for (; i < n; ++i) {
    CosSin e = sincos_turns(a[i]);
    r += w[i] * e.c;
    m -= w[i] * e.s;
  }
  return {r, m};
}

// sum_i w_i exp(-2 pi i x_i . k) with the coordinates in separate arrays.
// For d = 2 pass any array as z together with k2 = 0.
inline cdouble phase_sum_dot(const double* x, const double* y, const double* z, const double* w,
                             double k0, double k1, double k2, std::size_t n) {
  v4d re = {0, 0, 0, 0}, im = {0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    v4d a = load4(x + i) * k0 + load4(y + i) * k1 + load4(z + i) * k2;
    CosSinT<v4d> e = sincos_turns_t(a);
    v4d wv = load4(w + i);
    re += wv * e.c;
    im -= wv * e.s;
  }
  double r = hsum(re), m = hsum(im);
  for (; i < n; ++i) {
    CosSin e = sincos_turns(x[i] * k0 + y[i] * k1 + z[i] * k2);
    r += w[i] * e.c;
    m -= w[i] * e.s;
  }
  return {r, m};
}

// sum_i w_i cos(2 pi x_i . k)
inline double cos_sum_dot(const double* x, const double* y, const double* z, const double* w, double k0, double k1,
                          double k2, std::size_t n) {
  v4d acc = {0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    v4d a = load4(x + i) * k0 + load4(y + i) * k1 + load4(z + i) * k2;
    acc += load4(w + i) * cos_turns_t(a);
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += w[i] * cos_turns_t(x[i] * k0 + y[i] * k1 + z[i] * k2);
  return r;
}

// S_j += sum_i w_i a_i^j exp(-2 pi i t a_i), j = 0..3, with a_i = x_i . k.
inline void phase_moments(const double* x, const double* y, const double* z, const double* w, double k0,
                          double k1, double k2, double t, std::size_t n, cdouble out[4]) {
  v4d re[4] = {}, im[4] = {};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    v4d a = load4(x + i) * k0 + load4(y + i) * k1 + load4(z + i) * k2;
    CosSinT<v4d> e = sincos_turns_t(t * a);
    v4d wv = load4(w + i);
    v4d c = wv * e.c, s = wv * e.s;
    for (int j = 0; j < 4; ++j) {
      re[j] += c;
      im[j] -= s;
      c *= a;
      s *= a;
    }
  }
  double r[4], m[4];
  for (int j = 0; j < 4; ++j) {
    r[j] = hsum(re[j]);
    m[j] = hsum(im[j]);
  }
  for (; i < n; ++i) {
    double a = x[i] * k0 + y[i] * k1 + z[i] * k2;
    CosSin e = sincos_turns(t * a);
    double c = w[i] * e.c, s = w[i] * e.s;
    for (int j = 0; j < 4; ++j) {
      r[j] += c;
      m[j] -= s;
      c *= a;
      s *= a;
    }
  }
  for (int j = 0; j < 4; ++j) out[j] += cdouble(r[j], m[j]);
}

// out[i] *= cos^2(2 pi a_i)
inline void mul_cos2(const double* a, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    v4d c = sincos_turns_t(load4(a + i)).c;
    store4(out + i, load4(out + i) * c * c);
  }
  for (; i < n; ++i) {
    double c = sincos_turns(a[i]).c;
    out[i] *= c * c;
  }
}

// Rotation recurrence for profiles: s_i <- s_i * z_i while accumulating
// sum_i w_i s_i. Returns the sum before the update.
inline cdouble rotate_accumulate(const double* w, double* sr, double* si, const double* zr, const double* zi,
                                 std::size_t n) {
  v4d re = {0, 0, 0, 0}, im = {0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    v4d wv = load4(w + i), a = load4(sr + i), b = load4(si + i), c = load4(zr + i), d = load4(zi + i);
    re += wv * a;
    im += wv * b;
    store4(sr + i, a * c - b * d);
    store4(si + i, a * d + b * c);
  }
  double r = hsum(re), m = hsum(im);
  for (; i < n; ++i) {
    r += w[i] * sr[i];
    m += w[i] * si[i];
    double nr = sr[i] * zr[i] - si[i] * zi[i];
    double ni = sr[i] * zi[i] + si[i] * zr[i];
    sr[i] = nr;
    si[i] = ni;
  }
  return {r, m};
}

}  // namespace distlab::kernel
