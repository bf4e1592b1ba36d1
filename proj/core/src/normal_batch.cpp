// Box-Muller transform over a batch of uniforms. Kept in its own
// translation unit: it is compiled with -ffast-math so GCC can route
// log/cos/sin through libmvec. The sin and cos loops must stay separate
// or GCC fuses them into __builtin_cexpi, which has no vector form.
#include <math.h>

extern "C" void brisk_bm_batch(const double* __restrict u, double* __restrict z,
                               double* __restrict r_scratch, long half) {
  const double* __restrict u1 = u;
  const double* __restrict u2 = u + half;
  double* __restrict za = z;
  double* __restrict zb = z + half;
  constexpr double two_pi = 6.283185307179586476925286766559;
  for (long i = 0; i < half; ++i) r_scratch[i] = sqrt(-2.0 * log(u1[i]));
  for (long i = 0; i < half; ++i) za[i] = r_scratch[i] * cos(two_pi * u2[i]);
  for (long i = 0; i < half; ++i) zb[i] = r_scratch[i] * sin(two_pi * u2[i]);
}
