// AVX2 kernel variants. Compiled with per-function target attributes so the
// TU builds everywhere; active_backend() only selects these when the CPU
// reports AVX2. No FMA anywhere — the disk predicate must round exactly like
// the scalar reference (mul, then add).

#include "geoapprox/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

namespace geo::kernels {
namespace {

#define GEO_AVX2 __attribute__((target("avx2")))

inline bool mask_bit(const uint64_t* mask, size_t i) {
  return !mask || (mask[i >> 6] >> (i & 63)) & 1u;
}

GEO_AVX2 int64_t v_first_box_hit(const Boxes2& s, double qlox, double qloy,
                                 double qhix, double qhiy, const uint64_t* mask,
                                 size_t start) {
  size_t n = s.size(), i = start;
  __m256d vqlox = _mm256_set1_pd(qlox), vqloy = _mm256_set1_pd(qloy);
  __m256d vqhix = _mm256_set1_pd(qhix), vqhiy = _mm256_set1_pd(qhiy);
  for (; i + 4 <= n; i += 4) {
    __m256d lox = _mm256_loadu_pd(&s.lox[i]), loy = _mm256_loadu_pd(&s.loy[i]);
    __m256d hix = _mm256_loadu_pd(&s.hix[i]), hiy = _mm256_loadu_pd(&s.hiy[i]);
    __m256d hit = _mm256_and_pd(
        _mm256_and_pd(_mm256_cmp_pd(lox, vqhix, _CMP_LE_OQ),
                      _mm256_cmp_pd(vqlox, hix, _CMP_LE_OQ)),
        _mm256_and_pd(_mm256_cmp_pd(loy, vqhiy, _CMP_LE_OQ),
                      _mm256_cmp_pd(vqloy, hiy, _CMP_LE_OQ)));
    int m = _mm256_movemask_pd(hit);
    while (m) {
      int lane = __builtin_ctz(static_cast<unsigned>(m));
      size_t idx = i + static_cast<size_t>(lane);
      if (mask_bit(mask, idx)) return static_cast<int64_t>(idx);
      m &= m - 1;
    }
  }
  for (; i < n; ++i) {
    if (!mask_bit(mask, i)) continue;
    if (s.lox[i] <= qhix && qlox <= s.hix[i] && s.loy[i] <= qhiy && qloy <= s.hiy[i])
      return static_cast<int64_t>(i);
  }
  return -1;
}

GEO_AVX2 int64_t v_count_boxes_containing(const Boxes2& s, double x, double y) {
  size_t n = s.size(), i = 0;
  __m256d vx = _mm256_set1_pd(x), vy = _mm256_set1_pd(y);
  int64_t total = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d lox = _mm256_loadu_pd(&s.lox[i]), loy = _mm256_loadu_pd(&s.loy[i]);
    __m256d hix = _mm256_loadu_pd(&s.hix[i]), hiy = _mm256_loadu_pd(&s.hiy[i]);
    __m256d hit = _mm256_and_pd(
        _mm256_and_pd(_mm256_cmp_pd(lox, vx, _CMP_LE_OQ),
                      _mm256_cmp_pd(vx, hix, _CMP_LE_OQ)),
        _mm256_and_pd(_mm256_cmp_pd(loy, vy, _CMP_LE_OQ),
                      _mm256_cmp_pd(vy, hiy, _CMP_LE_OQ)));
    total += __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(hit)));
  }
  for (; i < n; ++i)
    total += (s.lox[i] <= x && x <= s.hix[i] && s.loy[i] <= y && y <= s.hiy[i]);
  return total;
}

GEO_AVX2 int64_t v_first_disk_hit(const Disks2& s, double qx, double qy, double qr,
                                  const uint64_t* mask, size_t start) {
  size_t n = s.size(), i = start;
  __m256d vqx = _mm256_set1_pd(qx), vqy = _mm256_set1_pd(qy), vqr = _mm256_set1_pd(qr);
  for (; i + 4 <= n; i += 4) {
    __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(&s.cx[i]), vqx);
    __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(&s.cy[i]), vqy);
    __m256d rr = _mm256_add_pd(_mm256_loadu_pd(&s.rad[i]), vqr);
    __m256d lhs = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    __m256d hit = _mm256_cmp_pd(lhs, _mm256_mul_pd(rr, rr), _CMP_LE_OQ);
    int m = _mm256_movemask_pd(hit);
    while (m) {
      int lane = __builtin_ctz(static_cast<unsigned>(m));
      size_t idx = i + static_cast<size_t>(lane);
      if (mask_bit(mask, idx)) return static_cast<int64_t>(idx);
      m &= m - 1;
    }
  }
  for (; i < n; ++i) {
    if (!mask_bit(mask, i)) continue;
    double dx = s.cx[i] - qx, dy = s.cy[i] - qy, rr = s.rad[i] + qr;
    if (dx * dx + dy * dy <= rr * rr) return static_cast<int64_t>(i);
  }
  return -1;
}

GEO_AVX2 bool v_any_point_in_box(const Points2& p, double lox, double loy,
                                 double hix, double hiy) {
  size_t n = p.size(), i = 0;
  __m256d vlx = _mm256_set1_pd(lox), vly = _mm256_set1_pd(loy);
  __m256d vhx = _mm256_set1_pd(hix), vhy = _mm256_set1_pd(hiy);
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(&p.xs[i]), y = _mm256_loadu_pd(&p.ys[i]);
    __m256d hit = _mm256_and_pd(
        _mm256_and_pd(_mm256_cmp_pd(vlx, x, _CMP_LE_OQ), _mm256_cmp_pd(x, vhx, _CMP_LE_OQ)),
        _mm256_and_pd(_mm256_cmp_pd(vly, y, _CMP_LE_OQ), _mm256_cmp_pd(y, vhy, _CMP_LE_OQ)));
    if (_mm256_movemask_pd(hit)) return true;
  }
  for (; i < n; ++i)
    if (lox <= p.xs[i] && p.xs[i] <= hix && loy <= p.ys[i] && p.ys[i] <= hiy) return true;
  return false;
}

GEO_AVX2 bool v_any_point_in_disk(const Points2& p, double cx, double cy, double r) {
  size_t n = p.size(), i = 0;
  __m256d vcx = _mm256_set1_pd(cx), vcy = _mm256_set1_pd(cy);
  __m256d vr2 = _mm256_set1_pd(r * r);
  for (; i + 4 <= n; i += 4) {
    __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(&p.xs[i]), vcx);
    __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(&p.ys[i]), vcy);
    __m256d lhs = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    if (_mm256_movemask_pd(_mm256_cmp_pd(lhs, vr2, _CMP_LE_OQ))) return true;
  }
  double r2 = r * r;
  for (; i < n; ++i) {
    double dx = p.xs[i] - cx, dy = p.ys[i] - cy;
    if (dx * dx + dy * dy <= r2) return true;
  }
  return false;
}

}  // namespace

const Backend* avx2_backend_or_null() {
  static const Backend b{"avx2", v_first_box_hit, v_count_boxes_containing,
                         v_first_disk_hit, v_any_point_in_box, v_any_point_in_disk};
  return &b;
}

}  // namespace geo::kernels

#else  // non-x86

namespace geo::kernels {
const Backend* avx2_backend_or_null() { return nullptr; }
}  // namespace geo::kernels

#endif
