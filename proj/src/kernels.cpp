#include "geoapprox/kernels.hpp"

namespace geo::kernels {

namespace {

inline bool mask_bit(const uint64_t* mask, size_t i) {
  return !mask || (mask[i >> 6] >> (i & 63)) & 1u;
}

int64_t s_first_box_hit(const Boxes2& s, double qlox, double qloy, double qhix,
                        double qhiy, const uint64_t* mask, size_t start) {
  for (size_t i = start; i < s.size(); ++i) {
    if (!mask_bit(mask, i)) continue;
    if (s.lox[i] <= qhix && qlox <= s.hix[i] && s.loy[i] <= qhiy && qloy <= s.hiy[i])
      return static_cast<int64_t>(i);
  }
  return -1;
}

int64_t s_count_boxes_containing(const Boxes2& s, double x, double y) {
  int64_t n = 0;
  for (size_t i = 0; i < s.size(); ++i)
    n += (s.lox[i] <= x && x <= s.hix[i] && s.loy[i] <= y && y <= s.hiy[i]);
  return n;
}

int64_t s_first_disk_hit(const Disks2& s, double qx, double qy, double qr,
                         const uint64_t* mask, size_t start) {
  for (size_t i = start; i < s.size(); ++i) {
    if (!mask_bit(mask, i)) continue;
    double dx = s.cx[i] - qx, dy = s.cy[i] - qy, rr = s.rad[i] + qr;
    if (dx * dx + dy * dy <= rr * rr) return static_cast<int64_t>(i);
  }
  return -1;
}

bool s_any_point_in_box(const Points2& p, double lox, double loy, double hix, double hiy) {
  for (size_t i = 0; i < p.size(); ++i)
    if (lox <= p.xs[i] && p.xs[i] <= hix && loy <= p.ys[i] && p.ys[i] <= hiy) return true;
  return false;
}

bool s_any_point_in_disk(const Points2& p, double cx, double cy, double r) {
  double r2 = r * r;
  for (size_t i = 0; i < p.size(); ++i) {
    double dx = p.xs[i] - cx, dy = p.ys[i] - cy;
    if (dx * dx + dy * dy <= r2) return true;
  }
  return false;
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend b{"scalar", s_first_box_hit, s_count_boxes_containing,
                         s_first_disk_hit, s_any_point_in_box, s_any_point_in_disk};
  return b;
}

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Backend& active_backend() {
  static const Backend* chosen = [] {
    if (const Backend* a = avx2_backend_or_null(); a && avx2_available()) return a;
    return &scalar_backend();
  }();
  return *chosen;
}

}  // namespace geo::kernels
