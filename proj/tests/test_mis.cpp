#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "geoapprox/depth.hpp"
#include "geoapprox/mis.hpp"
#include "geoapprox/oracle.hpp"
#include "geoapprox/validate.hpp"

using namespace geo;

static std::mt19937_64 rng(4242);
static double urand(double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}
static int irand(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

// boxes guaranteed to contain >=1 grid line per axis (integer lines 0..9)
static ObjectSet stabbed_instance(int n, StabbingGrid* gout) {
  std::vector<double> lines;
  for (int i = 0; i < 10; ++i) lines.push_back(i);
  *gout = StabbingGrid::from_lines(2, {lines, lines});
  ObjectSet s;
  for (int i = 0; i < n; ++i) {
    int lx = irand(0, 9), ly = irand(0, 9);
    int hx = irand(lx, std::min(9, lx + 2)), hy = irand(ly, std::min(9, ly + 2));
    double x1 = lx - urand(0.05, 0.95), x2 = hx + urand(0.05, 0.95);
    double y1 = ly - urand(0.05, 0.95), y2 = hy + urand(0.05, 0.95);
    GeomObject o = make_obj(i, make_box(x1, y1, x2, y2));
    o.weight = urand(0.5, 3.0);
    s.push_back(o);
  }
  return s;
}

static ObjectSet random_disks(int n, int64_t id0, double world, double rmin, double rmax) {
  ObjectSet s;
  for (int i = 0; i < n; ++i) {
    double r = urand(rmin, rmax);
    Disk d{make_point(urand(r, world - r), urand(r, world - r)), r};
    GeomObject o = make_obj(id0 + i, d);
    o.weight = urand(0.5, 4.0);
    s.push_back(o);
  }
  return s;
}

TEST_CASE("independent-set solvers") {
  // --- stabbed rects + representatives ---
  {
    StabbingGrid g;
    ObjectSet s = stabbed_instance(60, &g);
    ClassIndex ci = round_select_representatives(s, g);
    for (const BoxClass& bc : ci.classes()) {
      double best = -1;
      int64_t bid = 1 << 30;
      for (size_t m : bc.members) {
        if (s[m].weight > best) { best = s[m].weight; bid = s[m].id; }
        else if (s[m].weight == best && s[m].id < bid) bid = s[m].id;
      }
      REQUIRE((s[bc.rep].weight == best && s[bc.rep].id == bid));
    }
    MISOracle ex = exact_mis_oracle(false, 64);
    ISolution sol = mis_stabbed_rects(s, g, ex);
    REQUIRE((check_independent(s, sol.ids).ok));
    ISolution full = exact_mis(s, false, 64);
    std::printf("stabbed: |sol|=%zu exact=%zu ratio=%.2f\n", sol.ids.size(), full.ids.size(),
                full.value / std::max(1.0, sol.value));
    REQUIRE((sol.value * 4.0 + 1e-9 >= full.value));
  }

  // --- depth of representatives <= 4 over random independent sets ---
  {
    int64_t worst = 0;
    for (int t = 0; t < 60; ++t) {
      StabbingGrid g;
      ObjectSet s = stabbed_instance(40, &g);
      ISolution I = exact_mis(s, false, 64);
      int64_t dep = depth_of_representatives(s, I.ids, g);
      REQUIRE((dep <= 4));
      worst = std::max(worst, dep);
      if (!I.ids.empty()) {
        std::vector<int64_t> one{I.ids[0]};
        REQUIRE((depth_of_representatives(s, one, g) == 1));
      }
    }
    std::printf("rep depth ok (max seen %lld)\n", (long long)worst);
  }

  // --- Z filter: independence asserted inside; mean ~ |I|/16 ---
  {
    StabbingGrid g;
    ObjectSet s = stabbed_instance(80, &g);
    ISolution I = auto_mis_oracle(false, 8).solve(s);  // greedy independent set
    const int T = 10000;
    double sum = 0, sumsq = 0;
    std::mt19937_64 zr(99);
    for (int t = 0; t < T; ++t) {
      auto kept = random_Z_filter(s, I.ids, g, zr);
      sum += kept.size();
      sumsq += double(kept.size()) * kept.size();
    }
    double mean = sum / T;
    double var = sumsq / T - mean * mean;
    double se = std::sqrt(var / T);
    double want = double(I.ids.size()) / 16.0;
    std::printf("Z filter: |I|=%zu mean=%.4f want=%.4f se=%.4f\n", I.ids.size(), mean, want, se);
    REQUIRE((std::fabs(mean - want) <= 3 * se + 1e-12));
  }

  // --- mis_rects ---
  {
    MISOracle ex = exact_mis_oracle(false, 64);
    ObjectSet disj;
    for (int i = 0; i < 12; ++i) disj.push_back(make_obj(i, make_box(3 * i, 0, 3 * i + 1, 1)));
    ISolution a = mis_rects(disj, 24, ex);
    REQUIRE((a.ids.size() == 12));
    ObjectSet copies;
    for (int i = 0; i < 7; ++i) copies.push_back(make_obj(i, make_box(2, 2, 5, 5)));
    REQUIRE((mis_rects(copies, 3, ex).ids.size() == 1));

    ObjectSet s;
    for (int i = 0; i < 300; ++i) {
      double x = urand(0, 90), y = urand(0, 90), w = urand(0.5, 9), h = urand(0.5, 9);
      s.push_back(make_obj(i, make_box(x, y, x + w, y + h)));
    }
    std::vector<double> lvls;
    ISolution big = mis_rects(s, 4, ex, &lvls);
    REQUIRE((check_independent(s, big.ids).ok));
    double mx = 0;
    for (double v : lvls) mx = std::max(mx, v);
    REQUIRE((mx == big.value));
    ObjectSet small;
    for (int i = 0; i < 18; ++i) {
      double x = urand(0, 12), y = urand(0, 12), w = urand(0.5, 5), h = urand(0.5, 5);
      small.push_back(make_obj(i, make_box(x, y, x + w, y + h)));
    }
    ISolution sm = mis_rects(small, 3, ex);
    ISolution smex = exact_mis(small, false, 64);
    std::printf("mis_rects: n=300 value=%.0f levels=%zu; n=18 %.0f vs exact %.0f\n", big.value,
                lvls.size(), sm.value, smex.value);
    REQUIRE((sm.value >= smex.value / 3.0 - 1e-9));
  }

  // --- dyn mis rects ---
  {
    DynMisRects dyn(3);
    ObjectSet live;
    int64_t next = 0;
    for (int step = 0; step < 160; ++step) {
      if (step % 3 == 2 && !live.empty()) {
        size_t k = size_t(irand(0, int(live.size()) - 1));
        dyn.erase(live[k].id);
        live.erase(live.begin() + k);
      } else {
        double x = urand(0, 60), y = urand(0, 60), w = urand(0.5, 7), h = urand(0.5, 7);
        GeomObject o = make_obj(next++, make_box(x, y, x + w, y + h));
        dyn.insert(o);
        live.push_back(o);
      }
      if (step % 8 == 0) {
        ISolution cur = dyn.current();
        REQUIRE((check_independent(live, cur.ids).ok));
      }
    }
    REQUIRE((dyn.size() == live.size()));
    std::printf("dyn mis rects ok (rebuilds=%zu value=%.0f live=%zu)\n", dyn.rebuild_count(),
                dyn.current().value, live.size());
    REQUIRE((dyn.rebuild_count() > 0));
  }

  // --- high dim ---
  {
    MISOracle ex = exact_mis_oracle(false, 64);
    ObjectSet disj;
    for (int i = 0; i < 9; ++i) {
      AxisBox b{make_point(4. * i, 0, 0), make_point(4. * i + 1, 1, 1)};
      disj.push_back(make_obj(i, b));
    }
    REQUIRE((mis_boxes_highdim(disj, 16, ex).ids.size() == 9));
    ObjectSet share;
    for (int i = 0; i < 6; ++i) {
      AxisBox b{make_point(5. - i, 5. - i, 5. - i), make_point(5. + i + 1, 6. + i, 6. + i)};
      share.push_back(make_obj(i, b));
    }
    REQUIRE((mis_boxes_highdim(share, 16, ex).ids.size() == 1));
    ObjectSet s;
    for (int i = 0; i < 150; ++i) {
      AxisBox b{make_point(urand(0, 40), urand(0, 40), urand(0, 40)), make_point(0, 0, 0)};
      for (int a = 0; a < 3; ++a) b.hi.c[a] = b.lo.c[a] + urand(0.5, 7);
      b.hi.dim = 3;
      s.push_back(make_obj(i, b));
    }
    ISolution sol = mis_boxes_highdim(s, 3, ex);
    REQUIRE((check_independent(s, sol.ids).ok));
    ObjectSet small(s.begin(), s.begin() + 20);
    ISolution sm = mis_boxes_highdim(small, 3, ex);
    ISolution smex = exact_mis(small, false, 64);
    std::printf("highdim: n=150 value=%.0f; n=20 %.0f vs exact %.0f\n", sol.value, sm.value,
                smex.value);
  }

  // --- greedy fat mis ---
  {
    ObjectSet disj;
    for (int i = 0; i < 8; ++i) disj.push_back(make_obj(i, Disk{make_point(5. * i, 0), 1.0}));
    REQUIRE((greedy_fat_mis(disj).ids.size() == 8));
    ObjectSet chain;
    for (int i = 0; i < 6; ++i)
      chain.push_back(make_obj(i, Disk{make_point(1.5 * i, 0), 1.0 + 0.3 * i}));
    REQUIRE((greedy_fat_mis(chain).ids.size() >= 1));
    ObjectSet s = random_disks(150, 0, 60, 0.5, 4);
    ISolution g1 = greedy_fat_mis(s);
    REQUIRE((check_independent(s, g1.ids).ok));
    ObjectSet small = random_disks(34, 0, 25, 0.5, 4);
    ISolution g2 = greedy_fat_mis(small);
    ISolution ex = exact_mis(small, false, 64);
    std::printf("greedy fat: n=150 value=%.0f; n=34 %.0f vs exact %.0f\n", g1.value, g2.value,
                ex.value);
  }

  // --- mis_fat ---
  {
    ObjectSet disj;
    for (int i = 0; i < 10; ++i) disj.push_back(make_obj(i, Disk{make_point(7. * i, 3), 1.0}));
    ISolution a = mis_fat(disj, 16);
    REQUIRE((a.ids.size() == 10));
    ObjectSet common;
    for (int i = 0; i < 5; ++i)
      common.push_back(make_obj(i, Disk{make_point(10 + 0.1 * i, 10), 2.0}));
    REQUIRE((mis_fat(common, 4).ids.size() == 1));

    ObjectSet s = random_disks(200, 0, 70, 0.5, 3.5);
    ISolution w = mis_fat(s, 4, 0.0, true);
    REQUIRE((check_independent(s, w.ids).ok));
    ObjectSet small = random_disks(36, 1000, 24, 0.5, 3);
    ISolution u = mis_fat(small, 4);
    ISolution ex = exact_mis(small, false, 64);
    ISolution wsm = mis_fat(small, 4, 0.0, true);
    ISolution wex = exact_mis(small, true, 64);
    std::printf("mis_fat: n=200 weighted value=%.2f; n=36 unweighted %.0f vs %.0f, weighted %.2f vs %.2f\n",
                w.value, u.value, ex.value, wsm.value, wex.value);
    REQUIRE((u.value >= ex.value / 4.0 - 1e-9));
  }

  // --- dyn mis fat ---
  {
    DynMisFat dyn(4);
    ObjectSet live;
    int64_t next = 0;
    for (int step = 0; step < 150; ++step) {
      if (step % 3 == 2 && !live.empty()) {
        size_t k = size_t(irand(0, int(live.size()) - 1));
        dyn.erase(live[k].id);
        live.erase(live.begin() + k);
      } else {
        ObjectSet one = random_disks(1, next, 50, 0.5, 3);
        dyn.insert(one[0]);
        live.push_back(one[0]);
        ++next;
      }
      if (step % 7 == 0) {
        ISolution cur = dyn.current();
        REQUIRE((check_independent(live, cur.ids).ok));
      }
    }
    REQUIRE((dyn.size() == live.size()));
    std::printf("dyn mis fat ok (rebuilds=%zu value=%.0f live=%zu)\n", dyn.rebuild_count(),
                dyn.current().value, live.size());
    REQUIRE((dyn.rebuild_count() > 0));
  }

}
