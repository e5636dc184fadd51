#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>

#include "geoapprox/geom.hpp"
#include "geoapprox/mps.hpp"
#include "geoapprox/oracle.hpp"
#include "geoapprox/quadtree.hpp"
#include "geoapprox/validate.hpp"

using namespace geo;

TEST_CASE("piercing solvers") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);

  // 1) stabbed sets: validity, corner bound, oracle exactness
  for (int trial = 0; trial < 30; ++trial) {
    StabbingGrid g = StabbingGrid::from_lines(2, {{0.3, 0.6}, {0.4, 0.7}});
    ObjectSet s;
    for (int i = 0; i < 25; ++i) {
      double lx = U(rng) * 0.6, ly = U(rng) * 0.7;
      double hx = lx + 0.31 + U(rng) * 0.4, hy = ly + 0.31 + U(rng) * 0.4;
      GeomObject o = make_obj(i, make_box(lx, ly, hx, hy));
      if (!g.stabs(o.box())) continue;
      s.push_back(o);
    }
    if (s.empty()) continue;
    auto oracle = exact_pierce_oracle();
    auto sol = pierce_stabbed_boxes(s, g, oracle);
    REQUIRE_MESSAGE(!(!check_piercing(s, sol.points).ok), "stabbed: not a piercing");
    ClassIndex ci(s, g);
    auto reps = ci.representatives(s);
    auto ex = exact_mps(reps, 64, 64);
    REQUIRE_MESSAGE(!(sol.value() > 4 * ex.value()), "stabbed: corner bound violated");
  }
  std::printf("stabbed ok\n");

  // 2) static pierce_boxes: ratio (small n) and validity (large n)
  for (int trial = 0; trial < 12; ++trial) {
    ObjectSet s;
    for (int i = 0; i < 14; ++i) {
      double lx = U(rng), ly = U(rng);
      s.push_back(make_obj(i, make_box(lx, ly, lx + 0.05 + U(rng) * 0.5, ly + 0.05 + U(rng) * 0.5)));
    }
    auto ex = exact_mps(s, 20, 20);
    for (int64_t b : {2, 3, 5}) {
      auto sol = pierce_boxes(s, b, auto_pierce_oracle());
      REQUIRE_MESSAGE(!(!check_piercing(s, sol.points).ok), "pierce_boxes: invalid");
      REQUIRE_MESSAGE(!(sol.value() > 16 * ex.value()), "pierce_boxes: ratio blew up");
      REQUIRE_MESSAGE(!(ex.value() == 0 && sol.value() != 0), "pierce_boxes: nonzero on empty");
    }
  }
  {
    ObjectSet s;
    for (int i = 0; i < 300; ++i) {
      double lx = U(rng) * 100, ly = U(rng) * 100;
      s.push_back(make_obj(i, make_box(lx, ly, lx + U(rng) * 20, ly + U(rng) * 20)));
    }
    auto sol = pierce_boxes(s, 4, auto_pierce_oracle());
    REQUIRE_MESSAGE(!(!check_piercing(s, sol.points).ok), "pierce_boxes large: invalid");
    std::printf("pierce_boxes n=300 value=%zu\n", sol.value());
  }
  // 3d boxes
  {
    ObjectSet s;
    for (int i = 0; i < 80; ++i) {
      double l0 = U(rng) * 10, l1 = U(rng) * 10, l2 = U(rng) * 10;
      AxisBox b{make_point(l0, l1, l2), make_point(l0 + U(rng) * 3, l1 + U(rng) * 3, l2 + U(rng) * 3)};
      s.push_back(make_obj(i, b));
    }
    auto sol = pierce_boxes(s, 3, auto_pierce_oracle());
    REQUIRE_MESSAGE(!(!check_piercing(s, sol.points).ok), "pierce_boxes 3d: invalid");
    std::printf("pierce_boxes 3d value=%zu\n", sol.value());
  }
  std::printf("pierce_boxes ok\n");

  // 3) dynamic: validity after every op, rebuilds happen
  {
    DynPierceBoxes dyn(2, 3);
    std::vector<GeomObject> pool;
    std::vector<int64_t> livef;
    for (int i = 0; i < 160; ++i) {
      double lx = U(rng) * 50, ly = U(rng) * 50;
      pool.push_back(make_obj(i, make_box(lx, ly, lx + U(rng) * 10, ly + U(rng) * 10)));
    }
    ObjectSet live;
    for (int i = 0; i < 160; ++i) {
      if (i >= 40 && (i % 3 == 0) && !live.empty()) {
        size_t k = static_cast<size_t>(rng() % live.size());
        dyn.erase(live[k].id);
        live.erase(live.begin() + static_cast<long>(k));
      }
      dyn.insert(pool[static_cast<size_t>(i)]);
      live.push_back(pool[static_cast<size_t>(i)]);
      if (i % 7 == 0) {
        auto cur = dyn.current();
        REQUIRE_MESSAGE(!(!check_piercing(live, cur.points).ok), "dyn: invalid at checkpoint");
      }
    }
    auto cur = dyn.current();
    REQUIRE_MESSAGE(!(!check_piercing(live, cur.points).ok), "dyn: invalid at end");
    REQUIRE_MESSAGE(!(dyn.size() != live.size()), "dyn: size mismatch");
    REQUIRE_MESSAGE(!(dyn.rebuild_count() == 0), "dyn: no rebuilds happened");
    std::printf("dyn ok (rebuilds=%zu, value=%zu live=%zu)\n", dyn.rebuild_count(), cur.value(),
                live.size());
  }

  // 4) lambda_points: unit cell count and boundary piercing guarantee
  {
    Cell cell;
    cell.outer = QuadtreeBox{false, 0, 2, {0, 0}};
    auto lam = lambda_points(cell, 1.0, 1.0);
    REQUIRE_MESSAGE(!(lam.size() > 81), "lambda: unit cell exceeds 81");
    std::printf("lambda unit cell: %zu points\n", lam.size());
    int tested = 0;
    for (int trial = 0; trial < 4000; ++trial) {
      double r = 0.5 + U(rng);
      Point c = make_point(U(rng) * 3 - 1, U(rng) * 3 - 1);
      GeomObject o = make_obj(trial, Disk{c, r});
      AxisBox B = cell.outer.to_box();
      if (!intersects(bbox(o), B)) continue;  // bbox precheck
      if (!intersects(o, make_obj(-1, B))) continue;
      // must also not be strictly inside (radius >= 0.5 cannot be, for a unit box)
      bool hit = false;
      for (const Point& p : lam)
        if (contains(o, p)) hit = true;
      REQUIRE_MESSAGE(!(!hit), "lambda: disk with diameter >= 1 touching cell not pierced");
      ++tested;
    }
    std::printf("lambda pierced %d boundary disks\n", tested);
    // far-away scale: huge dmin gives a tiny grid
    auto lam2 = lambda_points(cell, 1.0, 10.0);
    REQUIRE_MESSAGE(!(lam2.size() > 9), "lambda: coarse grid should be single-digit");
  }

  // 5) greedy fat piercing: congruent disks through a common point
  {
    ObjectSet s;
    for (int i = 0; i < 40; ++i) {
      double ang = 2 * 3.14159265 * U(rng);
      s.push_back(make_obj(i, Disk{make_point(0.5 + 0.99 * std::cos(ang), 0.5 + 0.99 * std::sin(ang)), 1.0}));
    }
    auto sol = greedy_fat_piercing(s);
    REQUIRE_MESSAGE(!(sol.value() > 81), "greedy fat: one round should suffice");
    std::printf("greedy fat disks value=%zu\n", sol.value());
    ObjectSet sq;
    for (int i = 0; i < 30; ++i) {
      double lx = U(rng), ly = U(rng), w = 0.1 + U(rng) * 0.3;
      sq.push_back(make_obj(i, make_box(lx, ly, lx + w, ly + w * (1 + 2 * U(rng)))));
    }
    auto sol2 = greedy_fat_piercing(sq);
    REQUIRE_MESSAGE(!(!check_piercing(sq, sol2.points).ok), "greedy fat: invalid on boxes");
  }
  std::printf("greedy fat ok\n");

  // 6) full fat pipeline on disks and fat boxes
  {
    for (int rep = 0; rep < 3; ++rep) {
      ObjectSet s;
      int n = 60 + rep * 40;
      for (int i = 0; i < n; ++i) {
        double r = 0.02 + U(rng) * 0.18;
        s.push_back(make_obj(i, Disk{make_point(U(rng) * 4, U(rng) * 4), r}));
      }
      FatPierceStats st;
      auto sol = pierce_fat(s, 4, 0.0, &st);
      REQUIRE_MESSAGE(!(!check_piercing(s, sol.points).ok), "pierce_fat disks: invalid");
      std::printf("pierce_fat disks n=%d value=%zu patched=%zu fallback=%zu maxLambda=%zu\n", n,
                  sol.value(), st.patched, st.fallback_objects, st.max_lambda);
    }
    ObjectSet s;
    for (int i = 0; i < 90; ++i) {
      double w = 0.05 + U(rng) * 0.3;
      double h = w * (0.5 + U(rng));  // aspect <= 2
      double lx = U(rng) * 5, ly = U(rng) * 5;
      s.push_back(make_obj(i, make_box(lx, ly, lx + w, ly + h)));
    }
    FatPierceStats st;
    auto sol = pierce_fat(s, 4, 0.0, &st);
    REQUIRE_MESSAGE(!(!check_piercing(s, sol.points).ok), "pierce_fat boxes: invalid");
    std::printf("pierce_fat boxes value=%zu patched=%zu fallback=%zu\n", sol.value(), st.patched,
                st.fallback_objects);
  }

  // 7) degenerate inputs
  {
    ObjectSet empty;
    REQUIRE_MESSAGE(!(pierce_boxes(empty, 2, auto_pierce_oracle()).value() != 0), "empty: nonzero");
    ObjectSet one{make_obj(0, make_box(1, 1, 2, 2))};
    auto sol = pierce_boxes(one, 2, auto_pierce_oracle());
    REQUIRE_MESSAGE(!(!check_piercing(one, sol.points).ok), "single: invalid");
    REQUIRE_MESSAGE(!(sol.value() > 4), "single: too many points");
  }
}
