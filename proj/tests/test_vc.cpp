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
#include "geoapprox/vc.hpp"

using namespace geo;

static ObjectSet random_boxes(size_t n, uint64_t seed, double span = 100.0, double sz = 10.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> P(0.0, span), S(0.5, sz);
  ObjectSet s;
  for (size_t i = 0; i < n; ++i) {
    double x = P(rng), y = P(rng), w = S(rng), h = S(rng);
    s.push_back(make_obj(int64_t(i + 1), make_box(x, y, x + w, y + h)));
  }
  return s;
}

static ObjectSet random_disks(size_t n, uint64_t seed, double span = 100.0, double rmax = 3.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> P(0.0, span), R(0.5, rmax);
  ObjectSet s;
  for (size_t i = 0; i < n; ++i)
    s.push_back(make_obj(int64_t(i + 1), make_disk(P(rng), P(rng), R(rng))));
  return s;
}

static double brute_min_edge(const ObjectSet& s, const std::vector<double>& w, int64_t* u = nullptr,
                             int64_t* v = nullptr) {
  double best = -1.0;
  for (size_t i = 0; i < s.size(); ++i)
    for (size_t j = i + 1; j < s.size(); ++j)
      if (intersects(s[i], s[j])) {
        double sum = w[i] + w[j];
        if (best < 0 || sum < best) {
          best = sum;
          if (u) *u = std::min(s[i].id, s[j].id);
          if (v) *v = std::max(s[i].id, s[j].id);
        }
      }
  return best;
}

TEST_CASE("vertex-cover pipeline") {
  // ---- 1. naive oracle vs brute force under weight churn -------------------
  {
    ObjectSet s = random_boxes(25, 42);
    auto orc = naive_min_weight_edge_oracle(s);
    std::vector<double> w(s.size(), 1.0);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<size_t> pick(0, s.size() - 1);
    std::uniform_real_distribution<double> wd(0.1, 5.0);
    for (int step = 0; step < 80; ++step) {
      size_t i = pick(rng);
      double nw = wd(rng);
      orc->set_weight(s[i].id, nw);
      w[i] = nw;
      double want = brute_min_edge(s, w);
      auto got = orc->min_edge();
      REQUIRE(((want < 0) == !got.has_value()));
      if (got) REQUIRE((std::abs(got->weight_sum - want) < 1e-12));
    }
    // removals keep it consistent
    orc->remove(s[3].id);
    orc->remove(s[17].id);
    ObjectSet s2;
    std::vector<double> w2;
    for (size_t i = 0; i < s.size(); ++i)
      if (i != 3 && i != 17) {
        s2.push_back(s[i]);
        w2.push_back(w[i]);
      }
    auto got = orc->min_edge();
    double want = brute_min_edge(s2, w2);
    REQUIRE(((want < 0) == !got.has_value()));
    if (got) REQUIRE((std::abs(got->weight_sum - want) < 1e-12));
    REQUIRE((orc->size() == 23));
    std::printf("oracle ok (min sum %.3f)\n", want);
  }

  // ---- 2. MWU fractional cover --------------------------------------------
  {
    // single edge: immediate accept at z=1 with x = 1/2 each
    ObjectSet s;
    s.push_back(make_obj(1, make_box(0, 0, 2, 2)));
    s.push_back(make_obj(2, make_box(1, 1, 3, 3)));
    auto orc = naive_min_weight_edge_oracle(s);
    MWUStats st{};
    FractionalVC f = mwu_fractional_vc(*orc, s.size(), 0.1, &st);
    REQUIRE((std::abs(f.size - 1.0) < 1e-9));
    REQUIRE((std::abs(f.value(1) - 0.5) < 1e-9 && std::abs(f.value(2) - 0.5) < 1e-9));
    REQUIRE((st.z == 1.0 && st.runs == 1 && st.lower_bound == 0.0));

    // empty set
    auto orc0 = naive_min_weight_edge_oracle({});
    FractionalVC f0 = mwu_fractional_vc(*orc0, 0, 0.1, nullptr);
    REQUIRE((f0.size == 0.0 && f0.universe.empty()));
  }
  {
    // triangle: LP optimum 3/2
    ObjectSet s;
    s.push_back(make_obj(1, make_box(0, 0, 2, 2)));
    s.push_back(make_obj(2, make_box(1, 1, 3, 3)));
    s.push_back(make_obj(3, make_box(1, 0.5, 2, 1.5)));
    double lp = exact_fractional_vc(s, 12);
    REQUIRE((std::abs(lp - 1.5) < 1e-9));
    auto orc = naive_min_weight_edge_oracle(s);
    MWUStats st{};
    FractionalVC f = mwu_fractional_vc(*orc, s.size(), 0.1, &st);
    // feasibility on every edge
    for (size_t i = 0; i < s.size(); ++i)
      for (size_t j = i + 1; j < s.size(); ++j)
        if (intersects(s[i], s[j]))
          REQUIRE((f.value(s[i].id) + f.value(s[j].id) >= 1.0 - 1e-9));
    REQUIRE((f.size >= lp - 1e-9));
    REQUIRE((f.size <= st.z + 1e-9));
    // weights restored
    for (int64_t id : f.universe) REQUIRE((orc->weight(id) == 1.0));
    std::printf("mwu triangle: size=%.4f z=%.3f runs=%zu iters=%zu lb=%.4f\n", f.size, st.z,
                st.runs, st.iterations, st.lower_bound);
    REQUIRE((st.lower_bound <= lp + 1e-9));
  }
  {
    // random instance: feasibility + budget sandwich + reset
    ObjectSet s = random_boxes(40, 11, 40.0, 8.0);
    auto orc = naive_min_weight_edge_oracle(s);
    MWUStats st{};
    FractionalVC f = mwu_fractional_vc(*orc, s.size(), 0.1, &st);
    for (size_t i = 0; i < s.size(); ++i)
      for (size_t j = i + 1; j < s.size(); ++j)
        if (intersects(s[i], s[j]))
          REQUIRE((f.value(s[i].id) + f.value(s[j].id) >= 1.0 - 1e-9));
    for (int64_t id : f.universe) REQUIRE((orc->weight(id) == 1.0));
    REQUIRE((f.size <= st.z + 1e-9 && st.iterations <= st.t_max));
    std::printf("mwu n=40: size=%.3f z=%.2f lb=%.3f runs=%zu iters=%zu/%zu\n", f.size, st.z,
                st.lower_bound, st.runs, st.iterations, st.t_max);

    // small instance against the exact LP value
    ObjectSet t = random_boxes(12, 13, 18.0, 7.0);
    double lp = exact_fractional_vc(t, 12);
    auto orc2 = naive_min_weight_edge_oracle(t);
    MWUStats st2{};
    FractionalVC f2 = mwu_fractional_vc(*orc2, t.size(), 0.1, &st2);
    std::printf("mwu n=12: size=%.4f lp=%.4f lb=%.4f\n", f2.size, lp, st2.lower_bound);
    REQUIRE((f2.size >= lp - 1e-9));
    REQUIRE((st2.lower_bound <= lp + 1e-9));
    REQUIRE((f2.size <= 1.3 * lp + 1e-9));  // (1+3*delta) at delta=0.1

    // 40 more small instances against the same bound
    for (int rep = 0; rep < 40; ++rep) {
      ObjectSet u = random_boxes(4 + rep % 9, 900 + rep, 14.0, 6.0);
      double lpu = exact_fractional_vc(u, 12);
      auto orcu = naive_min_weight_edge_oracle(u);
      FractionalVC fu = mwu_fractional_vc(*orcu, u.size(), 0.1, nullptr);
      REQUIRE((fu.size <= 1.3 * lpu + 1e-9 && fu.size >= lpu - 1e-9));
    }

    // edgeless set: all-zeros answer
    ObjectSet iso;
    for (int i = 0; i < 5; ++i) iso.push_back(make_obj(i + 1, make_box(4.0 * i, 0.0, 4.0 * i + 1, 1.0)));
    auto orc3 = naive_min_weight_edge_oracle(iso);
    FractionalVC f3 = mwu_fractional_vc(*orc3, iso.size(), 0.1, nullptr);
    REQUIRE((f3.size == 0.0 && f3.universe.size() == 5));
  }

  // ---- 3. kernelize ---------------------------------------------------------
  {
    FractionalVC f;
    f.universe = {1, 2, 3, 4, 5, 6};
    f.x = {{1, 0.5}, {2, 0.5}};
    f.default_x = 0.1;
    f.size = 0.5 * 2 + 0.1 * 4;
    KernelResult kr = kernelize(f, 0.2, 0.05);  // lambda = 0.1, alpha in [0.2, 0.4]
    REQUIRE((std::abs(kr.alpha - 0.2) < 1e-12));
    REQUIRE((kr.K == (std::vector<int64_t>{1, 2})));
    REQUIRE((kr.L == (std::vector<int64_t>{3, 4, 5, 6}) && kr.H.empty()));
    REQUIRE((double(kr.K.size()) <= f.size / kr.alpha + 1e-9));
  }
  {
    // property: no edge leaves L except into H; |K| bounded
    ObjectSet s = random_boxes(60, 21, 50.0, 9.0);
    auto orc = naive_min_weight_edge_oracle(s);
    FractionalVC f = mwu_fractional_vc(*orc, s.size(), 0.05, nullptr);
    KernelResult kr = kernelize(f, 0.2, 0.05);
    std::set<int64_t> L(kr.L.begin(), kr.L.end()), H(kr.H.begin(), kr.H.end());
    for (size_t i = 0; i < s.size(); ++i)
      for (size_t j = i + 1; j < s.size(); ++j)
        if (intersects(s[i], s[j])) {
          bool iL = L.count(s[i].id), jL = L.count(s[j].id);
          if (iL) REQUIRE((H.count(s[j].id)));
          if (jL) REQUIRE((H.count(s[i].id)));
        }
    REQUIRE((double(kr.K.size()) <= f.size / kr.alpha + 1e-9));
    std::printf("kernel: |K|=%zu |H|=%zu |L|=%zu alpha=%.3f size=%.2f\n", kr.K.size(),
                kr.H.size(), kr.L.size(), kr.alpha, f.size);

    // vc_from_kernel with an exact inner solver
    if (kr.K.size() <= 40) {
      VCSolution cov = vc_from_kernel(s, kr, [](const ObjectSet& k) { return exact_vc(k, 40); });
      double exact = double(exact_vc(s, 60).ids.size());
      std::printf("vc_from_kernel: %zu vs exact %.0f\n", cov.ids.size(), exact);
      REQUIRE((double(cov.ids.size()) >= exact - 1e-9));
    }
  }

  // ---- 4. separator ---------------------------------------------------------
  {
    ObjectSet s = random_disks(500, 31, 100.0, 2.0);
    SeparatorResult sep = separator(s);
    size_t n = s.size();
    REQUIRE((sep.inside.size() + sep.outside.size() + sep.crossing.size() == n));
    size_t cap = 4 * n / 5 + 2 * 2 * n / 64 + size_t(sep.h);
    std::printf("separator: in=%zu out=%zu cross=%zu (small=%zu) t=%.3f r=%.3f h=%lld cap=%zu\n",
                sep.inside.size(), sep.outside.size(), sep.crossing.size(), sep.small_crossing,
                sep.t, sep.base_side, (long long)sep.h, cap);
    REQUIRE((sep.inside.size() <= cap));
    REQUIRE((sep.outside.size() <= n - n / 5 + size_t(sep.h)));
    REQUIRE((!sep.inside.empty() && !sep.outside.empty()));
    REQUIRE((sep.centers_inside + sep.centers_outside == n));
    double side_cap = 4.0 * double(n) / 5.0 + double(n) / 64.0;
    std::printf("separator centers: in=%zu out=%zu cap=%.1f\n", sep.centers_inside,
                sep.centers_outside, side_cap);
    REQUIRE((double(sep.centers_inside) <= side_cap));
    REQUIRE((double(sep.centers_outside) <= side_cap));
  }

  // ---- 5. fat additive MIS + cover -----------------------------------------
  {
    // disjoint disks: exact through the base case
    ObjectSet s;
    for (int i = 0; i < 12; ++i) s.push_back(make_obj(i + 1, make_disk(10.0 * i, 0.0, 1.0)));
    ISolution a = mis_fat_additive(s, 0.25);
    REQUIRE((a.ids.size() == 12));

    ObjectSet big = random_disks(150, 33, 60.0, 2.5);
    ISolution am = mis_fat_additive(big, 0.25);
    VCSolution cv = vc_fat_promise(big, 0.25);
    REQUIRE((am.ids.size() + cv.ids.size() == big.size()));
    ObjectSet sm = random_disks(30, 35, 25.0, 2.5);
    ISolution ax = mis_fat_additive(sm, 0.25);
    ISolution ex = exact_mis(sm, false, 64);
    std::printf("fat additive: n=150 mis=%zu cover=%zu; n=30 %zu vs exact %zu\n", am.ids.size(),
                cv.ids.size(), ax.ids.size(), ex.ids.size());
    REQUIRE((double(ax.ids.size()) >= double(ex.ids.size()) / 2.0 - 1.0));
    VCSolution cx = vc_fat_promise(sm, 0.25);
    VCSolution vex = exact_vc(sm, 64);
    std::printf("fat cover: %zu vs exact %zu\n", cx.ids.size(), vex.ids.size());
  }

  // ---- 6. dominance decomposition ------------------------------------------
  {
    ObjectSet s;
    s.push_back(make_obj(1, make_box(2, 0, 3, 10)));  // tall
    s.push_back(make_obj(2, make_box(0, 4, 8, 6)));   // wide, pierced by 1
    auto parts = dominance_decompose(s);
    REQUIRE((parts.first.size() == 1 && parts.first[0].id == 1));
    REQUIRE((parts.second.size() == 1 && parts.second[0].id == 2));

    // the dominated side is itself free of four-crossing pairs
    ObjectSet raw = random_boxes(70, 41, 60.0, 12.0);
    TriangleRemoval tr = triangle_removal_sweep(raw);
    auto p2 = dominance_decompose(tr.remaining);
    auto cross_free = [](const ObjectSet& part) {
      for (const auto& a : part)
        for (const auto& b : part)
          if (a.id != b.id &&
              b.box().lo[0] < a.box().lo[0] && a.box().hi[0] < b.box().hi[0] &&
              a.box().lo[1] < b.box().lo[1] && b.box().hi[1] < a.box().hi[1])
            return false;
      return true;
    };
    REQUIRE((cross_free(p2.first)));
    REQUIRE((cross_free(p2.second)));
    std::printf("dominance: n=%zu -> |S1|=%zu |S2|=%zu (both cross-free)\n", tr.remaining.size(),
                p2.first.size(), p2.second.size());
  }

  // ---- 7. triangle sweep -----------------------------------------------------
  {
    // k far-apart triples with a common point each
    ObjectSet s;
    int64_t id = 1;
    const int k = 4;
    for (int c = 0; c < k; ++c) {
      double o = 100.0 * c;
      s.push_back(make_obj(id++, make_box(o + 0, o + 0, o + 2, o + 2)));
      s.push_back(make_obj(id++, make_box(o + 1, o + 1, o + 3, o + 3)));
      s.push_back(make_obj(id++, make_box(o + 1.5, o + 0.5, o + 2.5, o + 1.5)));
    }
    TriangleRemoval tr = triangle_removal_sweep(s);
    REQUIRE((tr.triangles.size() == size_t(k)));
    REQUIRE((tr.remaining.empty()));

    VCSolution cov = vc_rects_promise(s, 0.2);
    REQUIRE((cov.ids.size() == size_t(3 * k)));
    VCSolution ex = exact_vc(s, 40);
    REQUIRE((ex.ids.size() == size_t(2 * k)));
    std::printf("triangles: removed %zu triples, promise %zu vs exact %zu\n", tr.triangles.size(),
                cov.ids.size(), ex.ids.size());

    // depth-2 instance unharmed
    ObjectSet pairs;
    for (int c = 0; c < 5; ++c) {
      double o = 10.0 * c;
      pairs.push_back(make_obj(100 + 2 * c, make_box(o, 0, o + 1, 1)));
      pairs.push_back(make_obj(101 + 2 * c, make_box(o + 0.5, 0, o + 1.5, 1)));
    }
    TriangleRemoval tr2 = triangle_removal_sweep(pairs);
    REQUIRE((tr2.triangles.empty() && tr2.remaining.size() == pairs.size()));
    VCSolution c2 = vc_rects_trifree_promise(pairs, 0.2);
    REQUIRE((c2.ids.size() == 5));
  }
  {
    // random rectangles end to end
    ObjectSet s = random_boxes(36, 51, 30.0, 8.0);
    VCSolution cov = vc_rects_promise(s, 0.2);
    VCSolution ex = exact_vc(s, 40);
    std::printf("rects n=36: promise %zu vs exact %zu\n", cov.ids.size(), ex.ids.size());
    REQUIRE((cov.ids.size() <= 2 * ex.ids.size() + 1));
    ObjectSet s2 = random_boxes(200, 53, 90.0, 10.0);
    VCSolution cov2 = vc_rects_promise(s2, 0.2);
    std::printf("rects n=200: promise %zu\n", cov2.ids.size());
  }

  // ---- 8. bipartite promise -------------------------------------------------
  {
    ObjectSet a, b;
    for (int i = 0; i < 3; ++i)
      a.push_back(make_obj(i + 1, make_box(2.0 * i, 0, 2.0 * i + 0.5, 20), 1.0, Color::A));
    for (int j = 0; j < 5; ++j)
      b.push_back(make_obj(100 + j, make_box(0, 2.0 * j, 20, 2.0 * j + 0.5), 1.0, Color::B));
    VCSolution cov = vc_bipartite_promise(a, b);
    REQUIRE((cov.ids == (std::vector<int64_t>{1, 2, 3})));
    ObjectSet b3(b.begin(), b.begin() + 3);
    VCSolution tie = vc_bipartite_promise(a, b3);
    REQUIRE((tie.ids == (std::vector<int64_t>{1, 2, 3})));  // ties prefer the first side

    ObjectSet all = a;
    all.insert(all.end(), b.begin(), b.end());
    VCSolution viaColor = bipartite_promise_solver()(all);
    REQUIRE((viaColor.ids == cov.ids));
  }

  // ---- 9. dynamic cover ------------------------------------------------------
  {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> P(0.0, 60.0), R(0.8, 2.2);
    DynVC dyn(0.3, 0.24, 0.2, fat_promise_solver(0.25), 1.5);
    ObjectSet live;
    int64_t next = 1;
    size_t checked = 0;
    auto lower = [&]() {
      std::vector<char> used(live.size(), 0);
      size_t m = 0;
      for (size_t i = 0; i < live.size(); ++i) {
        if (used[i]) continue;
        for (size_t j = i + 1; j < live.size(); ++j)
          if (!used[j] && intersects(live[i], live[j])) {
            used[i] = used[j] = 1;
            ++m;
            break;
          }
      }
      return m;
    };
    auto step_check = [&](int op) {
      if (op % 10 != 0) return;
      VCSolution cur = dyn.current();
      auto v = check_vertex_cover(live, cur.ids);
      REQUIRE((v.ok));
      size_t lb = lower();
      REQUIRE((cur.ids.size() <= 4 * std::max<size_t>(lb, 1) + 4));
      ++checked;
    };
    int op = 0;
    for (int i = 0; i < 120; ++i, ++op) {
      GeomObject o = make_obj(next++, make_disk(P(rng), P(rng), R(rng)));
      dyn.insert(o);
      live.push_back(o);
      step_check(op);
    }
    std::uniform_int_distribution<size_t> pick;
    for (int i = 0; i < 80; ++i, ++op) {
      if (i % 2 == 0 && !live.empty()) {
        size_t j = std::uniform_int_distribution<size_t>(0, live.size() - 1)(rng);
        dyn.erase(live[j].id);
        live.erase(live.begin() + ptrdiff_t(j));
      } else {
        GeomObject o = make_obj(next++, make_disk(P(rng), P(rng), R(rng)));
        dyn.insert(o);
        live.push_back(o);
      }
      step_check(op);
    }
    while (live.size() > 30) {
      size_t j = std::uniform_int_distribution<size_t>(0, live.size() - 1)(rng);
      dyn.erase(live[j].id);
      live.erase(live.begin() + ptrdiff_t(j));
      ++op;
      step_check(op);
    }
    VCSolution fin = dyn.current();
    auto v = check_vertex_cover(live, fin.ids);
    REQUIRE((v.ok));
    REQUIRE((dyn.size() == live.size()));
    REQUIRE((dyn.phase_count() > 0));
    std::printf("dyn vc: final n=%zu cover=%zu phases=%zu checks=%zu est=%.1f\n", live.size(),
                fin.ids.size(), dyn.phase_count(), checked, dyn.optimum_estimate());
  }

  // ---- 10. dynamic cover, bipartite inner ------------------------------------
  {
    DynVC dyn(0.5, 0.24, 0.2, bipartite_promise_solver(), 1.5);
    ObjectSet live;
    for (int i = 0; i < 6; ++i) {
      GeomObject o = make_obj(i + 1, make_box(3.0 * i, 0, 3.0 * i + 0.5, 40), 1.0, Color::A);
      dyn.insert(o);
      live.push_back(o);
    }
    for (int j = 0; j < 9; ++j) {
      GeomObject o = make_obj(100 + j, make_box(0, 3.0 * j, 40, 3.0 * j + 0.5), 1.0, Color::B);
      dyn.insert(o);
      live.push_back(o);
    }
    VCSolution cur = dyn.current();
    auto v = check_vertex_cover(live, cur.ids);
    REQUIRE((v.ok));
    std::printf("dyn bipartite: n=%zu cover=%zu\n", live.size(), cur.ids.size());
    REQUIRE((cur.ids.size() <= 9));
  }

}
