#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "geoapprox/geom.hpp"
#include "geoapprox/mis.hpp"
#include "geoapprox/mps.hpp"
#include "geoapprox/rng.hpp"
#include "geoapprox/sampling.hpp"

using namespace geo;

static GeomObject rect(int64_t id, double x0, double y0, double x1, double y1, double w = 1.0) {
  return make_obj(id, make_box(x0, y0, x1, y1), w);
}

TEST_CASE("value estimators") {
  // --- estimate_sum: exactness cases ---
  {
    std::vector<double> ones(37, 1.0);
    TermSource src = basic_source(ones, 1.0);
    Rng rng = derive_rng(7, "smoke", 0);
    size_t draws = 0;
    double x = estimate_sum(src, 1.0, rng, &draws);
    REQUIRE((draws == 4));
    REQUIRE((x == 37.0));
  }
  {
    TermSource src = basic_source({5.0}, 8.0);
    Rng rng = derive_rng(7, "smoke", 1);
    double x = estimate_sum(src, 0.5, rng);
    REQUIRE((std::fabs(x - 5.0) < 1e-9));
  }
  {
    TermSource src = importance_source({7.25}, {7.25}, 2.0);
    Rng rng = derive_rng(7, "smoke", 2);
    double x = estimate_sum(src, 0.7, rng);
    REQUIRE((std::fabs(x - 7.25) < 1e-9));
  }

  // --- Fact-style failure rate, basic mode: a_i uniform in [1,4] ---
  {
    Rng gen = derive_rng(11, "gen", 0);
    std::vector<double> vals(1000);
    double S = 0.0;
    for (auto& v : vals) {
      v = gen.uniform(1.0, 4.0);
      S += v;
    }
    TermSource src = basic_source(vals, 4.0);
    int fails = 0;
    for (int t = 0; t < 400; ++t) {
      Rng rng = derive_rng(12, "trial", static_cast<uint64_t>(t));
      double x = estimate_sum(src, 0.3, rng);
      if (std::fabs(x - S) > 0.3 * S) ++fails;
    }
    std::printf("basic failure rate: %d/400\n", fails);
    REQUIRE((fails <= 120));

    // unbiasedness: empirical mean within 3 standard errors
    const int T = 4000;
    std::vector<double> xs(T);
    double mean = 0.0;
    for (int t = 0; t < T; ++t) {
      Rng rng = derive_rng(13, "mean", static_cast<uint64_t>(t));
      xs[static_cast<size_t>(t)] = estimate_sum(src, 1.0, rng);
      mean += xs[static_cast<size_t>(t)];
    }
    mean /= T;
    double var = 0.0;
    for (double v : xs) var += (v - mean) * (v - mean);
    var /= (T - 1);
    double se = std::sqrt(var / T);
    std::printf("unbiasedness: mean=%.3f S=%.3f se=%.4f\n", mean, S, se);
    REQUIRE((std::fabs(mean - S) <= 3.0 * se));
  }

  // --- importance mode failure rate ---
  {
    Rng gen = derive_rng(21, "gen", 0);
    const double B = 3.0;
    std::vector<double> vals(500), wts(500);
    double S = 0.0;
    for (size_t i = 0; i < vals.size(); ++i) {
      wts[i] = gen.uniform(0.5, 5.0);
      vals[i] = wts[i] * gen.uniform(1.0, B);
      S += vals[i];
    }
    TermSource src = importance_source(vals, wts, B);
    int fails = 0;
    for (int t = 0; t < 400; ++t) {
      Rng rng = derive_rng(22, "trial", static_cast<uint64_t>(t));
      double x = estimate_sum(src, 0.3, rng);
      if (std::fabs(x - S) > 0.3 * S) ++fails;
    }
    std::printf("importance failure rate: %d/400\n", fails);
    REQUIRE((fails <= 120));
  }

  // --- bound violations raise ---
  {
    TermSource src = basic_source({10.0}, 2.0);  // a=10 > B*w=2
    Rng rng = derive_rng(7, "smoke", 3);
    bool threw = false;
    try {
      estimate_sum(src, 1.0, rng);
    } catch (const std::invalid_argument&) {
      threw = true;
    }
    REQUIRE((threw));
    TermSource low = importance_source({0.5}, {1.0}, 2.0);  // a=0.5 < w=1
    threw = false;
    try {
      estimate_sum(low, 1.0, rng);
    } catch (const std::invalid_argument&) {
      threw = true;
    }
    REQUIRE((threw));
  }

  // --- median_boost ---
  {
    REQUIRE((median_boost([](size_t) { return 3.5; }, 7) == 3.5));
    std::vector<double> seq{1.0, 100.0, 1.0};
    REQUIRE((median_boost([&](size_t t) { return seq[t]; }, 3) == 1.0));
    bool threw = false;
    try {
      median_boost([](size_t) { return 0.0; }, 4);
    } catch (const std::invalid_argument&) {
      threw = true;
    }
    REQUIRE((threw));

    // boosted failure rate on the uniform-[1,4] source
    Rng gen = derive_rng(31, "gen", 0);
    std::vector<double> vals(800);
    double S = 0.0;
    for (auto& v : vals) {
      v = gen.uniform(1.0, 4.0);
      S += v;
    }
    TermSource src = basic_source(vals, 4.0);
    int fails = 0;
    for (int meta = 0; meta < 100; ++meta) {
      double med = median_boost(
          [&](size_t t) {
            Rng rng = derive_rng(32, "boost", static_cast<uint64_t>(meta) * 1000 + t);
            return estimate_sum(src, 0.3, rng);
          },
          15);
      if (std::fabs(med - S) > 0.3 * S) ++fails;
    }
    std::printf("boosted failure rate: %d/100\n", fails);
    REQUIRE((fails <= 1));
  }

  // --- estimate_mps_value: single subproblem equals the full solver ---
  {
    ObjectSet s;
    Rng gen = derive_rng(41, "gen", 0);
    for (int i = 0; i < 20; ++i) {
      double a = -gen.uniform(0.2, 3.0), b2 = gen.uniform(0.2, 3.0);
      double c = -gen.uniform(0.2, 3.0), d2 = gen.uniform(0.2, 3.0);
      s.push_back(rect(i + 1, a, c, b2, d2));
    }
    PierceOracle orc = auto_pierce_oracle();
    EstimateStats st;
    double est = estimate_mps_value(s, 50, orc, 0.5, 99, 0, &st);
    PiercingSolution full = pierce_boxes(s, 50, orc);
    std::printf("mps single leaf: est=%.1f full=%zu terms=%zu B=%.0f\n", est, full.points.size(),
                st.terms, st.B);
    REQUIRE((st.terms == 1));
    REQUIRE((est == static_cast<double>(full.points.size())));
  }

  // --- estimate_mps_value: random instances vs full solver ---
  {
    PierceOracle orc = auto_pierce_oracle();
    const double eps = 0.25;
    int ok = 0;
    for (uint64_t seed = 1; seed <= 20; ++seed) {
      Rng gen = derive_rng(seed, "inst", 0);
      ObjectSet s;
      for (int i = 0; i < 300; ++i) {
        double x = gen.uniform(0.0, 10.0), y = gen.uniform(0.0, 10.0);
        double w = gen.uniform(0.3, 2.0), h = gen.uniform(0.3, 2.0);
        s.push_back(rect(i + 1, x, y, x + w, y + h));
      }
      double full = static_cast<double>(pierce_boxes(s, 4, orc).points.size());
      EstimateStats st;
      double est = boosted_mps_estimate(s, 4, orc, eps, 15, seed, &st);
      bool good = std::fabs(est - full) <= eps * full;
      if (good) ++ok;
      if (seed <= 3)
        std::printf("mps seed %llu: est=%.1f full=%.0f terms=%zu evals=%zu B=%.0f draws=%zu\n",
                    static_cast<unsigned long long>(seed), est, full, st.terms, st.evaluations,
                    st.B, st.samples);
    }
    std::printf("mps within-eps: %d/20\n", ok);
    REQUIRE((ok >= 19));

    // determinism
    Rng gen = derive_rng(3, "inst", 0);
    ObjectSet s;
    for (int i = 0; i < 300; ++i) {
      double x = gen.uniform(0.0, 10.0), y = gen.uniform(0.0, 10.0);
      s.push_back(rect(i + 1, x, y, x + gen.uniform(0.3, 2.0), y + gen.uniform(0.3, 2.0)));
    }
    double a = estimate_mps_value(s, 4, orc, 0.25, 5, 2);
    double b2 = estimate_mps_value(s, 4, orc, 0.25, 5, 2);
    REQUIRE((a == b2));
  }

  // --- estimate_mis_value: all-disjoint single leaf ---
  {
    ObjectSet s;
    for (int i = 0; i < 60; ++i) s.push_back(rect(i + 1, 3.0 * i, 0.0, 3.0 * i + 1.0, 1.0));
    MISOracle orc = auto_mis_oracle(false);
    EstimateStats st;
    double est = estimate_mis_value(s, 128, orc, 0.4, false, 7, 0, &st);
    std::printf("mis disjoint: est=%.1f terms=%zu levels=%zu\n", est, st.terms, st.levels);
    REQUIRE((st.terms == 1 && st.levels == 1));
    REQUIRE((est == 60.0));
    double boosted = boosted_mis_estimate(s, 128, orc, 0.4, false, 15, 7, nullptr);
    REQUIRE((std::fabs(boosted - 60.0) <= 0.4 * 60.0));

    // weighted: single term evaluates exactly to the disjoint total weight
    ObjectSet sw;
    double total = 0.0;
    for (int i = 0; i < 40; ++i) {
      double w = 0.5 + 0.25 * i;
      total += w;
      sw.push_back(rect(i + 1, 3.0 * i, 0.0, 3.0 * i + 1.0, 1.0, w));
    }
    MISOracle worc = auto_mis_oracle(true);
    EstimateStats wst;
    double west = estimate_mis_value(sw, 128, worc, 0.4, true, 7, 0, &wst);
    std::printf("mis weighted disjoint: est=%.2f want=%.2f\n", west, total);
    REQUIRE((wst.terms == 1));
    REQUIRE((std::fabs(west - total) < 1e-9));
  }

  // --- estimate_mis_value: multi-leaf sanity + weighted bounds exercised ---
  {
    MISOracle orc = auto_mis_oracle(false);
    MISOracle worc = auto_mis_oracle(true);
    const double eps = 0.3;
    for (uint64_t seed = 1; seed <= 10; ++seed) {
      Rng gen = derive_rng(seed, "mis-inst", 0);
      ObjectSet s;
      for (int i = 0; i < 150; ++i) {
        double x = gen.uniform(0.0, 10.0), y = gen.uniform(0.0, 10.0);
        double w = gen.uniform(0.3, 1.5), h = gen.uniform(0.3, 1.5);
        s.push_back(rect(i + 1, x, y, x + w, y + h, gen.uniform(0.5, 3.0)));
      }
      double solver = mis_rects(s, 4, orc).value;
      EstimateStats st;
      double est = boosted_mis_estimate(s, 4, orc, eps, false, 15, seed, &st);
      REQUIRE((est > 0.0));
      REQUIRE((est <= (1.0 + 2.0 * eps) * solver));
      REQUIRE((est >= (1.0 - eps) * solver / static_cast<double>(st.levels) - 1e-9));

      double wsolver = mis_rects(s, 4, worc).value;
      double west = boosted_mis_estimate(s, 4, worc, eps, true, 15, seed, nullptr);
      REQUIRE((west > 0.0));
      REQUIRE((west <= (1.0 + 2.0 * eps) * wsolver));
      if (seed <= 3)
        std::printf("mis seed %llu: est=%.2f solver=%.0f levels=%zu | w est=%.2f solver=%.2f\n",
                    static_cast<unsigned long long>(seed), est, solver, st.levels, west, wsolver);
    }

    // determinism / trial separation
    Rng gen = derive_rng(4, "mis-inst", 0);
    ObjectSet s;
    for (int i = 0; i < 120; ++i) {
      double x = gen.uniform(0.0, 8.0), y = gen.uniform(0.0, 8.0);
      s.push_back(rect(i + 1, x, y, x + gen.uniform(0.3, 1.5), y + gen.uniform(0.3, 1.5)));
    }
    double a = estimate_mis_value(s, 4, orc, 0.3, false, 5, 1);
    double b2 = estimate_mis_value(s, 4, orc, 0.3, false, 5, 1);
    REQUIRE((a == b2));
  }

}
