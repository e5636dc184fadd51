#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "geoapprox/bench.hpp"
#include "geoapprox/io.hpp"
#include "geoapprox/rounding.hpp"

using namespace geo;

static std::string dump_instance(const ObjectSet& s) {
  std::ostringstream os;
  write_instance(os, s);
  return os.str();
}

TEST_CASE("bench harness") {
  // --- generate: basics, determinism, families ---
  {
    GeneratorSpec g;
    g.n = 0;
    REQUIRE((generate(g).empty()));
    g.n = 50;
    g.seed = 9;
    ObjectSet a = generate(g), b = generate(g);
    REQUIRE((dump_instance(a) == dump_instance(b)));
    REQUIRE((a.size() == 50));
    for (const auto& o : a) REQUIRE((o.is_box() && o.dim() == 2));

    g.family = "disks";
    ObjectSet d = generate(g);
    for (const auto& o : d) REQUIRE((o.is_disk()));

    g.family = "uniform-boxes";
    g.dimension = 3;
    g.color_mix = 0.5;
    ObjectSet c = generate(g);
    int na = 0, nb = 0;
    for (const auto& o : c) {
      REQUIRE((o.dim() == 3));
      if (o.color == Color::A) ++na;
      if (o.color == Color::B) ++nb;
    }
    REQUIRE((na > 0 && nb > 0 && na + nb == 50));
  }

  // --- stabbed family satisfies the rounding precondition ---
  {
    GeneratorSpec g;
    g.family = "stabbed-boxes";
    g.n = 80;
    g.grid_lines = 3;
    g.seed = 4;
    ObjectSet s = generate(g);
    StabbingGrid grid = stabbing_grid_for(g);
    for (const auto& o : s) REQUIRE((grid.stabs(o.box())));
    ClassIndex classes(s, grid);  // throws if any box is unstabbed
    REQUIRE((!classes.classes().empty()));
  }

  // --- generate_stream: churn 0, sliding window, determinism, live deletes ---
  {
    GeneratorSpec g;
    g.n = 0;
    g.seed = 11;
    UpdateStream ins = generate_stream(g, 30, 0.0);
    for (const auto& op : ins.ops) REQUIRE((op.is_insert));
    REQUIRE((!ins.checkpoints.empty() && ins.checkpoints.back() == 30));

    UpdateStream win = generate_stream(g, 40, 0.0, 5, 10);
    std::set<int64_t> live;
    for (const auto& op : win.ops) {
      if (op.is_insert) {
        REQUIRE((live.insert(op.obj.id).second));
      } else {
        REQUIRE((live.erase(op.id) == 1));
      }
      REQUIRE((live.size() <= 5));
    }

    UpdateStream c1 = generate_stream(g, 60, 0.4), c2 = generate_stream(g, 60, 0.4);
    std::ostringstream o1, o2;
    write_stream(o1, c1);
    write_stream(o2, c2);
    REQUIRE((o1.str() == o2.str()));
    std::set<int64_t> live2;
    for (const auto& op : c1.ops) {
      if (op.is_insert)
        REQUIRE((live2.insert(op.obj.id).second));
      else
        REQUIRE((live2.erase(op.id) == 1));
    }
  }

  // --- bichromatic-strips: same-color pairs disjoint at every prefix ---
  {
    GeneratorSpec g;
    g.family = "bichromatic-strips";
    g.n = 24;
    g.extent = 8.0;
    g.seed = 21;
    ObjectSet s = generate(g);
    REQUIRE((s.size() == 24));
    size_t a = 0, b = 0, cross = 0;
    for (size_t i = 0; i < s.size(); ++i) {
      (s[i].color == Color::A ? a : b)++;
      for (size_t j = i + 1; j < s.size(); ++j) {
        if (s[i].color == s[j].color)
          REQUIRE((!intersects(s[i], s[j])));
        else if (intersects(s[i], s[j]))
          ++cross;
      }
    }
    REQUIRE((a > 0 && b > 0 && cross > 0));

    UpdateStream st = generate_stream(g, 120, 0.0, 18, 0);
    std::map<int64_t, GeomObject> live;
    for (const auto& op : st.ops) {
      if (op.is_insert)
        live.emplace(op.obj.id, op.obj);
      else
        live.erase(op.id);
      for (auto it = live.begin(); it != live.end(); ++it)
        for (auto jt = std::next(it); jt != live.end(); ++jt)
          if (it->second.color == jt->second.color)
            REQUIRE((!intersects(it->second, jt->second)));
    }
  }

  // --- config parsing errors carry line numbers ---
  {
    std::istringstream in("{\"kind\":\"options\",\"workers\":2}\nnot json\n");
    bool threw = false;
    try {
      read_suite_config(in);
    } catch (const IoError& e) {
      threw = true;
      REQUIRE((e.line == 2));
    }
    REQUIRE((threw));
    std::istringstream in2("{\"kind\":\"job\",\"problem\":\"mps\",\"algorithm\":\"tree\",\"bogus\":1}\n");
    threw = false;
    try {
      read_suite_config(in2);
    } catch (const IoError& e) {
      threw = true;
      REQUIRE((e.line == 1));
    }
    REQUIRE((threw));
  }

  // --- full suite across problems; determinism with timing off ---
  {
    const char* cfg_text = R"({"kind":"options","workers":3,"timing":false}
{"kind":"job","name":"mps-tree","problem":"mps","algorithm":"tree","instance":{"family":"uniform-boxes","n":18,"seed":3,"extent":5.0}}
{"kind":"job","name":"mps-stabbed","problem":"mps","algorithm":"tree","instance":{"family":"stabbed-boxes","n":18,"seed":5,"extent":6.0}}
{"kind":"job","name":"mps-fat","problem":"mps","algorithm":"fat","instance":{"family":"disks","n":14,"seed":4,"extent":5.0}}
{"kind":"job","name":"mps-dyn","problem":"mps","algorithm":"dyn-tree","instance":{"family":"uniform-boxes","seed":6,"extent":4.0},"stream":{"ops":80,"churn":0.35,"window":16,"checkpoint_every":20}}
{"kind":"job","name":"mis-tree","problem":"mis","algorithm":"tree","instance":{"family":"uniform-boxes","n":35,"seed":7,"extent":7.0},"b":3}
{"kind":"job","name":"mis-high","problem":"mis","algorithm":"highdim","instance":{"family":"uniform-boxes","n":28,"dimension":3,"seed":8,"extent":6.0}}
{"kind":"job","name":"mis-fat","problem":"mis","algorithm":"fat","instance":{"family":"disks","n":26,"seed":9,"extent":6.0}}
{"kind":"job","name":"mis-dyn","problem":"mis","algorithm":"dyn-tree","instance":{"family":"uniform-boxes","seed":10,"extent":5.0},"stream":{"ops":70,"churn":0.3,"window":30,"checkpoint_every":35}}
{"kind":"job","name":"vc-rect","problem":"vc","algorithm":"kernel-rect","instance":{"family":"uniform-boxes","n":30,"seed":11,"extent":5.0},"eps":0.25}
{"kind":"job","name":"vc-fat","problem":"vc","algorithm":"kernel-fat","instance":{"family":"disks","n":26,"seed":12,"extent":5.0},"eps":0.25}
{"kind":"job","name":"vc-bip","problem":"vc","algorithm":"kernel-bipartite","instance":{"family":"bichromatic-strips","n":26,"seed":13,"extent":8.0}}
{"kind":"job","name":"vc-dyn","problem":"vc","algorithm":"dyn-fat","instance":{"family":"disks","seed":14,"extent":5.0},"stream":{"ops":60,"churn":0.3,"window":24,"checkpoint_every":30},"eps":0.3,"gamma":0.24,"kernel_delta":0.2}
{"kind":"job","name":"mcm-bip","problem":"mcm","algorithm":"bipartite","instance":{"family":"uniform-boxes","n":40,"seed":15,"extent":6.0,"color_mix":0.5},"eps":0.25}
{"kind":"job","name":"mcm-gen","problem":"mcm","algorithm":"general","instance":{"family":"disks","n":20,"seed":16,"extent":6.0},"eps":0.34,"seed":5}
{"kind":"job","name":"mcm-dyn-bip","problem":"mcm","algorithm":"dyn-bipartite","instance":{"family":"bichromatic-strips","n":30,"seed":17,"extent":8.0},"stream":{"ops":90,"churn":0.3,"window":40,"checkpoint_every":30},"eps":0.2}
{"kind":"job","name":"mcm-dyn-gen","problem":"mcm","algorithm":"dyn-general","instance":{"family":"disks","seed":18,"extent":6.0},"stream":{"ops":50,"churn":0.3,"window":20,"checkpoint_every":25},"eps":0.34,"seed":6}
{"kind":"job","name":"est-mps","problem":"estimate","algorithm":"mps","instance":{"family":"uniform-boxes","n":120,"seed":19,"extent":8.0},"eps":0.3,"trials":5,"seed":7}
{"kind":"job","name":"est-mis","problem":"estimate","algorithm":"mis","instance":{"family":"uniform-boxes","n":100,"seed":20,"extent":8.0},"eps":0.3,"trials":5,"seed":8}
)";
    std::istringstream in(cfg_text);
    SuiteConfig cfg = read_suite_config(in);
    REQUIRE((cfg.jobs.size() == 18 && cfg.workers == 3 && !cfg.timing));
    Report rep = run_suite(cfg);
    REQUIRE((rep.rows.size() == 18));
    int with_ratio = 0;
    for (const auto& r : rep.rows) {
      std::printf("%-12s %-8s %-14s value=%-6s ratio=%-8s valid=%d %s\n", r.name.c_str(),
                  r.problem.c_str(), r.algorithm.c_str(),
                  r.value ? std::to_string(*r.value).c_str() : "-",
                  r.ratio ? std::to_string(*r.ratio).c_str() : "-", r.valid ? 1 : 0,
                  r.error.c_str());
      REQUIRE((r.error.empty()));
      REQUIRE((r.valid));
      if (r.ratio) {
        ++with_ratio;
        REQUIRE((r.oracle_value.has_value()));
        if (r.ratio_kind == "vs-exact") {
          if (r.problem == "mps" || r.problem == "vc") REQUIRE((*r.ratio >= 1.0 - 1e-9));
          if (r.problem == "mis" || r.problem == "mcm") REQUIRE((*r.ratio >= 1.0 - 1e-9));
        }
      }
      REQUIRE((r.wall_ms == 0.0));
    }
    std::printf("rows with ratio: %d/18\n", with_ratio);
    REQUIRE((with_ratio >= 14));

    // rerun must be byte-identical with timing disabled
    std::istringstream in2(cfg_text);
    Report rep2 = run_suite(read_suite_config(in2));
    std::ostringstream d1, d2, c1, c2;
    write_report_ndjson(d1, rep);
    write_report_ndjson(d2, rep2);
    REQUIRE((d1.str() == d2.str()));
    write_report_csv(c1, rep);
    write_report_csv(c2, rep2);
    REQUIRE((c1.str() == c2.str()));
    REQUIRE((!d1.str().empty() && !c1.str().empty()));
  }

  // --- empty matrix and per-row error capture ---
  {
    SuiteConfig empty;
    REQUIRE((run_suite(empty).rows.empty()));

    std::istringstream in(
        "{\"kind\":\"job\",\"name\":\"bad\",\"problem\":\"mps\",\"algorithm\":\"nope\","
        "\"instance\":{\"family\":\"uniform-boxes\",\"n\":5}}\n"
        "{\"kind\":\"job\",\"name\":\"good\",\"problem\":\"mps\",\"algorithm\":\"tree\","
        "\"instance\":{\"family\":\"uniform-boxes\",\"n\":5}}\n");
    Report rep = run_suite(read_suite_config(in));
    REQUIRE((rep.rows.size() == 2));
    REQUIRE((!rep.rows[0].error.empty() && !rep.rows[0].valid));
    REQUIRE((rep.rows[1].error.empty() && rep.rows[1].valid));
  }

}
