#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "geoapprox/geom.hpp"
#include "geoapprox/io.hpp"
#include "geoapprox/rng.hpp"
#include "geoapprox/rounding.hpp"

using namespace geo;

TEST_CASE("closed-set box predicates, exact comparisons") {
  const AxisBox a = make_box(0, 0, 1, 1);
  REQUIRE(a.valid());
  REQUIRE(a.dim() == 2);
  REQUIRE(a.extent(0) == 1.0);

  // boundary touch counts: shared edge, shared corner, containment, identity
  REQUIRE(intersects(a, make_box(1, 0, 2, 1)));
  REQUIRE(intersects(a, make_box(1, 1, 2, 2)));
  REQUIRE(intersects(a, make_box(0.25, 0.25, 0.75, 0.75)));
  REQUIRE(intersects(a, a));
  REQUIRE(!intersects(a, make_box(1.0000000000000002, 0, 2, 1)));
  REQUIRE(!intersects(a, make_box(0, 2, 1, 3)));

  // degenerate boxes are points/segments and still intersect on touch
  const AxisBox pt = make_box(1, 1, 1, 1);
  REQUIRE(pt.valid());
  REQUIRE(intersects(a, pt));

  REQUIRE(contains(a, make_point(0, 0)));
  REQUIRE(contains(a, make_point(1, 1)));
  REQUIRE(!contains(a, make_point(1, 1.0000000000000002)));
}

TEST_CASE("disk predicates: tangency is intersection, exact at dyadic inputs") {
  const Disk d1 = make_disk(0, 0, 1), d2 = make_disk(2, 0, 1);
  REQUIRE(intersects(d1, d2));  // externally tangent
  REQUIRE(!intersects(d1, make_disk(2.0000000000000004, 0, 1)));
  REQUIRE(intersects(d1, make_disk(0.25, 0, 0.25)));  // nested

  REQUIRE(contains(d1, make_point(1, 0)));
  REQUIRE(contains(d1, make_point(0.6, 0.8)));  // 0.36 + 0.64 = 1 exactly
  REQUIRE(!contains(d1, make_point(0.6, 0.8000000000000001)));

  // box-disk: tangent along an edge and at a corner (3-4-5 triangle)
  const AxisBox b = make_box(1, -1, 3, 1);
  REQUIRE(intersects(b, make_disk(0, 0, 1)));
  REQUIRE(!intersects(b, make_disk(0, 0, 0.999999999999999)));
  const AxisBox corner = make_box(3, 4, 5, 6);
  REQUIRE(intersects(corner, make_disk(0, 0, 5)));
  REQUIRE(!intersects(corner, make_disk(0, 0, 4.999999999999999)));

  REQUIRE(dist2_le_exact(0, 0, 3, 4, 5));
  REQUIRE(!dist2_le_exact(0, 0, 3, 4, 4.999999999999999));
}

TEST_CASE("object helpers: bbox, diameter, inner point, colors, weights") {
  GeomObject ob = make_obj(7, make_box(1, 2, 4, 6), 2.5, Color::A);
  REQUIRE(ob.is_box());
  REQUIRE(!ob.is_disk());
  REQUIRE(ob.id == 7);
  REQUIRE(ob.weight == 2.5);
  REQUIRE(ob.color == Color::A);
  REQUIRE(ob.dim() == 2);
  REQUIRE(linf_diameter(ob) == 4.0);  // max extent
  REQUIRE(contains(ob, inner_point(ob)));

  GeomObject od = make_obj(8, make_disk(3, 3, 2));
  REQUIRE(od.is_disk());
  REQUIRE(od.dim() == 2);
  const AxisBox bb = bbox(od);
  REQUIRE(bb.lo == make_point(1, 1));
  REQUIRE(bb.hi == make_point(5, 5));
  REQUIRE(linf_diameter(od) == 4.0);
  REQUIRE(contains(od, inner_point(od)));

  // mixed-shape intersection dispatch
  REQUIRE(intersects(ob, od));
  REQUIRE(!intersects(make_obj(1, make_box(10, 10, 11, 11)), od));
}

TEST_CASE("higher-dimensional boxes up to kMaxDim") {
  Point lo{3, {0, 0, 0, 0}}, hi{3, {1, 1, 1, 0}};
  const AxisBox cube{lo, hi};
  REQUIRE(cube.valid());
  REQUIRE(cube.dim() == 3);
  Point lo2{3, {1, 1, 1, 0}}, hi2{3, {2, 2, 2, 0}};
  REQUIRE(intersects(cube, AxisBox{lo2, hi2}));  // corner touch in 3-d
  Point lo3{3, {1, 1, 1.5, 0}}, hi3{3, {2, 2, 2, 0}};
  REQUIRE(!intersects(cube, AxisBox{lo3, hi3}));

  Point l4{4, {0, 0, 0, 0}}, h4{4, {1, 2, 3, 4}};
  const AxisBox four{l4, h4};
  REQUIRE(four.dim() == 4);
  REQUIRE(four.extent(3) == 4.0);
  REQUIRE(make_obj(1, four).dim() == 4);
}

TEST_CASE("IdIndex lookups and require() error type") {
  ObjectSet s;
  for (int i = 0; i < 10; ++i) s.push_back(make_obj(100 - i, make_box(i, i, i + 1, i + 1)));
  const IdIndex idx(s);
  for (size_t k = 0; k < s.size(); ++k) {
    auto f = idx.find(s[k].id);
    REQUIRE(f.has_value());
    REQUIRE(*f == k);
  }
  REQUIRE(!idx.find(12345).has_value());

  REQUIRE_THROWS_AS(require(false, "boom"), std::invalid_argument);
  REQUIRE_NOTHROW(require(true, "fine"));
}

TEST_CASE("labeled rng splitting: deterministic, label- and index-sensitive") {
  Rng a = derive_rng(42, "alpha"), a2 = derive_rng(42, "alpha");
  Rng b = derive_rng(42, "beta"), c = derive_rng(43, "alpha"), d = derive_rng(42, "alpha", 1);
  bool same = true, diff_label = false, diff_seed = false, diff_index = false;
  for (int i = 0; i < 64; ++i) {
    const double va = a.uniform();
    same = same && va == a2.uniform();
    diff_label = diff_label || va != b.uniform();
    diff_seed = diff_seed || va != c.uniform();
    diff_index = diff_index || va != d.uniform();
  }
  REQUIRE(same);
  REQUIRE(diff_label);
  REQUIRE(diff_seed);
  REQUIRE(diff_index);

  Rng u = derive_rng(7, "range");
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform(2.0, 5.0);
    REQUIRE(v >= 2.0);
    REQUIRE(v < 5.0);
    const size_t k = u.uniform_index(17);
    REQUIRE(k < 17);
  }
}

TEST_CASE("instance io round trip preserves every field byte-exactly") {
  ObjectSet s;
  s.push_back(make_obj(1, make_box(0.1, 0.2, 3.3000000000000003, 4.7), 2.25, Color::A));
  s.push_back(make_obj(2, make_disk(1e-17, -5.5, 0.30000000000000004), 1.0, Color::B));
  Point lo{3, {0, 1, 2, 0}}, hi{3, {3, 4, 5, 0}};
  s.push_back(make_obj(-9, AxisBox{lo, hi}, 0.5));

  std::ostringstream o1;
  write_instance(o1, s);
  std::istringstream in(o1.str());
  const ObjectSet r = read_instance(in);
  REQUIRE(r.size() == s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    REQUIRE(r[i].id == s[i].id);
    REQUIRE(r[i].weight == s[i].weight);
    REQUIRE(r[i].color == s[i].color);
    REQUIRE(r[i].is_box() == s[i].is_box());
    if (s[i].is_box()) {
      REQUIRE(r[i].box().lo == s[i].box().lo);
      REQUIRE(r[i].box().hi == s[i].box().hi);
    } else {
      REQUIRE(r[i].disk().center == s[i].disk().center);
      REQUIRE(r[i].disk().radius == s[i].disk().radius);
    }
  }
  std::ostringstream o2;
  write_instance(o2, r);
  REQUIRE(o1.str() == o2.str());
}

TEST_CASE("stabbing grid and class rounding basics") {
  StabbingGrid g = StabbingGrid::from_lines(2, {{1.0, 2.0}, {0.5}});
  REQUIRE(g.stabs(make_box(0.5, 0.0, 1.5, 1.0)));
  REQUIRE(!g.stabs(make_box(1.1, 0.0, 1.9, 1.0)));   // misses x lines
  REQUIRE(!g.stabs(make_box(0.5, 0.6, 1.5, 1.0)));   // misses the y line

  ObjectSet s;
  s.push_back(make_obj(1, make_box(0.9, 0.4, 1.1, 0.6), 1.0));
  s.push_back(make_obj(2, make_box(0.8, 0.3, 1.2, 0.7), 5.0));  // same class, heavier
  s.push_back(make_obj(3, make_box(0.9, 0.4, 2.1, 0.6), 1.0));  // spans both x lines
  const ClassIndex ci(s, g);
  REQUIRE(ci.classes().size() == 2);
  bool found_heavy_rep = false;
  for (const auto& cls : ci.classes())
    for (int64_t rep : {cls.rep_id})
      if (rep == 2) found_heavy_rep = true;
  REQUIRE(found_heavy_rep);  // max-weight member represents its class
}
