#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <optional>
#include <vector>

#include "percoflow/graphs.hpp"

using namespace percoflow;
using graphs::Window;
using graphs::VertexId;

namespace {

// Brute-force directed ball {y : d(x, y) < r} for cross-checking.
std::vector<VertexId> slow_ball(const Window& w, VertexId x, std::int64_t r) {
  std::vector<VertexId> out;
  for (VertexId y = 0; y < w.size(); ++y) {
    const auto d = graphs::distance(w, x, y);
    if (d && *d < r) out.push_back(y);
  }
  return out;
}

std::vector<VertexId> sorted(std::vector<VertexId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("window factories validate their arguments") {
  CHECK_THROWS_AS(Window::half_lattice(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(Window::half_lattice(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(Window::full_lattice(1, 5, 0), std::invalid_argument);
  CHECK_THROWS_AS(Window::directed_tree(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(Window::directed_tree(2, -1), std::invalid_argument);
}

TEST_CASE("lattice codec invertibility and ordering") {
  const auto w = Window::half_lattice(2, 3);
  CHECK(w.size() == 9);
  // Axis 0 is most significant.
  CHECK(w.id_of({0, 0}) == 0);
  CHECK(w.id_of({0, 2}) == 2);
  CHECK(w.id_of({1, 0}) == 3);
  CHECK(w.id_of({2, 2}) == 8);
  for (VertexId v = 0; v < w.size(); ++v)
    CHECK(w.id_of(w.coords(v)) == v);
  CHECK_THROWS_AS(w.id_of({3, 0}), std::out_of_range);

  const auto f = Window::full_lattice(1, 5, 5);
  CHECK(f.size() == 11);
  CHECK(f.coords(0)[0] == -5);
  CHECK(f.id_of({0}) == 5);
  CHECK(f.coords(10)[0] == 5);
}

TEST_CASE("tree codec: levels, parents, children, words") {
  const auto t = Window::directed_tree(2, 3);
  CHECK(t.size() == 15);
  CHECK(t.level(0) == 0);
  CHECK(t.level(1) == 1);
  CHECK(t.level(2) == 1);
  CHECK(t.level(3) == 2);
  CHECK(t.level(14) == 3);
  CHECK(t.child(0, 1) == 1);
  CHECK(t.child(0, 2) == 2);
  CHECK(t.child(1, 1) == 3);
  CHECK(t.child(1, 2) == 4);
  CHECK(t.parent(3) == 1);
  CHECK(t.parent(4) == 1);
  CHECK(t.parent(2) == 0);
  for (VertexId v = 1; v < t.size(); ++v) {
    const auto word = t.word(v);
    CHECK(t.id_of_word(word) == v);
    CHECK(static_cast<int>(word.size()) == t.level(v));
  }
  // Ternary tree level sizes.
  const auto t3 = Window::directed_tree(3, 2);
  CHECK(t3.size() == 1 + 3 + 9);
  CHECK(t3.level(12) == 2);
}

TEST_CASE("every in-neighbor has a smaller id") {
  for (const auto& w : {Window::half_lattice(2, 4), Window::full_lattice(2, 2, 2),
                        Window::directed_tree(3, 3)}) {
    for (VertexId v = 0; v < w.size(); ++v)
      w.for_each_in_neighbor(v, [&](VertexId u) { CHECK(u < v); });
  }
}

TEST_CASE("in-neighbors on the lattice are unit steps backwards") {
  const auto w = Window::half_lattice(2, 3);
  std::vector<VertexId> ins;
  w.for_each_in_neighbor(w.id_of({1, 1}), [&](VertexId u) { ins.push_back(u); });
  CHECK(sorted(ins) == std::vector<VertexId>{w.id_of({0, 1}), w.id_of({1, 0})});
  ins.clear();
  w.for_each_in_neighbor(w.id_of({0, 0}), [&](VertexId u) { ins.push_back(u); });
  CHECK(ins.empty());
}

TEST_CASE("directed distance on lattices") {
  const auto w = Window::half_lattice(2, 5);
  const auto a = w.id_of({0, 0});
  const auto b = w.id_of({2, 3});
  REQUIRE(graphs::distance(w, a, b));
  CHECK(*graphs::distance(w, a, b) == 5);
  CHECK_FALSE(graphs::distance(w, b, a));
  CHECK(*graphs::distance(w, a, a) == 0);
  // Mixed direction: (1,2) -> (3,1) decreases coordinate 1.
  CHECK_FALSE(graphs::distance(w, w.id_of({1, 2}), w.id_of({3, 1})));
}

TEST_CASE("directed distance on the tree follows ancestry") {
  const auto t = Window::directed_tree(2, 4);
  const auto v = t.child(t.child(0, 1), 2);  // word (1, 2)
  CHECK(*graphs::distance(t, 0, v) == 2);
  CHECK_FALSE(graphs::distance(t, v, 0));
  CHECK_FALSE(graphs::distance(t, t.child(0, 1), t.child(0, 2)));
  CHECK(*graphs::distance(t, v, t.child(v, 1)) == 1);
}

TEST_CASE("balls are open: radius 0 is empty, radius 1 is the center") {
  for (const auto& w : {Window::half_lattice(2, 4), Window::full_lattice(1, 3, 3),
                        Window::directed_tree(2, 3)}) {
    CHECK(graphs::ball(w, 0, 0).members.empty());
    CHECK(graphs::ball(w, 0, 1).members == std::vector<VertexId>{0});
  }
}

TEST_CASE("small reference balls") {
  const auto plane = Window::half_lattice(2, 4);
  const auto b = graphs::ball(plane, plane.id_of({0, 0}), 2);
  CHECK(sorted(b.members) ==
        sorted({plane.id_of({0, 0}), plane.id_of({1, 0}), plane.id_of({0, 1})}));
  const auto t = Window::directed_tree(2, 3);
  const auto bt = graphs::ball(t, 0, 2);
  CHECK(sorted(bt.members) == std::vector<VertexId>{0, 1, 2});
}

TEST_CASE("balls agree with the brute-force distance definition") {
  for (const auto& w : {Window::half_lattice(2, 4), Window::full_lattice(1, 4, 3),
                        Window::directed_tree(2, 3), Window::half_lattice(3, 3)}) {
    for (VertexId x = 0; x < w.size(); x += 3) {
      for (std::int64_t r = 0; r <= 4; ++r) {
        INFO("x=" << x << " r=" << r);
        CHECK(sorted(graphs::ball(w, x, r).members) == slow_ball(w, x, r));
      }
    }
  }
}

TEST_CASE("coverer enumeration inverts the ball relation") {
  // u covers y at radius r iff d(u, y) < r, so the coverer set of y is
  // exactly { u : d(u, y) finite }, i.e. everything behind y.
  const auto line = Window::half_lattice(1, 8);
  CHECK(graphs::in_coverers(line, 3) == std::vector<VertexId>{0, 1, 2, 3});
  const auto full = Window::full_lattice(1, 5, 5);
  CHECK(graphs::in_coverers(full, full.id_of({0})) ==
        std::vector<VertexId>{0, 1, 2, 3, 4, 5});
  const auto t = Window::directed_tree(2, 3);
  const auto v = t.child(t.child(0, 2), 1);
  CHECK(sorted(graphs::in_coverers(t, v)) ==
        sorted({0, t.child(0, 2), v}));
  // Cross-check on the plane against the distance scan.
  const auto plane = Window::half_lattice(2, 4);
  for (VertexId y = 0; y < plane.size(); ++y) {
    std::vector<VertexId> want;
    for (VertexId u = 0; u < plane.size(); ++u)
      if (graphs::distance(plane, u, y)) want.push_back(u);
    CHECK(sorted(graphs::in_coverers(plane, y)) == want);
  }
}

TEST_CASE("far boundary and core predicates") {
  const auto w = Window::full_lattice(1, 4, 3);  // coords -3..4
  CHECK(w.in_core(w.id_of({0})));
  CHECK(w.in_core(w.id_of({4})));
  CHECK_FALSE(w.in_core(w.id_of({-1})));
  CHECK(w.near_far_boundary(w.id_of({4})));
  CHECK(w.near_far_boundary(w.id_of({3})));
  CHECK_FALSE(w.near_far_boundary(w.id_of({2})));

  const auto t = Window::directed_tree(2, 3);
  CHECK(t.near_far_boundary(14));
  CHECK(t.near_far_boundary(3));
  CHECK_FALSE(t.near_far_boundary(0));
  CHECK(t.in_core(0));

  const auto h = Window::half_lattice(2, 5);
  CHECK(h.near_far_boundary(h.id_of({4, 0})));
  CHECK(h.near_far_boundary(h.id_of({0, 3})));
  CHECK_FALSE(h.near_far_boundary(h.id_of({2, 2})));
  CHECK(h.in_core(h.id_of({0, 0})));
}
