#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

// Directed vertex-transitive windows and their quasimetric.
//
// Three families are supported:
//   HalfLattice   N_0^n, window [0, side-1]^n, edges x -> x + e_j
//   FullLattice   Z^n,   window [-margin, side]^n, same edges
//   DirectedTree  n-ary tree up to a depth bound, edges parent -> child
//
// d(x, y) is the directed path length: on lattices sum(y - x) when x <= y
// componentwise (infinity otherwise), on trees depth difference when x is an
// ancestor-or-self of y. Balls follow the covering convention and are open:
// ball(x, r) = {y : d(x, y) < r}, so radius 0 is empty and radius 1 is {x}.
//
// Vertex ids: lattices use row-major box indices (axis 0 most significant),
// trees use breadth-first level order. Both make every edge go from a
// smaller id to a larger one, so a single ascending sweep visits parents
// before children.

namespace percoflow::graphs {

using VertexId = std::uint64_t;

enum class Family { HalfLattice, FullLattice, DirectedTree };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::HalfLattice: return "half_lattice";
    case Family::FullLattice: return "full_lattice";
    case Family::DirectedTree: return "tree";
  }
  return "?";
}

class Window {
 public:
  static Window half_lattice(int dim, std::int64_t side) {
    if (dim < 1) throw std::invalid_argument("half_lattice: need dim >= 1");
    if (side < 1) throw std::invalid_argument("half_lattice: need side >= 1");
    Window w;
    w.family_ = Family::HalfLattice;
    w.dim_ = dim;
    w.low_ = 0;
    w.high_ = side - 1;
    w.init_lattice();
    return w;
  }

  static Window full_lattice(int dim, std::int64_t side, std::int64_t margin) {
    if (dim < 1) throw std::invalid_argument("full_lattice: need dim >= 1");
    if (side < 0 || margin < 1)
      throw std::invalid_argument("full_lattice: need side >= 0, margin >= 1");
    Window w;
    w.family_ = Family::FullLattice;
    w.dim_ = dim;
    w.low_ = -margin;
    w.high_ = side;
    w.init_lattice();
    return w;
  }

  static Window directed_tree(int arity, int depth) {
    if (arity < 2) throw std::invalid_argument("directed_tree: need arity >= 2");
    if (depth < 0) throw std::invalid_argument("directed_tree: need depth >= 0");
    Window w;
    w.family_ = Family::DirectedTree;
    w.arity_ = arity;
    w.depth_ = depth;
    w.offsets_.assign(static_cast<std::size_t>(depth) + 2, 0);
    std::uint64_t level_count = 1;
    for (int l = 0; l <= depth; ++l) {
      w.offsets_[static_cast<std::size_t>(l) + 1] =
          w.offsets_[static_cast<std::size_t>(l)] + level_count;
      if (level_count > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(arity))
        throw std::invalid_argument("directed_tree: window too large");
      level_count *= static_cast<std::uint64_t>(arity);
    }
    w.count_ = w.offsets_.back();
    return w;
  }

  Family family() const noexcept { return family_; }
  std::uint64_t size() const noexcept { return count_; }

  // Lattice parameters.
  int dim() const noexcept { return dim_; }
  std::int64_t low() const noexcept { return low_; }
  std::int64_t high() const noexcept { return high_; }

  // Tree parameters.
  int arity() const noexcept { return arity_; }
  int depth() const noexcept { return depth_; }

  bool is_lattice() const noexcept { return family_ != Family::DirectedTree; }

  // ---- lattice codec ----

  std::vector<std::int64_t> coords(VertexId v) const {
    check_lattice();
    check_id(v);
    std::vector<std::int64_t> c(static_cast<std::size_t>(dim_));
    for (int j = 0; j < dim_; ++j) {
      c[static_cast<std::size_t>(j)] =
          low_ + static_cast<std::int64_t>((v / strides_[static_cast<std::size_t>(j)]) %
                                           static_cast<std::uint64_t>(extent_));
    }
    return c;
  }

  VertexId id_of(const std::vector<std::int64_t>& c) const {
    check_lattice();
    if (static_cast<int>(c.size()) != dim_)
      throw std::invalid_argument("id_of: wrong coordinate count");
    VertexId v = 0;
    for (int j = 0; j < dim_; ++j) {
      const std::int64_t x = c[static_cast<std::size_t>(j)];
      if (x < low_ || x > high_)
        throw std::out_of_range("id_of: coordinate outside window");
      v += static_cast<std::uint64_t>(x - low_) * strides_[static_cast<std::size_t>(j)];
    }
    return v;
  }

  // ---- tree codec ----

  int level(VertexId v) const {
    check_tree();
    check_id(v);
    int l = 0;
    while (offsets_[static_cast<std::size_t>(l) + 1] <= v) ++l;
    return l;
  }

  VertexId parent(VertexId v) const {
    check_tree();
    if (v == 0) throw std::invalid_argument("parent: root has none");
    const int l = level(v);
    const std::uint64_t pos = v - offsets_[static_cast<std::size_t>(l)];
    return offsets_[static_cast<std::size_t>(l) - 1] +
           pos / static_cast<std::uint64_t>(arity_);
  }

  // j-th child, j in {1, ..., arity}.
  VertexId child(VertexId v, int j) const {
    check_tree();
    const int l = level(v);
    if (l >= depth_) throw std::out_of_range("child: at the depth bound");
    if (j < 1 || j > arity_) throw std::invalid_argument("child: bad symbol");
    const std::uint64_t pos = v - offsets_[static_cast<std::size_t>(l)];
    return offsets_[static_cast<std::size_t>(l) + 1] +
           pos * static_cast<std::uint64_t>(arity_) + static_cast<std::uint64_t>(j - 1);
  }

  // Path word from the root, symbols in {1, ..., arity}; empty for the root.
  std::vector<int> word(VertexId v) const {
    check_tree();
    const int l = level(v);
    std::vector<int> w(static_cast<std::size_t>(l));
    std::uint64_t pos = v - offsets_[static_cast<std::size_t>(l)];
    for (int i = l - 1; i >= 0; --i) {
      w[static_cast<std::size_t>(i)] =
          static_cast<int>(pos % static_cast<std::uint64_t>(arity_)) + 1;
      pos /= static_cast<std::uint64_t>(arity_);
    }
    return w;
  }

  VertexId id_of_word(const std::vector<int>& w) const {
    check_tree();
    if (static_cast<int>(w.size()) > depth_)
      throw std::out_of_range("id_of_word: word deeper than the window");
    VertexId v = 0;
    for (int s : w) v = child(v, s);
    return v;
  }

  // ---- structure ----

  // Calls f on every in-neighbour of v (all have smaller ids).
  template <class F>
  void for_each_in_neighbor(VertexId v, F&& f) const {
    if (family_ == Family::DirectedTree) {
      if (v != 0) f(parent(v));
      return;
    }
    for (int j = 0; j < dim_; ++j) {
      const std::uint64_t stride = strides_[static_cast<std::size_t>(j)];
      if ((v / stride) % static_cast<std::uint64_t>(extent_) > 0) f(v - stride);
    }
  }

  // Whether v lies within distance 1 of the far (outgoing) boundary; used to
  // flag right-censored trials.
  bool near_far_boundary(VertexId v) const {
    if (family_ == Family::DirectedTree) return level(v) >= depth_ - 1;
    for (int j = 0; j < dim_; ++j) {
      const auto offset = static_cast<std::int64_t>(
          (v / strides_[static_cast<std::size_t>(j)]) %
          static_cast<std::uint64_t>(extent_));
      if (low_ + offset >= high_ - 1) return true;
    }
    return false;
  }

  // FullLattice splits into a margin (coverage suppliers) and a core where
  // statistics are read off; the other families are all core.
  bool in_core(VertexId v) const {
    if (family_ != Family::FullLattice) {
      check_id(v);
      return true;
    }
    for (int j = 0; j < dim_; ++j) {
      const auto offset = static_cast<std::int64_t>(
          (v / strides_[static_cast<std::size_t>(j)]) %
          static_cast<std::uint64_t>(extent_));
      if (low_ + offset < 0) return false;
    }
    return true;
  }

 private:
  void init_lattice() {
    extent_ = high_ - low_ + 1;
    strides_.assign(static_cast<std::size_t>(dim_), 1);
    std::uint64_t count = 1;
    for (int j = dim_ - 1; j >= 0; --j) {
      strides_[static_cast<std::size_t>(j)] = count;
      if (count > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(extent_))
        throw std::invalid_argument("lattice window too large");
      count *= static_cast<std::uint64_t>(extent_);
    }
    count_ = count;
  }

  void check_lattice() const {
    if (family_ == Family::DirectedTree)
      throw std::logic_error("lattice query on a tree window");
  }
  void check_tree() const {
    if (family_ != Family::DirectedTree)
      throw std::logic_error("tree query on a lattice window");
  }
  void check_id(VertexId v) const {
    if (v >= count_) throw std::out_of_range("vertex id outside window");
  }

  Family family_ = Family::HalfLattice;
  // lattice
  int dim_ = 0;
  std::int64_t low_ = 0;
  std::int64_t high_ = 0;
  std::int64_t extent_ = 0;
  std::vector<std::uint64_t> strides_;
  // tree
  int arity_ = 0;
  int depth_ = 0;
  std::vector<std::uint64_t> offsets_;  // first id of each level

  std::uint64_t count_ = 0;
};

// Directed distance; nullopt encodes infinity.
inline std::optional<std::int64_t> distance(const Window& w, VertexId from,
                                            VertexId to) {
  if (w.family() == Family::DirectedTree) {
    const int lf = w.level(from);
    const int lt = w.level(to);
    if (lt < lf) return std::nullopt;
    VertexId up = to;
    for (int i = 0; i < lt - lf; ++i) up = w.parent(up);
    if (up != from) return std::nullopt;
    return static_cast<std::int64_t>(lt - lf);
  }
  const auto a = w.coords(from);
  const auto b = w.coords(to);
  std::int64_t d = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (b[j] < a[j]) return std::nullopt;
    d += b[j] - a[j];
  }
  return d;
}

struct Ball {
  VertexId center;
  std::int64_t radius;
  std::vector<VertexId> members;  // {y : d(center, y) < radius}, ascending
};

namespace detail {

inline void collect_simplex(const Window& w, std::vector<std::int64_t>& c,
                            int axis, std::int64_t budget,
                            std::vector<VertexId>& out) {
  if (axis == w.dim()) {
    out.push_back(w.id_of(c));
    return;
  }
  const std::int64_t base = c[static_cast<std::size_t>(axis)];
  const std::int64_t room = w.high() - base < budget ? w.high() - base : budget;
  for (std::int64_t step = 0; step <= room; ++step) {
    c[static_cast<std::size_t>(axis)] = base + step;
    collect_simplex(w, c, axis + 1, budget - step, out);
  }
  c[static_cast<std::size_t>(axis)] = base;
}

}  // namespace detail

// Open ball of the covering convention, clipped to the window.
inline Ball ball(const Window& w, VertexId center, std::int64_t radius) {
  if (radius < 0) throw std::invalid_argument("ball: negative radius");
  Ball b{center, radius, {}};
  if (radius == 0) return b;
  if (w.family() == Family::DirectedTree) {
    // All descendants fewer than `radius` levels below, including center.
    std::vector<VertexId> frontier{center};
    std::int64_t dist = 0;
    while (!frontier.empty() && dist < radius) {
      b.members.insert(b.members.end(), frontier.begin(), frontier.end());
      std::vector<VertexId> next;
      if (dist + 1 < radius) {
        for (VertexId v : frontier) {
          if (w.level(v) >= w.depth()) continue;
          for (int j = 1; j <= w.arity(); ++j) next.push_back(w.child(v, j));
        }
      }
      frontier = std::move(next);
      ++dist;
    }
    std::sort(b.members.begin(), b.members.end());
    return b;
  }
  auto c = w.coords(center);
  detail::collect_simplex(w, c, 0, radius - 1, b.members);
  std::sort(b.members.begin(), b.members.end());
  return b;
}

// Every window vertex that can possibly cover y (finite distance to it).
// On HalfLattice and DirectedTree this set is complete, so coverage decided
// from it is exact; on FullLattice vertices outside the window are missing
// and percolation::z_truncation_bound quantifies the gap.
inline std::vector<VertexId> in_coverers(const Window& w, VertexId y) {
  std::vector<VertexId> out;
  if (w.family() == Family::DirectedTree) {
    VertexId v = y;
    out.push_back(v);
    while (v != 0) {
      v = w.parent(v);
      out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  // The box [low, y], walked as an odometer. Intended for diagnostics and
  // oracle tests on small windows; the covering sweep never materializes it.
  const auto top = w.coords(y);
  std::vector<std::int64_t> c(top.size(), w.low());
  while (true) {
    out.push_back(w.id_of(c));
    std::size_t j = c.size();
    while (j > 0) {
      --j;
      if (c[j] < top[j]) {
        ++c[j];
        for (std::size_t k = j + 1; k < c.size(); ++k) c[k] = w.low();
        break;
      }
      if (j == 0) {
        std::sort(out.begin(), out.end());
        return out;
      }
    }
  }
}

}  // namespace percoflow::graphs
