#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace zeno {

/// Half-open run [begin, end) of x2 node indices on one x1 row, together with
/// the compressed index of its first node.
struct Run {
  std::int32_t row;
  std::int32_t begin;
  std::int32_t end;
  std::int64_t offset;

  std::int32_t length() const noexcept { return end - begin; }
};

/// A subset of the N x N node lattice stored as sorted row runs.
///
/// Nodes are numbered row-major in run order, which gives the compressed
/// (inside-node only) indexing used by operators and wavefunctions. Storage
/// is proportional to the number of runs, not the number of nodes, so masks on
/// very fine grids stay cheap until an operator is assembled over them.
class NodeSet {
 public:
  NodeSet() = default;

  /// Every node of an n x n lattice.
  static NodeSet full(int n);

  /// Brute-force construction by testing every node. O(n^2).
  template <class Predicate>
  static NodeSet from_predicate(int n, Predicate&& inside);

  /// Incremental builder; runs must arrive in row-major order and must not overlap.
  class Builder {
   public:
    explicit Builder(int n);
    void add(std::int32_t row, std::int32_t begin, std::int32_t end);
    NodeSet finish() &&;

   private:
    int n_;
    std::vector<Run> runs_;
    std::int64_t count_ = 0;
  };

  int points_per_axis() const noexcept { return n_; }
  std::int64_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  std::span<const Run> runs() const noexcept { return runs_; }
  std::span<const Run> row_runs(int row) const noexcept;

  /// Compressed index of node (i, j), or -1 when it is not in the set.
  std::int64_t index(int i, int j) const noexcept;
  bool contains(int i, int j) const noexcept { return index(i, j) >= 0; }

  /// (row, column) of compressed index k. O(log runs).
  std::pair<int, int> node(std::int64_t k) const;

  /// Calls f(i, j, k) for every node in compressed order.
  template <class F>
  void for_each(F&& f) const {
    for (const Run& r : runs_) {
      std::int64_t k = r.offset;
      for (std::int32_t j = r.begin; j < r.end; ++j, ++k) f(r.row, j, k);
    }
  }

  NodeSet intersect(const NodeSet& other) const;
  NodeSet unite(const NodeSet& other) const;
  /// Image under the exchange (i, j) -> (j, i).
  NodeSet transposed() const;
  /// Chebyshev dilation by `radius` nodes, clipped to the lattice.
  NodeSet dilated(int radius) const;

  bool subset_of(const NodeSet& other) const;
  bool operator==(const NodeSet& other) const;

 private:
  void index_rows();

  int n_ = 0;
  std::vector<Run> runs_;
  std::vector<std::int64_t> row_first_;  // first run of each row, size n_ + 1
  std::int64_t size_ = 0;
};

template <class Predicate>
NodeSet NodeSet::from_predicate(int n, Predicate&& inside) {
  Builder b(n);
  for (int i = 0; i < n; ++i) {
    int j = 0;
    while (j < n) {
      while (j < n && !inside(i, j)) ++j;
      const int start = j;
      while (j < n && inside(i, j)) ++j;
      if (j > start) b.add(i, start, j);
    }
  }
  return std::move(b).finish();
}

}  // namespace zeno
