#include "zeno/node_set.hpp"

#include <algorithm>
#include <string>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

using Interval = std::pair<std::int32_t, std::int32_t>;

// Sorted, non-overlapping, non-adjacent union of the given intervals.
std::vector<Interval> merge(std::vector<Interval> v) {
  std::sort(v.begin(), v.end());
  std::vector<Interval> out;
  for (const auto& iv : v) {
    if (iv.first >= iv.second) continue;
    if (!out.empty() && iv.first <= out.back().second) {
      out.back().second = std::max(out.back().second, iv.second);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

}  // namespace

NodeSet::Builder::Builder(int n) : n_(n) {
  if (n <= 0) throw ValidationError("lattice size must be positive", "points_per_axis");
}

void NodeSet::Builder::add(std::int32_t row, std::int32_t begin, std::int32_t end) {
  if (row < 0 || row >= n_ || begin < 0 || end > n_ || begin >= end) {
    throw ShapeError("run outside lattice: row " + std::to_string(row) + " [" +
                     std::to_string(begin) + ", " + std::to_string(end) + ")");
  }
  if (!runs_.empty()) {
    const Run& last = runs_.back();
    if (row < last.row || (row == last.row && begin < last.end)) {
      throw ShapeError("runs must be added in row-major order without overlap");
    }
    if (row == last.row && begin == last.end) {
      runs_.back().end = end;
      count_ += end - begin;
      return;
    }
  }
  runs_.push_back(Run{row, begin, end, count_});
  count_ += end - begin;
}

NodeSet NodeSet::Builder::finish() && {
  NodeSet s;
  s.n_ = n_;
  s.runs_ = std::move(runs_);
  s.size_ = count_;
  s.index_rows();
  return s;
}

void NodeSet::index_rows() {
  row_first_.assign(static_cast<std::size_t>(n_) + 1, 0);
  std::size_t r = 0;
  for (int i = 0; i <= n_; ++i) {
    while (r < runs_.size() && runs_[r].row < i) ++r;
    row_first_[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(r);
  }
}

NodeSet NodeSet::full(int n) {
  Builder b(n);
  for (int i = 0; i < n; ++i) b.add(i, 0, n);
  return std::move(b).finish();
}

std::span<const Run> NodeSet::row_runs(int row) const noexcept {
  if (row < 0 || row >= n_) return {};
  const auto first = static_cast<std::size_t>(row_first_[static_cast<std::size_t>(row)]);
  const auto last = static_cast<std::size_t>(row_first_[static_cast<std::size_t>(row) + 1]);
  return std::span<const Run>(runs_).subspan(first, last - first);
}

std::int64_t NodeSet::index(int i, int j) const noexcept {
  for (const Run& r : row_runs(i)) {
    if (j < r.begin) return -1;
    if (j < r.end) return r.offset + (j - r.begin);
  }
  return -1;
}

std::pair<int, int> NodeSet::node(std::int64_t k) const {
  if (k < 0 || k >= size_) throw ShapeError("compressed index out of range");
  auto it = std::upper_bound(runs_.begin(), runs_.end(), k,
                             [](std::int64_t v, const Run& r) { return v < r.offset; });
  --it;
  return {it->row, static_cast<int>(it->begin + (k - it->offset))};
}

NodeSet NodeSet::intersect(const NodeSet& other) const {
  if (other.n_ != n_) throw ShapeError("node sets live on different lattices");
  Builder b(n_);
  for (int i = 0; i < n_; ++i) {
    auto a = row_runs(i);
    auto c = other.row_runs(i);
    std::size_t p = 0, q = 0;
    while (p < a.size() && q < c.size()) {
      const auto lo = std::max(a[p].begin, c[q].begin);
      const auto hi = std::min(a[p].end, c[q].end);
      if (lo < hi) b.add(i, lo, hi);
      if (a[p].end < c[q].end) ++p; else ++q;
    }
  }
  return std::move(b).finish();
}

NodeSet NodeSet::unite(const NodeSet& other) const {
  if (other.n_ != n_) throw ShapeError("node sets live on different lattices");
  Builder b(n_);
  for (int i = 0; i < n_; ++i) {
    std::vector<Interval> v;
    for (const Run& r : row_runs(i)) v.emplace_back(r.begin, r.end);
    for (const Run& r : other.row_runs(i)) v.emplace_back(r.begin, r.end);
    for (const auto& iv : merge(std::move(v))) b.add(i, iv.first, iv.second);
  }
  return std::move(b).finish();
}

NodeSet NodeSet::transposed() const {
  std::vector<std::vector<Interval>> rows(static_cast<std::size_t>(n_));
  for (const Run& r : runs_) {
    for (std::int32_t j = r.begin; j < r.end; ++j) {
      auto& row = rows[static_cast<std::size_t>(j)];
      if (!row.empty() && row.back().second == r.row) {
        row.back().second = r.row + 1;
      } else {
        row.emplace_back(r.row, r.row + 1);
      }
    }
  }
  Builder b(n_);
  for (int i = 0; i < n_; ++i) {
    for (const auto& iv : rows[static_cast<std::size_t>(i)]) b.add(i, iv.first, iv.second);
  }
  return std::move(b).finish();
}

NodeSet NodeSet::dilated(int radius) const {
  if (radius < 0) throw ValidationError("dilation radius must be non-negative", "radius");
  if (radius == 0) return *this;
  Builder b(n_);
  for (int i = 0; i < n_; ++i) {
    std::vector<Interval> v;
    const int lo = std::max(0, i - radius);
    const int hi = std::min(n_ - 1, i + radius);
    for (int r = lo; r <= hi; ++r) {
      for (const Run& run : row_runs(r)) {
        v.emplace_back(std::max(0, run.begin - radius), std::min(n_, run.end + radius));
      }
    }
    for (const auto& iv : merge(std::move(v))) b.add(i, iv.first, iv.second);
  }
  return std::move(b).finish();
}

bool NodeSet::subset_of(const NodeSet& other) const {
  if (other.n_ != n_) return false;
  for (const Run& r : runs_) {
    bool covered = false;
    for (const Run& o : other.row_runs(r.row)) {
      if (o.begin <= r.begin && r.end <= o.end) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

bool NodeSet::operator==(const NodeSet& other) const {
  if (n_ != other.n_ || size_ != other.size_ || runs_.size() != other.runs_.size()) return false;
  for (std::size_t r = 0; r < runs_.size(); ++r) {
    if (runs_[r].row != other.runs_[r].row || runs_[r].begin != other.runs_[r].begin ||
        runs_[r].end != other.runs_[r].end) {
      return false;
    }
  }
  return true;
}

}  // namespace zeno
