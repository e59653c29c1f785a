#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "ramsey_wb/coloring.hpp"

namespace ramsey_wb {

struct PartitionSearchOptions {
  // Maximum number of classes; nullopt means unbounded.
  std::optional<std::size_t> palette;
  // Cells in branching order; empty means 0, 1, 2, ...
  std::vector<std::size_t> order;
  std::size_t jobs = 1;
};

struct PartitionSearchResult {
  // Complete partition avoiding every forbidden pattern, as restricted-growth
  // colors indexed by cell; nullopt when the search space was exhausted.
  std::optional<Coloring> witness;
  // Partial assignments visited. Only meaningful when witness is empty: the
  // count is then independent of the job count.
  std::uint64_t nodes = 0;
};

// Backtracking over set partitions of a finite cell set. Each cell either
// joins an existing class or opens the next one, so color permutations are
// never revisited. A hyperedge is tested by `forbidden(edge_index, colors)`
// as soon as its last cell (in branching order) is assigned; a true result
// prunes the branch.
template <class Forbidden>
class PartitionSearch {
 public:
  PartitionSearch(std::size_t num_cells, std::vector<std::vector<std::size_t>> edges, Forbidden forbidden,
                  PartitionSearchOptions options)
      : n_(num_cells), edges_(std::move(edges)), forbidden_(std::move(forbidden)), opt_(std::move(options)) {
    if (opt_.order.empty()) {
      opt_.order.resize(n_);
      std::iota(opt_.order.begin(), opt_.order.end(), std::size_t{0});
    }
    if (opt_.order.size() != n_) throw InternalError("branching order must list every cell once");
    std::vector<std::size_t> pos(n_);
    for (std::size_t p = 0; p < n_; ++p) pos[opt_.order[p]] = p;
    closing_.assign(n_, {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (edges_[e].empty()) continue;
      std::size_t last = 0;
      for (std::size_t c : edges_[e]) last = std::max(last, pos.at(c));
      closing_[last].push_back(e);
    }
  }

  PartitionSearchResult run() {
    PartitionSearchResult result;
    if (n_ == 0) {
      result.witness = Coloring{};
      return result;
    }
    if (opt_.jobs <= 1) {
      Worker w(*this);
      bool found = w.descend(0, 0);
      result.nodes = w.nodes;
      if (found) result.witness = Coloring(w.colors);
      return result;
    }
    return run_parallel();
  }

 private:
  struct Worker {
    explicit Worker(const PartitionSearch& s) : s(s), colors(s.n_, -1), scratch() {}

    bool closes_cleanly(std::size_t depth) {
      for (std::size_t e : s.closing_[depth]) {
        const auto& cells = s.edges_[e];
        scratch.resize(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) scratch[i] = colors[cells[i]];
        if (s.forbidden_(e, std::span<const Color>(scratch))) return false;
      }
      return true;
    }

    // `used` = number of classes opened so far.
    bool descend(std::size_t depth, std::size_t used) {
      if (depth == s.n_) return true;
      std::size_t cell = s.opt_.order[depth];
      std::size_t limit = used + 1;
      if (s.opt_.palette) limit = std::min(limit, *s.opt_.palette);
      for (std::size_t c = 0; c < limit; ++c) {
        ++nodes;
        colors[cell] = static_cast<Color>(c);
        if (closes_cleanly(depth) && descend(depth + 1, std::max(used, c + 1))) return true;
      }
      colors[cell] = -1;
      return false;
    }

    const PartitionSearch& s;
    std::vector<Color> colors;
    std::vector<Color> scratch;
    std::uint64_t nodes = 0;
  };

  struct Prefix {
    std::vector<Color> colors;
    std::size_t depth;
    std::size_t used;
  };

  // Expands the tree breadth-first (in DFS order) until there are enough
  // independent subtrees to share among the workers.
  std::vector<Prefix> split(std::uint64_t& nodes) const {
    std::vector<Prefix> frontier{{std::vector<Color>(n_, -1), 0, 0}};
    const std::size_t want = 8 * opt_.jobs;
    while (frontier.size() < want) {
      std::vector<Prefix> next;
      bool grew = false;
      for (auto& p : frontier) {
        if (p.depth == n_) {
          next.push_back(p);
          continue;
        }
        grew = true;
        Worker w(*this);
        w.colors = p.colors;
        std::size_t cell = opt_.order[p.depth];
        std::size_t limit = p.used + 1;
        if (opt_.palette) limit = std::min(limit, *opt_.palette);
        for (std::size_t c = 0; c < limit; ++c) {
          ++nodes;
          w.colors[cell] = static_cast<Color>(c);
          if (w.closes_cleanly(p.depth)) next.push_back({w.colors, p.depth + 1, std::max(p.used, c + 1)});
        }
      }
      frontier = std::move(next);
      if (!grew || frontier.empty()) break;
    }
    return frontier;
  }

  PartitionSearchResult run_parallel() {
    PartitionSearchResult result;
    std::uint64_t split_nodes = 0;
    auto prefixes = split(split_nodes);
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::vector<Color> best_colors;
    std::atomic<std::uint64_t> nodes{split_nodes};

    auto work = [&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= prefixes.size()) return;
        {
          std::lock_guard lock(mu);
          if (i > best) return;
        }
        Worker w(*this);
        w.colors = prefixes[i].colors;
        bool found = w.descend(prefixes[i].depth, prefixes[i].used);
        nodes += w.nodes;
        if (found) {
          std::lock_guard lock(mu);
          if (i < best) {
            best = i;
            best_colors = w.colors;
          }
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < opt_.jobs; ++j) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    result.nodes = nodes.load();
    if (best != std::numeric_limits<std::size_t>::max()) result.witness = Coloring(best_colors);
    return result;
  }

  std::size_t n_;
  std::vector<std::vector<std::size_t>> edges_;
  Forbidden forbidden_;
  PartitionSearchOptions opt_;
  std::vector<std::vector<std::size_t>> closing_;
};

template <class Forbidden>
PartitionSearchResult search_partitions(std::size_t num_cells, std::vector<std::vector<std::size_t>> edges,
                                        Forbidden forbidden, PartitionSearchOptions options = {}) {
  return PartitionSearch<Forbidden>(num_cells, std::move(edges), std::move(forbidden), std::move(options)).run();
}

}  // namespace ramsey_wb
