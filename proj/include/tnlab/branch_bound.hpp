// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tnlab/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

namespace tnlab {

struct Budget {
  std::size_t max_regions = 200000;
  int max_depth = 64;
  double wall_seconds = 600.0;
  unsigned workers = 0;  // 0: resolve_workers()
};

struct SearchStats {
  std::size_t processed = 0;
  std::size_t discharged = 0;
  std::size_t covered = 0;
  std::size_t open = 0;
  int max_depth = 0;
  std::size_t refute_attempts = 0;
  bool budget_exhausted = false;
  bool wall_limited = false;
  double wall_seconds = 0.0;
};

/// Per-region result of the (parallel) evaluation step.
struct RegionEval {
  double lower = 0.0;     // rigorous lower bound of the objective over the region
  double estimate = std::numeric_limits<double>::infinity();  // objective at a sample point
  bool covered = false;   // settled by an external argument; excluded from the bound
};

template <class Region, class Witness>
struct SearchResult {
  bool refuted = false;
  bool complete = false;  // every region discharged or covered
  double bound = std::numeric_limits<double>::infinity();  // min lower over uncovered leaves
  double upper = std::numeric_limits<double>::infinity();  // best sampled objective
  std::vector<Witness> witnesses;
  std::optional<Region> worst;
  double worst_lower = std::numeric_limits<double>::infinity();
  SearchStats stats;
};

/// Deterministic best-first branch and bound.
///
/// Problem must provide
///   RegionEval evaluate(const Region&) const;            // thread safe
///   std::vector<Region> split(const Region&) const;
///   std::optional<Witness> refute(const Region&, const RegionEval&);
/// The frontier is processed in batches of fixed size; children are evaluated
/// in parallel into indexed slots and merged sequentially in creation order,
/// so the run is a function of the inputs and the budget only (the wall clock
/// limit excepted).
template <class Region, class Witness, class Problem>
SearchResult<Region, Witness> branch_and_bound(Problem& prob, std::vector<Region> roots, const Budget& budget,
                                               double rel_gap, bool collect_all = false,
                                               std::size_t batch = 32) {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  SearchResult<Region, Witness> res;
  WorkerPool pool(resolve_workers(budget.workers));

  struct Node {
    Region region;
    RegionEval eval;
    std::uint64_t id;
    int depth;
  };
  auto worse = [](const Node* a, const Node* b) {
    if (a->eval.lower != b->eval.lower) return a->eval.lower > b->eval.lower;
    if (a->eval.estimate != b->eval.estimate) return a->eval.estimate > b->eval.estimate;
    return a->id > b->id;
  };
  std::vector<std::unique_ptr<Node>> store;
  std::priority_queue<Node*, std::vector<Node*>, decltype(worse)> frontier(worse);
  std::vector<Node*> stuck;  // depth limit reached
  double discharged_min = std::numeric_limits<double>::infinity();
  double trigger = std::numeric_limits<double>::infinity();
  std::uint64_t next_id = 0;

  auto evaluate_all = [&](std::vector<Node>& nodes) {
    pool.parallel_for(nodes.size(), [&](std::size_t i) { nodes[i].eval = prob.evaluate(nodes[i].region); });
  };

  // returns true when the search must stop (refuted, not collecting)
  auto merge = [&](std::vector<Node>& nodes, const std::vector<double>& parent_lower) -> bool {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Node& nd = nodes[i];
      nd.eval.lower = std::max(nd.eval.lower, parent_lower[i]);
      res.stats.max_depth = std::max(res.stats.max_depth, nd.depth);
      res.upper = std::min(res.upper, nd.eval.estimate);
      if (nd.eval.covered) {
        ++res.stats.covered;
        continue;
      }
      if (nd.eval.estimate < trigger) {
        ++res.stats.refute_attempts;
        trigger = 0.5 * nd.eval.estimate;
        if (auto w = prob.refute(nd.region, nd.eval)) {
          res.witnesses.push_back(std::move(*w));
          if (!collect_all) {
            res.refuted = true;
            return true;
          }
          trigger = std::numeric_limits<double>::infinity();
        }
      }
      if (nd.eval.lower > 0.0 && nd.eval.lower >= (1.0 - rel_gap) * res.upper) {
        ++res.stats.discharged;
        discharged_min = std::min(discharged_min, nd.eval.lower);
        continue;
      }
      store.push_back(std::make_unique<Node>(std::move(nd)));
      Node* p = store.back().get();
      if (p->depth >= budget.max_depth) {
        stuck.push_back(p);
      } else {
        frontier.push(p);
      }
    }
    return false;
  };

  std::vector<Node> init;
  for (auto& r : roots) init.push_back(Node{std::move(r), {}, next_id++, 0});
  evaluate_all(init);
  bool stop = merge(init, std::vector<double>(init.size(), 0.0));

  while (!stop && !frontier.empty()) {
    double elapsed = std::chrono::duration<double>(clock::now() - t0).count();
    if (elapsed > budget.wall_seconds) {
      res.stats.budget_exhausted = true;
      res.stats.wall_limited = true;
      break;
    }
    if (res.stats.processed >= budget.max_regions) {
      res.stats.budget_exhausted = true;
      break;
    }
    std::vector<Node> children;
    std::vector<double> parent_lower;
    std::size_t take = std::min(batch, budget.max_regions - res.stats.processed);
    for (std::size_t b = 0; b < take && !frontier.empty(); ++b) {
      Node* p = frontier.top();
      frontier.pop();
      ++res.stats.processed;
      for (auto& c : prob.split(p->region)) {
        children.push_back(Node{std::move(c), {}, next_id++, p->depth + 1});
        parent_lower.push_back(p->eval.lower);
      }
    }
    evaluate_all(children);
    stop = merge(children, parent_lower);
  }

  // drop processed parents from the open set: only frontier and stuck remain open
  double open_min = std::numeric_limits<double>::infinity();
  const Node* worst = nullptr;
  auto consider = [&](const Node* p) {
    if (!worst || p->eval.lower < open_min || (p->eval.lower == open_min && p->id < worst->id)) {
      open_min = p->eval.lower;
      worst = p;
    }
  };
  std::size_t open = stuck.size();
  for (const Node* p : stuck) consider(p);
  while (!frontier.empty()) {
    consider(frontier.top());
    frontier.pop();
    ++open;
  }
  if (!stuck.empty()) res.stats.budget_exhausted = true;
  res.stats.open = open;
  res.complete = open == 0 && !res.refuted;
  res.bound = std::min(discharged_min, open_min);
  if (worst) {
    res.worst = worst->region;
    res.worst_lower = worst->eval.lower;
  }
  res.stats.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  return res;
}

}  // namespace tnlab
