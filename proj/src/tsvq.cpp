#include "cfplace/tsvq.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace cfplace {

namespace {

Point2 mean_of(const std::vector<Point2>& pts) {
  Point2 s{0.0, 0.0};
  for (const Point2& p : pts) s += p;
  return pts.empty() ? s : (1.0 / pts.size()) * s;
}

double sse_to(const std::vector<Point2>& pts, Point2 c) {
  double s = 0.0;
  for (const Point2& p : pts) s += dist2(p, c);
  return s;
}

std::size_t distinct_count(const std::vector<Point2>& pts) {
  std::set<std::pair<double, double>> seen;
  for (const Point2& p : pts) seen.insert({p.x, p.y});
  return seen.size();
}

}  // namespace

std::pair<Point2, Point2> split_codepoint(Point2 codepoint,
                                          const std::vector<Point2>& cell_users,
                                          double perturb_factor) {
  if (distinct_count(cell_users) < 2) return {codepoint, codepoint};
  const Point2 mu = mean_of(cell_users);
  double vx = 0.0, vy = 0.0;
  for (const Point2& p : cell_users) {
    vx += (p.x - mu.x) * (p.x - mu.x);
    vy += (p.y - mu.y) * (p.y - mu.y);
  }
  const double n = static_cast<double>(cell_users.size());
  const Point2 step{perturb_factor * std::sqrt(vx / n),
                    perturb_factor * std::sqrt(vy / n)};
  return {codepoint + step, codepoint - step};
}

Placement TsvqTree::leaf_codepoints() const {
  Placement out;
  out.reserve(leaves.size());
  for (int id : leaves) out.push_back(nodes[id].codepoint);
  return out;
}

int TsvqTree::encode(Point2 p, long* eval_count) const {
  int id = 0;
  while (!nodes[id].is_leaf()) {
    const double dl = dist2(p, nodes[nodes[id].left].codepoint);
    const double dr = dist2(p, nodes[nodes[id].right].codepoint);
    if (eval_count) *eval_count += 2;
    id = dr < dl ? nodes[id].right : nodes[id].left;  // tie: left child
  }
  const auto it = std::find(leaves.begin(), leaves.end(), id);
  return static_cast<int>(it - leaves.begin());
}

int tsvq_encode(const TsvqTree& tree, Point2 p, long* eval_count) {
  return tree.encode(p, eval_count);
}

TsvqResult tsvq_run(const std::vector<Point2>& users, int num_aps,
                    const TsvqConfig& config) {
  if (num_aps < 1) throw std::invalid_argument("tsvq_run: num_aps must be >= 1");
  if (users.empty()) throw std::invalid_argument("tsvq_run: no training users");

  TsvqResult res;
  TsvqNode root;
  root.codepoint = mean_of(users);
  res.tree.nodes.push_back(root);
  res.tree.leaves = {0};
  std::vector<int> all(users.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  res.leaf_members = {all};
  std::vector<double> leaf_sse = {sse_to(users, root.codepoint)};

  LloydConfig inner;
  inner.tol = config.tol;
  inner.max_iters = config.max_iters;
  inner.restarts = 1;

  const auto stage_record = [&]() {
    double total = 0.0;
    for (double s : leaf_sse) total += s;
    res.stage_mse.push_back(total / static_cast<double>(users.size()));
  };
  stage_record();  // stage 0: the root alone

  while (res.tree.leaves.size() < static_cast<std::size_t>(num_aps)) {
    const std::size_t want =
        std::min(res.tree.leaves.size(),
                 static_cast<std::size_t>(num_aps) - res.tree.leaves.size());
    // Pick the leaves to split this stage: all of them on a doubling stage,
    // otherwise the `want` largest by within-cell SSE (earlier leaf wins ties).
    std::vector<std::size_t> order(res.tree.leaves.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (want < res.tree.leaves.size())
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return leaf_sse[a] > leaf_sse[b];
      });
    std::vector<bool> chosen(res.tree.leaves.size(), false);
    for (std::size_t i = 0; i < want; ++i) chosen[order[i]] = true;

    std::vector<int> new_leaves;
    std::vector<std::vector<int>> new_members;
    std::vector<double> new_sse;
    for (std::size_t li = 0; li < res.tree.leaves.size(); ++li) {
      if (!chosen[li]) {
        new_leaves.push_back(res.tree.leaves[li]);
        new_members.push_back(std::move(res.leaf_members[li]));
        new_sse.push_back(leaf_sse[li]);
        continue;
      }
      const int node_id = res.tree.leaves[li];
      std::vector<int>& members = res.leaf_members[li];
      std::vector<Point2> pts;
      pts.reserve(members.size());
      for (int i : members) pts.push_back(users[i]);

      const Point2 parent_cp = res.tree.nodes[node_id].codepoint;
      auto [plus, minus] = split_codepoint(parent_cp, pts, config.perturb_factor);
      TsvqNode a, b;
      a.codepoint = plus;
      b.codepoint = minus;
      std::vector<int> ma, mb;
      double sa = 0.0, sb = 0.0;
      if (distinct_count(pts) < 2) {
        a.degenerate = b.degenerate = true;
        res.tree.nodes[node_id].degenerate = true;
        ma = members;  // everything to the left child
      } else {
        const LloydResult two = lloyd_run_single(pts, {plus, minus}, inner);
        a.codepoint = two.placement[0];
        b.codepoint = two.placement[1];
        for (std::size_t i = 0; i < pts.size(); ++i) {
          if (two.assignments[i] == 0) {
            ma.push_back(members[i]);
            sa += dist2(pts[i], a.codepoint);
          } else {
            mb.push_back(members[i]);
            sb += dist2(pts[i], b.codepoint);
          }
        }
      }
      const int ida = static_cast<int>(res.tree.nodes.size());
      res.tree.nodes.push_back(a);
      const int idb = static_cast<int>(res.tree.nodes.size());
      res.tree.nodes.push_back(b);
      res.tree.nodes[node_id].left = ida;
      res.tree.nodes[node_id].right = idb;
      new_leaves.push_back(ida);
      new_members.push_back(std::move(ma));
      new_sse.push_back(sa);
      new_leaves.push_back(idb);
      new_members.push_back(std::move(mb));
      new_sse.push_back(sb);
    }
    res.tree.leaves = std::move(new_leaves);
    res.leaf_members = std::move(new_members);
    leaf_sse = std::move(new_sse);
    stage_record();
  }
  res.placement = res.tree.leaf_codepoints();
  return res;
}

}  // namespace cfplace
