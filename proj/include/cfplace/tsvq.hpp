#pragma once

#include <utility>
#include <vector>

#include "cfplace/geometry.hpp"
#include "cfplace/vq.hpp"

namespace cfplace {

// Tree-structured VQ: the codebook doubles by splitting every leaf, each
// split refined by a two-codepoint Lloyd run confined to the leaf's users.
// The build is fully deterministic (no RNG anywhere).

struct TsvqNode {
  Point2 codepoint;
  int left = -1;   // -1 on both marks a leaf
  int right = -1;
  bool degenerate = false;  // split of a <2-distinct-point cell
  bool is_leaf() const { return left < 0; }
};

struct TsvqTree {
  std::vector<TsvqNode> nodes;  // nodes[0] is the root
  std::vector<int> leaves;      // leaf node ids, codebook order

  Placement leaf_codepoints() const;

  // Greedy root-to-leaf descent; ties take the left (earlier) child. Returns
  // the leaf's codebook index; eval_count accumulates distance evaluations.
  int encode(Point2 p, long* eval_count = nullptr) const;
};

struct TsvqConfig {
  double perturb_factor = 0.01;  // of per-coordinate std of the cell
  double tol = 1e-6;
  int max_iters = 50;
};

struct TsvqResult {
  TsvqTree tree;
  Placement placement;                        // leaf codepoints
  std::vector<std::vector<int>> leaf_members; // training indices per leaf
  std::vector<double> stage_mse;              // nonincreasing across stages
};

// Children at codepoint +/- perturb_factor * per-coordinate std (1/n
// convention) of the cell's users. A cell with < 2 distinct points yields two
// copies of the codepoint.
std::pair<Point2, Point2> split_codepoint(Point2 codepoint,
                                          const std::vector<Point2>& cell_users,
                                          double perturb_factor = 0.01);

// Grows the tree until num_aps leaves. Power-of-two counts split every leaf
// per stage; otherwise the last stage splits only the leaves with the largest
// within-cell squared error, in decreasing order.
TsvqResult tsvq_run(const std::vector<Point2>& users, int num_aps,
                    const TsvqConfig& config = {});

int tsvq_encode(const TsvqTree& tree, Point2 p, long* eval_count = nullptr);

}  // namespace cfplace
