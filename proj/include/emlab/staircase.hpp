#pragma once

// Finite-stage approximation of the inclusion Du in O(2) with exact affine
// boundary data. Each stage is built from scratch: the two singular
// directions of M carry sawtooth corrections whose total slopes sit near
// +-1, clipped against a multiple of the boundary distance so u = Mx holds
// exactly on the boundary. The clipped band is where the gradient stays far
// from O(2); its area shrinks with the tooth width per stage.

#include <vector>

#include "emlab/inclusions.hpp"

namespace emlab {

inline constexpr int kStageLimit = 12;
inline constexpr double kEpsIncl = 0.1;  // dist(Du, O(2)) threshold for "bad"

struct RefinementTrace {
  int stage = 0;
  double bad_measure = 0.0;    // area fraction with dist(Du, O(2)) > kEpsIncl
  double linf_defect = 0.0;    // max over cells of dist(Du, O(2))
  double boundary_error = 0.0; // max |u - Mx| over boundary vertices
};

struct StaircaseResult {
  PiecewiseAffineMap map;               // the final-stage map
  std::vector<RefinementTrace> trace;   // rows for stages 0..k
};

// Requires hull_membership(m) = interior (orthogonal m is the trivial case).
// Throws OutsideHull, StageLimit (stages > kStageLimit).
StaircaseResult staircase_refine(const Matrix& m, int stages,
                                 Rect domain = Rect{0.0, 0.0, 1.0, 1.0});

}  // namespace emlab
