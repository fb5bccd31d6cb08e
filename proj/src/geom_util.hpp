#pragma once

#include <vector>

#include "holink/linkgeom.hpp"

namespace holink::detail {

// Grid samples of strand i whose core (parameters in [-t0, t0]) follows the
// polyline `core` by arclength, blended linearly to the rays outside. The
// grid index of each core point is stored in `key_index` when given.
std::vector<Vec3> strand_from_core(int m, int i, const std::vector<Vec3>& core, const LinkOptions& opt,
                                   std::vector<int>* key_index = nullptr);

double segment_distance(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2);
double point_segment_distance(const Vec3& x, const Vec3& p, const Vec3& q);

}  // namespace holink::detail
