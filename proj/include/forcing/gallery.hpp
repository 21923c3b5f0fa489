#pragma once

#include <cstddef>

#include "forcing/audit.hpp"
#include "forcing/free_algebra.hpp"
#include "forcing/iteration.hpp"

namespace forcing {

// The tower F0: B_n is the free algebra on x_0, x_1, ... and y_0, ..., y_{n-1},
// with inclusions and existential projections. `audit` holds the commutation
// audit to `depth` and the freshness of each y_n.
struct GalleryTower {
  FreeTower system;
  std::size_t depth;
  AuditResult audit;
};

// Throws ValidationError for depth < 2.
GalleryTower build_F0(std::size_t depth);

FreeElement gallery_x(std::size_t k);
FreeElement gallery_y(std::size_t k);

// a_0 = 1, a_n = y_{n-1}; t_m is the constant thread of ~a_m & a_0 & ... &
// a_{m-1}, support m, for m >= 1. Certifies to coordinate `depth`: the t_m are
// pairwise incompatible, the first n+1 of them join to 1 at coordinate n, the
// thread t(n) = a_0 & ... & a_n is nonzero and incompatible with each t_m,
// and nothing nonzero constant lies below t. Throws ValidationError for
// depth < 3.
AuditResult xlemma1_audit(std::size_t depth);

// a_n = x_0 & ... & x_{n-1}, d_n = y_{n-1}, f(n) the meet of d_k | a_k and
// g(n) of ~d_k | a_k over 1 <= k <= n. Certifies f, g are threads with
// f(n) & g(n) = a_n nonzero, while any common lower bound h has h(0) below
// every a_n and hence is 0. Throws ValidationError for depth < 3.
AuditResult xwedge_audit(std::size_t depth);

}  // namespace forcing
