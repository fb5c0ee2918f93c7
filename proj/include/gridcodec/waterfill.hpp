#pragma once

// Exact solution of the budgeted Lp decision problem
//
//   maximize  -||x + l||_p   s.t.  sum(x) = E,  x >= 0
//
// The optimum is the water-filling point x_j = (mu - l_j)^+ for every p > 1
// and for p = infinity; p only changes the achieved utility.

#include "gridcodec/profiles.hpp"

#include <span>

namespace gridcodec {

/// u(x; l) = -||x + l||_p.
double utility(const Vector& x, const Vector& ell, Exponent p);

/// ||v||_p, with the max-abs norm for p = infinity.
double lp_norm(const Vector& v, Exponent p);

/// First index of maximal |v_j|.
Eigen::Index argmax_abs(const Vector& v);

/// d||v||_p / dv. For p = infinity this is sign(v_k) e_k with k the first
/// index of maximal magnitude. Zero at v = 0.
Vector lp_norm_gradient(const Vector& v, Exponent p);

/// Number of loaded slots for an ascending profile:
/// max{ n : (n-1) l_n - sum_{j<n} l_j < E } over n = 1..P.
int active_count(std::span<const double> ell_sorted, double energy);

/// Water-filling allocation. Ties at the loading boundary favour the lower
/// original index, so the returned active set is deterministic.
Allocation solve_waterfill(const LoadProfile& ell, const TaskSpec& task);

/// Brute-force reference: enumerates every non-empty active subset, solves
/// the equal-level first-order conditions on it and keeps the best feasible
/// candidate. Cost is 2^P - 1 subsets, so P is capped at 12.
Allocation oracle_solve(const LoadProfile& ell, const TaskSpec& task);

inline constexpr int kOracleMaxDim = 12;

}  // namespace gridcodec
