#pragma once

#include "gridcodec/profiles.hpp"

namespace gridcodec {

/// Active set of the water-filling solution at `ell`, i.e. the region M_I
/// that contains it.
IndexSet identify_region(const LoadProfile& ell, const TaskSpec& task);

/// Jacobian H and offset b of the water-filling map on the region holding
/// `ell`. Inside that region x*(l') = H l' + b exactly. On a region boundary
/// the solver's tie-breaking picks the side, giving a one-sided derivative.
LinearizationPoint linearize_at(const LoadProfile& ell, const TaskSpec& task);

}  // namespace gridcodec
