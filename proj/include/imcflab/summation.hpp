#pragma once

#include <span>

namespace imcflab {

/// Pairwise (cascade) summation with a fixed split order, so results are bit-identical
/// between runs regardless of how the terms were produced.
double pairwise_sum(std::span<const double> terms) noexcept;

} // namespace imcflab
