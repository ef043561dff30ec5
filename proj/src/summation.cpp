#include "imcflab/summation.hpp"

namespace imcflab {

double pairwise_sum(std::span<const double> terms) noexcept
{
    constexpr std::size_t block = 32;
    if (terms.size() <= block) {
        double s = 0.0;
        for (double t : terms)
            s += t;
        return s;
    }
    const std::size_t half = terms.size() / 2;
    return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

} // namespace imcflab
