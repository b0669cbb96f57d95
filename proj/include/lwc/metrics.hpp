#ifndef LWC_METRICS_HPP
#define LWC_METRICS_HPP

#include <span>

#include "lwc/common.hpp"

namespace lwc {

/**
 * Normalized mutual information, I(a;b) / sqrt(H(a) H(b)), natural log.
 * Two identical single-cluster labelings score 1; otherwise a labeling with
 * zero entropy scores 0. Throws ParameterError on empty or unequal inputs.
 */
double nmi(std::span<const int> a, std::span<const int> b);

}  // namespace lwc

#endif
