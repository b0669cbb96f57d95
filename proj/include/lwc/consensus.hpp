#ifndef LWC_CONSENSUS_HPP
#define LWC_CONSENSUS_HPP

#include <span>
#include <string_view>

#include "lwc/common.hpp"

namespace lwc {

enum class Method { LWEA, LWGP, EAC };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

/// A consensus clustering: one label in [0, k) per object.
struct ConsensusResult {
    Labels labels;
    int k = 0;
    Method method = Method::LWEA;
    Warnings warnings;
};

/// Relabels so that labels appear in order of their smallest member index.
Labels canonical_labels(std::span<const int> labels);

}  // namespace lwc

#endif
