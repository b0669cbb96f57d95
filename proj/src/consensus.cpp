#include "lwc/consensus.hpp"

#include <string>
#include <unordered_map>

namespace lwc {

std::string_view to_string(Method method) {
    switch (method) {
        case Method::LWEA: return "lwea";
        case Method::LWGP: return "lwgp";
        case Method::EAC: return "eac";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    if (name == "lwea") return Method::LWEA;
    if (name == "lwgp") return Method::LWGP;
    if (name == "eac") return Method::EAC;
    throw ParameterError("unknown method '" + std::string(name) + "'");
}

Labels canonical_labels(std::span<const int> labels) {
    std::unordered_map<int, int> remap;
    Labels out;
    out.reserve(labels.size());
    for (const int l : labels) out.push_back(remap.try_emplace(l, static_cast<int>(remap.size())).first->second);
    return out;
}

}  // namespace lwc
