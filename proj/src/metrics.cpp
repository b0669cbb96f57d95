#include "lwc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <utility>

#include "lwc/consensus.hpp"

namespace lwc {

double nmi(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw ParameterError("nmi: label vectors differ in length");
    if (a.empty()) throw ParameterError("nmi: empty label vectors");

    const Labels ca = canonical_labels(a);
    const Labels cb = canonical_labels(b);
    const double n = static_cast<double>(a.size());
    const int ka = *std::max_element(ca.begin(), ca.end()) + 1;
    const int kb = *std::max_element(cb.begin(), cb.end()) + 1;

    std::vector<double> row(static_cast<std::size_t>(ka), 0.0);
    std::vector<double> col(static_cast<std::size_t>(kb), 0.0);
    std::map<std::pair<int, int>, double> joint;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        row[static_cast<std::size_t>(ca[i])] += 1;
        col[static_cast<std::size_t>(cb[i])] += 1;
        joint[{ca[i], cb[i]}] += 1;
    }
    if (ka == 1 && kb == 1) return 1.0;
    if (ka == 1 || kb == 1) return 0.0;

    auto entropy = [n](const std::vector<double>& counts) {
        double h = 0;
        for (const double c : counts) h -= (c / n) * std::log(c / n);
        return h;
    };
    double mi = 0;
    for (const auto& [cell, count] : joint) {
        mi += (count / n) * std::log(count * n / (row[static_cast<std::size_t>(cell.first)] * col[static_cast<std::size_t>(cell.second)]));
    }
    const double value = mi / std::sqrt(entropy(row) * entropy(col));
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace lwc
