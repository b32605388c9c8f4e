#include "cgpc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cgpc {

double majority_baseline(std::span<const int> labels) {
    if (labels.empty()) throw std::invalid_argument("majority_baseline: empty label set");
    std::size_t ones = 0;
    for (int l : labels) ones += static_cast<std::size_t>(l == 1);
    const std::size_t zeros = labels.size() - ones;
    return static_cast<double>(std::max(ones, zeros)) / static_cast<double>(labels.size());
}

MetricsBundle compute_metrics(std::span<const double> outputs, std::span<const int> labels,
                              double threshold) {
    if (outputs.empty() || outputs.size() != labels.size())
        throw std::invalid_argument("compute_metrics: outputs and labels must be non-empty and equal-sized");

    MetricsBundle m;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const int predicted = outputs[i] > threshold ? 1 : 0;
        if (labels[i] == 1)
            (predicted == 1 ? m.tp : m.fn) += 1;
        else
            (predicted == 0 ? m.tn : m.fp) += 1;
    }
    const auto total = static_cast<double>(outputs.size());
    m.accuracy = static_cast<double>(m.tp + m.tn) / total;
    if (m.tp + m.fn > 0)
        m.sensitivity = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
    if (m.tn + m.fp > 0)
        m.specificity = static_cast<double>(m.tn) / static_cast<double>(m.tn + m.fp);

    // Rank-based AUC: average ranks over ties, so tied pairs count half.
    const auto n_pos = static_cast<double>(m.tp + m.fn);
    const auto n_neg = static_cast<double>(m.tn + m.fp);
    if (n_pos > 0 && n_neg > 0) {
        std::vector<std::size_t> order(outputs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return outputs[a] < outputs[b]; });
        double positive_rank_sum = 0.0;
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j < order.size() && outputs[order[j]] == outputs[order[i]]) ++j;
            const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
            for (std::size_t t = i; t < j; ++t)
                if (labels[order[t]] == 1) positive_rank_sum += avg_rank;
            i = j;
        }
        m.roc_auc = (positive_rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
    }
    return m;
}

MeanSd mean_sd(std::span<const double> values) {
    MeanSd result;
    result.count = values.size();
    if (values.empty()) return result;
    double sum = 0.0;
    for (double v : values) sum += v;
    result.mean = sum / static_cast<double>(values.size());
    if (values.size() >= 2) {
        double sq = 0.0;
        for (double v : values) sq += (v - result.mean) * (v - result.mean);
        result.sd = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return result;
}

} // namespace cgpc
