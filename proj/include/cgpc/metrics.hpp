#pragma once

#include <optional>
#include <span>
#include <vector>

namespace cgpc {

// Class 1 is the positive class for sensitivity/specificity.
struct MetricsBundle {
    double accuracy = 0.0;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> roc_auc;
    long long tp = 0, fp = 0, tn = 0, fn = 0;
};

// Accuracy of always predicting the larger class.
double majority_baseline(std::span<const int> labels);

// Confusion counts at the threshold (output > threshold -> class 1);
// ROC AUC by the rank statistic, ties counted half. AUC, sensitivity and
// specificity are absent when their denominators are empty.
MetricsBundle compute_metrics(std::span<const double> outputs, std::span<const int> labels,
                              double threshold);

// Mean and sample standard deviation (n-1 denominator; 0 when n < 2).
struct MeanSd {
    std::size_t count = 0;
    double mean = 0.0;
    double sd = 0.0;
};
MeanSd mean_sd(std::span<const double> values);

} // namespace cgpc
