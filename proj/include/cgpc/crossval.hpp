#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cgpc/adasyn.hpp"
#include "cgpc/dataset.hpp"
#include "cgpc/evolution.hpp"

namespace cgpc {

// Stratified fold assignment: per class, a seeded shuffle dealt round-robin,
// so per-class fold sizes differ by at most one.
struct FoldPlan {
    int k = 0;
    std::vector<int> fold_of;                   // per sample, in [0, k)
    std::vector<std::vector<int>> fold_indices; // per fold, ascending sample indices
};

FoldPlan make_folds(const Dataset& dataset, int k, std::uint64_t seed);

struct RotationRecord {
    int repetition = 0;
    int rotation = 0;
    std::size_t n_train = 0;
    std::size_t n_train_synthetic = 0;
    std::size_t n_val = 0;
    std::size_t n_test = 0;
    std::optional<double> acc_train;
    std::optional<double> acc_val;
    std::optional<double> acc_test;
    bool skipped = false;
    std::string reason; // skip cause or annotation (e.g. single-class test fold)
};

struct CvAggregate {
    std::size_t count = 0;
    double mean = 0.0;
    double sd = 0.0; // sample standard deviation, 0 when count < 2
};

struct CvReport {
    int k = 0;
    int repetitions = 0;
    std::vector<RotationRecord> records; // (repetition, rotation) order
    CvAggregate train;
    CvAggregate validation;
    CvAggregate test;

    void recompute_aggregates();
};

// Rotation t: test = fold t, validation = fold (t+1) mod k, train = rest.
// Oversampling (when configured) touches the training partition only. A
// rotation whose training set lacks a class is recorded as skipped.
CvReport run_cv(const Dataset& dataset, const EvolutionConfig& evo_cfg,
                const std::optional<AdasynConfig>& adasyn_cfg, int k, int repetitions,
                std::uint64_t master_seed, int threads = 1);

} // namespace cgpc
