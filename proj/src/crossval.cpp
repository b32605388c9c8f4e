#include "cgpc/crossval.hpp"

#include <algorithm>
#include <cassert>

#include "cgpc/errors.hpp"
#include "cgpc/metrics.hpp"
#include "cgpc/parallel.hpp"
#include "cgpc/rng.hpp"

namespace cgpc {

FoldPlan make_folds(const Dataset& dataset, int k, std::uint64_t seed) {
    if (k < 3) throw ConfigError("folds: need k >= 3 for train/validation/test roles");
    if (static_cast<std::size_t>(k) > dataset.size())
        throw ConfigError("folds: k exceeds the number of samples");

    FoldPlan plan;
    plan.k = k;
    plan.fold_of.assign(dataset.size(), 0);
    plan.fold_indices.assign(static_cast<std::size_t>(k), {});

    Rng rng(seed);
    // The dealing pointer continues across classes so overall fold sizes
    // stay within one of each other too (k == n gives singleton folds).
    int next_fold = 0;
    for (int cls = 0; cls < 2; ++cls) {
        std::vector<int> indices;
        for (std::size_t i = 0; i < dataset.size(); ++i)
            if (dataset.samples[i].label == cls) indices.push_back(static_cast<int>(i));
        rng.shuffle(indices);
        for (int idx : indices) {
            plan.fold_of[static_cast<std::size_t>(idx)] = next_fold;
            plan.fold_indices[static_cast<std::size_t>(next_fold)].push_back(idx);
            next_fold = (next_fold + 1) % k;
        }
    }
    for (auto& fold : plan.fold_indices) std::sort(fold.begin(), fold.end());
    return plan;
}

void CvReport::recompute_aggregates() {
    std::vector<double> train_vals, val_vals, test_vals;
    for (const RotationRecord& r : records) {
        if (r.skipped) continue;
        if (r.acc_train) train_vals.push_back(*r.acc_train);
        if (r.acc_val) val_vals.push_back(*r.acc_val);
        if (r.acc_test) test_vals.push_back(*r.acc_test);
    }
    auto to_aggregate = [](std::span<const double> v) {
        const MeanSd ms = mean_sd(v);
        return CvAggregate{ms.count, ms.mean, ms.sd};
    };
    train = to_aggregate(train_vals);
    validation = to_aggregate(val_vals);
    test = to_aggregate(test_vals);
}

namespace {

std::array<std::size_t, 2> count_classes(std::span<const Sample> samples) {
    std::array<std::size_t, 2> counts{0, 0};
    for (const Sample& s : samples) ++counts[static_cast<std::size_t>(s.label)];
    return counts;
}

void append_reason(std::string& reason, const std::string& note) {
    if (!reason.empty()) reason += "; ";
    reason += note;
}

} // namespace

CvReport run_cv(const Dataset& dataset, const EvolutionConfig& evo_cfg,
                const std::optional<AdasynConfig>& adasyn_cfg, int k, int repetitions,
                std::uint64_t master_seed, int threads) {
    evo_cfg.validate();
    if (adasyn_cfg) adasyn_cfg->validate();
    if (repetitions < 1) throw ConfigError("cv: repetitions must be >= 1");
    if (dataset.class_counts[0] == 0 || dataset.class_counts[1] == 0)
        throw ConfigError("cv: dataset must contain both classes");

    CvReport report;
    report.k = k;
    report.repetitions = repetitions;
    report.records.resize(static_cast<std::size_t>(k) * static_cast<std::size_t>(repetitions));

    std::vector<FoldPlan> plans;
    plans.reserve(static_cast<std::size_t>(repetitions));
    for (int r = 0; r < repetitions; ++r)
        plans.push_back(make_folds(dataset, k, derive_seed(master_seed, SeedStream::Folds,
                                                           static_cast<std::uint64_t>(r))));

    parallel_for(report.records.size(), threads, [&](std::size_t job) {
        const int rep = static_cast<int>(job) / k;
        const int rot = static_cast<int>(job) % k;
        const FoldPlan& plan = plans[static_cast<std::size_t>(rep)];

        RotationRecord rec;
        rec.repetition = rep;
        rec.rotation = rot;

        std::vector<int> train_idx;
        const std::vector<int>& test_idx = plan.fold_indices[static_cast<std::size_t>(rot)];
        const std::vector<int>& val_idx =
            plan.fold_indices[static_cast<std::size_t>((rot + 1) % k)];
        for (int f = 0; f < k; ++f) {
            if (f == rot || f == (rot + 1) % k) continue;
            const auto& fold = plan.fold_indices[static_cast<std::size_t>(f)];
            train_idx.insert(train_idx.end(), fold.begin(), fold.end());
        }
        std::sort(train_idx.begin(), train_idx.end());

        std::vector<Sample> train = gather(dataset, train_idx);
        std::vector<Sample> validation = gather(dataset, val_idx);
        std::vector<Sample> test = gather(dataset, test_idx);
        rec.n_train = train.size();
        rec.n_val = validation.size();
        rec.n_test = test.size();

        const auto train_counts = count_classes(train);
        for (int cls = 0; cls < 2; ++cls) {
            if (train_counts[static_cast<std::size_t>(cls)] == 0) {
                rec.skipped = true;
                append_reason(rec.reason, "training set lacks class " + std::to_string(cls));
            }
        }
        if (test.empty()) {
            rec.skipped = true;
            append_reason(rec.reason, "empty test fold");
        }
        if (!rec.skipped) {
            const auto test_counts = count_classes(test);
            for (int cls = 0; cls < 2; ++cls)
                if (test_counts[static_cast<std::size_t>(cls)] == 0)
                    append_reason(rec.reason, "test fold lacks class " + std::to_string(cls));
            if (validation.empty()) {
                append_reason(rec.reason, "empty validation fold");
            } else {
                const auto val_counts = count_classes(validation);
                for (int cls = 0; cls < 2; ++cls)
                    if (val_counts[static_cast<std::size_t>(cls)] == 0)
                        append_reason(rec.reason,
                                      "validation fold lacks class " + std::to_string(cls));
            }

            if (adasyn_cfg) {
                Rng adasyn_rng(derive_seed(master_seed, SeedStream::Adasyn,
                                           static_cast<std::uint64_t>(rep),
                                           static_cast<std::uint64_t>(rot)));
                train = balance_training(train, *adasyn_cfg, adasyn_rng);
                rec.n_train_synthetic = train.size() - rec.n_train;
            }

            EvolutionConfig cfg = evo_cfg;
            cfg.seed = derive_seed(master_seed, SeedStream::Evolve,
                                   static_cast<std::uint64_t>(rep),
                                   static_cast<std::uint64_t>(rot));
            const EvolutionResult result = evolve(train, validation, dataset.layout, cfg);

            // Synthetics live in the training partition only.
            assert(std::none_of(validation.begin(), validation.end(),
                                [](const Sample& s) { return s.synthetic; }));
            assert(std::none_of(test.begin(), test.end(),
                                [](const Sample& s) { return s.synthetic; }));

            rec.acc_train = result.best_train_accuracy;
            rec.acc_val = result.best_validation_accuracy;
            rec.acc_test = fitness(result.best_genotype, test, dataset.layout, cfg);
        }
        report.records[job] = std::move(rec);
    });

    report.recompute_aggregates();
    return report;
}

} // namespace cgpc
