#include "cgpc/adasyn.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "cgpc/errors.hpp"
#include "cgpc/format.hpp"

namespace cgpc {

void AdasynConfig::validate() const {
    if (k_neighbors < 1) throw ConfigError("adasyn: k_neighbors must be >= 1");
    if (balance_level < 0.0 || balance_level > 1.0)
        throw ConfigError("adasyn: balance level must be in [0, 1]");
    if (!(imbalance_threshold > 0.0 && imbalance_threshold <= 1.0))
        throw ConfigError("adasyn: imbalance threshold must be in (0, 1]");
}

namespace {

double squared_distance(const Sample& a, const Sample& b) {
    const auto fa = a.features.flat();
    const auto fb = b.features.flat();
    assert(fa.size() == fb.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) {
        const double d = fa[i] - fb[i];
        sum += d * d;
    }
    return sum;
}

// Indices of the k nearest points to `query` among `points`, skipping
// `skip_index`; ties broken by index.
std::vector<int> k_nearest(const Sample& query, std::span<const Sample> points, int skip_index,
                           int k) {
    std::vector<std::pair<double, int>> ranked;
    ranked.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (static_cast<int>(i) == skip_index) continue;
        ranked.emplace_back(squared_distance(query, points[i]), static_cast<int>(i));
    }
    const auto take = std::min<std::size_t>(static_cast<std::size_t>(k), ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take),
                      ranked.end());
    std::vector<int> result;
    result.reserve(take);
    for (std::size_t i = 0; i < take; ++i) result.push_back(ranked[i].second);
    return result;
}

} // namespace

AdasynPlan make_plan(std::span<const Sample> minority, std::span<const Sample> majority,
                     const AdasynConfig& cfg) {
    cfg.validate();
    if (minority.empty()) throw std::invalid_argument("adasyn: minority set is empty");
    if (majority.size() < minority.size())
        throw std::invalid_argument("adasyn: majority set smaller than minority set");
    const std::size_t total = minority.size() + majority.size();
    if (static_cast<std::size_t>(cfg.k_neighbors) >= total)
        throw ConfigError("adasyn: k_neighbors must be smaller than the training set size");

    AdasynPlan plan;
    plan.k_neighbors = cfg.k_neighbors;
    plan.minority_count = minority.size();
    plan.majority_count = majority.size();
    plan.imbalance_degree =
        static_cast<double>(minority.size()) / static_cast<double>(majority.size());
    plan.points.resize(minority.size());

    // Combined training set, minority first; this ordering defines the tie
    // break between equidistant neighbors.
    std::vector<Sample> combined;
    combined.reserve(total);
    combined.insert(combined.end(), minority.begin(), minority.end());
    combined.insert(combined.end(), majority.begin(), majority.end());

    double density_sum = 0.0;
    for (std::size_t i = 0; i < minority.size(); ++i) {
        const auto neighbors = k_nearest(minority[i], combined, static_cast<int>(i),
                                         cfg.k_neighbors);
        int majority_hits = 0;
        for (int n : neighbors)
            if (static_cast<std::size_t>(n) >= minority.size()) ++majority_hits;
        auto& point = plan.points[i];
        point.majority_neighbors = majority_hits;
        point.density = static_cast<double>(majority_hits) / static_cast<double>(cfg.k_neighbors);
        density_sum += point.density;
    }

    if (plan.imbalance_degree >= cfg.imbalance_threshold) {
        plan.total_synthetic = 0;
        return plan;
    }
    plan.total_synthetic = std::llround(
        static_cast<double>(majority.size() - minority.size()) * cfg.balance_level);

    for (auto& point : plan.points) {
        point.normalized_density =
            density_sum > 0.0 ? point.density / density_sum
                              : 1.0 / static_cast<double>(minority.size());
    }

    // Largest-remainder apportionment: quotas sum to total_synthetic exactly.
    long long assigned = 0;
    std::vector<std::pair<double, std::size_t>> remainders;
    remainders.reserve(plan.points.size());
    for (std::size_t i = 0; i < plan.points.size(); ++i) {
        const double share =
            plan.points[i].normalized_density * static_cast<double>(plan.total_synthetic);
        const double base = std::floor(share);
        plan.points[i].quota = static_cast<long long>(base);
        assigned += plan.points[i].quota;
        remainders.emplace_back(share - base, i);
    }
    long long leftover = plan.total_synthetic - assigned;
    assert(leftover >= 0 && leftover <= static_cast<long long>(plan.points.size()));
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (long long i = 0; i < leftover; ++i) ++plan.points[remainders[static_cast<std::size_t>(i)].second].quota;
    return plan;
}

std::vector<Sample> synthesize(const AdasynPlan& plan, std::span<const Sample> minority,
                               Rng& rng, std::vector<SyntheticRecord>* audit) {
    assert(plan.points.size() == minority.size());
    std::vector<Sample> synthetics;
    if (plan.total_synthetic == 0) return synthetics;
    synthetics.reserve(static_cast<std::size_t>(plan.total_synthetic));

    for (std::size_t i = 0; i < minority.size(); ++i) {
        const long long quota = plan.points[i].quota;
        if (quota == 0) continue;
        const std::vector<int> neighbors =
            k_nearest(minority[i], minority, static_cast<int>(i), plan.k_neighbors);
        for (long long q = 0; q < quota; ++q) {
            Sample s = minority[i];
            s.synthetic = true;
            s.id = minority[i].id + "~s" + std::to_string(q);
            int neighbor_index = static_cast<int>(i);
            double weight = 0.0;
            if (!neighbors.empty()) {
                neighbor_index = neighbors[rng.uniform_index(neighbors.size())];
                weight = rng.uniform_real();
                const auto parent = minority[i].features.flat();
                const auto other =
                    minority[static_cast<std::size_t>(neighbor_index)].features.flat();
                auto dest = s.features.flat_mut();
                for (std::size_t f = 0; f < dest.size(); ++f)
                    dest[f] = parent[f] + (other[f] - parent[f]) * weight;
            }
            if (audit != nullptr)
                audit->push_back({static_cast<int>(i), neighbor_index, weight, minority[i].id,
                                  minority[static_cast<std::size_t>(neighbor_index)].id});
            synthetics.push_back(std::move(s));
        }
    }
    return synthetics;
}

std::string audit_csv(const std::vector<SyntheticRecord>& records) {
    std::string csv = "parent_index,parent_id,neighbor_index,neighbor_id,weight\n";
    for (const SyntheticRecord& r : records) {
        csv += std::to_string(r.parent_index) + ',' + r.parent_id + ',' +
               std::to_string(r.neighbor_index) + ',' + r.neighbor_id + ',' +
               format_double(r.weight) + '\n';
    }
    return csv;
}

std::vector<Sample> balance_training(std::span<const Sample> train, const AdasynConfig& cfg,
                                     Rng& rng, std::vector<SyntheticRecord>* audit) {
    std::array<std::size_t, 2> counts{0, 0};
    for (const Sample& s : train) ++counts[static_cast<std::size_t>(s.label)];
    if (counts[0] == 0 || counts[1] == 0)
        throw InputError("balance: training set lacks class " +
                         std::to_string(counts[0] == 0 ? 0 : 1));

    const int minority_label = counts[0] <= counts[1] ? 0 : 1;
    std::vector<Sample> minority;
    std::vector<Sample> majority;
    for (const Sample& s : train)
        (s.label == minority_label ? minority : majority).push_back(s);

    const AdasynPlan plan = make_plan(minority, majority, cfg);
    std::vector<Sample> synthetics = synthesize(plan, minority, rng, audit);

    std::vector<Sample> out(train.begin(), train.end());
    for (Sample& s : synthetics) out.push_back(std::move(s));
    return out;
}

} // namespace cgpc
