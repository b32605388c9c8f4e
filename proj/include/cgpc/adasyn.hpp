#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cgpc/dataset.hpp"
#include "cgpc/rng.hpp"

namespace cgpc {

struct AdasynConfig {
    int k_neighbors = 5;
    double balance_level = 1.0;      // fraction of the class gap to close
    double imbalance_threshold = 1.0; // synthesize only when m_s/m_l < this

    void validate() const; // throws ConfigError
};

// Per-minority-point synthesis quotas. Neighbor ranks are computed over the
// combined training set ordered minority-first, then majority, with distance
// ties broken by that combined index.
struct AdasynPlan {
    struct PointPlan {
        int majority_neighbors = 0;     // majority points among the K nearest
        double density = 0.0;           // majority_neighbors / K
        double normalized_density = 0.0;
        long long quota = 0;
    };

    int k_neighbors = 0;
    std::size_t minority_count = 0;
    std::size_t majority_count = 0;
    double imbalance_degree = 0.0; // minority / majority
    long long total_synthetic = 0; // sum of quotas, exactly
    std::vector<PointPlan> points; // one per minority sample, same order
};

AdasynPlan make_plan(std::span<const Sample> minority, std::span<const Sample> majority,
                     const AdasynConfig& cfg);

// Audit trail for one synthetic sample: indices (and ids) of its endpoints
// within the minority span.
struct SyntheticRecord {
    int parent_index = 0;
    int neighbor_index = 0;
    double weight = 0.0; // interpolation position in [0,1]
    std::string parent_id;
    std::string neighbor_id;
};

// "parent_index,parent_id,neighbor_index,neighbor_id,weight" rows.
std::string audit_csv(const std::vector<SyntheticRecord>& records);

// Interpolates each quota draw between a minority point and one of its K
// nearest minority neighbors. A minority point with no minority neighbor is
// copied verbatim.
std::vector<Sample> synthesize(const AdasynPlan& plan, std::span<const Sample> minority,
                               Rng& rng, std::vector<SyntheticRecord>* audit = nullptr);

// Original training samples (order preserved) plus synthetics appended.
// With balance_level = 1 the class counts come out equal.
std::vector<Sample> balance_training(std::span<const Sample> train, const AdasynConfig& cfg,
                                     Rng& rng, std::vector<SyntheticRecord>* audit = nullptr);

} // namespace cgpc
