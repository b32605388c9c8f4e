#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cgpc/matrix.hpp"

namespace cgpc {

// Shape of one sample's feature block. Flat samples are 1 x n_features row
// vectors; Sequential samples are n_timesteps x n_channels matrices whose
// rows are presented to the classifier one timestep at a time.
struct Layout {
    enum class Kind { Flat, Sequential };

    Kind kind = Kind::Flat;
    int n_features = 0;  // Flat only
    int n_channels = 0;  // Sequential only
    int n_timesteps = 0; // Sequential only

    static Layout flat(int n_features) {
        Layout l;
        l.kind = Kind::Flat;
        l.n_features = n_features;
        return l;
    }
    static Layout sequential(int n_channels, int n_timesteps) {
        Layout l;
        l.kind = Kind::Sequential;
        l.n_channels = n_channels;
        l.n_timesteps = n_timesteps;
        return l;
    }

    // Number of classifier input terminals this layout requires.
    int input_count() const {
        return kind == Kind::Flat ? n_features : n_channels;
    }

    bool matches(const Matrix& features) const {
        if (kind == Kind::Flat)
            return features.rows() == 1 && features.cols() == n_features;
        return features.rows() == n_timesteps && features.cols() == n_channels;
    }

    friend bool operator==(const Layout&, const Layout&) = default;
};

struct Sample {
    std::string id;
    Matrix features;
    int label = 0;          // 0 or 1
    bool synthetic = false; // true only for oversampled points
};

struct Dataset {
    Layout layout;
    std::vector<Sample> samples;
    std::array<std::size_t, 2> class_counts{0, 0};
    // Column names for Flat data, channel names for Sequential data.
    std::vector<std::string> input_names;

    std::size_t size() const { return samples.size(); }
    void recount();
};

// Disjoint index lists into Dataset::samples. Indices within each partition
// are sorted ascending.
struct Split {
    std::vector<int> train;
    std::vector<int> validation;
    std::vector<int> test;
    std::array<double, 3> fractions{0, 0, 0}; // train, validation, test
};

// Describes how to read one CSV file: which column holds the label, how its
// two string values map to {0,1}, and (optionally) which column holds ids.
struct CsvSpec {
    std::string label_column;
    std::map<std::string, int> class_map; // exactly two entries, values {0,1}
    std::string id_column;                // empty: ids become r1, r2, ...
};

// Loads a Flat dataset from a headered, comma-separated file. All columns
// other than the label (and id) column are features, in file order.
Dataset load_csv(const std::string& path, const CsvSpec& spec);

// Stacks per-channel Flat datasets (each n_features == T) into one
// Sequential dataset of T x C matrices. Channel order follows the argument
// order. Samples are matched by id against the first dataset's order.
Dataset assemble_sequential(const std::vector<Dataset>& channel_datasets);

// Concatenates per-channel Flat datasets into one Flat dataset of C*T
// features, channels in argument order.
Dataset concat_flat(const std::vector<Dataset>& channel_datasets);

// Per class: n_test = round(f_test*n), n_val = round(f_val*n) (half away
// from zero), remainder to train. Assignment by seeded within-class shuffle.
Split stratified_split(const Dataset& dataset, std::array<double, 3> fractions,
                       std::uint64_t seed);

// Dataset manifest: JSON file naming the layout, the CSV file(s), the label
// column and class map. Relative file paths resolve against the manifest's
// directory.
Dataset load_dataset_manifest(const std::string& manifest_path);
// Same, but with layout forced to "flat" or "sequential" (CLI override).
Dataset load_dataset_manifest(const std::string& manifest_path,
                              const std::string& layout_override);

// Helper for assembling subset views.
std::vector<Sample> gather(const Dataset& dataset, const std::vector<int>& indices);

} // namespace cgpc
