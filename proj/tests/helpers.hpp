#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cgpc/dataset.hpp"
#include "cgpc/genotype.hpp"
#include "cgpc/rng.hpp"

namespace test_helpers {

// Genotype whose first `wired` nodes are given explicitly; remaining nodes
// default to Add(input0, input0) so they stay inactive unless referenced.
inline cgpc::Genotype make_genotype(int n_inputs, int n_nodes,
                                    const std::vector<cgpc::Genotype::NodeGene>& wired,
                                    int output_gene, bool recurrent = false) {
    cgpc::Genotype g;
    g.n_inputs = n_inputs;
    g.n_nodes = n_nodes;
    g.recurrent = recurrent;
    g.output_gene = output_gene;
    g.nodes.assign(static_cast<std::size_t>(n_nodes), {0, {0, 0}});
    for (std::size_t i = 0; i < wired.size(); ++i) g.nodes[i] = wired[i];
    return g;
}

inline cgpc::Sample flat_sample(std::vector<double> values, int label,
                                const std::string& id = "s") {
    cgpc::Sample s;
    s.id = id;
    s.label = label;
    s.features = cgpc::Matrix::from_row(values);
    return s;
}

inline cgpc::Dataset flat_dataset(const std::vector<std::vector<double>>& rows,
                                  const std::vector<int>& labels) {
    cgpc::Dataset ds;
    ds.layout = cgpc::Layout::flat(static_cast<int>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        ds.samples.push_back(flat_sample(rows[i], labels[i], "r" + std::to_string(i + 1)));
    for (std::size_t f = 0; f < rows.front().size(); ++f)
        ds.input_names.push_back("x" + std::to_string(f));
    ds.recount();
    return ds;
}

// Random flat dataset: n0 samples of class 0, n1 of class 1, uniform features.
inline cgpc::Dataset random_dataset(std::size_t n0, std::size_t n1, int n_features,
                                    std::uint64_t seed) {
    cgpc::Rng rng(seed);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (std::size_t i = 0; i < n0 + n1; ++i) {
        std::vector<double> row;
        for (int f = 0; f < n_features; ++f) row.push_back(rng.uniform_real() * 2.0 - 1.0);
        rows.push_back(std::move(row));
        labels.push_back(i < n0 ? 0 : 1);
    }
    return flat_dataset(rows, labels);
}

// Scratch directory under the build tree, wiped on construction.
class TempDir {
public:
    explicit TempDir(const std::string& name)
        : path_(std::filesystem::temp_directory_path() / ("cgpc_test_" + name)) {
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    const std::filesystem::path& path() const { return path_; }
    std::string str(const std::string& child = "") const {
        return child.empty() ? path_.string() : (path_ / child).string();
    }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace test_helpers
