#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cgpc/adasyn.hpp"
#include "cgpc/crossval.hpp"
#include "cgpc/dataset.hpp"
#include "cgpc/evolution.hpp"

namespace cgpc {

// One experiment: a dataset reference, a mode (repeated single splits or
// repeated k-fold cross-validation), and every knob the run needs. The whole
// output directory is a pure function of (input files, manifest).
struct ExperimentManifest {
    std::string dataset_manifest; // path, relative to the manifest file
    std::string mode;             // "single_split" | "cross_validation"

    std::array<double, 3> fractions{0.70, 0.15, 0.15}; // single_split
    int folds = 10;                                    // cross_validation
    int repetitions = 10;                              // cross_validation

    EvolutionConfig evolution;
    AdasynConfig adasyn;
    bool adasyn_enabled = false;

    int runs = 10; // single_split repetitions
    std::uint64_t master_seed = 1;
    std::string output_dir;
    std::string layout_override; // "", "flat" or "sequential"

    void validate() const; // throws ConfigError
};

ExperimentManifest load_experiment_manifest(const std::string& path);
std::string experiment_manifest_to_json(const ExperimentManifest& m);

// Class counts plus the majority baseline as a two-decimal percentage; the
// text the `baseline` command prints.
std::string baseline_text(const Dataset& dataset);

// Repeated stratified single splits: per run, split -> optional balancing ->
// evolution; writes runs/run_NN/{genotype.json,graph.dot}, runs.csv,
// metrics.csv, summary.csv and a table-shaped summary.txt. Returns the
// output directory.
std::string run_single_split(const ExperimentManifest& manifest, int threads = 1);

// Repeated k-fold cross-validation; writes rotations.csv, summary.csv,
// summary.txt. Returns the output directory.
std::string run_cross_validation(const ExperimentManifest& manifest, int threads = 1);

// Synthetic dataset generators (the `synth-data` command). Each writes CSV
// file(s) plus a ready dataset manifest into `dir` and returns the manifest
// path.
struct SynthOptions {
    int samples = 100;
    int timesteps = 10;
    int majority = 102;
    int minority = 8;
    int features = 210;
    int regions = 1;
    std::uint64_t seed = 1;
};

std::string write_separable_dataset(const std::string& dir, const SynthOptions& opt);
std::string write_sequence_sum_dataset(const std::string& dir, const SynthOptions& opt);
std::string write_paper_shape_dataset(const std::string& dir, const SynthOptions& opt);
std::string write_two_cluster_dataset(const std::string& dir, const SynthOptions& opt);

} // namespace cgpc
