#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cgpc/dot_export.hpp"
#include "cgpc/errors.hpp"
#include "cgpc/experiment.hpp"
#include "cgpc/parallel.hpp"

namespace {

struct Overrides {
    CLI::Option* seed = nullptr;
    CLI::Option* nodes = nullptr;
    CLI::Option* mutation_rate = nullptr;
    CLI::Option* iterations = nullptr;
    CLI::Option* lambda = nullptr;
    CLI::Option* recurrent_prob = nullptr;
    CLI::Option* runs = nullptr;
    CLI::Option* folds = nullptr;
    CLI::Option* reps = nullptr;
    CLI::Option* beta = nullptr;
    CLI::Option* k_neighbors = nullptr;
    CLI::Option* adasyn = nullptr;
    CLI::Option* layout = nullptr;
    CLI::Option* out = nullptr;

    std::uint64_t seed_v = 0;
    int nodes_v = 0;
    double mutation_rate_v = 0.0;
    int iterations_v = 0;
    int lambda_v = 0;
    double recurrent_prob_v = 0.0;
    int runs_v = 0;
    int folds_v = 0;
    int reps_v = 0;
    double beta_v = 0.0;
    int k_neighbors_v = 0;
    std::string adasyn_v;
    std::string layout_v;
    std::string out_v;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
    o.seed = cmd->add_option("--seed", o.seed_v, "Master seed");
    o.nodes = cmd->add_option("--nodes", o.nodes_v, "CGP node count");
    o.mutation_rate = cmd->add_option("--mutation-rate", o.mutation_rate_v, "Per-gene mutation rate");
    o.iterations = cmd->add_option("--iterations", o.iterations_v, "Evolution iteration budget");
    o.lambda = cmd->add_option("--lambda", o.lambda_v, "Offspring per generation");
    o.recurrent_prob = cmd->add_option("--recurrent-prob", o.recurrent_prob_v,
                                       "Recurrent connection probability");
    o.runs = cmd->add_option("--runs", o.runs_v, "Independent runs (single split mode)");
    o.folds = cmd->add_option("--folds", o.folds_v, "Fold count (cross-validation mode)");
    o.reps = cmd->add_option("--reps", o.reps_v, "Repetitions (cross-validation mode)");
    o.beta = cmd->add_option("--beta", o.beta_v, "Oversampling balance level");
    o.k_neighbors = cmd->add_option("--k-neighbors", o.k_neighbors_v, "Oversampling neighbor count");
    o.adasyn = cmd->add_option("--adasyn", o.adasyn_v, "Oversampling on/off")
                   ->check(CLI::IsMember({"on", "off"}));
    o.layout = cmd->add_option("--layout", o.layout_v, "Force dataset layout")
                   ->check(CLI::IsMember({"flat", "sequential"}));
    o.out = cmd->add_option("--out", o.out_v, "Output directory");
}

void apply_overrides(const Overrides& o, cgpc::ExperimentManifest& m) {
    if (*o.seed) m.master_seed = o.seed_v;
    if (*o.nodes) m.evolution.n_nodes = o.nodes_v;
    if (*o.mutation_rate) m.evolution.mutation_rate = o.mutation_rate_v;
    if (*o.iterations) m.evolution.max_iterations = o.iterations_v;
    if (*o.lambda) m.evolution.offspring_count = o.lambda_v;
    if (*o.recurrent_prob) m.evolution.recurrence_probability = o.recurrent_prob_v;
    if (*o.runs) m.runs = o.runs_v;
    if (*o.folds) m.folds = o.folds_v;
    if (*o.reps) m.repetitions = o.reps_v;
    if (*o.beta) m.adasyn.balance_level = o.beta_v;
    if (*o.k_neighbors) m.adasyn.k_neighbors = o.k_neighbors_v;
    if (*o.adasyn) m.adasyn_enabled = (o.adasyn_v == "on");
    if (*o.layout) m.layout_override = o.layout_v;
    if (*o.out) m.output_dir = o.out_v;
}

std::vector<std::string> split_names(const std::string& csv) {
    std::vector<std::string> names;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            names.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty() || !names.empty()) names.push_back(cur);
    return names;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolves CGP/RCGP binary classifiers over tabular and sequential data"};
    app.require_subcommand(1);
    int threads = cgpc::default_thread_count();
    app.add_option("--threads", threads, "Worker threads for independent runs/rotations");

    // baseline
    auto* baseline = app.add_subcommand("baseline", "Print class counts and the majority baseline");
    std::string baseline_manifest;
    std::string baseline_layout;
    baseline->add_option("--manifest,-m", baseline_manifest, "Dataset manifest JSON")->required();
    baseline->add_option("--layout", baseline_layout, "Force dataset layout")
        ->check(CLI::IsMember({"flat", "sequential"}));

    // split-run
    auto* split_run = app.add_subcommand("split-run", "Repeated stratified single-split experiment");
    std::string split_manifest;
    split_run->add_option("--manifest,-m", split_manifest, "Experiment manifest JSON")->required();
    Overrides split_overrides;
    add_overrides(split_run, split_overrides);

    // cv-run
    auto* cv_run = app.add_subcommand("cv-run", "Repeated stratified k-fold cross-validation");
    std::string cv_manifest;
    cv_run->add_option("--manifest,-m", cv_manifest, "Experiment manifest JSON")->required();
    Overrides cv_overrides;
    add_overrides(cv_run, cv_overrides);

    // export-dot
    auto* export_cmd = app.add_subcommand("export-dot", "Write a genotype as a Graphviz graph");
    std::string genotype_path, names_csv, dataset_manifest, dot_out;
    export_cmd->add_option("--genotype,-g", genotype_path, "Genotype JSON file")->required();
    export_cmd->add_option("--names", names_csv, "Comma-separated input names");
    export_cmd->add_option("--manifest,-m", dataset_manifest,
                           "Dataset manifest supplying input names");
    export_cmd->add_option("--out", dot_out, "Output file (default: stdout)");

    // synth-data
    auto* synth = app.add_subcommand("synth-data", "Generate synthetic benchmark datasets");
    std::string task, synth_dir;
    cgpc::SynthOptions opt;
    synth->add_option("--task", task, "separable | sequence-sum | paper-shape | two-cluster")
        ->required()
        ->check(CLI::IsMember({"separable", "sequence-sum", "paper-shape", "two-cluster"}));
    synth->add_option("--out", synth_dir, "Output directory")->required();
    synth->add_option("--samples", opt.samples, "Sample count (separable, sequence-sum)");
    synth->add_option("--timesteps", opt.timesteps, "Sequence length (sequence-sum)");
    synth->add_option("--majority", opt.majority, "Majority class count");
    synth->add_option("--minority", opt.minority, "Minority class count");
    synth->add_option("--features", opt.features, "Feature count (paper-shape)");
    synth->add_option("--regions", opt.regions, "Region file count (paper-shape)");
    synth->add_option("--seed", opt.seed, "Generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        if (*baseline) {
            const cgpc::Dataset ds =
                baseline_layout.empty()
                    ? cgpc::load_dataset_manifest(baseline_manifest)
                    : cgpc::load_dataset_manifest(baseline_manifest, baseline_layout);
            std::cout << cgpc::baseline_text(ds);
        } else if (*split_run) {
            cgpc::ExperimentManifest m = cgpc::load_experiment_manifest(split_manifest);
            apply_overrides(split_overrides, m);
            const std::string dir = cgpc::run_single_split(m, threads);
            std::cout << "wrote " << dir << "\n";
        } else if (*cv_run) {
            cgpc::ExperimentManifest m = cgpc::load_experiment_manifest(cv_manifest);
            apply_overrides(cv_overrides, m);
            const std::string dir = cgpc::run_cross_validation(m, threads);
            std::cout << "wrote " << dir << "\n";
        } else if (*export_cmd) {
            const cgpc::Genotype g = cgpc::load_genotype(genotype_path);
            std::vector<std::string> names;
            if (!names_csv.empty()) {
                names = split_names(names_csv);
            } else if (!dataset_manifest.empty()) {
                names = cgpc::load_dataset_manifest(dataset_manifest).input_names;
            } else {
                for (int i = 0; i < g.n_inputs; ++i) names.push_back("x" + std::to_string(i));
            }
            if (static_cast<int>(names.size()) != g.n_inputs)
                throw cgpc::ConfigError("export-dot: expected " + std::to_string(g.n_inputs) +
                                        " input names, got " + std::to_string(names.size()));
            const std::string dot = cgpc::export_dot(g, names);
            if (dot_out.empty()) {
                std::cout << dot;
            } else {
                std::FILE* f = std::fopen(dot_out.c_str(), "wb");
                if (f == nullptr) throw cgpc::InputError("cannot open for writing: " + dot_out);
                std::fwrite(dot.data(), 1, dot.size(), f);
                std::fclose(f);
                std::cout << "wrote " << dot_out << "\n";
            }
        } else if (*synth) {
            std::string manifest;
            if (task == "separable") manifest = cgpc::write_separable_dataset(synth_dir, opt);
            if (task == "sequence-sum") manifest = cgpc::write_sequence_sum_dataset(synth_dir, opt);
            if (task == "paper-shape") manifest = cgpc::write_paper_shape_dataset(synth_dir, opt);
            if (task == "two-cluster") manifest = cgpc::write_two_cluster_dataset(synth_dir, opt);
            std::cout << "wrote " << manifest << "\n";
        }
    } catch (const cgpc::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const cgpc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
