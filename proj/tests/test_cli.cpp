#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cgpc/errors.hpp"
#include "cgpc/experiment.hpp"
#include "cgpc/format.hpp"
#include "cgpc/metrics.hpp"
#include "helpers.hpp"

using namespace cgpc;
using test_helpers::read_file;
using test_helpers::TempDir;
using test_helpers::write_file;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        for (char c : line) {
            if (c == ',') {
                cells.push_back(cell);
                cell.clear();
            } else {
                cell.push_back(c);
            }
        }
        cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

ExperimentManifest demo_split_manifest(const std::string& dataset, const std::string& out) {
    ExperimentManifest m;
    m.dataset_manifest = dataset;
    m.mode = "single_split";
    m.runs = 3;
    m.master_seed = 5;
    m.evolution.n_nodes = 20;
    m.evolution.max_iterations = 400;
    m.output_dir = out;
    return m;
}

// Runs the built CLI binary, capturing stdout; returns the exit code.
int run_cli(const std::string& args, std::string* output = nullptr) {
    const TempDir capture("cli_capture");
    const std::string out_file = capture.str("stdout.txt");
    const std::string cmd = std::string(CGPC_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (output != nullptr) *output = read_file(out_file);
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
}

} // namespace

TEST_CASE("experiment manifest round-trip and validation") {
    TempDir dir("manifest_exp");
    write_file(dir.str("ds.json"),
               R"({"layout":"flat","files":["d.csv"],"label_column":"y","class_map":{"a":0,"b":1}})");

    write_file(dir.str("exp.json"), R"({
        "dataset": "ds.json",
        "mode": "single_split",
        "single_split": {"fractions": [0.7, 0.15, 0.15]},
        "evolution": {"nodes": 50, "mutation_rate": 0.1, "iterations": 15000,
                      "lambda": 4, "recurrent_prob": 0.1},
        "adasyn": {"enabled": true, "k_neighbors": 5, "beta": 1.0},
        "runs": 10,
        "master_seed": 99,
        "output_dir": "out"
    })");
    const ExperimentManifest m = load_experiment_manifest(dir.str("exp.json"));
    CHECK(m.mode == "single_split");
    CHECK(m.fractions == std::array<double, 3>{0.7, 0.15, 0.15});
    CHECK(m.evolution.recurrence_probability == 0.1);
    CHECK(m.adasyn_enabled);
    CHECK(m.runs == 10);
    CHECK(m.master_seed == 99);
    // The dataset path is resolved against the manifest location.
    CHECK(std::filesystem::path(m.dataset_manifest).is_absolute());
    CHECK_NOTHROW(m.validate());

    // Re-serialised manifests parse back to the same settings.
    write_file(dir.str("echo.json"), experiment_manifest_to_json(m));
    const ExperimentManifest echo = load_experiment_manifest(dir.str("echo.json"));
    CHECK(echo.fractions == m.fractions);
    CHECK(echo.master_seed == m.master_seed);
    CHECK(echo.evolution.n_nodes == m.evolution.n_nodes);
}

TEST_CASE("experiment manifest rejects ambiguous or mismatched modes") {
    TempDir dir("manifest_modes");
    write_file(dir.str("both.json"), R"({
        "dataset": "ds.json", "mode": "single_split",
        "single_split": {}, "cross_validation": {},
        "output_dir": "out"
    })");
    CHECK_THROWS_AS(load_experiment_manifest(dir.str("both.json")), ConfigError);

    write_file(dir.str("mismatch.json"), R"({
        "dataset": "ds.json", "mode": "cross_validation",
        "single_split": {}, "output_dir": "out"
    })");
    CHECK_THROWS_AS(load_experiment_manifest(dir.str("mismatch.json")), ConfigError);

    ExperimentManifest bad;
    bad.mode = "neither";
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("baseline text prints counts and the two-decimal percentage") {
    const Dataset pd = test_helpers::random_dataset(8, 102, 2, 1);
    const std::string text = baseline_text(pd);
    CHECK(text.find("class 0: 8") != std::string::npos);
    CHECK(text.find("class 1: 102") != std::string::npos);
    CHECK(text.find("majority baseline: 92.73") != std::string::npos);

    CHECK(baseline_text(test_helpers::random_dataset(60, 60, 2, 2))
              .find("majority baseline: 50.00") != std::string::npos);
    CHECK(baseline_text(test_helpers::random_dataset(8, 18, 2, 3))
              .find("majority baseline: 69.23") != std::string::npos);
}

TEST_CASE("synthetic dataset writers produce loadable, correctly-labelled data") {
    TempDir dir("synth");
    SynthOptions opt;
    opt.samples = 50;
    opt.seed = 3;

    const std::string separable = write_separable_dataset(dir.str("sep"), opt);
    const Dataset sep = load_dataset_manifest(separable);
    CHECK(sep.size() == 50);
    CHECK(sep.layout.n_features == 2);
    for (const Sample& s : sep.samples)
        CHECK(s.label == (s.features.at(0, 0) > s.features.at(0, 1) ? 1 : 0));

    opt.timesteps = 10;
    const std::string seq_path = write_sequence_sum_dataset(dir.str("seq"), opt);
    const Dataset seq = load_dataset_manifest(seq_path);
    CHECK(seq.layout.kind == Layout::Kind::Sequential);
    CHECK(seq.layout.n_channels == 1);
    CHECK(seq.layout.n_timesteps == 10);
    for (const Sample& s : seq.samples) {
        double sum = 0.0;
        for (int t = 0; t < 10; ++t) sum += s.features.at(t, 0);
        CHECK(s.label == (sum > 5.0 ? 1 : 0));
    }

    SynthOptions paper;
    paper.seed = 4;
    const std::string shape_path = write_paper_shape_dataset(dir.str("paper"), paper);
    const Dataset shape = load_dataset_manifest(shape_path);
    CHECK(shape.size() == 110);
    CHECK(shape.layout.n_features == 210);
    CHECK(shape.class_counts[1] == 102);
    CHECK(shape.class_counts[0] == 8);

    SynthOptions clusters;
    clusters.majority = 40;
    clusters.minority = 10;
    const std::string cluster_path = write_two_cluster_dataset(dir.str("clus"), clusters);
    const Dataset clus = load_dataset_manifest(cluster_path);
    CHECK(clus.class_counts[0] == 40);
    CHECK(clus.class_counts[1] == 10);
}

TEST_CASE("paper-shape generator emits per-region files on request") {
    TempDir dir("synth_regions");
    SynthOptions opt;
    opt.regions = 4;
    opt.features = 12;
    opt.majority = 9;
    opt.minority = 3;
    write_paper_shape_dataset(dir.str("r"), opt);

    const Dataset flat = load_dataset_manifest(dir.str("r/dataset.json"));
    CHECK(flat.layout.n_features == 48);
    const Dataset seq = load_dataset_manifest(dir.str("r/dataset_sequential.json"));
    CHECK(seq.layout.n_channels == 4);
    CHECK(seq.layout.n_timesteps == 12);
}

TEST_CASE("single-split runs write a complete, deterministic output tree") {
    TempDir dir("split_run");
    SynthOptions opt;
    opt.samples = 60;
    const std::string dataset = write_separable_dataset(dir.str("data"), opt);

    ExperimentManifest m = demo_split_manifest(dataset, dir.str("out_a"));
    run_single_split(m, 2);

    for (const char* name : {"manifest.json", "runs.csv", "metrics.csv", "summary.csv",
                             "summary.txt"})
        CHECK(std::filesystem::exists(dir.path() / "out_a" / name));
    for (int r = 0; r < 3; ++r) {
        const auto run_dir = dir.path() / "out_a" / "runs" / ("run_0" + std::to_string(r));
        CHECK(std::filesystem::exists(run_dir / "genotype.json"));
        CHECK(std::filesystem::exists(run_dir / "graph.dot"));
    }

    const auto runs = parse_csv(read_file(dir.str("out_a/runs.csv")));
    REQUIRE(runs.size() == 4); // header + 3 runs
    CHECK(runs[0][0] == "run");
    // Partition sizes follow the per-class rounding rule.
    const Dataset ds = load_dataset_manifest(dataset);
    std::size_t expect_test = 0, expect_val = 0, expect_train = 0;
    for (std::size_t n : ds.class_counts) {
        const auto n_test = static_cast<std::size_t>(std::llround(0.15 * static_cast<double>(n)));
        const auto n_val = static_cast<std::size_t>(std::llround(0.15 * static_cast<double>(n)));
        expect_test += n_test;
        expect_val += n_val;
        expect_train += n - n_test - n_val;
    }
    CHECK(runs[1][2] == std::to_string(expect_train));
    CHECK(runs[1][4] == std::to_string(expect_val));
    CHECK(runs[1][5] == std::to_string(expect_test));

    // Second run with a different output directory: identical bytes apart
    // from the embedded output path.
    m.output_dir = dir.str("out_b");
    run_single_split(m, 1);
    for (const char* name : {"runs.csv", "metrics.csv", "summary.csv", "summary.txt"})
        CHECK(read_file(dir.str("out_a/") + name) == read_file(dir.str("out_b/") + name));
    CHECK(read_file(dir.str("out_a/runs/run_00/genotype.json")) ==
          read_file(dir.str("out_b/runs/run_00/genotype.json")));
    CHECK(read_file(dir.str("out_a/runs/run_02/graph.dot")) ==
          read_file(dir.str("out_b/runs/run_02/graph.dot")));
}

TEST_CASE("balanced runs write the oversampling audit trail") {
    TempDir dir("audit_run");
    SynthOptions opt;
    opt.majority = 30;
    opt.minority = 10;
    const std::string dataset = write_two_cluster_dataset(dir.str("data"), opt);
    ExperimentManifest m = demo_split_manifest(dataset, dir.str("out"));
    m.runs = 2;
    m.evolution.max_iterations = 100;
    m.adasyn_enabled = true;
    m.adasyn.k_neighbors = 3;
    run_single_split(m, 1);

    const std::string audit = read_file(dir.str("out/runs/run_00/adasyn_audit.csv"));
    CHECK(audit.rfind("parent_index,", 0) == 0);
    const auto runs = parse_csv(read_file(dir.str("out/runs.csv")));
    // Per class at 70/15/15: majority 30 -> train 20, minority 10 -> train 6;
    // balancing adds 14 synthetics, one audit row each.
    CHECK(runs[1][3] == "14");
    CHECK(std::count(audit.begin(), audit.end(), '\n') == 15);
}

TEST_CASE("summary row is shaped like a results-table row") {
    TempDir dir("summary_row");
    SynthOptions opt;
    opt.samples = 40;
    const std::string dataset = write_separable_dataset(dir.str("data"), opt);
    ExperimentManifest m = demo_split_manifest(dataset, dir.str("out"));
    m.runs = 2;
    m.evolution.max_iterations = 100;
    run_single_split(m, 1);

    const std::string summary = read_file(dir.str("out/summary.txt"));
    std::istringstream in(summary);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "training\tvalidation\ttest");
    // Three "NN.NN (NN.NN)" cells.
    int cells = 0;
    std::istringstream row_in(row);
    std::string cell;
    while (std::getline(row_in, cell, '\t')) {
        ++cells;
        CHECK(cell.find('(') != std::string::npos);
        CHECK(cell.back() == ')');
    }
    CHECK(cells == 3);
}

TEST_CASE("cross-validation output aggregates recompute from the rotation CSV") {
    TempDir dir("cv_run");
    SynthOptions opt;
    opt.samples = 40;
    const std::string dataset = write_separable_dataset(dir.str("data"), opt);

    ExperimentManifest m;
    m.dataset_manifest = dataset;
    m.mode = "cross_validation";
    m.folds = 5;
    m.repetitions = 2;
    m.master_seed = 7;
    m.evolution.n_nodes = 20;
    m.evolution.max_iterations = 200;
    m.output_dir = dir.str("out");
    run_cross_validation(m, 2);

    const auto rotations = parse_csv(read_file(dir.str("out/rotations.csv")));
    REQUIRE(rotations.size() == 11); // header + 5*2
    CHECK(rotations[0][6] == "acc_train");

    std::vector<double> train, val, test;
    for (std::size_t i = 1; i < rotations.size(); ++i) {
        const auto& row = rotations[i];
        REQUIRE(row.size() == 11);
        if (row[9] == "1") continue;
        if (!row[6].empty()) train.push_back(parse_double(row[6]));
        if (!row[7].empty()) val.push_back(parse_double(row[7]));
        if (!row[8].empty()) test.push_back(parse_double(row[8]));
    }
    const auto summary = parse_csv(read_file(dir.str("out/summary.csv")));
    REQUIRE(summary.size() == 4);
    auto check_row = [&](std::size_t row, std::span<const double> values) {
        const MeanSd ms = mean_sd(values);
        CHECK(summary[row][1] == std::to_string(values.size()));
        CHECK(summary[row][2] == format_percent(ms.mean));
        CHECK(summary[row][3] == format_percent(ms.sd));
    };
    check_row(1, train);
    check_row(2, val);
    check_row(3, test);
}

TEST_CASE("cli binary: end-to-end flow and exit codes") {
    TempDir dir("cli_e2e");

    std::string out;
    CHECK(run_cli("synth-data --task separable --out " + dir.str("data") + " --samples 30", &out) ==
          0);
    CHECK(out.find("wrote") != std::string::npos);

    CHECK(run_cli("baseline --manifest " + dir.str("data/dataset.json"), &out) == 0);
    CHECK(out.find("majority baseline:") != std::string::npos);

    // A tiny end-to-end split run through the real binary.
    CHECK(run_cli("split-run --manifest " + dir.str("data/experiment.json") +
                      " --iterations 50 --runs 2 --nodes 10 --out " + dir.str("out"),
                  &out) == 0);
    CHECK(std::filesystem::exists(dir.path() / "out" / "summary.txt"));

    // Exporting the winning genotype round-trips through the DOT writer.
    CHECK(run_cli("export-dot --genotype " + dir.str("out/runs/run_00/genotype.json"), &out) == 0);
    CHECK(out.find("digraph cgp {") != std::string::npos);

    // Input problems exit 2; configuration problems exit 3.
    CHECK(run_cli("baseline --manifest " + dir.str("nonexistent.json"), &out) == 2);
    CHECK(run_cli("split-run --manifest " + dir.str("data/experiment.json") +
                      " --mutation-rate 0 --out " + dir.str("bad"),
                  &out) == 3);
    CHECK(run_cli("no-such-command", &out) == 3);
}
