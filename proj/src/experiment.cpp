#include "cgpc/experiment.hpp"

#include <cassert>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "cgpc/dot_export.hpp"
#include "cgpc/errors.hpp"
#include "cgpc/format.hpp"
#include "cgpc/metrics.hpp"
#include "cgpc/parallel.hpp"
#include "cgpc/rng.hpp"

namespace fs = std::filesystem;

namespace cgpc {

void ExperimentManifest::validate() const {
    if (mode != "single_split" && mode != "cross_validation")
        throw ConfigError("experiment: mode must be 'single_split' or 'cross_validation'");
    if (dataset_manifest.empty()) throw ConfigError("experiment: dataset manifest path missing");
    if (output_dir.empty()) throw ConfigError("experiment: output_dir missing");
    if (runs < 1) throw ConfigError("experiment: runs must be >= 1");
    if (mode == "cross_validation") {
        if (folds < 3) throw ConfigError("experiment: folds must be >= 3");
        if (repetitions < 1) throw ConfigError("experiment: repetitions must be >= 1");
    } else {
        double sum = 0.0;
        for (double f : fractions) {
            if (f <= 0.0) throw ConfigError("experiment: fractions must be positive");
            sum += f;
        }
        if (std::fabs(sum - 1.0) > 1e-9) throw ConfigError("experiment: fractions must sum to 1");
    }
    if (!layout_override.empty() && layout_override != "flat" && layout_override != "sequential")
        throw ConfigError("experiment: layout override must be 'flat' or 'sequential'");
    evolution.validate();
    adasyn.validate();
}

namespace {

EvolutionConfig evolution_from_json(const nlohmann::json& j) {
    EvolutionConfig cfg;
    if (j.contains("nodes")) cfg.n_nodes = j.at("nodes").get<int>();
    if (j.contains("mutation_rate")) cfg.mutation_rate = j.at("mutation_rate").get<double>();
    if (j.contains("iterations")) cfg.max_iterations = j.at("iterations").get<int>();
    if (j.contains("lambda")) cfg.offspring_count = j.at("lambda").get<int>();
    if (j.contains("recurrent_prob"))
        cfg.recurrence_probability = j.at("recurrent_prob").get<double>();
    if (j.contains("decision_threshold"))
        cfg.decision_threshold = j.at("decision_threshold").get<double>();
    if (j.contains("static_passes")) cfg.static_update_passes = j.at("static_passes").get<int>();
    return cfg;
}

nlohmann::json evolution_to_json(const EvolutionConfig& cfg) {
    nlohmann::json j;
    j["nodes"] = cfg.n_nodes;
    j["mutation_rate"] = cfg.mutation_rate;
    j["iterations"] = cfg.max_iterations;
    j["lambda"] = cfg.offspring_count;
    j["recurrent_prob"] = cfg.recurrence_probability;
    j["decision_threshold"] = cfg.decision_threshold;
    j["static_passes"] = cfg.static_update_passes;
    return j;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw InputError("write failed: " + path.string());
}

std::string optional_cell(const std::optional<double>& value) {
    return value ? format_double(*value) : std::string();
}

// "92.73 (0.00)" cells; "NA" when no values were recorded.
std::string table_cell(const CvAggregate& agg) {
    if (agg.count == 0) return "NA";
    return format_percent(agg.mean) + " (" + format_percent(agg.sd) + ")";
}

std::string summary_csv(const CvAggregate& train, const CvAggregate& validation,
                        const CvAggregate& test) {
    std::string out = "partition,n,mean_pct,sd_pct\n";
    auto row = [&](const char* name, const CvAggregate& agg) {
        out += name;
        out += ',' + std::to_string(agg.count);
        if (agg.count == 0) {
            out += ",,";
        } else {
            out += ',' + format_percent(agg.mean) + ',' + format_percent(agg.sd);
        }
        out += '\n';
    };
    row("train", train);
    row("validation", validation);
    row("test", test);
    return out;
}

std::string summary_table(const CvAggregate& train, const CvAggregate& validation,
                          const CvAggregate& test) {
    return "training\tvalidation\ttest\n" + table_cell(train) + '\t' + table_cell(validation) +
           '\t' + table_cell(test) + '\n';
}

std::string run_dir_name(int run, int total_runs) {
    int width = 2;
    for (int v = total_runs - 1; v >= 100; v /= 10) ++width;
    std::string digits = std::to_string(run);
    while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
    return "run_" + digits;
}

} // namespace

ExperimentManifest load_experiment_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open experiment manifest: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": invalid JSON: " + e.what());
    }

    ExperimentManifest m;
    try {
        m.dataset_manifest = j.at("dataset").get<std::string>();
        m.mode = j.at("mode").get<std::string>();
        const bool has_split = j.contains("single_split");
        const bool has_cv = j.contains("cross_validation");
        if (has_split == has_cv)
            throw ConfigError(path +
                              ": exactly one of 'single_split' or 'cross_validation' must be present");
        if ((m.mode == "single_split") != has_split)
            throw ConfigError(path + ": mode does not match the present parameter block");
        if (has_split) {
            const auto& block = j.at("single_split");
            if (block.contains("fractions")) {
                const auto f = block.at("fractions").get<std::vector<double>>();
                if (f.size() != 3)
                    throw ConfigError(path + ": fractions must be [train, validation, test]");
                m.fractions = {f[0], f[1], f[2]};
            }
        } else {
            const auto& block = j.at("cross_validation");
            if (block.contains("folds")) m.folds = block.at("folds").get<int>();
            if (block.contains("repetitions")) m.repetitions = block.at("repetitions").get<int>();
        }
        if (j.contains("evolution")) m.evolution = evolution_from_json(j.at("evolution"));
        if (j.contains("adasyn")) {
            const auto& a = j.at("adasyn");
            if (a.contains("enabled")) m.adasyn_enabled = a.at("enabled").get<bool>();
            if (a.contains("k_neighbors")) m.adasyn.k_neighbors = a.at("k_neighbors").get<int>();
            if (a.contains("beta")) m.adasyn.balance_level = a.at("beta").get<double>();
            if (a.contains("imbalance_threshold"))
                m.adasyn.imbalance_threshold = a.at("imbalance_threshold").get<double>();
        }
        if (j.contains("runs")) m.runs = j.at("runs").get<int>();
        if (j.contains("master_seed")) m.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("output_dir")) m.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("layout")) m.layout_override = j.at("layout").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ": missing or mistyped field: " + e.what());
    }

    // The dataset path travels with the manifest file.
    fs::path ds(m.dataset_manifest);
    if (ds.is_relative()) ds = fs::path(path).parent_path() / ds;
    m.dataset_manifest = ds.lexically_normal().string();
    return m;
}

std::string experiment_manifest_to_json(const ExperimentManifest& m) {
    nlohmann::json j;
    j["dataset"] = m.dataset_manifest;
    j["mode"] = m.mode;
    if (m.mode == "single_split") {
        j["single_split"]["fractions"] = {m.fractions[0], m.fractions[1], m.fractions[2]};
    } else {
        j["cross_validation"]["folds"] = m.folds;
        j["cross_validation"]["repetitions"] = m.repetitions;
    }
    j["evolution"] = evolution_to_json(m.evolution);
    j["adasyn"]["enabled"] = m.adasyn_enabled;
    j["adasyn"]["k_neighbors"] = m.adasyn.k_neighbors;
    j["adasyn"]["beta"] = m.adasyn.balance_level;
    j["adasyn"]["imbalance_threshold"] = m.adasyn.imbalance_threshold;
    j["runs"] = m.runs;
    j["master_seed"] = m.master_seed;
    j["output_dir"] = m.output_dir;
    if (!m.layout_override.empty()) j["layout"] = m.layout_override;
    return j.dump(2) + "\n";
}

std::string baseline_text(const Dataset& dataset) {
    std::vector<int> labels;
    labels.reserve(dataset.size());
    for (const Sample& s : dataset.samples) labels.push_back(s.label);
    std::string out;
    out += "class 0: " + std::to_string(dataset.class_counts[0]) + "\n";
    out += "class 1: " + std::to_string(dataset.class_counts[1]) + "\n";
    out += "majority baseline: " + format_percent(majority_baseline(labels)) + "\n";
    return out;
}

namespace {

Dataset load_dataset_for(const ExperimentManifest& m) {
    if (m.layout_override.empty()) return load_dataset_manifest(m.dataset_manifest);
    return load_dataset_manifest(m.dataset_manifest, m.layout_override);
}

struct RunResult {
    std::uint64_t seed = 0;
    std::size_t n_train = 0;
    std::size_t n_train_synthetic = 0;
    std::size_t n_val = 0;
    std::size_t n_test = 0;
    double acc_train = 0.0;
    std::optional<double> acc_val;
    double acc_test = 0.0;
    Genotype best;
    MetricsBundle test_metrics;
    std::vector<SyntheticRecord> audit;
};

} // namespace

std::string run_single_split(const ExperimentManifest& manifest, int threads) {
    manifest.validate();
    if (manifest.mode != "single_split")
        throw ConfigError("run_single_split: manifest mode is not single_split");
    const Dataset dataset = load_dataset_for(manifest);

    std::vector<RunResult> results(static_cast<std::size_t>(manifest.runs));
    parallel_for(results.size(), threads, [&](std::size_t job) {
        const auto r = static_cast<std::uint64_t>(job);
        RunResult& res = results[job];

        const Split split =
            stratified_split(dataset, manifest.fractions,
                             derive_seed(manifest.master_seed, SeedStream::Split, r));
        std::vector<Sample> train = gather(dataset, split.train);
        const std::vector<Sample> validation = gather(dataset, split.validation);
        const std::vector<Sample> test = gather(dataset, split.test);
        res.n_train = train.size();
        res.n_val = validation.size();
        res.n_test = test.size();

        if (manifest.adasyn_enabled) {
            Rng adasyn_rng(derive_seed(manifest.master_seed, SeedStream::Adasyn, r));
            train = balance_training(train, manifest.adasyn, adasyn_rng, &res.audit);
            res.n_train_synthetic = train.size() - res.n_train;
        }

        EvolutionConfig cfg = manifest.evolution;
        cfg.seed = derive_seed(manifest.master_seed, SeedStream::Evolve, r);
        res.seed = cfg.seed;
        const EvolutionResult evo = evolve(train, validation, dataset.layout, cfg);
        res.acc_train = evo.best_train_accuracy;
        res.acc_val = evo.best_validation_accuracy;
        res.acc_test = fitness(evo.best_genotype, test, dataset.layout, cfg);

        std::vector<double> outputs;
        std::vector<int> labels;
        outputs.reserve(test.size());
        for (const Sample& s : test) {
            outputs.push_back(raw_output(evo.best_genotype, s, dataset.layout, cfg));
            labels.push_back(s.label);
        }
        res.test_metrics = compute_metrics(outputs, labels, cfg.decision_threshold);
        res.best = evo.best_genotype;
    });

    const fs::path out_dir(manifest.output_dir);
    fs::create_directories(out_dir / "runs");
    write_text_file(out_dir / "manifest.json", experiment_manifest_to_json(manifest));

    std::string runs_csv =
        "run,seed,n_train,n_train_synthetic,n_val,n_test,acc_train,acc_val,acc_test\n";
    std::string metrics_csv = "run,partition,accuracy,sensitivity,specificity,roc_auc,tp,fp,tn,fn\n";
    std::vector<double> train_accs, val_accs, test_accs;
    for (std::size_t r = 0; r < results.size(); ++r) {
        const RunResult& res = results[r];
        runs_csv += std::to_string(r) + ',' + std::to_string(res.seed) + ',' +
                    std::to_string(res.n_train) + ',' + std::to_string(res.n_train_synthetic) +
                    ',' + std::to_string(res.n_val) + ',' + std::to_string(res.n_test) + ',' +
                    format_double(res.acc_train) + ',' + optional_cell(res.acc_val) + ',' +
                    format_double(res.acc_test) + '\n';
        const MetricsBundle& m = res.test_metrics;
        metrics_csv += std::to_string(r) + ",test," + format_double(m.accuracy) + ',' +
                       optional_cell(m.sensitivity) + ',' + optional_cell(m.specificity) + ',' +
                       optional_cell(m.roc_auc) + ',' + std::to_string(m.tp) + ',' +
                       std::to_string(m.fp) + ',' + std::to_string(m.tn) + ',' +
                       std::to_string(m.fn) + '\n';
        train_accs.push_back(res.acc_train);
        if (res.acc_val) val_accs.push_back(*res.acc_val);
        test_accs.push_back(res.acc_test);

        const fs::path run_dir = out_dir / "runs" / run_dir_name(static_cast<int>(r), manifest.runs);
        fs::create_directories(run_dir);
        write_text_file(run_dir / "genotype.json", genotype_to_json(res.best));
        write_text_file(run_dir / "graph.dot", export_dot(res.best, dataset.input_names));
        if (manifest.adasyn_enabled)
            write_text_file(run_dir / "adasyn_audit.csv", audit_csv(res.audit));
    }
    write_text_file(out_dir / "runs.csv", runs_csv);
    write_text_file(out_dir / "metrics.csv", metrics_csv);

    auto agg = [](std::span<const double> v) {
        const MeanSd ms = mean_sd(v);
        return CvAggregate{ms.count, ms.mean, ms.sd};
    };
    const CvAggregate train_agg = agg(train_accs), val_agg = agg(val_accs), test_agg = agg(test_accs);
    write_text_file(out_dir / "summary.csv", summary_csv(train_agg, val_agg, test_agg));
    write_text_file(out_dir / "summary.txt", summary_table(train_agg, val_agg, test_agg));
    return out_dir.string();
}

std::string run_cross_validation(const ExperimentManifest& manifest, int threads) {
    manifest.validate();
    if (manifest.mode != "cross_validation")
        throw ConfigError("run_cross_validation: manifest mode is not cross_validation");
    const Dataset dataset = load_dataset_for(manifest);

    const std::optional<AdasynConfig> adasyn =
        manifest.adasyn_enabled ? std::optional<AdasynConfig>(manifest.adasyn) : std::nullopt;
    const CvReport report = run_cv(dataset, manifest.evolution, adasyn, manifest.folds,
                                   manifest.repetitions, manifest.master_seed, threads);

    const fs::path out_dir(manifest.output_dir);
    fs::create_directories(out_dir);
    write_text_file(out_dir / "manifest.json", experiment_manifest_to_json(manifest));

    std::string csv =
        "repetition,rotation,n_train,n_train_synthetic,n_val,n_test,acc_train,acc_val,acc_test,"
        "skipped,reason\n";
    for (const RotationRecord& rec : report.records) {
        csv += std::to_string(rec.repetition) + ',' + std::to_string(rec.rotation) + ',' +
               std::to_string(rec.n_train) + ',' + std::to_string(rec.n_train_synthetic) + ',' +
               std::to_string(rec.n_val) + ',' + std::to_string(rec.n_test) + ',' +
               optional_cell(rec.acc_train) + ',' + optional_cell(rec.acc_val) + ',' +
               optional_cell(rec.acc_test) + ',' + (rec.skipped ? "1" : "0") + ',' + rec.reason +
               '\n';
    }
    write_text_file(out_dir / "rotations.csv", csv);
    write_text_file(out_dir / "summary.csv",
                    summary_csv(report.train, report.validation, report.test));
    write_text_file(out_dir / "summary.txt",
                    summary_table(report.train, report.validation, report.test));
    return out_dir.string();
}

namespace {

std::string dataset_manifest_json(const std::string& layout,
                                  const std::vector<std::string>& files,
                                  const std::string& label_column,
                                  const nlohmann::json& class_map,
                                  const std::vector<std::string>& region_order = {}) {
    nlohmann::json j;
    j["layout"] = layout;
    j["files"] = files;
    j["label_column"] = label_column;
    j["class_map"] = class_map;
    if (!region_order.empty()) j["region_order"] = region_order;
    return j.dump(2) + "\n";
}

void write_experiment_templates(const fs::path& dir, bool recurrent, bool adasyn) {
    ExperimentManifest m;
    m.dataset_manifest = "dataset.json";
    m.mode = "single_split";
    m.adasyn_enabled = adasyn;
    m.evolution.recurrence_probability = recurrent ? 0.1 : 0.0;
    m.output_dir = "out";
    write_text_file(dir / "experiment.json", experiment_manifest_to_json(m));

    m.mode = "cross_validation";
    m.output_dir = "out_cv";
    write_text_file(dir / "experiment_cv.json", experiment_manifest_to_json(m));
}

} // namespace

std::string write_separable_dataset(const std::string& dir, const SynthOptions& opt) {
    fs::create_directories(dir);
    Rng rng(derive_seed(opt.seed, SeedStream::Data));
    std::string csv = "x0,x1,label\n";
    for (int i = 0; i < opt.samples; ++i) {
        const double x0 = rng.uniform_real() * 2.0 - 1.0;
        const double x1 = rng.uniform_real() * 2.0 - 1.0;
        csv += format_double(x0) + ',' + format_double(x1) + ',' + (x0 > x1 ? "1" : "0") + '\n';
    }
    write_text_file(fs::path(dir) / "separable.csv", csv);
    const std::string manifest = dataset_manifest_json(
        "flat", {"separable.csv"}, "label", {{"0", 0}, {"1", 1}});
    write_text_file(fs::path(dir) / "dataset.json", manifest);
    write_experiment_templates(dir, false, false);
    return (fs::path(dir) / "dataset.json").string();
}

std::string write_sequence_sum_dataset(const std::string& dir, const SynthOptions& opt) {
    fs::create_directories(dir);
    Rng rng(derive_seed(opt.seed, SeedStream::Data));
    std::string header;
    for (int t = 0; t < opt.timesteps; ++t) header += "t" + std::to_string(t) + ',';
    std::string csv = header + "label\n";
    for (int i = 0; i < opt.samples; ++i) {
        double sum = 0.0;
        std::string row;
        for (int t = 0; t < opt.timesteps; ++t) {
            const double v = rng.uniform_real();
            sum += v;
            row += format_double(v) + ',';
        }
        csv += row + (sum > opt.timesteps / 2.0 ? "1" : "0") + '\n';
    }
    write_text_file(fs::path(dir) / "sequence.csv", csv);
    const std::string manifest = dataset_manifest_json(
        "sequential", {"sequence.csv"}, "label", {{"0", 0}, {"1", 1}}, {"signal"});
    write_text_file(fs::path(dir) / "dataset.json", manifest);
    write_experiment_templates(dir, true, false);
    return (fs::path(dir) / "dataset.json").string();
}

std::string write_paper_shape_dataset(const std::string& dir, const SynthOptions& opt) {
    fs::create_directories(dir);
    std::vector<std::string> files;
    std::vector<std::string> regions;
    for (int r = 0; r < opt.regions; ++r) regions.push_back("region" + std::to_string(r));

    // Class-1 rows first, then class-0 rows; a mild mean shift keeps the
    // stand-in learnable without being trivial.
    for (int r = 0; r < opt.regions; ++r) {
        Rng rng(derive_seed(opt.seed, SeedStream::Data, static_cast<std::uint64_t>(r)));
        std::string header;
        for (int f = 0; f < opt.features; ++f) header += "f" + std::to_string(f) + ',';
        std::string csv = header + "group\n";
        const int total = opt.majority + opt.minority;
        for (int i = 0; i < total; ++i) {
            const bool is_majority = i < opt.majority;
            std::string row;
            for (int f = 0; f < opt.features; ++f) {
                const double v = rng.normal() + (is_majority ? 0.3 : 0.0);
                row += format_double(v) + ',';
            }
            csv += row + (is_majority ? "PD" : "HC") + '\n';
        }
        const std::string name = "region" + std::to_string(r) + ".csv";
        files.push_back(name);
        write_text_file(fs::path(dir) / name, csv);
    }

    const nlohmann::json class_map = {{"HC", 0}, {"PD", 1}};
    write_text_file(fs::path(dir) / "dataset.json",
                    dataset_manifest_json("flat", files, "group", class_map, regions));
    if (opt.regions > 1)
        write_text_file(fs::path(dir) / "dataset_sequential.json",
                        dataset_manifest_json("sequential", files, "group", class_map, regions));
    write_experiment_templates(dir, true, true);
    return (fs::path(dir) / "dataset.json").string();
}

std::string write_two_cluster_dataset(const std::string& dir, const SynthOptions& opt) {
    fs::create_directories(dir);
    Rng rng(derive_seed(opt.seed, SeedStream::Data));
    std::string csv = "x0,x1,label\n";
    for (int i = 0; i < opt.majority; ++i)
        csv += format_double(rng.normal()) + ',' + format_double(rng.normal()) + ",maj\n";
    for (int i = 0; i < opt.minority; ++i)
        csv += format_double(rng.normal() + 2.5) + ',' + format_double(rng.normal()) + ",min\n";
    write_text_file(fs::path(dir) / "clusters.csv", csv);
    const std::string manifest = dataset_manifest_json(
        "flat", {"clusters.csv"}, "label", {{"maj", 0}, {"min", 1}});
    write_text_file(fs::path(dir) / "dataset.json", manifest);
    write_experiment_templates(dir, false, true);
    return (fs::path(dir) / "dataset.json").string();
}

} // namespace cgpc
