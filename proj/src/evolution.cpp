#include "cgpc/evolution.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "cgpc/errors.hpp"

namespace cgpc {

void EvolutionConfig::validate() const {
    if (n_nodes < 1) throw ConfigError("evolution: nodes must be >= 1");
    if (!(mutation_rate > 0.0 && mutation_rate <= 1.0))
        throw ConfigError("evolution: mutation rate must be in (0, 1]");
    if (max_iterations < 0) throw ConfigError("evolution: iterations must be >= 0");
    if (offspring_count < 1) throw ConfigError("evolution: lambda must be >= 1");
    if (recurrence_probability < 0.0 || recurrence_probability > 1.0)
        throw ConfigError("evolution: recurrence probability must be in [0, 1]");
    if (static_update_passes < 1) throw ConfigError("evolution: static passes must be >= 1");
}

Evaluator::Evaluator(const Genotype& genotype, const FunctionSet& fs) : fs_(&fs) {
    bind(genotype);
}

void Evaluator::bind(const Genotype& genotype) {
    g_ = &genotype;
    if (fs_ == nullptr) fs_ = &FunctionSet::standard();
    active_ = active_nodes(genotype);
    state_.assign(static_cast<std::size_t>(genotype.n_nodes), 0.0);
}

void Evaluator::reset_state() {
    for (int node : active_) state_[static_cast<std::size_t>(node)] = 0.0;
}

double Evaluator::read(int address, std::span<const double> inputs) const {
    return address < g_->n_inputs ? inputs[static_cast<std::size_t>(address)]
                                  : state_[static_cast<std::size_t>(address - g_->n_inputs)];
}

void Evaluator::sweep(std::span<const double> inputs) {
    for (int node : active_) {
        const auto& gene = g_->nodes[static_cast<std::size_t>(node)];
        // Feed-forward genotypes may never read at or above their own address.
        assert(g_->recurrent ||
               (gene.conn[0] < g_->n_inputs + node && gene.conn[1] < g_->n_inputs + node));
        state_[static_cast<std::size_t>(node)] =
            apply_op(fs_->op(gene.function), read(gene.conn[0], inputs), read(gene.conn[1], inputs));
    }
}

double Evaluator::eval_static(std::span<const double> inputs, int passes) {
    assert(g_ != nullptr);
    assert(static_cast<int>(inputs.size()) == g_->n_inputs);
    reset_state();
    for (int p = 0; p < passes; ++p) sweep(inputs);
    return read(g_->output_gene, inputs);
}

double Evaluator::eval_sequential(const Matrix& input_matrix) {
    assert(g_ != nullptr);
    assert(input_matrix.cols() == g_->n_inputs);
    assert(input_matrix.rows() >= 1);
    reset_state();
    for (int t = 0; t < input_matrix.rows(); ++t) sweep(input_matrix.row(t));
    return read(g_->output_gene, input_matrix.row(input_matrix.rows() - 1));
}

namespace {

// Connection gene for node `node`: feed-forward range [0, n_inputs + node),
// or the full address range with probability `recurrence_probability`. Node
// 0 of a feed-forward genotype can only read inputs.
int draw_connection(int n_inputs, int n_nodes, int node, double recurrence_probability,
                    Rng& rng) {
    if (recurrence_probability > 0.0 && rng.bernoulli(recurrence_probability))
        return static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n_inputs + n_nodes)));
    return static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n_inputs + node)));
}

} // namespace

Genotype random_genotype(const EvolutionConfig& cfg, int n_inputs, Rng& rng,
                         const FunctionSet& fs) {
    assert(n_inputs >= 1);
    Genotype g;
    g.n_inputs = n_inputs;
    g.n_nodes = cfg.n_nodes;
    g.recurrent = cfg.recurrence_probability > 0.0;
    g.nodes.resize(static_cast<std::size_t>(cfg.n_nodes));
    for (int i = 0; i < cfg.n_nodes; ++i) {
        auto& node = g.nodes[static_cast<std::size_t>(i)];
        node.function = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(fs.size())));
        node.conn[0] = draw_connection(n_inputs, cfg.n_nodes, i, cfg.recurrence_probability, rng);
        node.conn[1] = draw_connection(n_inputs, cfg.n_nodes, i, cfg.recurrence_probability, rng);
    }
    g.output_gene = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(g.address_count())));
    return g;
}

Genotype mutate(const Genotype& parent, double rate, double recurrence_probability,
                Rng& rng, const FunctionSet& fs, MutationStats* stats) {
    Genotype child = parent;
    int resampled = 0;
    for (int i = 0; i < child.n_nodes; ++i) {
        auto& node = child.nodes[static_cast<std::size_t>(i)];
        if (rng.bernoulli(rate)) {
            node.function = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(fs.size())));
            ++resampled;
        }
        for (int& conn : node.conn) {
            if (rng.bernoulli(rate)) {
                conn = draw_connection(child.n_inputs, child.n_nodes, i, recurrence_probability, rng);
                ++resampled;
            }
        }
    }
    if (rng.bernoulli(rate)) {
        child.output_gene =
            static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(child.address_count())));
        ++resampled;
    }
    if (stats != nullptr) stats->genes_resampled = resampled;
    return child;
}

double raw_output(const Genotype& genotype, const Sample& sample, const Layout& layout,
                  const EvolutionConfig& cfg, const FunctionSet& fs) {
    assert(layout.matches(sample.features));
    Evaluator ev(genotype, fs);
    if (layout.kind == Layout::Kind::Flat)
        return ev.eval_static(sample.features.row(0), cfg.static_update_passes);
    return ev.eval_sequential(sample.features);
}

int predict(const Genotype& genotype, const Sample& sample, const Layout& layout,
            const EvolutionConfig& cfg, const FunctionSet& fs) {
    return raw_output(genotype, sample, layout, cfg, fs) > cfg.decision_threshold ? 1 : 0;
}

namespace {

double accuracy_of(Evaluator& ev, std::span<const Sample> samples, const Layout& layout,
                   const EvolutionConfig& cfg) {
    std::size_t correct = 0;
    for (const Sample& s : samples) {
        const double out = layout.kind == Layout::Kind::Flat
                               ? ev.eval_static(s.features.row(0), cfg.static_update_passes)
                               : ev.eval_sequential(s.features);
        const int cls = out > cfg.decision_threshold ? 1 : 0;
        if (cls == s.label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

} // namespace

double fitness(const Genotype& genotype, std::span<const Sample> samples,
               const Layout& layout, const EvolutionConfig& cfg, const FunctionSet& fs) {
    if (samples.empty()) throw std::invalid_argument("fitness: empty sample set");
    Evaluator ev(genotype, fs);
    return accuracy_of(ev, samples, layout, cfg);
}

EngineResult evolve_engine(int n_inputs, const EvolutionConfig& cfg,
                           const std::function<double(const Genotype&)>& fitness_fn,
                           double target_fitness,
                           const std::function<double(const Genotype&)>& selection_fn,
                           const FunctionSet& fs) {
    cfg.validate();
    Rng rng(cfg.seed);

    EngineResult result;
    Genotype parent = random_genotype(cfg, n_inputs, rng, fs);
    double parent_fitness = fitness_fn(parent);
    double parent_score = selection_fn ? selection_fn(parent) : 0.0;
    std::vector<int> parent_active = active_nodes(parent);

    result.history.push_back({0, parent_fitness});
    result.best_selected = parent;
    result.best_selected_fitness = parent_fitness;
    result.best_selected_score = parent_score;

    int iter = 0;
    while (iter < cfg.max_iterations && parent_fitness < target_fitness) {
        ++iter;
        Genotype best_child;
        double best_child_fitness = 0.0;
        bool best_child_same_phenotype = false;
        bool have_child = false;
        for (int j = 0; j < cfg.offspring_count; ++j) {
            Genotype child = mutate(parent, cfg.mutation_rate, cfg.recurrence_probability, rng, fs);
            // A child whose parent-active genes are untouched decodes to the
            // same program; its fitness is inherited without re-evaluation.
            const bool same = phenotype_equal(parent, child, parent_active);
            const double child_fitness = same ? parent_fitness : fitness_fn(child);
            if (!have_child || child_fitness > best_child_fitness) {
                have_child = true;
                best_child = std::move(child);
                best_child_fitness = child_fitness;
                best_child_same_phenotype = same;
            }
        }
        // Neutral drift: the best offspring replaces the parent on ties.
        if (best_child_fitness >= parent_fitness) {
            const bool improved = best_child_fitness > parent_fitness;
            parent = std::move(best_child);
            if (!best_child_same_phenotype) {
                parent_active = active_nodes(parent);
                if (selection_fn) parent_score = selection_fn(parent);
            }
            parent_fitness = best_child_fitness;
            if (improved) result.history.push_back({iter, parent_fitness});
            if (selection_fn &&
                (parent_score > result.best_selected_score ||
                 (parent_score == result.best_selected_score &&
                  parent_fitness > result.best_selected_fitness))) {
                result.best_selected = parent;
                result.best_selected_fitness = parent_fitness;
                result.best_selected_score = parent_score;
            }
        }
    }

    result.iterations_run = iter;
    if (!selection_fn) {
        result.best_selected = parent;
        result.best_selected_fitness = parent_fitness;
        result.best_selected_score = parent_fitness;
    }
    result.final_parent = std::move(parent);
    result.final_fitness = parent_fitness;
    return result;
}

EvolutionResult evolve(std::span<const Sample> train, std::span<const Sample> validation,
                       const Layout& layout, const EvolutionConfig& cfg, const FunctionSet& fs) {
    if (train.empty()) throw std::invalid_argument("evolve: empty training set");

    auto train_fitness = [&](const Genotype& g) {
        Evaluator ev(g, fs);
        return accuracy_of(ev, train, layout, cfg);
    };
    std::function<double(const Genotype&)> validation_score;
    if (!validation.empty()) {
        validation_score = [&](const Genotype& g) {
            Evaluator ev(g, fs);
            return accuracy_of(ev, validation, layout, cfg);
        };
    }

    EngineResult engine = evolve_engine(layout.input_count(), cfg, train_fitness, 1.0,
                                        validation_score, fs);

    EvolutionResult result;
    result.best_genotype = std::move(engine.best_selected);
    result.best_train_accuracy = engine.best_selected_fitness;
    if (!validation.empty()) result.best_validation_accuracy = engine.best_selected_score;
    result.history = std::move(engine.history);
    result.iterations_run = engine.iterations_run;
    return result;
}

} // namespace cgpc
