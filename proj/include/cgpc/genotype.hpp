#pragma once

#include <string>
#include <vector>

namespace cgpc {

// The four arithmetic primitives. DivProtected passes the numerator through
// when the denominator is within 1e-9 of zero, so node values stay finite
// under division.
enum class Op : int {
    Add = 0,
    Sub = 1,
    Mul = 2,
    DivProtected = 3,
};

double apply_op(Op op, double a, double b);

// Ordered set of node functions, all binary. The default set is fixed; the
// type exists so the node function table is explicit at call sites.
class FunctionSet {
public:
    FunctionSet() : ops_{Op::Add, Op::Sub, Op::Mul, Op::DivProtected} {}
    explicit FunctionSet(std::vector<Op> ops) : ops_(std::move(ops)) {}

    static const FunctionSet& standard();

    int size() const { return static_cast<int>(ops_.size()); }
    Op op(int function_id) const { return ops_[function_id]; }
    // Display symbol for DOT labels: +, -, x(multiplication sign), /(division sign).
    const char* symbol(int function_id) const;

private:
    std::vector<Op> ops_;
};

// Indexed CGP program. Addresses 0..n_inputs-1 are input terminals; address
// n_inputs + i is node i. With recurrent == false every node may only read
// addresses below its own (acyclic); with recurrent == true any address is
// legal, including the node itself and later nodes.
struct Genotype {
    struct NodeGene {
        int function = 0;
        int conn[2] = {0, 0};

        friend bool operator==(const NodeGene&, const NodeGene&) = default;
    };

    int n_inputs = 0;
    int n_nodes = 0;
    std::vector<NodeGene> nodes;
    int output_gene = 0;
    bool recurrent = false;

    int address_count() const { return n_inputs + n_nodes; }
    // 3 genes per node plus the output gene.
    int gene_count() const { return 3 * n_nodes + 1; }

    friend bool operator==(const Genotype&, const Genotype&) = default;
};

// Node indices (0-based, not addresses) reachable backward from the output
// gene, ascending. For recurrent genotypes reachability follows cycles.
std::vector<int> active_nodes(const Genotype& genotype);

// True when the child's decoded program is guaranteed identical to the
// parent's: same output gene and identical genes on every parent-active
// node. `parent_active` must be active_nodes(parent).
bool phenotype_equal(const Genotype& parent, const Genotype& child,
                     const std::vector<int>& parent_active);

// JSON round-trip: {"n_inputs", "n_nodes", "genes": [[f,c0,c1],...],
// "output", "recurrent"}. Loading validates all address invariants.
std::string genotype_to_json(const Genotype& genotype);
Genotype genotype_from_json(const std::string& json_text);
void save_genotype(const Genotype& genotype, const std::string& path);
Genotype load_genotype(const std::string& path);

} // namespace cgpc
