#include "cgpc/genotype.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cgpc/errors.hpp"

namespace cgpc {

double apply_op(Op op, double a, double b) {
    switch (op) {
    case Op::Add:
        return a + b;
    case Op::Sub:
        return a - b;
    case Op::Mul:
        return a * b;
    case Op::DivProtected:
        return std::fabs(b) < 1e-9 ? a : a / b;
    }
    return 0.0;
}

const FunctionSet& FunctionSet::standard() {
    static const FunctionSet fs;
    return fs;
}

const char* FunctionSet::symbol(int function_id) const {
    switch (ops_[function_id]) {
    case Op::Add:
        return "+";
    case Op::Sub:
        return "-";
    case Op::Mul:
        return "×";
    case Op::DivProtected:
        return "÷";
    }
    return "?";
}

std::vector<int> active_nodes(const Genotype& g) {
    std::vector<char> seen(static_cast<std::size_t>(g.n_nodes), 0);
    std::vector<int> stack;
    if (g.output_gene >= g.n_inputs) {
        stack.push_back(g.output_gene - g.n_inputs);
        seen[static_cast<std::size_t>(g.output_gene - g.n_inputs)] = 1;
    }
    while (!stack.empty()) {
        int node = stack.back();
        stack.pop_back();
        for (int conn : g.nodes[static_cast<std::size_t>(node)].conn) {
            if (conn < g.n_inputs) continue;
            int ref = conn - g.n_inputs;
            if (!seen[static_cast<std::size_t>(ref)]) {
                seen[static_cast<std::size_t>(ref)] = 1;
                stack.push_back(ref);
            }
        }
    }
    std::vector<int> active;
    for (int i = 0; i < g.n_nodes; ++i)
        if (seen[static_cast<std::size_t>(i)]) active.push_back(i);
    return active;
}

bool phenotype_equal(const Genotype& parent, const Genotype& child,
                     const std::vector<int>& parent_active) {
    if (child.output_gene != parent.output_gene) return false;
    for (int node : parent_active) {
        const auto i = static_cast<std::size_t>(node);
        if (!(child.nodes[i] == parent.nodes[i])) return false;
    }
    return true;
}

namespace {

void validate_genotype(const Genotype& g) {
    if (g.n_inputs < 1) throw InputError("genotype: n_inputs must be >= 1");
    if (g.n_nodes < 1) throw InputError("genotype: n_nodes must be >= 1");
    if (static_cast<int>(g.nodes.size()) != g.n_nodes)
        throw InputError("genotype: gene list length does not match n_nodes");
    const int addresses = g.n_inputs + g.n_nodes;
    for (int i = 0; i < g.n_nodes; ++i) {
        const auto& node = g.nodes[static_cast<std::size_t>(i)];
        if (node.function < 0 || node.function >= FunctionSet::standard().size())
            throw InputError("genotype: function id out of range at node " + std::to_string(i));
        for (int conn : node.conn) {
            if (conn < 0 || conn >= addresses)
                throw InputError("genotype: connection address out of range at node " +
                                 std::to_string(i));
            if (!g.recurrent && conn >= g.n_inputs + i)
                throw InputError("genotype: feed-forward genotype has a recurrent connection at node " +
                                 std::to_string(i));
        }
    }
    if (g.output_gene < 0 || g.output_gene >= addresses)
        throw InputError("genotype: output address out of range");
}

} // namespace

std::string genotype_to_json(const Genotype& g) {
    nlohmann::json j;
    j["n_inputs"] = g.n_inputs;
    j["n_nodes"] = g.n_nodes;
    auto genes = nlohmann::json::array();
    for (const auto& node : g.nodes)
        genes.push_back({node.function, node.conn[0], node.conn[1]});
    j["genes"] = std::move(genes);
    j["output"] = g.output_gene;
    j["recurrent"] = g.recurrent;
    return j.dump(2) + "\n";
}

Genotype genotype_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("genotype: invalid JSON: ") + e.what());
    }
    Genotype g;
    try {
        g.n_inputs = j.at("n_inputs").get<int>();
        g.n_nodes = j.at("n_nodes").get<int>();
        g.output_gene = j.at("output").get<int>();
        g.recurrent = j.at("recurrent").get<bool>();
        for (const auto& gene : j.at("genes")) {
            if (!gene.is_array() || gene.size() != 3)
                throw InputError("genotype: each gene must be [function, conn0, conn1]");
            Genotype::NodeGene node;
            node.function = gene[0].get<int>();
            node.conn[0] = gene[1].get<int>();
            node.conn[1] = gene[2].get<int>();
            g.nodes.push_back(node);
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("genotype: missing or mistyped field: ") + e.what());
    }
    validate_genotype(g);
    return g;
}

void save_genotype(const Genotype& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open for writing: " + path);
    out << genotype_to_json(g);
}

Genotype load_genotype(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open genotype file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return genotype_from_json(buf.str());
}

} // namespace cgpc
