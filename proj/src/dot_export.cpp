#include "cgpc/dot_export.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace cgpc {

std::vector<int> used_inputs(const Genotype& g) {
    std::set<int> inputs;
    for (int node : active_nodes(g))
        for (int conn : g.nodes[static_cast<std::size_t>(node)].conn)
            if (conn < g.n_inputs) inputs.insert(conn);
    if (g.output_gene < g.n_inputs) inputs.insert(g.output_gene);
    return {inputs.begin(), inputs.end()};
}

namespace {

std::string escape_label(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string vertex_id(int address, int n_inputs) {
    return address < n_inputs ? "in" + std::to_string(address)
                              : "n" + std::to_string(address - n_inputs);
}

} // namespace

std::string export_dot(const Genotype& g, const std::vector<std::string>& input_names,
                       const FunctionSet& fs) {
    if (static_cast<int>(input_names.size()) != g.n_inputs)
        throw std::invalid_argument("export_dot: one name per input required");

    const std::vector<int> active = active_nodes(g);
    const std::vector<int> inputs = used_inputs(g);

    std::ostringstream out;
    out << "digraph cgp {\n";
    out << "  rankdir=LR;\n";
    for (int i : inputs)
        out << "  in" << i << " [shape=box, label=\""
            << escape_label(input_names[static_cast<std::size_t>(i)]) << "\"];\n";
    for (int node : active)
        out << "  n" << node << " [label=\""
            << fs.symbol(g.nodes[static_cast<std::size_t>(node)].function) << "\"];\n";
    out << "  out [shape=doublecircle, label=\"out\"];\n";
    for (int node : active) {
        const auto& gene = g.nodes[static_cast<std::size_t>(node)];
        for (int operand = 0; operand < 2; ++operand) {
            const int source = gene.conn[operand];
            out << "  " << vertex_id(source, g.n_inputs) << " -> n" << node << " [label=\""
                << operand << "\"";
            // Same-or-later sources read previous-sweep state.
            if (source >= g.n_inputs + node) out << ", style=dashed";
            out << "];\n";
        }
    }
    out << "  " << vertex_id(g.output_gene, g.n_inputs) << " -> out;\n";
    out << "}\n";
    return out.str();
}

} // namespace cgpc
