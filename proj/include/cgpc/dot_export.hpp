#pragma once

#include <string>
#include <vector>

#include "cgpc/genotype.hpp"

namespace cgpc {

// Input indices read by any active node or by the output gene, ascending.
std::vector<int> used_inputs(const Genotype& genotype);

// Graphviz text for the decoded program: active nodes, the inputs they
// read, and an output marker. Edges carry the operand position; edges that
// read a same-or-later node (recurrent state) are dashed. The text is a
// deterministic function of the genotype.
std::string export_dot(const Genotype& genotype, const std::vector<std::string>& input_names,
                       const FunctionSet& fs = FunctionSet::standard());

} // namespace cgpc
