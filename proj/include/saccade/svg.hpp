#pragma once

#include <string>
#include <vector>

#include "saccade/tsne.hpp"

namespace saccade {

/// Figure-style scatter: background points in red (#d62728), control results
/// in blue (#1f77b4), radius 2, on a 600x600 canvas with a 5% margin.
/// labels[i] == 0 marks background, 1 marks control. Output bytes are a pure
/// function of the input.
std::string render_scatter_svg(const Embedding2D& embedding, const std::vector<int>& labels);
void emit_scatter_svg(const Embedding2D& embedding, const std::vector<int>& labels,
                      const std::string& path);

/// Single-trace line plot on a 600x300 canvas, same determinism contract.
std::string render_line_svg(const std::vector<double>& values);
void emit_line_svg(const std::vector<double>& values, const std::string& path);

} // namespace saccade
