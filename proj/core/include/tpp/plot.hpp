#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include "tpp/ir.hpp"
#include "tpp/problems.hpp"

namespace tpp {

/// Static SVG with log-scale curves of the L1, L2 and L1+L2 history columns
/// over internal iterations.
void write_loss_svg(const std::filesystem::path& path,
                    const std::vector<HistoryRecord>& history);

/// Static SVG comparing the predicted solution against the reference at the
/// problem's report slices, one panel per slice.
void write_slices_svg(const std::filesystem::path& path,
                      const Problem& problem,
                      const std::function<double(double, double)>& predictor,
                      int grid_points);

} // namespace tpp
