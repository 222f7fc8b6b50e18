#pragma once

#include <filesystem>

#include "tpp/adam.hpp"
#include "tpp/mlp.hpp"

namespace tpp {

/// Parameter checkpoint byte layout, everything little-endian:
///   u32        W, the number of layer widths
///   u32 x W    widths, input layer first
///   f64 x N    parameter values, N determined by the widths
/// A file that fails any structural check (short read, trailing bytes,
/// impossible widths) loads as ConfigError.
void save_checkpoint(const std::filesystem::path& path,
                     const ParamVector& params);
ParamVector load_checkpoint(const std::filesystem::path& path);

/// Optimizer state written alongside a parameter checkpoint:
///   u64 step count, u64 length n, f64 x n first moment, f64 x n second
///   moment, all little-endian.
void save_adam_state(const std::filesystem::path& path, const Adam& opt);
void load_adam_state(const std::filesystem::path& path, Adam& opt);

} // namespace tpp
