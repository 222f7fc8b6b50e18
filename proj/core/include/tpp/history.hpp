#pragma once

#include <filesystem>
#include <fstream>
#include <vector>

#include "tpp/ir.hpp"

namespace tpp {

inline constexpr const char* kHistoryHeader =
    "internal_iter,epoch,phase,L1,L2,sum,phi,theta,cond_ok";

/// Streams training history to a CSV file, one row per internal iteration.
/// The header goes out on construction and every row is flushed to disk, so
/// a run that dies mid-training still leaves a usable file behind.
class HistoryCsvWriter {
public:
  explicit HistoryCsvWriter(const std::filesystem::path& path);

  void write(const HistoryRecord& rec);

private:
  std::ofstream out_;
};

void write_history_csv(const std::filesystem::path& path,
                       const std::vector<HistoryRecord>& rows);

/// Per-outer-iteration bookkeeping, one row per completed epoch.
void write_epochs_csv(const std::filesystem::path& path,
                      const std::vector<EpochRecord>& epochs);

} // namespace tpp
