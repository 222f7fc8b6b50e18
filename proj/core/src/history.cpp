#include "tpp/history.hpp"

#include "tpp/csv.hpp"
#include "tpp/errors.hpp"

namespace tpp {

namespace {

std::string history_row(const HistoryRecord& rec) {
  std::string row;
  row += format_long(rec.internal_iter);
  row += ',';
  row += format_long(rec.epoch);
  row += ',';
  row += rec.phase;
  row += ',';
  row += format_double(rec.l1);
  row += ',';
  row += format_double(rec.l2);
  row += ',';
  row += format_double(rec.sum);
  row += ',';
  row += format_double(rec.phi);
  row += ',';
  row += format_double(rec.theta);
  row += ',';
  row += rec.cond_ok ? '1' : '0';
  row += '\n';
  return row;
}

} // namespace

HistoryCsvWriter::HistoryCsvWriter(const std::filesystem::path& path)
    : out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_)
    throw ConfigError("cannot open history file for writing: " + path.string());
  out_ << kHistoryHeader << '\n';
  out_.flush();
}

void HistoryCsvWriter::write(const HistoryRecord& rec) {
  out_ << history_row(rec);
  out_.flush();
  if (!out_) throw ConfigError("write to history file failed");
}

void write_history_csv(const std::filesystem::path& path,
                       const std::vector<HistoryRecord>& rows) {
  HistoryCsvWriter writer(path);
  for (const auto& rec : rows) writer.write(rec);
}

void write_epochs_csv(const std::filesystem::path& path,
                      const std::vector<EpochRecord>& epochs) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw ConfigError("cannot open epochs file for writing: " + path.string());
  out << "epoch,L1_x,L2_x,L1_y,L2_y,theta_prev,theta_next,"
         "L1_next,L2_next,phi_next,restoration_ok,optimization_ok,"
         "restoration_iters,optimization_iters\n";
  for (const auto& e : epochs) {
    out << format_long(e.epoch) << ',' << format_double(e.l1x) << ','
        << format_double(e.l2x) << ',' << format_double(e.l1y) << ','
        << format_double(e.l2y) << ',' << format_double(e.theta_prev) << ','
        << format_double(e.theta_next) << ',' << format_double(e.l1_next)
        << ',' << format_double(e.l2_next) << ',' << format_double(e.phi_next)
        << ',' << (e.restoration_ok ? '1' : '0') << ','
        << (e.optimization_ok ? '1' : '0') << ','
        << format_long(e.restoration_iters) << ','
        << format_long(e.optimization_iters) << '\n';
  }
  if (!out) throw ConfigError("write to epochs file failed");
}

} // namespace tpp
