#include "tpp/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>

#include "tpp/errors.hpp"

namespace tpp {

namespace {

constexpr std::uint32_t kMaxWidths = 1024;
constexpr std::uint32_t kMaxWidth = 1u << 20;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_f64(std::string& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

class ByteReader {
public:
  ByteReader(std::string data, std::string origin)
      : data_(std::move(data)), origin_(std::move(origin)) {}

  std::uint32_t u32() {
    require(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(
               static_cast<unsigned char>(data_[pos_ + i]))
           << (8 * i);
    pos_ += 4;
    return v;
  }

  std::uint64_t u64() {
    require(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(data_[pos_ + i]))
           << (8 * i);
    pos_ += 8;
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  bool exhausted() const { return pos_ == data_.size(); }

  [[noreturn]] void corrupt(const std::string& why) const {
    throw ConfigError("corrupt checkpoint " + origin_ + ": " + why);
  }

private:
  void require(std::size_t n) {
    if (data_.size() - pos_ < n) corrupt("truncated");
  }

  std::string data_;
  std::string origin_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint: " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) throw ConfigError("cannot read checkpoint: " + path.string());
  return data;
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open file for writing: " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.flush();
  if (!out) throw ConfigError("write failed: " + path.string());
}

} // namespace

void save_checkpoint(const std::filesystem::path& path,
                     const ParamVector& params) {
  if (params.values.size() != ParamVector::param_count(params.widths))
    throw ConfigError("parameter vector inconsistent with its widths");
  std::string data;
  data.reserve(4 + 4 * params.widths.size() + 8 * params.values.size());
  put_u32(data, static_cast<std::uint32_t>(params.widths.size()));
  for (int w : params.widths) put_u32(data, static_cast<std::uint32_t>(w));
  for (double v : params.values) put_f64(data, v);
  write_file(path, data);
}

ParamVector load_checkpoint(const std::filesystem::path& path) {
  ByteReader in(read_file(path), path.string());
  const std::uint32_t n_widths = in.u32();
  if (n_widths < 2 || n_widths > kMaxWidths)
    in.corrupt("implausible width count " + std::to_string(n_widths));
  ParamVector params;
  params.widths.reserve(n_widths);
  for (std::uint32_t i = 0; i < n_widths; ++i) {
    const std::uint32_t w = in.u32();
    if (w == 0 || w > kMaxWidth)
      in.corrupt("implausible layer width " + std::to_string(w));
    params.widths.push_back(static_cast<int>(w));
  }
  const std::size_t n = ParamVector::param_count(params.widths);
  params.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) params.values.push_back(in.f64());
  if (!in.exhausted()) in.corrupt("trailing bytes");
  return params;
}

void save_adam_state(const std::filesystem::path& path, const Adam& opt) {
  const auto& m = opt.first_moment();
  const auto& v = opt.second_moment();
  std::string data;
  data.reserve(16 + 16 * m.size());
  put_u64(data, static_cast<std::uint64_t>(opt.step_count()));
  put_u64(data, static_cast<std::uint64_t>(m.size()));
  for (double x : m) put_f64(data, x);
  for (double x : v) put_f64(data, x);
  write_file(path, data);
}

void load_adam_state(const std::filesystem::path& path, Adam& opt) {
  ByteReader in(read_file(path), path.string());
  const std::uint64_t steps = in.u64();
  const std::uint64_t n = in.u64();
  if (steps > static_cast<std::uint64_t>(std::numeric_limits<long>::max()))
    in.corrupt("implausible step count");
  if (n > (std::uint64_t{1} << 32)) in.corrupt("implausible state length");
  std::vector<double> m(n), v(n);
  for (auto& x : m) x = in.f64();
  for (auto& x : v) x = in.f64();
  if (!in.exhausted()) in.corrupt("trailing bytes");
  opt.restore(std::move(m), std::move(v), static_cast<long>(steps));
}

} // namespace tpp
