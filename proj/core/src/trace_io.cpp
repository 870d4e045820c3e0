#include "resobeam/trace_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "resobeam/csv.hpp"

namespace resobeam {
namespace {

static_assert(std::endian::native == std::endian::little, "trace format assumes a little-endian host");

constexpr char kMagic[8] = {'R', 'B', 'T', 'R', 'A', 'C', 'E', '\0'};

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in, const std::filesystem::path& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw std::runtime_error(path.string() + ": truncated trace");
  return v;
}

void put_string(std::ofstream& out, const std::string& s) {
  if (s.size() > 0xffff) throw std::length_error("trace label too long");
  put<std::uint16_t>(out, static_cast<std::uint16_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::ifstream& in, const std::filesystem::path& path) {
  const auto n = get<std::uint16_t>(in, path);
  std::string s(n, '\0');
  if (!in.read(s.data(), n)) throw std::runtime_error(path.string() + ": truncated trace");
  return s;
}

std::size_t common_length(const RecordBlock& block) {
  if (block.traces.empty()) return 0;
  const std::size_t n = block.traces.front().size();
  for (const auto& t : block.traces) {
    if (t.size() != n) throw std::logic_error("record block channels differ in length");
  }
  return n;
}

}  // namespace

void write_trace_csv(const RecordBlock& block, const std::filesystem::path& path) {
  std::vector<std::string> header{"time_s"};
  for (Channel ch : block.channels) header.push_back(channel_name(ch));
  CsvWriter csv(path, header);
  const std::size_t n = common_length(block);
  std::vector<double> row(header.size());
  for (std::size_t k = 0; k < n; ++k) {
    row[0] = block.traces.front().time_at(k);
    for (std::size_t c = 0; c < block.traces.size(); ++c) row[c + 1] = block.traces[c].samples[k];
    csv.row(row);
  }
  csv.close();
}

void write_trace_binary(const RecordBlock& block, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot create " + path.string());
  const std::size_t n = common_length(block);
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kTraceVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(block.channels.size()));
  put<double>(out, block.traces.empty() ? 0.0 : block.traces.front().dt);
  put<double>(out, block.traces.empty() ? 0.0 : block.traces.front().t_start);
  put<std::uint64_t>(out, n);
  for (std::size_t c = 0; c < block.channels.size(); ++c) {
    put_string(out, channel_name(block.channels[c]));
    put_string(out, block.traces[c].unit);
  }
  for (const auto& t : block.traces) {
    out.write(reinterpret_cast<const char*>(t.samples.data()), static_cast<std::streamsize>(n * sizeof(double)));
  }
  out.close();
  if (out.fail()) throw std::runtime_error("write failed: " + path.string());
}

RecordBlock read_trace_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw std::runtime_error(path.string() + ": not a trace file");
  }
  const auto version = get<std::uint32_t>(in, path);
  if (version != kTraceVersion) {
    throw std::runtime_error(path.string() + ": unsupported trace version " + std::to_string(version));
  }
  const auto channels = get<std::uint32_t>(in, path);
  const double dt = get<double>(in, path);
  const double t_start = get<double>(in, path);
  const auto n = get<std::uint64_t>(in, path);

  RecordBlock block;
  for (std::uint32_t c = 0; c < channels; ++c) {
    const std::string name = get_string(in, path);
    const auto ch = parse_channel(name);
    if (!ch) throw std::runtime_error(path.string() + ": unknown channel " + name);
    Waveform w;
    w.dt = dt;
    w.t_start = t_start;
    w.unit = get_string(in, path);
    block.channels.push_back(*ch);
    block.traces.push_back(std::move(w));
  }
  for (auto& t : block.traces) {
    t.samples.resize(n);
    if (!in.read(reinterpret_cast<char*>(t.samples.data()), static_cast<std::streamsize>(n * sizeof(double)))) {
      throw std::runtime_error(path.string() + ": truncated trace");
    }
  }
  return block;
}

}  // namespace resobeam
