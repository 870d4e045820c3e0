#pragma once

#include <filesystem>

#include "resobeam/cavity_sim.hpp"

namespace resobeam {

/// Columns: time_s, then one per channel in block order.
void write_trace_csv(const RecordBlock& block, const std::filesystem::path& path);

/// Binary trace layout (little-endian):
///   char[8] "RBTRACE\0", u32 version (1), u32 channel count,
///   f64 dt, f64 t_start, u64 samples per channel,
///   per channel: u16 name length, name, u16 unit length, unit,
///   then each channel's samples as f64, channel after channel.
void write_trace_binary(const RecordBlock& block, const std::filesystem::path& path);
RecordBlock read_trace_binary(const std::filesystem::path& path);

inline constexpr std::uint32_t kTraceVersion = 1;

}  // namespace resobeam
