#pragma once

// File formats: time series, avalanche log and agent snapshot CSVs.
// Doubles are written in shortest round-trip form so output is byte-stable.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "obcfp/engine.hpp"

namespace obcfp::io {

class CorruptInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kTimeSeriesHeader = "t,price,ret,n_bid,n_ask,n_trades,avalanche_size";
inline constexpr const char* kAvalancheHeader = "t,size,initiator_count,imitated_status";
inline constexpr const char* kSnapshotHeader = "id,kind,money,shares,wealth,info,status";

std::string format_double(double v);

void write_timeseries(std::ostream& out, std::span<const StepRecord> series);
void write_avalanches(std::ostream& out, std::span<const AvalancheLogRow> rows);
void write_snapshot(std::ostream& out, const AgentSnapshot& snap);

/// Throws CorruptInput naming the file and 1-based line of the first bad row.
std::vector<StepRecord> read_timeseries(const std::filesystem::path& path);
std::vector<AvalancheLogRow> read_avalanches(const std::filesystem::path& path);

/// Writes `contents` to a sibling temporary and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace obcfp::io
