#include "obcfp/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace obcfp::io {
namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
bool parse(std::string_view s, T& out) {
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

Status parse_status(std::string_view s, bool& ok) {
    ok = true;
    if (s == "holder") return Status::Holder;
    if (s == "bidder") return Status::Bidder;
    if (s == "asker") return Status::Asker;
    ok = false;
    return Status::Holder;
}

std::ifstream open_with_header(const std::filesystem::path& path, const char* header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorruptInput("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw CorruptInput(path.string() + ":1: expected header `" + header + "`");
    return in;
}

[[noreturn]] void bad_row(const std::filesystem::path& path, std::size_t line_no, const std::string& why) {
    throw CorruptInput(path.string() + ":" + std::to_string(line_no) + ": " + why);
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

void write_timeseries(std::ostream& out, std::span<const StepRecord> series) {
    out << kTimeSeriesHeader << '\n';
    for (const auto& r : series) {
        out << r.t << ',' << format_double(r.price) << ',' << format_double(r.ret) << ',' << r.n_bids
            << ',' << r.n_asks << ',' << r.n_trades << ',' << r.avalanche_size << '\n';
    }
}

void write_avalanches(std::ostream& out, std::span<const AvalancheLogRow> rows) {
    out << kAvalancheHeader << '\n';
    for (const auto& r : rows)
        out << r.t << ',' << r.size << ',' << r.initiator_count << ',' << to_string(r.imitated) << '\n';
}

void write_snapshot(std::ostream& out, const AgentSnapshot& snap) {
    out << kSnapshotHeader << '\n';
    for (std::size_t i = 0; i < snap.traders.size(); ++i) {
        const Trader& t = snap.traders[i];
        out << t.id << ',' << to_string(t.kind) << ',' << format_double(t.money) << ',' << t.shares << ','
            << format_double(t.wealth(snap.price)) << ',' << format_double(snap.info[i]) << ','
            << to_string(t.status) << '\n';
    }
}

std::vector<StepRecord> read_timeseries(const std::filesystem::path& path) {
    auto in = open_with_header(path, kTimeSeriesHeader);
    std::vector<StepRecord> rows;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 7) bad_row(path, line_no, "expected 7 fields, got " + std::to_string(f.size()));
        StepRecord r;
        if (!parse(f[0], r.t) || !parse(f[1], r.price) || !parse(f[2], r.ret) || !parse(f[3], r.n_bids) ||
            !parse(f[4], r.n_asks) || !parse(f[5], r.n_trades) || !parse(f[6], r.avalanche_size))
            bad_row(path, line_no, "unparseable field");
        if (!(r.price > 0.0)) bad_row(path, line_no, "non-positive price");
        if (!rows.empty() && r.t != rows.back().t + 1) bad_row(path, line_no, "non-consecutive step index");
        rows.push_back(r);
    }
    if (rows.empty()) throw CorruptInput(path.string() + ": no data rows");
    return rows;
}

std::vector<AvalancheLogRow> read_avalanches(const std::filesystem::path& path) {
    auto in = open_with_header(path, kAvalancheHeader);
    std::vector<AvalancheLogRow> rows;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 4) bad_row(path, line_no, "expected 4 fields, got " + std::to_string(f.size()));
        AvalancheLogRow r;
        bool ok = false;
        r.imitated = parse_status(f[3], ok);
        if (!ok || !parse(f[0], r.t) || !parse(f[1], r.size) || !parse(f[2], r.initiator_count))
            bad_row(path, line_no, "unparseable field");
        rows.push_back(r);
    }
    return rows;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << contents;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace obcfp::io
