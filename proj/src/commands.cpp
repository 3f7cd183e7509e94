#include "obcfp/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "obcfp/io.hpp"

namespace obcfp::cli {
namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

class MissingInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string iso_utc(std::chrono::system_clock::time_point tp) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

std::string staging_name(const fs::path& out) {
    static std::atomic<std::uint64_t> counter{0};
    const auto tick = static_cast<std::uint64_t>(
        std::chrono::steady_clock::now().time_since_epoch().count());
    const auto tid = std::hash<std::thread::id>{}(std::this_thread::get_id());
    return "." + out.filename().string() + ".staging-" + hex64(tick ^ (tid * 0x9E3779B97F4A7C15ULL) ^ counter++);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    if (!f.flush()) throw std::runtime_error("write failed for " + path.string());
}

template <class Fn>
void write_stream(const fs::path& path, Fn&& fn) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    fn(f);
    if (!f.flush()) throw std::runtime_error("write failed for " + path.string());
}

bool replaceable(const fs::path& out) {
    if (!fs::exists(out)) return true;
    if (!fs::is_directory(out)) return false;
    return fs::is_empty(out) || fs::exists(out / "run_summary.json");
}

ojson final_aggregates(const RunResult& r) {
    std::int64_t shares = 0;
    double money = 0.0;
    double wealth = 0.0;
    std::uint32_t broke_of_shares = 0;
    for (const auto& t : r.final_traders) {
        shares += t.shares;
        money += t.money;
        wealth += t.wealth(r.final_price);
        if (t.shares == 0) ++broke_of_shares;
    }
    std::uint64_t trades = 0;
    double price_sum = 0.0;
    for (const auto& s : r.series) {
        trades += s.n_trades;
        price_sum += s.price;
    }
    std::uint64_t cascades = 0;
    for (const auto& a : r.avalanches)
        if (a.t >= 1) ++cascades;

    ojson j;
    j["steps"] = r.series.size();
    j["final_price"] = r.final_price;
    j["mean_price"] = r.series.empty() ? 0.0 : price_sum / static_cast<double>(r.series.size());
    j["total_trades"] = trades;
    j["total_shares"] = shares;
    j["total_money"] = money;
    j["mean_wealth"] = r.final_traders.empty() ? 0.0 : wealth / static_cast<double>(r.final_traders.size());
    j["agents_without_shares"] = broke_of_shares;
    j["post_transient_cascades"] = cascades;
    j["network_connected"] = r.network.is_connected();
    return j;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ojson read_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingInput("cannot open " + path.string());
    try {
        return ojson::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw io::CorruptInput(path.string() + ": " + e.what());
    }
}

struct Metrics {
    std::string source;
    double q = 0.0;
    std::optional<double> t_star;
    double kurtosis = 0.0;
};

std::optional<double> optional_number(const ojson& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

Metrics load_metrics(const fs::path& dir) {
    Metrics m;
    if (fs::exists(dir / "analysis.json")) {
        const ojson j = read_json(dir / "analysis.json");
        m.source = "analysis.json";
        m.q = j.at("q").get<double>();
        m.t_star = optional_number(j.at("t_star"));
        m.kurtosis = j.at("excess_kurtosis").get<double>();
        return m;
    }
    if (fs::exists(dir / "ensemble_summary.json")) {
        const ojson j = read_json(dir / "ensemble_summary.json");
        const ojson& med = j.at("median");
        m.source = "ensemble_summary.json";
        m.q = med.at("q").get<double>();
        m.t_star = optional_number(med.at("t_star"));
        m.kurtosis = med.at("excess_kurtosis").get<double>();
        return m;
    }
    throw MissingInput(dir.string() + ": no analysis.json or ensemble_summary.json (run `analyze` first)");
}

ojson metrics_json(const fs::path& dir, const Metrics& m) {
    ojson j;
    j["dir"] = dir.string();
    j["source"] = m.source;
    j["q"] = m.q;
    j["t_star"] = m.t_star ? ojson(*m.t_star) : ojson(nullptr);
    j["excess_kurtosis"] = m.kurtosis;
    return j;
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigParseError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ConfigValidationError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const io::CorruptInput& e) {
        err << "corrupt input: " << e.what() << '\n';
        return kRuntimeError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

}  // namespace

ModelConfig resolve_config(const std::optional<fs::path>& path, std::optional<std::uint64_t> seed) {
    ModelConfig cfg = path ? load_config(*path) : default_config();
    if (seed) cfg.seed = *seed;
    validate(cfg);
    return cfg;
}

RunResult run_to_directory(const ModelConfig& config, const RunRequest& request) {
    const fs::path out = request.out.lexically_normal();
    if (out.empty()) throw std::runtime_error("output directory not given");
    if (!replaceable(out))
        throw std::runtime_error(out.string() + " exists and is not an empty or previous run directory");

    const fs::path parent = out.has_parent_path() ? out.parent_path() : fs::path(".");
    fs::create_directories(parent);
    const fs::path stage = parent / staging_name(out);
    fs::create_directory(stage);

    try {
        const auto started = std::chrono::system_clock::now();
        const auto t0 = std::chrono::steady_clock::now();

        RunOptions opts;
        opts.snapshot_steps = request.snapshots;
        std::ofstream book_out;
        if (request.dump_book) {
            book_out.open(stage / "book_dump.csv", std::ios::binary);
            if (!book_out) throw std::runtime_error("cannot write book dump");
            opts.book_observer = [&](std::int64_t t, const OrderBook& book) {
                book_out << "# step " << t << '\n';
                book.write_csv(book_out);
            };
        }

        RunResult result = run(config, opts);
        if (book_out.is_open() && !book_out.flush()) throw std::runtime_error("book dump write failed");

        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto finished = std::chrono::system_clock::now();

        ojson files = ojson::array();
        write_stream(stage / "timeseries.csv", [&](std::ostream& f) { io::write_timeseries(f, result.series); });
        files.push_back("timeseries.csv");
        write_stream(stage / "avalanches.csv", [&](std::ostream& f) { io::write_avalanches(f, result.avalanches); });
        files.push_back("avalanches.csv");
        for (const auto& snap : result.snapshots) {
            const std::string name = "snapshot_t" + std::to_string(snap.t) + ".csv";
            write_stream(stage / name, [&](std::ostream& f) { io::write_snapshot(f, snap); });
            files.push_back(name);
        }
        if (request.dump_book) files.push_back("book_dump.csv");
        if (request.export_network) {
            write_edge_list(result.network, stage / "network.csv");
            files.push_back("network.csv");
        }

        const std::uint64_t hash = config_hash(config);
        ojson summary;
        summary["format_version"] = kFormatVersion;
        summary["run_id"] = hex64(hash ^ mix64(static_cast<std::uint64_t>(
                                                  started.time_since_epoch().count())));
        summary["seed"] = config.seed;
        summary["config_hash"] = hex64(hash);
        summary["config"] = to_json(config);
        summary["started_at"] = iso_utc(started);
        summary["finished_at"] = iso_utc(finished);
        summary["wall_time_s"] = wall;
        summary["files"] = files;
        summary["final"] = final_aggregates(result);
        write_text(stage / "run_summary.json", summary.dump(2) + "\n");

        if (fs::exists(out)) fs::remove_all(out);
        fs::rename(stage, out);
        return result;
    } catch (...) {
        std::error_code ec;
        fs::remove_all(stage, ec);
        throw;
    }
}

int cmd_run(const RunRequest& request, std::ostream& log, std::ostream& err) {
    return guarded(err, [&] {
        const ModelConfig cfg = resolve_config(request.config_path, request.seed);
        const RunResult r = run_to_directory(cfg, request);
        log << "run complete: seed " << cfg.seed << ", " << r.series.size() << " steps, final price "
            << r.final_price << " -> " << request.out.string() << '\n';
        return kOk;
    });
}

int cmd_ensemble(const EnsembleRequest& request, std::ostream& log, std::ostream& err) {
    return guarded(err, [&]() -> int {
        if (request.n_seeds == 0) {
            err << "usage error: --n-seeds must be at least 1\n";
            return kUsage;
        }
        const ModelConfig base = resolve_config(request.config_path, request.base_seed);
        fs::create_directories(request.out);

        struct Replica {
            std::uint64_t seed = 0;
            std::optional<AnalysisSummary> analysis;
            std::string error;
        };
        std::vector<Replica> replicas(request.n_seeds);
        for (std::uint32_t k = 0; k < request.n_seeds; ++k) replicas[k].seed = request.base_seed + k;

        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t k = next++; k < replicas.size(); k = next++) {
                Replica& rep = replicas[k];
                try {
                    ModelConfig cfg = base;
                    cfg.seed = rep.seed;
                    RunRequest rr;
                    rr.out = request.out / ("seed_" + std::to_string(rep.seed));
                    rr.snapshots = request.snapshots;
                    const RunResult result = run_to_directory(cfg, rr);
                    rep.analysis = analyze(result.series, result.avalanches);
                } catch (const std::exception& e) {
                    rep.error = e.what();
                }
            }
        };
        const unsigned jobs = std::max(1u, std::min<unsigned>(request.jobs, request.n_seeds));
        std::vector<std::thread> pool;
        for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();

        ojson per_seed = ojson::array();
        std::vector<double> qs, ts, ks;
        bool failed = false;
        for (const auto& rep : replicas) {
            ojson row;
            row["seed"] = rep.seed;
            row["dir"] = "seed_" + std::to_string(rep.seed);
            if (!rep.analysis) {
                failed = true;
                row["error"] = rep.error;
                err << "seed " << rep.seed << " failed: " << rep.error << '\n';
            } else {
                const auto& a = *rep.analysis;
                row["q"] = a.fit.q;
                row["t_star"] = a.t_star ? ojson(*a.t_star) : ojson(nullptr);
                row["excess_kurtosis"] = a.excess_kurtosis;
                qs.push_back(a.fit.q);
                ks.push_back(a.excess_kurtosis);
                if (a.t_star) ts.push_back(static_cast<double>(*a.t_star));
                log << "seed " << rep.seed << ": q=" << a.fit.q << " t_star="
                    << (a.t_star ? std::to_string(*a.t_star) : std::string("none"))
                    << " kurtosis=" << a.excess_kurtosis << '\n';
            }
            per_seed.push_back(row);
        }

        ModelConfig shown = base;
        shown.seed = request.base_seed;
        ojson summary;
        summary["format_version"] = kFormatVersion;
        summary["base_seed"] = request.base_seed;
        summary["n_seeds"] = request.n_seeds;
        summary["config_hash"] = hex64(config_hash(shown));
        summary["config"] = to_json(shown);
        summary["replicas"] = per_seed;
        ojson med;
        med["q"] = qs.empty() ? ojson(nullptr) : ojson(median(qs));
        med["t_star"] = ts.empty() ? ojson(nullptr) : ojson(median(ts));
        med["excess_kurtosis"] = ks.empty() ? ojson(nullptr) : ojson(median(ks));
        summary["median"] = med;
        summary["t_star_detected"] = ts.size();
        io::write_file_atomic(request.out / "ensemble_summary.json", summary.dump(2) + "\n");
        return failed ? kRuntimeError : kOk;
    });
}

int cmd_analyze(const fs::path& run_dir, std::ostream& log, std::ostream& err) {
    return guarded(err, [&] {
        const fs::path ts_path = run_dir / "timeseries.csv";
        if (!fs::exists(ts_path)) throw MissingInput(ts_path.string() + " not found");
        const auto series = io::read_timeseries(ts_path);
        std::vector<AvalancheLogRow> avalanches;
        if (fs::exists(run_dir / "avalanches.csv")) avalanches = io::read_avalanches(run_dir / "avalanches.csv");

        const AnalysisSummary a = analyze(series, avalanches);
        ojson j;
        j["format_version"] = kFormatVersion;
        j.update(to_json(a));
        io::write_file_atomic(run_dir / "analysis.json", j.dump(2) + "\n");
        io::write_file_atomic(run_dir / "histogram.csv", histogram_csv(a));
        log << "q=" << a.fit.q << " t_star="
            << (a.t_star ? std::to_string(*a.t_star) : std::string("none"))
            << " excess_kurtosis=" << a.excess_kurtosis << '\n';
        return kOk;
    });
}

int cmd_compare(const fs::path& a, const fs::path& b, const std::optional<fs::path>& out_file,
                std::ostream& log, std::ostream& err) {
    return guarded(err, [&] {
        const Metrics ma = load_metrics(a);
        const Metrics mb = load_metrics(b);
        ojson j;
        j["format_version"] = kFormatVersion;
        j["a"] = metrics_json(a, ma);
        j["b"] = metrics_json(b, mb);
        ojson d;
        d["q"] = mb.q - ma.q;
        d["t_star"] = (ma.t_star && mb.t_star) ? ojson(*mb.t_star - *ma.t_star) : ojson(nullptr);
        d["excess_kurtosis"] = mb.kurtosis - ma.kurtosis;
        j["delta"] = d;
        const std::string text = j.dump(2) + "\n";
        if (out_file) io::write_file_atomic(*out_file, text);
        log << text;
        return kOk;
    });
}

}  // namespace obcfp::cli
