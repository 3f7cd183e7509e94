#include "obcfp/analysis.hpp"

#include <sstream>
#include <vector>

#include "obcfp/io.hpp"

namespace obcfp {

AnalysisSummary analyze(std::span<const StepRecord> series, std::span<const AvalancheLogRow> avalanches) {
    AnalysisSummary out;

    std::vector<double> trades;
    trades.reserve(series.size());
    for (const auto& r : series) trades.push_back(static_cast<double>(r.n_trades));
    out.t_star = stats::detect_transition(trades).t_star;

    // Step records carry their own t, so the segment is selected by value.
    std::vector<double> returns;
    returns.reserve(series.size());
    for (const auto& r : series)
        if (!out.t_star || r.t > *out.t_star) returns.push_back(r.ret);
    out.segment_length = returns.size();

    const auto norm = stats::normalize_log_returns(returns);
    out.r_av = norm.mean;
    out.r_stdev = norm.stdev;
    out.excess_kurtosis = stats::excess_kurtosis(norm.raw);
    out.fit = stats::fit_q_gaussian(norm.normalized);
    out.histogram = stats::histogram(norm.normalized);

    std::vector<std::uint64_t> sizes;
    for (const auto& a : avalanches)
        if (a.t >= 1 && a.size > 0) sizes.push_back(a.size);
    try {
        out.tail = stats::avalanche_tail_stats(sizes);
    } catch (const stats::StatsError&) {
        out.tail.reset();
    }
    return out;
}

nlohmann::ordered_json to_json(const AnalysisSummary& a) {
    nlohmann::ordered_json j;
    j["r_av"] = a.r_av;
    j["r_stdev"] = a.r_stdev;
    j["q"] = a.fit.q;
    j["A"] = a.fit.A;
    j["B"] = a.fit.B;
    j["residual"] = a.fit.residual;
    j["excess_kurtosis"] = a.excess_kurtosis;
    j["t_star"] = a.t_star ? nlohmann::ordered_json(*a.t_star) : nlohmann::ordered_json(nullptr);
    if (a.tail) {
        j["avalanche_decades"] = a.tail->decades;
        j["tail_exponent"] = a.tail->exponent;
    } else {
        j["avalanche_decades"] = nullptr;
        j["tail_exponent"] = nullptr;
    }
    j["bins_used"] = a.fit.bins_used;
    j["segment_length"] = a.segment_length;
    return j;
}

std::string histogram_csv(const AnalysisSummary& a) {
    std::ostringstream os;
    os << "bin_center,density,fit_density\n";
    const auto& h = a.histogram;
    for (std::size_t i = 0; i < h.centers.size(); ++i) {
        double fit = 0.0;
        try {
            fit = stats::q_gaussian(h.centers[i], a.fit.q, a.fit.A, a.fit.B);
        } catch (const stats::StatsError&) {
            fit = 0.0;
        }
        os << io::format_double(h.centers[i]) << ',' << io::format_double(h.density[i]) << ','
           << io::format_double(fit) << '\n';
    }
    return os.str();
}

}  // namespace obcfp
