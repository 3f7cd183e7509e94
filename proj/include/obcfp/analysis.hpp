#pragma once

// Composition of the stats primitives over a finished run.

#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "obcfp/engine.hpp"
#include "obcfp/stats.hpp"

namespace obcfp {

struct AnalysisSummary {
    double r_av = 0.0;
    double r_stdev = 0.0;
    stats::QGaussianFit fit;
    double excess_kurtosis = 0.0;
    std::optional<std::int64_t> t_star;
    std::size_t segment_length = 0;  // returns used for the pdf fit
    std::optional<stats::TailStats> tail;  // absent when there are too few cascades
    stats::Histogram histogram;
};

/// Fits the return pdf over the intermittent segment (steps after t_star, or
/// the whole series when no transition is detected) and summarises the
/// post-transient cascade sizes.
AnalysisSummary analyze(std::span<const StepRecord> series, std::span<const AvalancheLogRow> avalanches);

nlohmann::ordered_json to_json(const AnalysisSummary& a);

/// `bin_center,density,fit_density`, one row per histogram bin.
std::string histogram_csv(const AnalysisSummary& a);

}  // namespace obcfp
