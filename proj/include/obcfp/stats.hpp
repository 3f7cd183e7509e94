#pragma once

// Post-processing of simulated market series. Every function here is pure.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace obcfp::stats {

class StatsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ReturnSeries {
    std::vector<double> raw;
    std::vector<double> normalized;
    double mean = 0.0;
    double stdev = 0.0;  // population
};

/// Log-returns of a price series, z-scored over the whole series.
/// Throws StatsError for fewer than 3 prices, a non-positive price or zero spread.
ReturnSeries normalize_returns(std::span<const double> prices);

/// Same, starting from log-returns directly (at least 2).
ReturnSeries normalize_log_returns(std::span<const double> returns);

/// A [1 - (1 - q) B x^2]^(1 / (1 - q)). Throws StatsError for q == 1 or
/// outside the compact support of a q < 1 density.
double q_gaussian(double x, double q, double A, double B);

struct HistogramSpec {
    double lo = -10.0;
    double hi = 10.0;
    std::size_t bins = 61;
};

struct Histogram {
    HistogramSpec spec;
    std::vector<std::uint64_t> counts;
    std::vector<double> centers;
    std::vector<double> density;  // counts / (n * width); out-of-range samples count in n
    std::uint64_t total = 0;
};

Histogram histogram(std::span<const double> samples, const HistogramSpec& spec = {});

struct QGaussianFit {
    double q = 1.0;
    double A = 0.0;
    double B = 0.0;
    double residual = 0.0;  // sum of squared log-density errors over fitted bins
    std::size_t bins_used = 0;
};

struct FitOptions {
    HistogramSpec histogram{};
    std::uint64_t min_bin_count = 5;
    std::size_t min_samples = 1000;
};

/// Least-squares fit of log G_q to the log-density of the binned samples.
/// Coarse grid over q in [1.05, 2.5] and log-spaced B in [0.1, 50], with A
/// solved in closed form and clamped to [0.1, 2], then compass-search
/// refinement to 1e-3 relative step.
QGaussianFit fit_q_gaussian(std::span<const double> samples, const FitOptions& options = {});

/// Fit residual for fixed parameters (used by the refinement and by callers
/// who want to compare candidate fits).
double q_gaussian_log_residual(const Histogram& h, std::uint64_t min_bin_count, double q, double A,
                               double B);

struct RegimeSplit {
    std::optional<std::int64_t> t_star;  // 1-based step index
    std::size_t window = 50;
    double threshold = 100.0;
};

/// First step at which the trailing `window`-step mean of the trade count drops
/// below `threshold`. Steps are 1-based; the first candidate is t = window.
RegimeSplit detect_transition(std::span<const double> n_trades, std::size_t window = 50,
                              double threshold = 100.0);

/// Fourth standardized (population) moment minus 3.
double excess_kurtosis(std::span<const double> series);

struct TailStats {
    double decades = 0.0;
    double exponent = 0.0;
    std::uint64_t s_min = 0;
    std::size_t tail_count = 0;
};

/// Hurwitz zeta sum_{k>=0} (a + k)^-s for s > 1, a > 0.
double hurwitz_zeta(double s, double a);

/// Decades spanned by nonzero sizes, plus the discrete power-law MLE exponent
/// over sizes >= s_min, where s_min is the smallest observed size >= 2.
/// Throws StatsError for fewer than 100 nonzero sizes or a degenerate tail.
TailStats avalanche_tail_stats(std::span<const std::uint64_t> sizes);

}  // namespace obcfp::stats
