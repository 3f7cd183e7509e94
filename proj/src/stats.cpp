#include "obcfp/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/tools/minima.hpp>

namespace obcfp::stats {
namespace {

double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double central_moment(std::span<const double> x, double mean, int order) {
    double acc = 0.0;
    for (double v : x) acc += std::pow(v - mean, order);
    return acc / static_cast<double>(x.size());
}

struct FitPoint {
    double x;
    double log_density;
};

std::vector<FitPoint> fit_points(const Histogram& h, std::uint64_t min_bin_count) {
    std::vector<FitPoint> pts;
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        if (h.counts[i] >= min_bin_count && h.counts[i] > 0)
            pts.push_back({h.centers[i], std::log(h.density[i])});
    return pts;
}

constexpr double kMinA = 0.1;
constexpr double kMaxA = 2.0;

// log of the unit-amplitude q-Gaussian; q > 1 so the base is always positive.
double log_shape(double x, double q, double B) {
    return std::log1p((q - 1.0) * B * x * x) / (1.0 - q);
}

// Residual with the closed-form least-squares log A, clamped to the allowed range.
std::pair<double, double> best_amplitude(const std::vector<FitPoint>& pts, double q, double B) {
    double acc = 0.0;
    for (const auto& p : pts) acc += p.log_density - log_shape(p.x, q, B);
    const double log_a = std::clamp(acc / static_cast<double>(pts.size()), std::log(kMinA),
                                    std::log(kMaxA));
    double res = 0.0;
    for (const auto& p : pts) {
        const double e = p.log_density - (log_a + log_shape(p.x, q, B));
        res += e * e;
    }
    return {std::exp(log_a), res};
}

}  // namespace

ReturnSeries normalize_log_returns(std::span<const double> returns) {
    if (returns.size() < 2) throw StatsError("normalize_returns: need at least 2 returns");
    ReturnSeries out;
    out.raw.assign(returns.begin(), returns.end());
    out.mean = mean_of(out.raw);
    out.stdev = std::sqrt(central_moment(out.raw, out.mean, 2));
    if (!(out.stdev > 0.0)) throw StatsError("normalize_returns: zero standard deviation");
    out.normalized.reserve(out.raw.size());
    for (double r : out.raw) out.normalized.push_back((r - out.mean) / out.stdev);
    return out;
}

ReturnSeries normalize_returns(std::span<const double> prices) {
    if (prices.size() < 3) throw StatsError("normalize_returns: need at least 3 prices");
    std::vector<double> r;
    r.reserve(prices.size() - 1);
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0))
            throw StatsError("normalize_returns: non-positive price at index " + std::to_string(i));
        if (i > 0) r.push_back(std::log(prices[i]) - std::log(prices[i - 1]));
    }
    return normalize_log_returns(r);
}

double q_gaussian(double x, double q, double A, double B) {
    if (q == 1.0) throw StatsError("q_gaussian: q == 1 is the Gaussian limit, not a q-Gaussian");
    const double base = 1.0 - (1.0 - q) * B * x * x;
    if (!(base > 0.0)) throw StatsError("q_gaussian: x outside the support");
    return A * std::pow(base, 1.0 / (1.0 - q));
}

Histogram histogram(std::span<const double> samples, const HistogramSpec& spec) {
    if (spec.bins == 0 || !(spec.hi > spec.lo)) throw StatsError("histogram: bad bin specification");
    Histogram h;
    h.spec = spec;
    h.counts.assign(spec.bins, 0);
    const double width = (spec.hi - spec.lo) / static_cast<double>(spec.bins);
    for (double v : samples) {
        ++h.total;
        if (!(v >= spec.lo && v <= spec.hi)) continue;
        auto idx = static_cast<std::size_t>((v - spec.lo) / width);
        if (idx >= spec.bins) idx = spec.bins - 1;
        ++h.counts[idx];
    }
    h.centers.resize(spec.bins);
    h.density.resize(spec.bins);
    for (std::size_t i = 0; i < spec.bins; ++i) {
        h.centers[i] = spec.lo + (static_cast<double>(i) + 0.5) * width;
        h.density[i] = h.total ? static_cast<double>(h.counts[i]) / (static_cast<double>(h.total) * width)
                               : 0.0;
    }
    return h;
}

double q_gaussian_log_residual(const Histogram& h, std::uint64_t min_bin_count, double q, double A,
                               double B) {
    double res = 0.0;
    for (const auto& p : fit_points(h, min_bin_count)) {
        const double e = p.log_density - std::log(q_gaussian(p.x, q, A, B));
        res += e * e;
    }
    return res;
}

QGaussianFit fit_q_gaussian(std::span<const double> samples, const FitOptions& options) {
    if (samples.size() < options.min_samples)
        throw StatsError("fit_q_gaussian: need at least " + std::to_string(options.min_samples) +
                         " samples, got " + std::to_string(samples.size()));
    const Histogram h = histogram(samples, options.histogram);
    const auto pts = fit_points(h, options.min_bin_count);
    if (pts.size() < 3)
        throw StatsError("fit_q_gaussian: fewer than 3 bins reach the minimum count");

    constexpr double kQLo = 1.05, kQHi = 2.5, kBLo = 0.1, kBHi = 50.0;
    constexpr int kQSteps = 30, kBSteps = 40;

    double best_q = kQLo, best_b = kBLo, best_res = std::numeric_limits<double>::infinity();
    for (int iq = 0; iq < kQSteps; ++iq) {
        const double q = kQLo + (kQHi - kQLo) * iq / (kQSteps - 1);
        for (int ib = 0; ib < kBSteps; ++ib) {
            const double b = kBLo * std::pow(kBHi / kBLo, static_cast<double>(ib) / (kBSteps - 1));
            const double res = best_amplitude(pts, q, b).second;
            if (res < best_res) {
                best_res = res;
                best_q = q;
                best_b = b;
            }
        }
    }

    // Compass search in (q, log B), staying inside the grid box.
    double log_b = std::log(best_b);
    double step_q = (kQHi - kQLo) / (kQSteps - 1);
    double step_lb = std::log(kBHi / kBLo) / (kBSteps - 1);
    auto eval = [&](double q, double lb) {
        if (q < kQLo || q > kQHi || lb < std::log(kBLo) || lb > std::log(kBHi))
            return std::numeric_limits<double>::infinity();
        return best_amplitude(pts, q, std::exp(lb)).second;
    };
    constexpr double kRelTol = 1e-3;
    while (step_q > kRelTol * best_q || step_lb > kRelTol * std::max(1.0, std::abs(log_b))) {
        bool moved = false;
        const std::array<std::pair<double, double>, 4> dirs{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
        for (const auto& [dq, db] : dirs) {
            const double q = best_q + dq * step_q;
            const double lb = log_b + db * step_lb;
            const double res = eval(q, lb);
            if (res < best_res) {
                best_res = res;
                best_q = q;
                log_b = lb;
                moved = true;
                break;
            }
        }
        if (!moved) {
            step_q *= 0.5;
            step_lb *= 0.5;
        }
    }

    QGaussianFit fit;
    fit.q = best_q;
    fit.B = std::exp(log_b);
    std::tie(fit.A, fit.residual) = best_amplitude(pts, fit.q, fit.B);
    fit.bins_used = pts.size();
    return fit;
}

RegimeSplit detect_transition(std::span<const double> n_trades, std::size_t window, double threshold) {
    RegimeSplit split;
    split.window = window;
    split.threshold = threshold;
    if (window == 0 || n_trades.size() < window) return split;
    double sum = 0.0;
    for (std::size_t i = 0; i < n_trades.size(); ++i) {
        sum += n_trades[i];
        if (i >= window) sum -= n_trades[i - window];
        if (i + 1 >= window && sum / static_cast<double>(window) < threshold) {
            split.t_star = static_cast<std::int64_t>(i + 1);
            break;
        }
    }
    return split;
}

double excess_kurtosis(std::span<const double> series) {
    if (series.size() < 4) throw StatsError("excess_kurtosis: need at least 4 values");
    const double m = mean_of(series);
    const double m2 = central_moment(series, m, 2);
    if (!(m2 > 0.0)) throw StatsError("excess_kurtosis: zero variance");
    return central_moment(series, m, 4) / (m2 * m2) - 3.0;
}

double hurwitz_zeta(double s, double a) {
    if (!(s > 1.0) || !(a > 0.0)) throw StatsError("hurwitz_zeta: need s > 1 and a > 0");
    constexpr int kDirect = 24;
    // B_{2j} / (2j)!
    constexpr std::array<double, 6> kCoef{1.0 / 12.0,         -1.0 / 720.0,       1.0 / 30240.0,
                                          -1.0 / 1209600.0,   1.0 / 47900160.0,
                                          -691.0 / 1307674368000.0};
    double sum = 0.0;
    for (int k = 0; k < kDirect; ++k) sum += std::pow(a + k, -s);
    const double x = a + kDirect;
    sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
    double rising = s;  // s (s+1) ... (s + 2j - 2)
    double xpow = std::pow(x, -s - 1.0);
    for (std::size_t j = 0; j < kCoef.size(); ++j) {
        sum += kCoef[j] * rising * xpow;
        rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
        xpow /= x * x;
    }
    return sum;
}

TailStats avalanche_tail_stats(std::span<const std::uint64_t> sizes) {
    std::vector<std::uint64_t> nonzero;
    for (auto s : sizes)
        if (s > 0) nonzero.push_back(s);
    if (nonzero.size() < 100)
        throw StatsError("avalanche_tail_stats: need at least 100 nonzero sizes, got " +
                         std::to_string(nonzero.size()));
    const auto [mn, mx] = std::minmax_element(nonzero.begin(), nonzero.end());

    TailStats out;
    out.decades = std::log10(static_cast<double>(*mx) / static_cast<double>(*mn));

    std::uint64_t s_min = 0;
    for (auto s : nonzero)
        if (s >= 2 && (s_min == 0 || s < s_min)) s_min = s;
    if (s_min == 0) throw StatsError("avalanche_tail_stats: no sizes >= 2, exponent undefined");
    double log_sum = 0.0;
    std::size_t n = 0;
    bool varied = false;
    for (auto s : nonzero) {
        if (s < s_min) continue;
        log_sum += std::log(static_cast<double>(s));
        ++n;
        varied = varied || s != s_min;
    }
    if (!varied) throw StatsError("avalanche_tail_stats: tail is a single value, exponent undefined");

    const double a = static_cast<double>(s_min);
    auto neg_log_likelihood = [&](double alpha) {
        return static_cast<double>(n) * std::log(hurwitz_zeta(alpha, a)) + alpha * log_sum;
    };
    const auto [alpha, nll] = boost::math::tools::brent_find_minima(neg_log_likelihood, 1.0001, 8.0, 40);
    (void)nll;
    out.exponent = alpha;
    out.s_min = s_min;
    out.tail_count = n;
    return out;
}

}  // namespace obcfp::stats
