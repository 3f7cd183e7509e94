#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace obcfp {

/// Malformed configuration document.
class ConfigParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configuration value violates a model invariant. `key()` names the field.
class ConfigValidationError : public std::runtime_error {
public:
    ConfigValidationError(std::string key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Lower end of the bid price interval: 0, or the current price.
enum class BidFloor : std::uint8_t { Zero, Price };

/// Full model parameter set. Defaults are the baseline market of 1600 traders
/// split evenly between fundamentalists and chartists.
struct ModelConfig {
    std::uint32_t n_agents = 1600;
    std::uint32_t lattice_side = 40;

    double frac_fundamentalists = 0.5;
    double frac_chartists = 0.5;
    double frac_random = 0.0;

    double p0 = 100.0;
    double p_fund_global = 120.0;
    double theta = 30.0;

    std::uint32_t t_max_window = 15;
    double phi = 2.0;
    double kappa = 2.0;

    double alpha = 0.95;
    double i_threshold = 1.0;

    double delta = 0.05;
    double sigma = 30.0;
    double tau = 20.0;

    std::int64_t q_init = 50;
    double m_init = 35000.0;

    std::uint64_t t_soc = 10000;
    std::uint64_t t_run = 20000;
    std::uint64_t seed = 1;

    double rewire_prob = 0.02;
    double price_floor = 0.01;
    std::uint64_t avalanche_topple_cap = 10ULL * 1600 * 100;
    BidFloor bid_floor = BidFloor::Zero;

    bool operator==(const ModelConfig&) const = default;
};

/// Trader counts per kind, in the order fundamentalist, chartist, random.
using KindCounts = std::array<std::uint32_t, 3>;

ModelConfig default_config();

/// Throws ConfigValidationError naming the first offending key.
void validate(const ModelConfig& config);

/// Parses a flat `key = value` document. Unspecified keys keep their defaults.
ModelConfig parse_config(std::string_view text);
ModelConfig load_config(const std::filesystem::path& path);

/// Canonical `key = value` text, keys in declaration order, values round-trip exactly.
std::string serialize(const ModelConfig& config);

nlohmann::ordered_json to_json(const ModelConfig& config);

/// FNV-1a over the sorted-key canonical form.
std::uint64_t config_hash(const ModelConfig& config);

/// Largest-remainder apportionment of n_agents over the three kind fractions.
/// Ties go to the earlier kind.
KindCounts apportion(const ModelConfig& config);

}  // namespace obcfp
