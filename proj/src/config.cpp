#include "obcfp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <variant>
#include <vector>

namespace obcfp {
namespace {

using Member = std::variant<double ModelConfig::*, std::uint32_t ModelConfig::*,
                            std::uint64_t ModelConfig::*, std::int64_t ModelConfig::*,
                            BidFloor ModelConfig::*>;

struct Field {
    std::string_view key;
    Member member;
};

const std::array<Field, 25>& fields() {
    static const std::array<Field, 25> table{{
        {"n_agents", &ModelConfig::n_agents},
        {"lattice_side", &ModelConfig::lattice_side},
        {"frac_fundamentalists", &ModelConfig::frac_fundamentalists},
        {"frac_chartists", &ModelConfig::frac_chartists},
        {"frac_random", &ModelConfig::frac_random},
        {"p0", &ModelConfig::p0},
        {"p_fund_global", &ModelConfig::p_fund_global},
        {"theta", &ModelConfig::theta},
        {"t_max_window", &ModelConfig::t_max_window},
        {"phi", &ModelConfig::phi},
        {"kappa", &ModelConfig::kappa},
        {"alpha", &ModelConfig::alpha},
        {"i_threshold", &ModelConfig::i_threshold},
        {"delta", &ModelConfig::delta},
        {"sigma", &ModelConfig::sigma},
        {"tau", &ModelConfig::tau},
        {"q_init", &ModelConfig::q_init},
        {"m_init", &ModelConfig::m_init},
        {"t_soc", &ModelConfig::t_soc},
        {"t_run", &ModelConfig::t_run},
        {"seed", &ModelConfig::seed},
        {"rewire_prob", &ModelConfig::rewire_prob},
        {"price_floor", &ModelConfig::price_floor},
        {"avalanche_topple_cap", &ModelConfig::avalanche_topple_cap},
        {"bid_floor", &ModelConfig::bid_floor},
    }};
    return table;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_number(std::string_view text, BidFloor& out) {
    if (text == "zero") {
        out = BidFloor::Zero;
        return true;
    }
    if (text == "price") {
        out = BidFloor::Price;
        return true;
    }
    return false;
}

std::string_view bid_floor_name(BidFloor b) { return b == BidFloor::Price ? "price" : "zero"; }

template <class T>
bool parse_number(std::string_view text, T& out) {
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::string format_member(const ModelConfig& c, const Member& m) {
    return std::visit(
        [&](auto ptr) -> std::string {
            const auto& v = c.*ptr;
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) {
                return format_double(v);
            } else if constexpr (std::is_same_v<V, BidFloor>) {
                return std::string(bid_floor_name(v));
            } else {
                return std::to_string(v);
            }
        },
        m);
}

void fail(const char* key, const std::string& what) { throw ConfigValidationError(key, what); }

}  // namespace

ModelConfig default_config() { return ModelConfig{}; }

void validate(const ModelConfig& c) {
    for (const auto& f : fields()) {
        if (auto* p = std::get_if<double ModelConfig::*>(&f.member)) {
            if (!std::isfinite(c.**p)) fail(f.key.data(), "must be finite");
        }
    }
    if (c.n_agents == 0) fail("n_agents", "must be positive");
    if (c.lattice_side < 2) fail("lattice_side", "must be at least 2");
    if (static_cast<std::uint64_t>(c.lattice_side) * c.lattice_side != c.n_agents)
        fail("lattice_side", "lattice_side^2 must equal n_agents");

    const std::array<std::pair<const char*, double>, 3> fracs{{
        {"frac_fundamentalists", c.frac_fundamentalists},
        {"frac_chartists", c.frac_chartists},
        {"frac_random", c.frac_random},
    }};
    for (const auto& [key, v] : fracs)
        if (v < 0.0 || v > 1.0) fail(key, "must lie in [0, 1]");
    if (std::abs(c.frac_fundamentalists + c.frac_chartists + c.frac_random - 1.0) > 1e-9)
        fail("frac_random", "kind fractions must sum to 1");

    if (c.p0 <= 0.0) fail("p0", "must be positive");
    if (c.theta < 0.0) fail("theta", "must be non-negative");
    if (c.t_max_window < 2) fail("t_max_window", "must be at least 2");
    if (!(c.alpha > 0.0 && c.alpha <= 1.0)) fail("alpha", "must lie in (0, 1]");
    if (c.i_threshold <= 0.0) fail("i_threshold", "must be positive");
    if (c.delta < 0.0) fail("delta", "must be non-negative");
    if (c.sigma < 0.0) fail("sigma", "must be non-negative");
    if (c.tau < 0.0) fail("tau", "must be non-negative");
    if (c.q_init < 0) fail("q_init", "must be non-negative");
    if (c.m_init < 0.0) fail("m_init", "must be non-negative");
    if (c.rewire_prob < 0.0 || c.rewire_prob > 1.0) fail("rewire_prob", "must lie in [0, 1]");
    if (c.price_floor <= 0.0) fail("price_floor", "must be positive");
    if (c.p0 < c.price_floor) fail("p0", "must not be below price_floor");
    if (c.avalanche_topple_cap == 0) fail("avalanche_topple_cap", "must be positive");
}

ModelConfig parse_config(std::string_view text) {
    ModelConfig c = default_config();
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigParseError("line " + std::to_string(line_no) + ": expected `key = value`");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));

        const auto it = std::find_if(fields().begin(), fields().end(),
                                     [&](const Field& f) { return f.key == key; });
        if (it == fields().end())
            throw ConfigParseError("line " + std::to_string(line_no) + ": unknown key `" +
                                   std::string(key) + "`");
        const bool ok = std::visit([&](auto ptr) { return parse_number(value, c.*ptr); }, it->member);
        if (!ok)
            throw ConfigParseError("line " + std::to_string(line_no) + ": bad value for `" +
                                   std::string(key) + "`: `" + std::string(value) + "`");
    }
    validate(c);
    return c;
}

ModelConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigParseError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize(const ModelConfig& c) {
    std::string out;
    for (const auto& f : fields()) {
        out += f.key;
        out += " = ";
        out += format_member(c, f.member);
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json to_json(const ModelConfig& c) {
    nlohmann::ordered_json j;
    for (const auto& f : fields()) {
        std::visit(
            [&](auto ptr) {
                if constexpr (std::is_same_v<std::decay_t<decltype(c.*ptr)>, BidFloor>)
                    j[std::string(f.key)] = bid_floor_name(c.*ptr);
                else
                    j[std::string(f.key)] = c.*ptr;
            },
            f.member);
    }
    return j;
}

std::uint64_t config_hash(const ModelConfig& c) {
    std::map<std::string_view, std::string> sorted;
    for (const auto& f : fields()) {
        sorted.emplace(f.key, format_member(c, f.member));
    }
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto feed = [&h](std::string_view s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 0x100000001B3ULL;
        }
    };
    for (const auto& [k, v] : sorted) {
        feed(k);
        feed("=");
        feed(v);
        feed("\n");
    }
    return h;
}

KindCounts apportion(const ModelConfig& c) {
    const std::array<double, 3> fracs{c.frac_fundamentalists, c.frac_chartists, c.frac_random};
    KindCounts counts{};
    std::array<double, 3> remainder{};
    std::uint32_t assigned = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        const double exact = fracs[k] * c.n_agents;
        // Snap values within rounding noise of an integer so 0.45 * 1600 yields 720.
        const double snapped = std::abs(exact - std::round(exact)) < 1e-6 ? std::round(exact) : exact;
        counts[k] = static_cast<std::uint32_t>(std::floor(snapped));
        remainder[k] = snapped - counts[k];
        assigned += counts[k];
    }
    std::array<std::size_t, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < c.n_agents; ++i, ++assigned) ++counts[order[i % 3]];
    return counts;
}

}  // namespace obcfp
