#include "fvporous/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fvporous/errors.hpp"

namespace fvporous {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool valid_key(const std::string& key) {
    if (key.empty() || key.front() == '.' || key.back() == '.') return false;
    for (char c : key) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
    }
    return key.find("..") == std::string::npos;
}

double parse_double(const std::string& text, const std::string& key, int line) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (!text.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ConfigError("'" + key + "' expects a finite number, got '" + text + "'", line);
    }
    return value;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string content = trim(raw);
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + content + "'", line);
        const std::string key = trim(content.substr(0, eq));
        const std::string value = trim(content.substr(eq + 1));
        if (!valid_key(key)) throw ConfigError("malformed key '" + key + "'", line);
        if (value.empty()) throw ConfigError("key '" + key + "' has no value", line);
        if (cfg.entries_.count(key)) {
            throw ConfigError("duplicate key '" + key + "' (first set on line " +
                                  std::to_string(cfg.entries_.at(key).line) + ")",
                              line);
        }
        cfg.entries_.emplace(key, Entry{value, line});
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

const KeyValueConfig::Entry& KeyValueConfig::lookup(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
    consumed_[key] = true;
    return it->second;
}

int KeyValueConfig::line_of(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
}

std::string KeyValueConfig::get_string(const std::string& key) const { return lookup(key).value; }

double KeyValueConfig::get_double(const std::string& key) const {
    const Entry& e = lookup(key);
    return parse_double(e.value, key, e.line);
}

std::uint64_t KeyValueConfig::get_unsigned(const std::string& key) const {
    const Entry& e = lookup(key);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), value);
    if (ec != std::errc() || ptr != e.value.data() + e.value.size()) {
        throw ConfigError("'" + key + "' expects an unsigned integer, got '" + e.value + "'", e.line);
    }
    return value;
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) const {
    const Entry& e = lookup(key);
    std::vector<double> out;
    std::istringstream in(e.value);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_double(trim(item), key, e.line));
    if (out.empty()) throw ConfigError("'" + key + "' expects a comma-separated list", e.line);
    return out;
}

std::optional<std::string> KeyValueConfig::find_string(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return get_string(key);
}

std::optional<double> KeyValueConfig::find_double(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return get_double(key);
}

std::optional<std::uint64_t> KeyValueConfig::find_unsigned(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return get_unsigned(key);
}

void KeyValueConfig::require_all_consumed(const std::string& prefix) const {
    for (const auto& [key, entry] : entries_) {
        if (key.rfind(prefix, 0) != 0) continue;
        if (!consumed_.count(key)) throw ConfigError("unknown key '" + key + "'", entry.line);
    }
}

namespace {

template <class Build>
auto with_line(const KeyValueConfig& cfg, const std::string& key, Build&& build) {
    try {
        return build();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), cfg.line_of(key));
    }
}

CoefficientH build_h(const KeyValueConfig& cfg) {
    const std::string family = cfg.get_string("problem.h");
    return with_line(cfg, "problem.h", [&] {
        if (family == "linear") return CoefficientH::linear(cfg.get_double("problem.h.a"));
        if (family == "linear_plus_sin") {
            return CoefficientH::linear_plus_sin(cfg.get_double("problem.h.a"), cfg.get_double("problem.h.c"));
        }
        throw ConfigError("unknown h family '" + family + "' (expected linear or linear_plus_sin)",
                          cfg.line_of("problem.h"));
    });
}

CoefficientB build_b(const KeyValueConfig& cfg) {
    const std::string family = cfg.get_string("problem.b");
    return with_line(cfg, "problem.b", [&] {
        if (family == "const") return CoefficientB::constant(cfg.get_double("problem.b.c0"));
        if (family == "offset_sin") {
            return CoefficientB::offset_sin(cfg.get_double("problem.b.c0"), cfg.get_double("problem.b.c1"));
        }
        throw ConfigError("unknown b family '" + family + "' (expected const or offset_sin)",
                          cfg.line_of("problem.b"));
    });
}

PressureField build_p(const KeyValueConfig& cfg) {
    const std::string family = cfg.get_string("problem.p");
    return with_line(cfg, "problem.p", [&] {
        if (family == "zero") return PressureField::zero();
        if (family == "separable") {
            return PressureField::separable(cfg.get_double("problem.p.alpha"), cfg.get_double("problem.p.k"),
                                            cfg.get_double("problem.p.omega"));
        }
        throw ConfigError("unknown p family '" + family + "' (expected zero or separable)",
                          cfg.line_of("problem.p"));
    });
}

InitialData build_v0(const KeyValueConfig& cfg) {
    const std::string family = cfg.get_string("problem.v0");
    return with_line(cfg, "problem.v0", [&] {
        if (family == "const") return InitialData::constant(cfg.get_double("problem.v0.c"));
        if (family == "cosine") return InitialData::cosine(cfg.get_double_list("problem.v0.a"));
        throw ConfigError("unknown v0 family '" + family + "' (expected const or cosine)",
                          cfg.line_of("problem.v0"));
    });
}

}  // namespace

ProblemPtr build_problem(const KeyValueConfig& cfg) {
    ProblemSpec spec{build_h(cfg), build_b(cfg), build_p(cfg), build_v0(cfg), cfg.get_double("problem.T")};
    if (cfg.has("problem.vrange")) {
        const std::vector<double> range = cfg.get_double_list("problem.vrange");
        if (range.size() != 2 || !(range[0] < range[1])) {
            throw ConfigError("'problem.vrange' expects 'lo, hi' with lo < hi", cfg.line_of("problem.vrange"));
        }
        spec.verify_range = {range[0], range[1]};
    }
    // Parameters the chosen families did not read are typos.
    cfg.require_all_consumed("problem.");
    try {
        return make_problem(std::move(spec));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("problem violates its assumptions: ") + e.what());
    }
}

RunConfig build_run_config(const KeyValueConfig& cfg) {
    RunConfig run;
    run.problem = build_problem(cfg);

    if (const auto n = cfg.find_unsigned("disc.n")) {
        if (*n < 3) throw ConfigError("'disc.n' must be at least 3", cfg.line_of("disc.n"));
        run.n = static_cast<std::size_t>(*n);
    }
    if (const auto method = cfg.find_string("time.method")) {
        if (*method == "implicit_euler") {
            run.control.method = Method::implicit_euler;
        } else if (*method == "explicit_adaptive") {
            run.control.method = Method::explicit_adaptive;
        } else {
            throw ConfigError("unknown time.method '" + *method + "' (expected implicit_euler or explicit_adaptive)",
                              cfg.line_of("time.method"));
        }
    }
    if (const auto dt = cfg.find_double("time.dt")) {
        run.control.dt = *dt;
        run.dt_given = true;
    } else {
        run.control.dt = 0.25 / static_cast<double>(run.n);
    }
    if (const auto atol = cfg.find_double("time.atol")) run.control.atol = *atol;
    if (const auto rtol = cfg.find_double("time.rtol")) run.control.rtol = *rtol;
    if (const auto tol = cfg.find_double("time.newton_tol")) run.control.newton_tol = *tol;
    if (const auto iters = cfg.find_unsigned("time.newton_max_iter")) {
        run.control.newton_max_iter = static_cast<int>(std::min<std::uint64_t>(*iters, 1000000));
    }
    if (const auto K = cfg.find_unsigned("time.checkpoints")) {
        if (*K < 1) throw ConfigError("'time.checkpoints' must be at least 1", cfg.line_of("time.checkpoints"));
        run.checkpoints = static_cast<std::size_t>(*K);
    }
    if (const auto seed = cfg.find_unsigned("seed")) run.seed = *seed;
    if (const auto out = cfg.find_string("out")) run.out = *out;

    try {
        run.control.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    cfg.require_all_consumed();
    for (const auto& [key, entry] : cfg.entries()) run.echo[key] = entry.value;
    return run;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    return build_run_config(KeyValueConfig::load(path));
}

RunConfig parse_run_config(const std::string& text) { return build_run_config(KeyValueConfig::parse(text)); }

}  // namespace fvporous
