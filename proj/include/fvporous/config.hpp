#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fvporous/problem.hpp"
#include "fvporous/stepper.hpp"

namespace fvporous {

/// Flat `key = value` text with `#` comments and dotted keys.
///
/// Every lookup marks its key as consumed; `require_all_consumed` turns any
/// leftover key into a ConfigError so typos fail fast.
class KeyValueConfig {
public:
    struct Entry {
        std::string value;
        int line;
    };

    static KeyValueConfig parse(const std::string& text);
    static KeyValueConfig load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::uint64_t get_unsigned(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;

    std::optional<std::string> find_string(const std::string& key) const;
    std::optional<double> find_double(const std::string& key) const;
    std::optional<std::uint64_t> find_unsigned(const std::string& key) const;

    int line_of(const std::string& key) const;
    /// Throws ConfigError for the first unread key starting with prefix.
    void require_all_consumed(const std::string& prefix = "") const;

    const std::map<std::string, Entry>& entries() const noexcept { return entries_; }

private:
    const Entry& lookup(const std::string& key) const;

    std::map<std::string, Entry> entries_;
    mutable std::map<std::string, bool> consumed_;
};

/// Builds the problem from the `problem.*` keys. Family names and parameter
/// admissibility are checked; failures carry the offending line.
ProblemPtr build_problem(const KeyValueConfig& config);

/// Everything a command needs: the problem plus discretization and run keys.
struct RunConfig {
    ProblemPtr problem;
    std::size_t n = 64;
    StepControl control;
    /// true when `time.dt` was given explicitly; otherwise commands apply their own rule.
    bool dt_given = false;
    std::size_t checkpoints = 200;
    std::uint64_t seed = 0;
    std::filesystem::path out = "out";
    /// Echo of the raw key-value pairs, in key order.
    std::map<std::string, std::string> echo;
};

RunConfig build_run_config(const KeyValueConfig& config);
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& text);

}  // namespace fvporous
