#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hawkeslab/distributions.hpp"

namespace hawkeslab {

/// One key-value section of a config file. Typed getters throw CONFIG_INVALID
/// with the offending field name; reads are tracked so unknown keys can be
/// rejected.
class KvSection {
  public:
    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    DisplacementSpec get_distribution(const std::string& key) const;

    /// Throws CONFIG_INVALID naming any key never read.
    void reject_unknown(const std::string& section_name) const;

    const std::map<std::string, std::string>& values() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> read_;
};

/// Declarative experiment description: top-level keys plus one parameter
/// section named after the experiment kind.
struct ExperimentConfig {
    std::string kind;
    std::uint64_t seed = 1;
    std::uint64_t replications = 1;
    std::string out;  // output directory; empty keeps results in memory
    KvSection params;

    /// Canonical text rendering (sorted keys); hashed into every output.
    std::string canonical_text() const;
    std::string config_hash() const;
};

/// Parse the plain-text config format: `key = value` lines, `[section]`
/// headers, `#` comments. Exactly one section is allowed and must match the
/// kind.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace hawkeslab
