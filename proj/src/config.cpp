#include "hawkeslab/config.hpp"

#include <fstream>
#include <sstream>

#include "hawkeslab/errors.hpp"

namespace hawkeslab {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::string KvSection::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required field '" + key + "'");
    read_.insert(key);
    return it->second;
}

std::string KvSection::get_string(const std::string& key, const std::string& fallback) const {
    read_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KvSection::get_double(const std::string& key) const {
    const std::string raw = get_string(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("field '" + key + "' is not a number: '" + raw + "'");
    }
}

double KvSection::get_double(const std::string& key, double fallback) const {
    read_.insert(key);
    return values_.count(key) ? get_double(key) : fallback;
}

std::int64_t KvSection::get_int(const std::string& key) const {
    const std::string raw = get_string(key);
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("field '" + key + "' is not an integer: '" + raw + "'");
    }
}

std::int64_t KvSection::get_int(const std::string& key, std::int64_t fallback) const {
    read_.insert(key);
    return values_.count(key) ? get_int(key) : fallback;
}

DisplacementSpec KvSection::get_distribution(const std::string& key) const {
    const std::string raw = get_string(key);
    try {
        return DisplacementSpec::parse(raw);
    } catch (const ConfigError& e) {
        throw ConfigError("field '" + key + "': " + e.what());
    }
}

void KvSection::reject_unknown(const std::string& section_name) const {
    for (const auto& [key, value] : values_) {
        if (!read_.count(key))
            throw ConfigError("unknown field '" + key + "' in section [" + section_name + "]");
    }
}

std::string ExperimentConfig::canonical_text() const {
    std::ostringstream out;
    out << "kind=" << kind << "\nseed=" << seed << "\nreplications=" << replications << "\n";
    for (const auto& [key, value] : params.values()) out << kind << "." << key << "=" << value << "\n";
    return out.str();
}

std::string ExperimentConfig::config_hash() const {
    // FNV-1a, 64 bit
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : canonical_text()) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    KvSection top;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.resize(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
            if (!section.empty())
                throw ConfigError("config may contain a single parameter section");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (section.empty()) top.set(key, value);
        else cfg.params.set(key, value);
    }

    cfg.kind = top.get_string("kind");
    cfg.seed = static_cast<std::uint64_t>(top.get_int("seed", 1));
    const std::int64_t reps = top.get_int("replications", 1);
    if (reps < 0) throw ConfigError("replications must be >= 0");
    cfg.replications = static_cast<std::uint64_t>(reps);
    cfg.out = top.get_string("out", "");
    top.reject_unknown("");

    if (!section.empty() && section != cfg.kind)
        throw ConfigError("section [" + section + "] does not match kind '" + cfg.kind + "'");
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace hawkeslab
