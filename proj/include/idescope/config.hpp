#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace idescope {

/// Parsed experiment configuration. The canonical on-disk format is a
/// sectioned key = value text file; a JSON object with the same section/key
/// schema is accepted as an alternative encoding.
struct ExperimentConfig {
    nlohmann::json data;       // {"model": {...}, "task": {...}, ...}
    std::string source_bytes;  // raw file contents, hashed into the manifest

    bool has(const std::string& section, const std::string& key) const;
    double number(const std::string& section, const std::string& key) const;
    double number_or(const std::string& section, const std::string& key, double fallback) const;
    std::int64_t integer(const std::string& section, const std::string& key) const;
    std::int64_t integer_or(const std::string& section, const std::string& key,
                            std::int64_t fallback) const;
    std::string text(const std::string& section, const std::string& key) const;
    std::string text_or(const std::string& section, const std::string& key,
                        const std::string& fallback) const;
    std::vector<double> numbers(const std::string& section, const std::string& key) const;
};

/// Parses a config file; the format is detected from the content (JSON when
/// the first non-space byte is '{'). Schema violations raise SchemaError.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& content);

} // namespace idescope
