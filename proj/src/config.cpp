#include "idescope/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "idescope/errors.hpp"

namespace idescope {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return false;
    out = v;
    return true;
}

nlohmann::json parse_value(const std::string& raw) {
    const std::string v = trim(raw);
    if (v == "true") return true;
    if (v == "false") return false;
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    double num = 0.0;
    if (parse_number(v, num)) return num;
    if (v.find(',') != std::string::npos) {
        std::vector<double> values;
        std::stringstream parts(v);
        std::string piece;
        bool numeric = true;
        while (std::getline(parts, piece, ',')) {
            double item = 0.0;
            if (!parse_number(trim(piece), item)) {
                numeric = false;
                break;
            }
            values.push_back(item);
        }
        if (numeric && !values.empty()) return nlohmann::json(values);
    }
    return v;
}

nlohmann::json parse_ini(const std::string& content) {
    nlohmann::json data = nlohmann::json::object();
    std::istringstream lines(content);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#' || text[0] == ';') continue;
        if (text.front() == '[') {
            if (text.back() != ']')
                throw SchemaError("config line " + std::to_string(line_no) +
                                  ": unterminated section header");
            section = trim(text.substr(1, text.size() - 2));
            if (section.empty())
                throw SchemaError("config line " + std::to_string(line_no) +
                                  ": empty section name");
            if (!data.contains(section)) data[section] = nlohmann::json::object();
            continue;
        }
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw SchemaError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        if (section.empty())
            throw SchemaError("config line " + std::to_string(line_no) +
                              ": key outside of any [section]");
        const std::string key = trim(text.substr(0, eq));
        if (key.empty())
            throw SchemaError("config line " + std::to_string(line_no) + ": empty key");
        data[section][key] = parse_value(text.substr(eq + 1));
    }
    return data;
}

const nlohmann::json* find_key(const nlohmann::json& data, const std::string& section,
                               const std::string& key) {
    auto sec = data.find(section);
    if (sec == data.end() || !sec->is_object()) return nullptr;
    auto it = sec->find(key);
    if (it == sec->end()) return nullptr;
    return &*it;
}

[[noreturn]] void missing(const std::string& section, const std::string& key,
                          const std::string& kind) {
    throw SchemaError("config needs " + kind + " '" + section + "." + key + "'");
}

}  // namespace

bool ExperimentConfig::has(const std::string& section, const std::string& key) const {
    return find_key(data, section, key) != nullptr;
}

double ExperimentConfig::number(const std::string& section, const std::string& key) const {
    const nlohmann::json* v = find_key(data, section, key);
    if (!v || !v->is_number()) missing(section, key, "a number");
    return v->get<double>();
}

double ExperimentConfig::number_or(const std::string& section, const std::string& key,
                                   double fallback) const {
    return has(section, key) ? number(section, key) : fallback;
}

std::int64_t ExperimentConfig::integer(const std::string& section, const std::string& key) const {
    const double v = number(section, key);
    if (v != std::floor(v) || std::abs(v) > 9.0e15)
        throw SchemaError("config key '" + section + "." + key + "' must be an integer");
    return static_cast<std::int64_t>(v);
}

std::int64_t ExperimentConfig::integer_or(const std::string& section, const std::string& key,
                                          std::int64_t fallback) const {
    return has(section, key) ? integer(section, key) : fallback;
}

std::string ExperimentConfig::text(const std::string& section, const std::string& key) const {
    const nlohmann::json* v = find_key(data, section, key);
    if (!v || !v->is_string()) missing(section, key, "a string");
    return v->get<std::string>();
}

std::string ExperimentConfig::text_or(const std::string& section, const std::string& key,
                                      const std::string& fallback) const {
    return has(section, key) ? text(section, key) : fallback;
}

std::vector<double> ExperimentConfig::numbers(const std::string& section,
                                              const std::string& key) const {
    const nlohmann::json* v = find_key(data, section, key);
    if (!v) missing(section, key, "a number list");
    if (v->is_number()) return {v->get<double>()};
    if (v->is_array()) {
        std::vector<double> out;
        out.reserve(v->size());
        for (const auto& item : *v) {
            if (!item.is_number()) missing(section, key, "a number list");
            out.push_back(item.get<double>());
        }
        return out;
    }
    missing(section, key, "a number list");
}

ExperimentConfig parse_config(const std::string& content) {
    ExperimentConfig config;
    config.source_bytes = content;
    const std::size_t first = content.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && content[first] == '{') {
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(content);
        } catch (const nlohmann::json::parse_error& e) {
            throw SchemaError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!parsed.is_object()) throw SchemaError("config root must be an object");
        for (const auto& [section, body] : parsed.items())
            if (!body.is_object())
                throw SchemaError("config section '" + section + "' must be an object");
        config.data = std::move(parsed);
        return config;
    }
    config.data = parse_ini(content);
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw SchemaError("cannot read config file '" + path + "'");
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    return parse_config(buffer.str());
}

} // namespace idescope
