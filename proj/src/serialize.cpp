#include "idescope/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace idescope {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void emit_canonical(const nlohmann::json& j, std::string& out) {
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += nlohmann::json(it.key()).dump();
                out += ':';
                emit_canonical(it.value(), out);
            }
            out += '}';
            break;
        }
        case nlohmann::json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& item : j) {
                if (!first) out += ',';
                first = false;
                emit_canonical(item, out);
            }
            out += ']';
            break;
        }
        case nlohmann::json::value_t::number_float:
            out += format_double(j.get<double>());
            break;
        default:
            out += j.dump();
            break;
    }
}

}  // namespace

std::string canonical_json(const nlohmann::json& j) {
    // nlohmann::json stores object keys in a std::map, so iteration above is
    // already sorted; ordered_json inputs are normalized by this conversion.
    std::string out;
    emit_canonical(j, out);
    out += '\n';
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream stream(path, std::ios::binary);
    if (!stream) throw std::runtime_error("cannot open '" + path + "' for writing");
    stream.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!stream) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    return buffer.str();
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t";
    const int dim = traj.states.empty() ? 0 : static_cast<int>(traj.states.front().size());
    for (int c = 0; c < dim; ++c) out += ",component_" + std::to_string(c);
    out += '\n';
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        out += std::to_string(traj.time_at(i));
        for (int c = 0; c < dim; ++c) {
            out += ',';
            out += format_double(traj.states[i][c]);
        }
        out += '\n';
    }
    return out;
}

std::string fiber_csv(const FiberCloud& cloud, const Quadrature* quadrature) {
    std::string out;
    if (quadrature && cloud.dim() == quadrature->size()) {
        // spatial states: habitat nodes in the first column, one column per
        // cloud point
        if (cloud.points.size() == 1) {
            out = "x,u\n";
        } else {
            out = "x";
            for (std::size_t p = 0; p < cloud.points.size(); ++p)
                out += ",u_" + std::to_string(p);
            out += '\n';
        }
        for (int i = 0; i < quadrature->size(); ++i) {
            out += format_double(quadrature->nodes[i]);
            for (const State& p : cloud.points) {
                out += ',';
                out += format_double(p[i]);
            }
            out += '\n';
        }
        return out;
    }
    if (cloud.dim() <= 1) {
        out = "index,value\n";
        for (std::size_t i = 0; i < cloud.points.size(); ++i) {
            out += std::to_string(i);
            out += ',';
            out += format_double(cloud.points[i].size() ? cloud.points[i][0] : 0.0);
            out += '\n';
        }
        return out;
    }
    out = "index";
    for (int c = 0; c < cloud.dim(); ++c) out += ",component_" + std::to_string(c);
    out += '\n';
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        out += std::to_string(i);
        for (int c = 0; c < cloud.dim(); ++c) {
            out += ',';
            out += format_double(cloud.points[i][c]);
        }
        out += '\n';
    }
    return out;
}

std::string trace_csv(const FiberTrace& trace) {
    std::string out = "s,dist\n";
    for (const auto& [s, d] : trace.entries) {
        out += std::to_string(s);
        out += ',';
        out += format_double(d);
        out += '\n';
    }
    return out;
}

namespace {

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Sampled: return "sampled";
        case Provenance::Iterated: return "iterated";
        case Provenance::Intersected: return "intersected";
        case Provenance::Closure: return "closure";
    }
    return "unknown";
}

}  // namespace

nlohmann::json cloud_to_json(const FiberCloud& cloud) {
    nlohmann::json j;
    j["time"] = cloud.time;
    j["resolution"] = cloud.resolution;
    j["provenance"] = provenance_name(cloud.provenance);
    j["count"] = cloud.points.size();
    auto points = nlohmann::json::array();
    for (const State& p : cloud.points) {
        auto row = nlohmann::json::array();
        for (int c = 0; c < p.size(); ++c) row.push_back(p[c]);
        points.push_back(std::move(row));
    }
    j["points"] = std::move(points);
    return j;
}

nlohmann::json trace_to_json(const FiberTrace& trace) {
    nlohmann::json j;
    j["converged"] = trace.converged;
    auto entries = nlohmann::json::array();
    for (const auto& [s, d] : trace.entries) entries.push_back({s, d});
    j["entries"] = std::move(entries);
    return j;
}

} // namespace idescope
