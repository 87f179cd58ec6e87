#pragma once

/**
 * @file io.hpp
 * @brief JSON and CSV interchange formats.
 *
 * Configuration JSON:
 *   { "window": {"kind", "inner_radius", "outer_radius"}, "seed": u64,
 *     "intensity": "<descriptor>"?, "mark_distribution": "<descriptor>"?,
 *     "points": [[re, im], ...], "marks": [n, ...]? }
 *
 * Grid CSV: header `re,im,log_abs,phase`, row-major, %.17g decimals, the
 * literal `-inf` for log_abs at exact zeros.
 */

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "rze/detail/format.hpp"
#include "rze/error.hpp"
#include "rze/monte_carlo.hpp"
#include "rze/point_process.hpp"
#include "rze/weierstrass_product.hpp"
#include "rze/zero_verification.hpp"

namespace rze {

using Json = nlohmann::ordered_json;

/// A configuration as stored on disk, with the sampling provenance when known.
struct ConfigurationFile {
    std::variant<Configuration, MarkedConfiguration> config;
    std::optional<std::string> intensity;
    std::optional<std::string> mark_distribution;

    bool is_marked() const noexcept { return std::holds_alternative<MarkedConfiguration>(config); }

    const Window& window() const {
        return std::visit([](const auto& c) -> const Window& { return c.window(); }, config);
    }

    std::uint64_t seed() const {
        return std::visit([](const auto& c) { return c.seed(); }, config);
    }

    /// Entries with multiplicities (1 for an unmarked configuration).
    std::vector<MarkedPoint> entries() const {
        if (const auto* m = std::get_if<MarkedConfiguration>(&config)) {
            return m->entries();
        }
        std::vector<MarkedPoint> out;
        for (const cplx& x : std::get<Configuration>(config).points()) {
            out.push_back({x, 1});
        }
        return out;
    }
};

inline Json to_json(const Window& w) {
    Json j;
    j["kind"] = w.kind() == Window::Kind::disk ? "disk" : "annulus";
    j["inner_radius"] = w.inner_radius();
    j["outer_radius"] = w.outer_radius();
    return j;
}

inline Window window_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "disk") {
        return Window::disk(j.at("outer_radius").get<double>());
    }
    if (kind == "annulus") {
        return Window::annulus(j.at("inner_radius").get<double>(), j.at("outer_radius").get<double>());
    }
    throw ValidationError("unknown window kind '" + kind + "'");
}

inline Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw ValidationError("a point is a [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Json to_json(const ConfigurationFile& file) {
    Json j;
    j["window"] = to_json(file.window());
    j["seed"] = file.seed();
    if (file.intensity) {
        j["intensity"] = *file.intensity;
    }
    if (file.mark_distribution) {
        j["mark_distribution"] = *file.mark_distribution;
    }
    Json points = Json::array();
    Json marks = Json::array();
    for (const auto& e : file.entries()) {
        points.push_back(to_json(e.point));
        marks.push_back(e.multiplicity);
    }
    j["points"] = std::move(points);
    if (file.is_marked()) {
        j["marks"] = std::move(marks);
    }
    return j;
}

inline ConfigurationFile configuration_from_json(const Json& j) {
    try {
        const Window window = window_from_json(j.at("window"));
        const std::uint64_t seed = j.at("seed").get<std::uint64_t>();
        std::vector<cplx> points;
        for (const auto& p : j.at("points")) {
            points.push_back(complex_from_json(p));
        }
        std::optional<std::string> intensity;
        std::optional<std::string> marks_desc;
        if (j.contains("intensity")) {
            intensity = j["intensity"].get<std::string>();
        }
        if (j.contains("mark_distribution")) {
            marks_desc = j["mark_distribution"].get<std::string>();
        }
        if (j.contains("marks")) {
            const auto& marks = j["marks"];
            if (!marks.is_array() || marks.size() != points.size()) {
                throw ValidationError("'marks' must list one multiplicity per point");
            }
            std::vector<MarkedPoint> entries;
            for (std::size_t i = 0; i < points.size(); ++i) {
                const auto& m = marks[i];
                if (!m.is_number_integer() || m.get<std::int64_t>() < 1) {
                    throw ValidationError("multiplicities must be positive integers");
                }
                entries.push_back({points[i], m.get<std::uint64_t>()});
            }
            return {MarkedConfiguration(std::move(entries), window, seed), intensity, marks_desc};
        }
        return {Configuration(std::move(points), window, seed), intensity, marks_desc};
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed configuration JSON: ") + e.what());
    }
}

inline Json to_json(const TailBound& t) {
    Json j;
    j["expected_tail"] = t.expected_tail;
    j["confidence_level"] = t.confidence_level;
    j["bound_at_confidence"] = t.bound_at_confidence;
    return j;
}

inline Json to_json(const McStatistics& s) {
    Json j;
    j["check"] = s.check;
    j["trials"] = s.trials;
    j["mean"] = s.mean;
    j["std_error"] = s.std_error;
    j["reference"] = s.reference;
    j["z_score"] = s.z_score;
    return j;
}

inline Json to_json(const ZeroReport& report) {
    Json points = Json::array();
    for (const auto& r : report.points) {
        Json p;
        Json members = Json::array();
        for (const cplx& x : r.points) {
            members.push_back(to_json(x));
        }
        p["points"] = std::move(members);
        p["center"] = to_json(r.center);
        p["expected"] = r.expected;
        p["counted"] = r.counted;
        p["radius"] = r.radius;
        p["residual"] = r.residual;
        p["nodes"] = r.nodes;
        p["passed"] = r.passed();
        points.push_back(std::move(p));
    }
    Json bulk;
    bulk["radius"] = report.bulk.radius;
    bulk["expected"] = report.bulk.expected;
    bulk["counted"] = report.bulk.counted;
    bulk["residual"] = report.bulk.residual;
    bulk["nodes"] = report.bulk.nodes;
    bulk["passed"] = report.bulk.passed();
    Json j;
    j["passed"] = report.passed;
    j["points"] = std::move(points);
    j["bulk"] = std::move(bulk);
    return j;
}

inline std::string grid_csv(const GridResult& result) {
    std::string out = "re,im,log_abs,phase\n";
    out.reserve(out.size() + result.nodes.size() * 96);
    for (const auto& n : result.nodes) {
        out += detail::format_double(n.z.real());
        out += ',';
        out += detail::format_double(n.z.imag());
        out += ',';
        out += detail::format_double(n.log_abs);
        out += ',';
        out += detail::format_double(n.phase);
        out += '\n';
    }
    return out;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << content;
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

inline ConfigurationFile load_configuration(const std::string& path) {
    const std::string text = read_text_file(path);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
    }
    return configuration_from_json(j);
}

}  // namespace rze
