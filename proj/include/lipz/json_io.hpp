#pragma once

/**
 * @file json_io.hpp
 * @brief JSON schemas and CSV emission for maps, samples and reports.
 *
 * Parsing is strict: unknown fields, wrong types, unsorted residual tables
 * and out-of-range integers are rejected with the offending field named.
 * Report serialization is deterministic (fixed key order, rationals as
 * "num/den" strings).
 */

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lipz/grid2d.hpp"
#include "lipz/rational.hpp"
#include "lipz/rigidity.hpp"
#include "lipz/zmap.hpp"

namespace lipz {

using ordered_json = nlohmann::ordered_json;

class json_io_error : public std::runtime_error {
public:
    json_io_error(std::string field, const std::string& detail)
        : std::runtime_error(field + ": " + detail), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

namespace detail {

inline Int int_field(const ordered_json& j, const std::string& field) {
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_number_unsigned()) {
        auto v = j.get<std::uint64_t>();
        if (v > static_cast<std::uint64_t>(INT64_MAX))
            throw json_io_error(field, "integer out of range");
        return Int(static_cast<std::int64_t>(v));
    }
    throw json_io_error(field, "expected an integer");
}

inline std::int64_t to_json_int(const Int& v, const std::string& field) {
    if (v > INT64_MAX || v < INT64_MIN)
        throw json_io_error(field, "value exceeds the JSON integer range");
    return v.convert_to<std::int64_t>();
}

inline void require_keys(const ordered_json& j, const std::string& what,
                         std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw json_io_error(what, "expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : keys)
            if (item.key() == k) { known = true; break; }
        if (!known) throw json_io_error(what, "unknown field \"" + item.key() + "\"");
    }
    for (const char* k : keys)
        if (!j.contains(k)) throw json_io_error(what, std::string("missing field \"") + k + "\"");
}

inline ordered_json parse_text(const std::string& text) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw json_io_error("json", e.what());
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// EventuallyAffineMap <-> {"orientation": 1|-1, "offset": N, "residual": [[x, r], ...]}
// ---------------------------------------------------------------------------

inline MapCandidate map_candidate_from_json(const ordered_json& j) {
    detail::require_keys(j, "map", {"orientation", "offset", "residual"});

    MapCandidate out;
    Int orientation = detail::int_field(j["orientation"], "orientation");
    if (orientation != 1 && orientation != -1)
        throw json_io_error("orientation", "must be 1 or -1");
    out.orientation = orientation == 1 ? 1 : -1;
    out.offset = detail::int_field(j["offset"], "offset");

    const auto& residual = j["residual"];
    if (!residual.is_array()) throw json_io_error("residual", "expected an array of [x, r] pairs");
    for (std::size_t i = 0; i < residual.size(); ++i) {
        const std::string field = "residual[" + std::to_string(i) + "]";
        const auto& entry = residual[i];
        if (!entry.is_array() || entry.size() != 2)
            throw json_io_error(field, "expected an [x, r] pair");
        Int x = detail::int_field(entry[0], field + ".x");
        Int r = detail::int_field(entry[1], field + ".r");
        if (r == 0) throw json_io_error(field, "residual value must be nonzero");
        if (!out.residual.empty() && !(out.residual.back().first < x))
            throw json_io_error(field, "residual keys must be strictly increasing");
        out.residual.emplace_back(std::move(x), std::move(r));
    }
    return out;
}

inline EventuallyAffineMap map_from_json_text(const std::string& text) {
    return validate_bijection(map_candidate_from_json(detail::parse_text(text)));
}

inline ordered_json map_to_json(const EventuallyAffineMap& f) {
    ordered_json j;
    j["orientation"] = f.orientation();
    j["offset"] = detail::to_json_int(f.offset(), "offset");
    auto residual = ordered_json::array();
    for (const auto& [x, r] : f.residual())
        residual.push_back({detail::to_json_int(x, "residual.x"), detail::to_json_int(r, "residual.r")});
    j["residual"] = residual;
    return j;
}

// ---------------------------------------------------------------------------
// WindowSample <-> {"start": N, "values": [...]}
// ---------------------------------------------------------------------------

inline WindowSample window_from_json(const ordered_json& j) {
    detail::require_keys(j, "window", {"start", "values"});
    Int start = detail::int_field(j["start"], "start");
    const auto& values = j["values"];
    if (!values.is_array()) throw json_io_error("values", "expected an array of integers");
    std::vector<Int> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out.push_back(detail::int_field(values[i], "values[" + std::to_string(i) + "]"));
    try {
        return WindowSample::checked(std::move(start), std::move(out));
    } catch (const std::invalid_argument& e) {
        throw json_io_error("values", e.what());
    }
}

inline ordered_json window_to_json(const WindowSample& w) {
    ordered_json j;
    j["start"] = detail::to_json_int(w.start, "start");
    auto values = ordered_json::array();
    for (const auto& v : w.values) values.push_back(detail::to_json_int(v, "values"));
    j["values"] = values;
    return j;
}

// ---------------------------------------------------------------------------
// GridMap <-> tagged JSON
// ---------------------------------------------------------------------------

inline GridMap grid_map_from_json(const ordered_json& j);

inline LatticeFunction lattice_function_from_json(const ordered_json& j) {
    detail::require_keys(j, "g", {"slope", "offset", "table"});
    Int slope = detail::int_field(j["slope"], "g.slope");
    Int offset = detail::int_field(j["offset"], "g.offset");
    const auto& table = j["table"];
    if (!table.is_array()) throw json_io_error("g.table", "expected an array of [x, dy] pairs");
    std::vector<std::pair<Int, Int>> entries;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const std::string field = "g.table[" + std::to_string(i) + "]";
        const auto& entry = table[i];
        if (!entry.is_array() || entry.size() != 2)
            throw json_io_error(field, "expected an [x, dy] pair");
        entries.emplace_back(detail::int_field(entry[0], field + ".x"),
                             detail::int_field(entry[1], field + ".dy"));
    }
    try {
        return LatticeFunction::checked(std::move(slope), std::move(offset), std::move(entries));
    } catch (const std::invalid_argument& e) {
        throw json_io_error("g.table", e.what());
    }
}

inline GridMap grid_map_from_json(const ordered_json& j) {
    if (!j.is_object()) throw json_io_error("grid map", "expected an object");
    if (!j.contains("kind")) throw json_io_error("kind", "missing");
    if (!j["kind"].is_string()) throw json_io_error("kind", "expected a string");
    const std::string kind = j["kind"].get<std::string>();

    if (kind == "shear") {
        detail::require_keys(j, "grid map", {"kind", "g"});
        return GridMap::shear(lattice_function_from_json(j["g"]));
    }
    if (kind == "linear") {
        detail::require_keys(j, "grid map", {"kind", "m"});
        const auto& m = j["m"];
        if (!m.is_array() || m.size() != 4)
            throw json_io_error("m", "expected [a, b, c, d]");
        Mat2 mat{detail::int_field(m[0], "m[0]"), detail::int_field(m[1], "m[1]"),
                 detail::int_field(m[2], "m[2]"), detail::int_field(m[3], "m[3]")};
        try {
            return GridMap::linear(std::move(mat));
        } catch (const std::invalid_argument& e) {
            throw json_io_error("m", e.what());
        }
    }
    if (kind == "translation") {
        detail::require_keys(j, "grid map", {"kind", "t"});
        const auto& t = j["t"];
        if (!t.is_array() || t.size() != 2) throw json_io_error("t", "expected [tx, ty]");
        return GridMap::translation(detail::int_field(t[0], "t[0]"), detail::int_field(t[1], "t[1]"));
    }
    if (kind == "composition") {
        detail::require_keys(j, "grid map", {"kind", "maps"});
        const auto& maps = j["maps"];
        if (!maps.is_array()) throw json_io_error("maps", "expected an array of grid maps");
        std::vector<GridMap> children;
        children.reserve(maps.size());
        for (const auto& child : maps) children.push_back(grid_map_from_json(child));
        return GridMap::composition(std::move(children));
    }
    throw json_io_error("kind", "unknown kind \"" + kind + "\"");
}

inline GridMap grid_map_from_json_text(const std::string& text) {
    return grid_map_from_json(detail::parse_text(text));
}

inline ordered_json grid_map_to_json(const GridMap& f) {
    ordered_json j;
    switch (f.kind()) {
        case GridMap::Kind::shear: {
            j["kind"] = "shear";
            ordered_json g;
            g["slope"] = detail::to_json_int(f.shear_function().slope(), "g.slope");
            g["offset"] = detail::to_json_int(f.shear_function().offset(), "g.offset");
            auto table = ordered_json::array();
            for (const auto& [x, dy] : f.shear_function().table())
                table.push_back({detail::to_json_int(x, "g.table.x"), detail::to_json_int(dy, "g.table.dy")});
            g["table"] = table;
            j["g"] = g;
            break;
        }
        case GridMap::Kind::linear:
            j["kind"] = "linear";
            j["m"] = {detail::to_json_int(f.matrix().a, "m"), detail::to_json_int(f.matrix().b, "m"),
                      detail::to_json_int(f.matrix().c, "m"), detail::to_json_int(f.matrix().d, "m")};
            break;
        case GridMap::Kind::translation:
            j["kind"] = "translation";
            j["t"] = {detail::to_json_int(f.offset().x, "t"), detail::to_json_int(f.offset().y, "t")};
            break;
        case GridMap::Kind::composition: {
            j["kind"] = "composition";
            auto maps = ordered_json::array();
            for (const auto& child : f.children()) maps.push_back(grid_map_to_json(child));
            j["maps"] = maps;
            break;
        }
    }
    return j;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline ordered_json decomposition_to_json(const RigidityDecomposition& d) {
    ordered_json j;
    j["sigma"] = d.orientation;
    j["const"] = detail::to_json_int(d.constant, "const");
    j["residual_sup"] = format_rational(d.residual_sup);
    j["C"] = format_rational(d.lipschitz_product);
    j["conforms"] = d.conforms;
    j["empirical"] = d.empirical;
    return j;
}

inline ordered_json ray_to_json(const RayProfile& r) {
    ordered_json j;
    j["x"] = detail::to_json_int(r.x, "x");
    j["case"] = r.ray_case == RayCase::below_ray ? "below_ray" : "above_ray";
    if (r.region_empty) {
        j["region_lo"] = nullptr;
        j["region_hi"] = nullptr;
    } else {
        j["region_lo"] = detail::to_json_int(r.region_lo, "region_lo");
        j["region_hi"] = detail::to_json_int(r.region_hi, "region_hi");
    }
    j["width"] = detail::to_json_int(r.width, "width");
    j["centered"] = r.centered;
    return j;
}

inline ordered_json folner_to_json(const FolnerReport& r) {
    ordered_json j;
    j["n"] = detail::to_json_int(r.n, "n");
    j["window_size"] = detail::to_json_int(r.window_size, "window_size");
    j["intersection"] = detail::to_json_int(r.intersection, "intersection");
    j["ratio"] = format_rational(r.ratio);
    return j;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string folner_csv(const std::vector<FolnerReport>& reports) {
    std::ostringstream os;
    os << "n,intersection,ratio_num,ratio_den\n";
    for (const auto& r : reports)
        os << r.n << ',' << r.intersection << ',' << numerator(r.ratio) << ','
           << denominator(r.ratio) << '\n';
    return os.str();
}

inline std::string grid_report_csv_header() { return "n,value_num,value_den\n"; }

inline std::string grid_report_csv_row(long long n, const Rat& value) {
    std::ostringstream os;
    os << n << ',' << numerator(value) << ',' << denominator(value) << '\n';
    return os.str();
}

/// One JSON line per visited finite bijection.
inline std::string finite_bijection_jsonl(const FiniteBijection& f) {
    ordered_json j;
    j["n"] = f.size;
    j["values"] = f.values;
    return j.dump();
}

}  // namespace lipz
