#pragma once

/**
 * @file cli.hpp
 * @brief The lipz command line: parse map files, run the analyzers and the
 *        enumerator, emit JSON/CSV reports.
 *
 * Exit codes: 0 success, 1 a verification found violations (verify, or
 * analyze of a non-conforming sample), 2 parse or validation errors.
 * Report bodies carry no timestamps; --meta writes run metadata to stderr.
 */

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lipz/enumerate.hpp"
#include "lipz/grid2d.hpp"
#include "lipz/json_io.hpp"
#include "lipz/rigidity.hpp"
#include "lipz/zmap.hpp"

namespace lipz::cli {

inline constexpr const char* kVersion = "1.0.0";

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw json_io_error(path, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline Cap parse_cap(const std::string& text, const std::string& flag) {
    auto bad = [&](const std::string& why) { return json_io_error(flag, why); };
    try {
        auto slash = text.find('/');
        if (slash == std::string::npos) return Cap::of(std::stoll(text));
        return Cap::of(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    } catch (const std::invalid_argument& e) {
        throw bad(e.what());
    } catch (const std::out_of_range&) {
        throw bad("value out of range");
    }
}

inline std::pair<Int, Int> parse_window_range(const std::string& text) {
    auto sep = text.find("..");
    if (sep == std::string::npos)
        throw json_io_error("--window", "expected A..B");
    try {
        Int a(text.substr(0, sep));
        Int b(text.substr(sep + 2));
        if (b < a) throw json_io_error("--window", "range is empty");
        if (b - a > 1000000) throw json_io_error("--window", "range wider than 1000000");
        return {a, b};
    } catch (const std::runtime_error&) {
        throw json_io_error("--window", "expected integer endpoints");
    }
}

inline std::vector<Int> parse_int_list(const std::string& text, const std::string& flag) {
    std::vector<Int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(Int(item));
        } catch (const std::runtime_error&) {
            throw json_io_error(flag, "expected a comma-separated integer list");
        }
    }
    if (out.empty()) throw json_io_error(flag, "expected at least one value");
    return out;
}

inline long long window_arg(const Int& n) {
    if (n < 1) throw json_io_error("--n", "must be positive");
    if (n > 100000) throw json_io_error("--n", "window too large (max 100000)");
    return n.convert_to<long long>();
}

struct ParsedInput {
    std::optional<EventuallyAffineMap> map;
    std::optional<WindowSample> window;
};

/// A map file and a window-sample file are distinguished by their keys.
inline ParsedInput load_line_input(const std::string& path) {
    ordered_json j = lipz::detail::parse_text(read_file(path));
    if (j.is_object() && j.contains("orientation"))
        return {validate_bijection(map_candidate_from_json(j)), std::nullopt};
    if (j.is_object() && j.contains("start"))
        return {std::nullopt, window_from_json(j)};
    throw json_io_error("json", "expected a map object or a window-sample object");
}

}  // namespace detail

/// Runs the lipz command line. Arguments exclude the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact rigidity analysis of bi-Lipschitz bijections of the integer line"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags are accepted after the subcommand too

    bool meta = false;
    unsigned threads = 0;
    app.add_flag("--meta", meta, "Write run metadata to stderr");
    app.add_option("--threads", threads, "Worker threads (0 = all cores)");

    std::string file, window_range, cap1 = "1", cap2 = "1", emit_path, ns_list, point_text;
    std::string cut_text = "0";
    int n_flag = 1;
    long long grid_n = 1;
    bool count_only = false;

    auto* analyze = app.add_subcommand("analyze", "Rigidity decomposition of a map or window sample");
    analyze->add_option("file", file)->required();
    analyze->add_option("--window", window_range, "Analyze the restriction to A..B");

    auto* ray = app.add_subcommand("ray", "Profile the image of a left ray");
    ray->add_option("file", file)->required();
    ray->add_option("--x", cut_text, "Cut point")->required();

    auto* enumerate = app.add_subcommand("enumerate", "Enumerate bijections of [0,n) under constant caps");
    enumerate->add_option("--n", n_flag)->required();
    enumerate->add_option("--k1", cap1, "Forward cap (integer or p/q)")->required();
    enumerate->add_option("--k2", cap2, "Backward cap (integer or p/q)")->required();
    enumerate->add_flag("--count-only", count_only);
    enumerate->add_option("--emit", emit_path, "Write visited maps as JSON lines");

    auto* verify = app.add_subcommand("verify", "Check the rigidity bound over an enumeration");
    verify->add_option("--n", n_flag)->required();
    verify->add_option("--k1", cap1)->required();
    verify->add_option("--k2", cap2)->required();

    auto* folner = app.add_subcommand("folner", "Folner ratios over [-n,n] as CSV");
    folner->add_option("file", file)->required();
    folner->add_option("--ns", ns_list, "Comma-separated window radii")->required();

    auto* grid = app.add_subcommand("grid", "Grid-map diagnostics");
    std::string grid_mode;
    grid->add_option("mode", grid_mode)->required()->check(CLI::IsMember({"apply", "lipschitz", "isogap", "folner"}));
    grid->add_option("file", file)->required();
    grid->add_option("--n", grid_n, "Window radius");
    grid->add_option("--point", point_text, "Point X,Y for apply");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    if (meta) {
        err << "# lipz " << kVersion << "\n";
        err << "# threads " << (threads == 0 ? std::thread::hardware_concurrency() : threads) << "\n";
    }

    try {
        if (*analyze) {
            auto input = detail::load_line_input(file);
            RigidityDecomposition dec;
            if (input.map && window_range.empty()) {
                dec = decompose(*input.map);
            } else if (input.map) {
                auto [a, b] = detail::parse_window_range(window_range);
                std::vector<Int> values;
                for (Int x = a; x <= b; ++x) values.push_back((*input.map)(x));
                dec = decompose_window(WindowSample{a, std::move(values)});
            } else {
                if (!window_range.empty())
                    throw json_io_error("--window", "only applies to map files");
                dec = decompose_window(*input.window);
            }
            out << decomposition_to_json(dec).dump() << "\n";
            return dec.conforms ? 0 : 1;
        }

        if (*ray) {
            auto input = detail::load_line_input(file);
            if (!input.map) throw json_io_error("json", "ray requires a map file");
            Int x;
            try {
                x = Int(cut_text);
            } catch (const std::runtime_error&) {
                throw json_io_error("--x", "expected an integer");
            }
            out << ray_to_json(ray_profile(*input.map, x)).dump() << "\n";
            return 0;
        }

        if (*enumerate) {
            auto spec = EnumSpec::checked(n_flag, detail::parse_cap(cap1, "--k1"),
                                          detail::parse_cap(cap2, "--k2"));
            std::ofstream emit;
            std::function<void(const FiniteBijection&)> visitor;
            if (!emit_path.empty()) {
                emit.open(emit_path, std::ios::binary);
                if (!emit) throw json_io_error(emit_path, "cannot open file for writing");
                visitor = [&emit](const FiniteBijection& f) { emit << finite_bijection_jsonl(f) << "\n"; };
            }
            auto result = enumerate_bijections(spec, visitor, EnumOptions{threads});
            if (count_only) {
                out << result.count << "\n";
            } else {
                ordered_json j;
                j["count"] = result.count;
                j["nodes"] = result.stats.nodes;
                j["pruned_used"] = result.stats.pruned_used;
                j["pruned_forward"] = result.stats.pruned_forward;
                j["pruned_backward"] = result.stats.pruned_backward;
                out << j.dump() << "\n";
            }
            return 0;
        }

        if (*verify) {
            auto spec = EnumSpec::checked(n_flag, detail::parse_cap(cap1, "--k1"),
                                          detail::parse_cap(cap2, "--k2"));
            auto result = verify_theorem_over(spec, EnumOptions{threads});
            out << result.count << " maps checked, " << result.violations.size() << " violations\n";
            for (const auto& v : result.violations) out << finite_bijection_jsonl(v) << "\n";
            return result.violations.empty() ? 0 : 1;
        }

        if (*folner) {
            auto input = detail::load_line_input(file);
            if (!input.map) throw json_io_error("json", "folner requires a map file");
            std::vector<FolnerReport> reports;
            for (const Int& n : detail::parse_int_list(ns_list, "--ns"))
                reports.push_back(folner_ratio(*input.map, n));
            out << folner_csv(reports);
            return 0;
        }

        if (*grid) {
            GridMap f = grid_map_from_json_text(detail::read_file(file));
            if (grid_mode == "apply") {
                if (point_text.empty()) throw json_io_error("--point", "required for apply");
                auto comma = point_text.find(',');
                if (comma == std::string::npos) throw json_io_error("--point", "expected X,Y");
                GridPoint p;
                try {
                    p.x = Int(point_text.substr(0, comma));
                    p.y = Int(point_text.substr(comma + 1));
                } catch (const std::runtime_error&) {
                    throw json_io_error("--point", "expected integer coordinates");
                }
                GridPoint q = f(p);
                out << "[" << q.x << "," << q.y << "]\n";
                return 0;
            }
            long long n = grid_n;
            if (n < 1) throw json_io_error("--n", "must be positive");
            if (grid_mode == "lipschitz") {
                auto rep = grid_lipschitz_window(f, n, threads);
                out << grid_report_csv_header()
                    << grid_report_csv_row(rep.n, rep.forward)
                    << grid_report_csv_row(rep.n, rep.backward);
                return 0;
            }
            if (grid_mode == "isogap") {
                auto rep = isometry_gap(f, n, threads);
                out << grid_report_csv_header() << grid_report_csv_row(rep.n, rep.value);
                return 0;
            }
            auto rep = grid_folner_ratio(f, n, threads);
            out << grid_report_csv_header() << grid_report_csv_row(rep.n, rep.ratio);
            return 0;
        }
    } catch (const map_defect& e) {
        err << "error: invalid map: " << e.what() << "\n";
        return 2;
    } catch (const json_io_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const degenerate_window&) {
        err << "error: window has fewer than 2 samples\n";
        return 2;
    } catch (const too_large& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;  // unreachable: require_subcommand guarantees a branch
}

}  // namespace lipz::cli
