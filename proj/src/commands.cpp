#include "dykstra/commands.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "dykstra/line_square.hpp"
#include "dykstra/presets.hpp"

namespace dykstra::cli
{

namespace
{

Algorithm algorithm_from_string(const std::string &s)
{
    if (s == "dykstra")
        return Algorithm::Dykstra;
    if (s == "map")
        return Algorithm::Map;
    if (s == "both")
        return Algorithm::Both;
    throw UsageError("algorithm must be dykstra, map or both, got \"" + s + "\"");
}

OutputPaths outputs_from_json(const io::json &j)
{
    if (!j.is_object())
        throw UsageError("each output entry must be an object");
    OutputPaths o;
    if (j.contains("trace"))
        o.trace = j.at("trace").get<std::string>();
    if (j.contains("orbit"))
        o.orbit = j.at("orbit").get<std::string>();
    return o;
}

std::ofstream open_output(const std::string &path)
{
    std::ofstream f(path);
    if (!f)
        throw UsageError("cannot write " + path);
    return f;
}

struct Scenario
{
    SetDescriptor<double> a;
    SetDescriptor<double> b;
    Point<double> z;
};

// Geometry for classify/compare: --preset, --spec, or a line through --u with
// normal --v against the unit square.
Scenario scenario_from_options(const GeometryOptions &o)
{
    if (!o.preset.empty()) {
        const Preset &p = find_preset(o.preset);
        return {p.a, p.b, p.z};
    }
    if (!o.spec_path.empty()) {
        const ScenarioSpec s = scenario_from_file(o.spec_path);
        return {s.a, s.b, s.z};
    }
    if (o.u.empty() || o.v.empty() || o.z.empty())
        throw UsageError("give --u, --v and --z, or --preset, or --spec");
    return {make_line(parse_pair(o.u), parse_pair(o.v)), unit_square<double>(), as_point(parse_pair(o.z))};
}

// Every point of `xs` lies within tol (max-norm) of some point of `ys`.
bool covered(const std::vector<Point<double>> &xs, const std::vector<Point<double>> &ys, double tol)
{
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i)
        order.emplace_back(ys[i](0), i);
    std::sort(order.begin(), order.end());
    for (const auto &x : xs) {
        auto it = std::lower_bound(order.begin(), order.end(), std::make_pair(x(0) - tol, std::size_t{0}));
        bool hit = false;
        for (; it != order.end() && it->first <= x(0) + tol; ++it) {
            if ((ys[it->second] - x).cwiseAbs().maxCoeff() <= tol) {
                hit = true;
                break;
            }
        }
        if (!hit)
            return false;
    }
    return true;
}

std::string sweeps_text(const std::optional<Index> &n)
{
    return n ? std::to_string(*n) : std::string("never");
}

} // namespace

Vec2<double> parse_pair(const std::string &text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw UsageError("expected \"x,y\", got \"" + text + "\"");
    auto parse = [&](std::string_view s) {
        double value = 0;
        while (!s.empty() && s.front() == ' ')
            s.remove_prefix(1);
        if (!s.empty() && s.front() == '+')
            s.remove_prefix(1);
        const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw UsageError("not a number: \"" + std::string(s) + "\"");
        return value;
    };
    const std::string_view all(text);
    return {parse(all.substr(0, comma)), parse(all.substr(comma + 1))};
}

ScenarioSpec scenario_from_json(const io::json &j)
{
    if (!j.is_object())
        throw UsageError("scenario must be a JSON object");
    if (!j.contains("sets") || !j.at("sets").is_array() || j.at("sets").size() != 2)
        throw UsageError("scenario needs \"sets\": [first, second]");
    if (!j.contains("z"))
        throw UsageError("scenario needs \"z\"");
    ScenarioSpec s{io::set_from_json(j.at("sets")[0]), io::set_from_json(j.at("sets")[1]),
                   io::point_from_json(j.at("z")), Algorithm::Both, {}, {}};
    if (j.contains("algorithm"))
        s.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
    if (j.contains("stop")) {
        const auto &stop = j.at("stop");
        if (stop.contains("tol"))
            s.stop.tol = stop.at("tol").get<double>();
        if (stop.contains("max_iter"))
            s.stop.max_iter = stop.at("max_iter").get<Index>();
    }
    if (j.contains("outputs")) {
        const auto &out = j.at("outputs");
        if (out.is_array()) {
            for (const auto &o : out)
                s.outputs.push_back(outputs_from_json(o));
        } else {
            s.outputs.push_back(outputs_from_json(out));
        }
    }
    if (!(s.stop.tol >= 0))
        throw UsageError("stop.tol must be nonnegative");
    if (s.stop.max_iter < 1)
        throw UsageError("stop.max_iter must be at least 1");
    return s;
}

ScenarioSpec scenario_from_file(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw UsageError("cannot read " + path);
    try {
        return scenario_from_json(io::json::parse(f));
    } catch (const io::json::exception &e) {
        throw UsageError(path + ": " + e.what());
    }
}

int cmd_run(const RunOptions &options, std::ostream &out, std::ostream &err)
{
    try {
        ScenarioSpec spec;
        if (!options.preset.empty() && !options.spec_path.empty())
            throw UsageError("--spec and --preset are mutually exclusive");
        if (!options.preset.empty()) {
            const Preset &p = find_preset(options.preset);
            spec = {p.a, p.b, p.z, Algorithm::Both, {}, {}};
        } else if (!options.spec_path.empty()) {
            spec = scenario_from_file(options.spec_path);
        } else {
            throw UsageError("run needs --spec FILE or --preset NAME");
        }
        if (options.algorithm)
            spec.algorithm = algorithm_from_string(*options.algorithm);
        if (options.tol)
            spec.stop.tol = *options.tol;
        if (options.max_iter)
            spec.stop.max_iter = *options.max_iter;
        if (options.trace_path || options.orbit_path) {
            if (spec.outputs.empty())
                spec.outputs.emplace_back();
            for (auto &o : spec.outputs) {
                if (options.trace_path)
                    o.trace = *options.trace_path;
                if (options.orbit_path)
                    o.orbit = *options.orbit_path;
            }
        }
        if (!(spec.stop.tol >= 0) || spec.stop.max_iter < 1)
            throw UsageError("need tol >= 0 and max-iter >= 1");

        std::optional<DykstraTrace<double>> dyk;
        std::optional<MapTrace<double>> map;
        if (spec.algorithm != Algorithm::Map)
            dyk = run_dykstra(spec.a, spec.b, spec.z, spec.stop);
        if (spec.algorithm != Algorithm::Dykstra)
            map = run_map(spec.a, spec.b, spec.z, spec.stop);

        for (const auto &o : spec.outputs) {
            if (!o.trace.empty()) {
                io::json doc;
                if (dyk && map)
                    doc = io::json::array({io::to_json(*dyk), io::to_json(*map)});
                else
                    doc = dyk ? io::to_json(*dyk) : io::to_json(*map);
                open_output(o.trace) << doc.dump() << '\n';
            }
            if (!o.orbit.empty()) {
                std::ofstream f = open_output(o.orbit);
                io::write_orbit_csv_header(f);
                if (dyk)
                    io::write_orbit_csv_rows(f, *dyk);
                if (map)
                    io::write_orbit_csv_rows(f, *map);
            }
        }

        bool exhausted = false;
        auto summarize = [&](const char *name, const auto &trace) {
            out << name << ": " << termination_name(trace.termination) << " at n=" << trace.records.back().n;
            if (trace.limit)
                out << ", limit=" << io::format_point(*trace.limit);
            out << '\n';
            exhausted = exhausted || trace.termination == Termination::MaxIterations;
        };
        if (dyk)
            summarize("dykstra", *dyk);
        if (map)
            summarize("map", *map);
        return exhausted ? kExitMaxIterations : kExitOk;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

int cmd_classify(const GeometryOptions &options, std::ostream &out, std::ostream &err)
{
    try {
        if (options.u.empty() || options.v.empty() || options.z.empty())
            throw UsageError("classify needs --u, --v and --z");
        const Vec2<double> u = parse_pair(options.u), v = parse_pair(options.v), z = parse_pair(options.z);
        const Normalization<double> norm = normalize_symmetry(u, v, z);
        const RegionClass cls = classify_region(norm);

        std::optional<Vec2<double>> limit;
        if (cls.kind != RegionKind::OutOfScopeOrientation)
            limit = analytic_limit(norm);
        std::string transform;
        io::json canonical = nullptr;
        if (const auto *pose = std::get_if<CanonicalPose<double>>(&norm)) {
            transform = pose->transform.describe();
            canonical = {{"u", io::to_json(as_point(pose->problem.u))},
                         {"v", io::to_json(as_point(pose->problem.v))},
                         {"z", io::to_json(as_point(pose->problem.z))}};
        } else {
            const auto &par = std::get<ParallelCase<double>>(norm);
            transform = "parallel(axis=" + std::to_string(par.axis + 1) + ",alpha=" + io::format_number(par.alpha) + ")";
        }

        if (options.json) {
            io::json j{{"class", std::string(region_name(cls.kind))},
                       {"stall", cls.kind == RegionKind::Stalling ? io::json(cls.predicted_stall) : io::json(nullptr)},
                       {"limit", limit ? io::to_json(as_point(*limit)) : io::json(nullptr)},
                       {"transform", transform},
                       {"canonical", canonical}};
            out << j.dump() << '\n';
            return kExitOk;
        }
        out << region_name(cls.kind);
        if (cls.kind == RegionKind::Stalling)
            out << ", n=" << cls.predicted_stall;
        if (limit)
            out << ", limit=" << io::format_point(as_point(*limit));
        out << ", transform=" << transform << '\n';
        return kExitOk;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

int cmd_compare(const GeometryOptions &options, std::ostream &out, std::ostream &err)
{
    try {
        const Scenario s = scenario_from_options(options);
        StopRule<double> stop;
        if (options.tol)
            stop.tol = *options.tol;
        if (options.max_iter)
            stop.max_iter = *options.max_iter;
        const bool affine = is_affine(s.a);
        if (!affine)
            err << "warning: first set is not affine; comparing sequences directly\n";

        const auto dyk = run_dykstra(s.a, s.b, s.z, stop);
        const auto map = run_map(s.a, s.b, s.z, stop);
        const auto report = coincidence_report(dyk, map, affine, options.coincide_tol);

        out << "dykstra: " << termination_name(dyk.termination) << " at n=" << dyk.records.back().n
            << ", sweeps to tol: " << sweeps_text(sweeps_to_tolerance(dyk, stop.tol)) << '\n';
        out << "map: " << termination_name(map.termination) << " at n=" << map.records.back().n
            << ", sweeps to tol: " << sweeps_text(sweeps_to_tolerance(map, stop.tol)) << '\n';
        out << "horizon: " << report.horizon << '\n';
        double worst = 0;
        for (std::size_t i = 0; i < report.deviation.size(); ++i) {
            out << "n=" << i + 1 << " max deviation " << io::format_number(report.deviation[i]) << '\n';
            worst = std::max(worst, report.deviation[i]);
        }
        out << "max deviation: " << io::format_number(worst) << '\n';

        std::vector<Point<double>> dyk_points, map_points;
        for (const auto &r : dyk.records) {
            if (r.n > report.horizon)
                break;
            if (r.a)
                dyk_points.push_back(*r.a);
            dyk_points.push_back(r.b);
        }
        for (const auto &r : map.records) {
            if (r.n > 2 * report.horizon)
                break;
            map_points.push_back(r.c);
        }
        const bool same_orbit = covered(dyk_points, map_points, options.coincide_tol) &&
                                covered(map_points, dyk_points, options.coincide_tol);
        out << "orbits as point sets: " << (same_orbit ? "identical" : "different") << '\n';

        if (report.sequences_coincide)
            out << "coincide: yes" << (report.constant ? " (constant)" : "") << '\n';
        else if (affine && !report.lemma_violations.empty())
            out << "coincide: no (b_{" << report.lemma_violations.back() << "} ≠ P_B(a_"
                << report.lemma_violations.back() << "))\n";
        else
            out << "coincide: no (c_{" << *report.first_divergence << "} leaves the Dykstra sequence)\n";
        return dyk.termination == Termination::MaxIterations || map.termination == Termination::MaxIterations
                   ? kExitMaxIterations
                   : kExitOk;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

int cmd_presets(std::ostream &out)
{
    for (const auto &p : presets())
        out << p.name << "\t" << p.summary << '\n';
    return kExitOk;
}

} // namespace dykstra::cli
