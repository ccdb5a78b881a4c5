#include "dykstra/io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

namespace dykstra::io
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

json bound_to_json(double x)
{
    if (x == kInf)
        return "inf";
    if (x == -kInf)
        return "-inf";
    return x;
}

double bound_from_json(const json &j)
{
    if (j.is_number())
        return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf")
            return kInf;
        if (s == "-inf")
            return -kInf;
    }
    throw UsageError("expected a number or \"inf\"/\"-inf\", got " + j.dump());
}

Vec2<double> vec2_from_json(const json &j, bool allow_infinite = false)
{
    if (!j.is_array() || j.size() != 2)
        throw UsageError("expected a two-element array, got " + j.dump());
    Vec2<double> v;
    for (int i = 0; i < 2; ++i)
        v(i) = allow_infinite ? bound_from_json(j[i]) : j[i].get<double>();
    return v;
}

json vec2_to_json(const Vec2<double> &v, bool allow_infinite = false)
{
    if (allow_infinite)
        return json::array({bound_to_json(v(0)), bound_to_json(v(1))});
    return json::array({v(0), v(1)});
}

const json &field(const json &j, const char *name)
{
    if (!j.contains(name))
        throw UsageError(std::string("missing field \"") + name + "\"");
    return j.at(name);
}

json optional_point(const std::optional<Point<double>> &x)
{
    return x ? to_json(*x) : json(nullptr);
}

std::optional<Point<double>> optional_point_from_json(const json &j)
{
    if (j.is_null())
        return std::nullopt;
    return point_from_json(j);
}

Termination termination_from_string(const std::string &s)
{
    for (auto t : {Termination::Converged, Termination::FixpointDetected, Termination::MaxIterations})
        if (termination_name(t) == s)
            return t;
    throw UsageError("unknown termination \"" + s + "\"");
}

template <typename Trace>
json trace_header(const Trace &trace, const char *algorithm)
{
    json j;
    j["algorithm"] = algorithm;
    j["z"] = to_json(trace.z);
    j["sets"] = json::array({to_json(trace.sets[0]), to_json(trace.sets[1])});
    j["termination"] = std::string(termination_name(trace.termination));
    j["limit"] = optional_point(trace.limit);
    return j;
}

template <typename Trace>
void read_header(const json &j, const char *algorithm, Trace &trace)
{
    if (field(j, "algorithm") != algorithm)
        throw UsageError(std::string("expected a ") + algorithm + " trace");
    trace.z = point_from_json(field(j, "z"));
    const json &sets = field(j, "sets");
    if (!sets.is_array() || sets.size() != 2)
        throw UsageError("\"sets\" must hold two set descriptors");
    trace.sets = {set_from_json(sets[0]), set_from_json(sets[1])};
    trace.termination = termination_from_string(field(j, "termination").get<std::string>());
    trace.limit = optional_point_from_json(field(j, "limit"));
}

void write_row(std::ostream &out, Index n, char seq, const Point<double> &x)
{
    out << n << ',' << seq << ',' << format_number(x(0)) << ',';
    if (x.size() == 2)
        out << format_number(x(1));
    out << '\n';
}

} // namespace

std::string format_number(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_point(const Point<double> &x)
{
    std::string s = "(";
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (i)
            s += ',';
        s += format_number(x(i));
    }
    return s + ")";
}

json to_json(const Point<double> &x)
{
    json j = json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i)
        j.push_back(x(i));
    return j;
}

Point<double> point_from_json(const json &j)
{
    if (j.is_number())
        return make_point(j.get<double>());
    if (!j.is_array() || j.empty() || j.size() > 2)
        throw UsageError("expected a point with one or two coordinates, got " + j.dump());
    for (const auto &c : j)
        if (!c.is_number())
            throw UsageError("point coordinates must be numbers, got " + j.dump());
    if (j.size() == 1)
        return make_point(j[0].get<double>());
    return make_point(j[0].get<double>(), j[1].get<double>());
}

json to_json(const SetDescriptor<double> &set)
{
    return std::visit(
        detail::overloaded{
            [](const Box<double> &s) {
                return json{{"kind", "box"}, {"lo", vec2_to_json(s.lo, true)}, {"hi", vec2_to_json(s.hi, true)}};
            },
            [](const Line<double> &s) {
                return json{{"kind", "line"}, {"u", vec2_to_json(s.u)}, {"v", vec2_to_json(s.v)}};
            },
            [](const Halfspace<double> &s) {
                return json{{"kind", "halfspace"}, {"normal", vec2_to_json(s.normal)}, {"offset", s.offset}};
            },
            [](const Ball<double> &s) {
                return json{{"kind", "ball"}, {"center", vec2_to_json(s.center)}, {"radius", s.radius}};
            },
            [](const Orthant<double> &) { return json{{"kind", "orthant"}}; },
            [](const Interval<double> &s) {
                return json{{"kind", "interval"}, {"lo", bound_to_json(s.lo)}, {"hi", bound_to_json(s.hi)}};
            },
        },
        set);
}

SetDescriptor<double> set_from_json(const json &j)
{
    if (!j.is_object())
        throw UsageError("set descriptor must be a JSON object");
    const auto kind = field(j, "kind").get<std::string>();
    try {
        if (kind == "box")
            return make_box(vec2_from_json(field(j, "lo"), true), vec2_from_json(field(j, "hi"), true));
        if (kind == "line")
            return make_line(vec2_from_json(field(j, "u")), vec2_from_json(field(j, "v")));
        if (kind == "halfspace")
            return make_halfspace(vec2_from_json(field(j, "normal")), field(j, "offset").get<double>());
        if (kind == "ball")
            return make_ball(vec2_from_json(field(j, "center")), field(j, "radius").get<double>());
        if (kind == "orthant")
            return Orthant<double>{};
        if (kind == "interval")
            return make_interval(bound_from_json(field(j, "lo")), bound_from_json(field(j, "hi")));
    } catch (const json::exception &e) {
        throw UsageError(std::string("malformed ") + kind + " descriptor: " + e.what());
    }
    throw UsageError("unknown set kind \"" + kind + "\"");
}

json to_json(const DykstraTrace<double> &trace)
{
    json j = trace_header(trace, "dykstra");
    json records = json::array();
    for (const auto &r : trace.records)
        records.push_back({{"n", r.n}, {"a", optional_point(r.a)}, {"b", to_json(r.b)},
                           {"p", to_json(r.p)}, {"q", to_json(r.q)}});
    j["records"] = std::move(records);
    return j;
}

json to_json(const MapTrace<double> &trace)
{
    json j = trace_header(trace, "map");
    json records = json::array();
    for (const auto &r : trace.records)
        records.push_back({{"n", r.n}, {"c", to_json(r.c)}});
    j["records"] = std::move(records);
    return j;
}

DykstraTrace<double> dykstra_trace_from_json(const json &j)
{
    DykstraTrace<double> trace;
    read_header(j, "dykstra", trace);
    for (const auto &r : field(j, "records"))
        trace.records.push_back({field(r, "n").get<Index>(), optional_point_from_json(field(r, "a")),
                                 point_from_json(field(r, "b")), point_from_json(field(r, "p")),
                                 point_from_json(field(r, "q"))});
    return trace;
}

MapTrace<double> map_trace_from_json(const json &j)
{
    MapTrace<double> trace;
    read_header(j, "map", trace);
    for (const auto &r : field(j, "records"))
        trace.records.push_back({field(r, "n").get<Index>(), point_from_json(field(r, "c"))});
    return trace;
}

void write_orbit_csv_header(std::ostream &out)
{
    out << "n,seq,x1,x2\n";
}

void write_orbit_csv_rows(std::ostream &out, const DykstraTrace<double> &trace)
{
    for (const auto &r : trace.records) {
        if (r.a)
            write_row(out, r.n, 'a', *r.a);
        write_row(out, r.n, 'b', r.b);
    }
}

void write_orbit_csv_rows(std::ostream &out, const MapTrace<double> &trace)
{
    for (const auto &r : trace.records)
        write_row(out, r.n, 'c', r.c);
}

} // namespace dykstra::io
