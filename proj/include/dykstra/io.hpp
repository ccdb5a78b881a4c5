#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "dykstra/sets.hpp"
#include "dykstra/solvers.hpp"

namespace dykstra::io
{

using json = nlohmann::json;

// Canonical JSON for set descriptors:
//   {"kind":"box","lo":[x,y],"hi":[x,y]}
//   {"kind":"line","u":[x,y],"v":[x,y]}
//   {"kind":"halfspace","normal":[x,y],"offset":c}
//   {"kind":"ball","center":[x,y],"radius":r}
//   {"kind":"orthant"}
//   {"kind":"interval","lo":a,"hi":b}
// Unbounded ends are written as the strings "inf" / "-inf".
json to_json(const SetDescriptor<double> &set);
SetDescriptor<double> set_from_json(const json &j);

json to_json(const Point<double> &x);
Point<double> point_from_json(const json &j);

// Trace schema:
//   {"algorithm":"dykstra"|"map","z":[..],"sets":[S,S],"termination":"...",
//    "records":[{"n":0,"a":null|[..],"b":[..],"p":[..],"q":[..]}, ...] or [{"n":0,"c":[..]}, ...],
//    "limit":[..]|null}
// Numbers use the shortest decimal that round-trips.
json to_json(const DykstraTrace<double> &trace);
json to_json(const MapTrace<double> &trace);
DykstraTrace<double> dykstra_trace_from_json(const json &j);
MapTrace<double> map_trace_from_json(const json &j);

// Orbit CSV with header `n,seq,x1,x2`; seq is a/b for Dykstra and c for MAP.
// a_0 is undefined and produces no row. x2 is empty for one-dimensional runs.
void write_orbit_csv_header(std::ostream &out);
void write_orbit_csv_rows(std::ostream &out, const DykstraTrace<double> &trace);
void write_orbit_csv_rows(std::ostream &out, const MapTrace<double> &trace);

// Shortest round-trip decimal.
std::string format_number(double x);
// "(x1,x2)" or "(x)".
std::string format_point(const Point<double> &x);

} // namespace dykstra::io
