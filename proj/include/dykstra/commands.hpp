#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dykstra/io.hpp"
#include "dykstra/sets.hpp"
#include "dykstra/solvers.hpp"

namespace dykstra::cli
{

enum class Algorithm
{
    Dykstra,
    Map,
    Both
};

struct OutputPaths
{
    std::string trace; // empty: not requested
    std::string orbit;
};

struct ScenarioSpec
{
    SetDescriptor<double> a;
    SetDescriptor<double> b;
    Point<double> z;
    Algorithm algorithm = Algorithm::Both;
    StopRule<double> stop;
    std::vector<OutputPaths> outputs;
};

// {"sets":[S,S],"z":[..],"algorithm":"dykstra"|"map"|"both",
//  "stop":{"tol":t,"max_iter":n},"outputs":[{"trace":path,"orbit":path}]}
// "algorithm", "stop" and "outputs" are optional; "outputs" may also be a
// single object.
ScenarioSpec scenario_from_json(const io::json &j);
ScenarioSpec scenario_from_file(const std::string &path);

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitMaxIterations = 2;

struct RunOptions
{
    std::string spec_path;
    std::string preset;
    std::optional<std::string> algorithm;
    std::optional<double> tol;
    std::optional<Index> max_iter;
    std::optional<std::string> trace_path;
    std::optional<std::string> orbit_path;
};

struct GeometryOptions
{
    std::string u; // "x,y"
    std::string v;
    std::string z;
    std::string preset;
    std::string spec_path;
    bool json = false;
    std::optional<double> tol;
    std::optional<Index> max_iter;
    double coincide_tol = 1e-12;
};

// Summary lines go to `out`, diagnostics to `err`.
int cmd_run(const RunOptions &options, std::ostream &out, std::ostream &err);
int cmd_classify(const GeometryOptions &options, std::ostream &out, std::ostream &err);
int cmd_compare(const GeometryOptions &options, std::ostream &out, std::ostream &err);
int cmd_presets(std::ostream &out);

// Parses "x,y".
Vec2<double> parse_pair(const std::string &text);

} // namespace dykstra::cli
