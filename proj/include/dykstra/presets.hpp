#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dykstra/sets.hpp"

namespace dykstra
{

// Named scenarios reproducing the worked examples: first set is projected
// onto first in both algorithms.
struct Preset
{
    std::string name;
    std::string summary;
    SetDescriptor<double> a;
    SetDescriptor<double> b;
    Point<double> z;
};

const std::vector<Preset> &presets();

// Throws UsageError for unknown names.
const Preset &find_preset(std::string_view name);

} // namespace dykstra
