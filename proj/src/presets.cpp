#include "dykstra/presets.hpp"

#include <limits>

namespace dykstra
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

Line<double> tilted_line()
{
    return make_line<double>(Vec2<double>(0, 1), Vec2<double>(0.6, 0.8));
}

std::vector<Preset> build()
{
    const Box<double> square = unit_square<double>();
    const Line<double> diagonal = line_through<double>(Vec2<double>(0, 1), Vec2<double>(1, 0));
    return {
        {"example-1.3",
         "lower half-plane vs {x1+x2<=0} from (1,1): MAP stops at (0.5,-0.5), the nearest feasible point is (0,0)",
         make_box<double>(Vec2<double>(-kInf, -kInf), Vec2<double>(kInf, 0)),
         make_halfspace<double>(Vec2<double>(1, 1), 0), make_point(1.0, 1.0)},
        {"two-intervals",
         "[0,inf) vs [1,inf) from -1: P_B P_A is the intersection projection although the normal-cone test fails",
         make_interval(0.0, kInf), make_interval(1.0, kInf), make_point(-1.0)},
        {"cone-ball", "nonnegative quadrant then unit ball from (2,-1): Dykstra terminates after two sweeps",
         Orthant<double>{}, make_ball<double>(Vec2<double>(0, 0), 1), make_point(2.0, -1.0)},
        {"order-matters",
         "square first, then the line through (0,1) and (1,0), from (-2,-1): MAP stops at (0.5,0.5), not at (0,1)",
         square, diagonal, make_point(-2.0, -1.0)},
        {"rapid", "line u=(0,1), v=(0.6,0.8) vs square, P_A z inside the square: exact after one sweep",
         tilted_line(), square, make_point(0.2, 0.5)},
        {"blue", "line u=(0,1), v=(0.6,0.8) vs square, P_A z above the top edge: Dykstra and MAP coincide",
         tilted_line(), square, make_point(-0.5, 1.375)},
        {"stall-demo", "line u=(0,1), v=(0.6,0.8) vs square from (-2,2.5): b stays at (-1,1) for 3 sweeps",
         tilted_line(), square, make_point(-2.0, 2.5)},
        {"parallel", "horizontal line x2=0.5 vs square from (2,3): exact after the second sweep",
         make_line<double>(Vec2<double>(0, 0.5), Vec2<double>(0, 1)), square, make_point(2.0, 3.0)},
    };
}

} // namespace

const std::vector<Preset> &presets()
{
    static const std::vector<Preset> registry = build();
    return registry;
}

const Preset &find_preset(std::string_view name)
{
    for (const auto &p : presets())
        if (p.name == name)
            return p;
    throw UsageError("unknown preset \"" + std::string(name) + "\"");
}

} // namespace dykstra
