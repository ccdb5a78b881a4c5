#include <iostream>

#include <CLI11.hpp>

#include "dykstra/commands.hpp"

int main(int argc, char **argv)
{
    using namespace dykstra::cli;

    CLI::App app{"Dykstra's algorithm and alternating projections for two convex sets"};
    app.require_subcommand(1);

    RunOptions run;
    auto *run_cmd = app.add_subcommand("run", "run a scenario and export its trace");
    run_cmd->add_option("--spec", run.spec_path, "scenario JSON file");
    run_cmd->add_option("--preset", run.preset, "named preset (see `presets`)");
    run_cmd->add_option("--algorithm", run.algorithm, "dykstra, map or both");
    run_cmd->add_option("--tol", run.tol, "stop when ||b_n - a_n|| <= tol");
    run_cmd->add_option("--max-iter", run.max_iter, "sweep limit");
    run_cmd->add_option("--trace", run.trace_path, "write the trace JSON here");
    run_cmd->add_option("--orbit", run.orbit_path, "write the orbit CSV here");

    GeometryOptions classify;
    auto *classify_cmd = app.add_subcommand("classify", "predict the line-square regime of a starting point");
    classify_cmd->add_option("--u", classify.u, "point on the line, x,y")->required();
    classify_cmd->add_option("--v", classify.v, "normal of the line, x,y")->required();
    classify_cmd->add_option("--z", classify.z, "starting point, x,y")->required();
    classify_cmd->add_flag("--json", classify.json, "machine-readable output");

    GeometryOptions compare;
    auto *compare_cmd = app.add_subcommand("compare", "run Dykstra and MAP side by side");
    compare_cmd->add_option("--u", compare.u, "point on the line, x,y");
    compare_cmd->add_option("--v", compare.v, "normal of the line, x,y");
    compare_cmd->add_option("--z", compare.z, "starting point, x,y");
    compare_cmd->add_option("--preset", compare.preset, "named preset");
    compare_cmd->add_option("--spec", compare.spec_path, "scenario JSON file");
    compare_cmd->add_option("--tol", compare.tol, "convergence tolerance");
    compare_cmd->add_option("--max-iter", compare.max_iter, "sweep limit");
    compare_cmd->add_option("--coincide-tol", compare.coincide_tol, "tolerance for sequence agreement");

    auto *presets_cmd = app.add_subcommand("presets", "list the named presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e, std::cerr, std::cerr);
        return kExitUsage;
    }

    if (*run_cmd)
        return cmd_run(run, std::cout, std::cerr);
    if (*classify_cmd)
        return cmd_classify(classify, std::cout, std::cerr);
    if (*compare_cmd)
        return cmd_compare(compare, std::cout, std::cerr);
    if (*presets_cmd)
        return cmd_presets(std::cout);
    return kExitUsage;
}
