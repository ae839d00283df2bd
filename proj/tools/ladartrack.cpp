#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ladartrack/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Photon-counting ladar multi-target tracker"};
    app.require_subcommand(1);

    ladar::SimulateOptions sim;
    std::string truth;
    auto* simulate = app.add_subcommand("simulate", "Render a scene file into a raw frame file");
    simulate->add_option("--scene", sim.scene, "Scene description")->required();
    simulate->add_option("--out", sim.out, "Raw output file")->required();
    simulate->add_option("--truth", truth, "Ground-truth CSV output");

    ladar::TrackOptions trk;
    std::string track_config;
    auto* track = app.add_subcommand("track", "Run the tracking pipeline over a raw file");
    track->add_option("--raw", trk.raw, "Raw frame file")->required();
    track->add_option("--config", track_config, "Key-value run configuration");
    track->add_option("--out-dir", trk.out_dir, "Output directory")->required();
    track->add_option("--set", trk.overrides, "Override a config key (key=value), repeatable");
    track->add_flag("--projections", trk.projections, "Write per-step PGM projections");

    ladar::InspectOptions ins;
    std::string inspect_config;
    auto* inspect = app.add_subcommand("inspect", "Print histogram stats of one pulse group");
    inspect->add_option("--raw", ins.raw, "Raw frame file")->required();
    inspect->add_option("--group", ins.group, "Group index")->required();
    inspect->add_option("--config", inspect_config, "Key-value run configuration");
    inspect->add_option("--set", ins.overrides, "Override a config key (key=value), repeatable");
    inspect->add_option("--out-dir", ins.out_dir, "Directory for the PGM projections");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ladar::kExitParse;
    }

    if (*simulate) {
        if (!truth.empty()) sim.truth = truth;
        return ladar::cmd_simulate(sim, std::cout, std::cerr);
    }
    if (*track) {
        if (!track_config.empty()) trk.config = track_config;
        return ladar::cmd_track(trk, std::cout, std::cerr);
    }
    if (!inspect_config.empty()) ins.config = inspect_config;
    return ladar::cmd_inspect(ins, std::cout, std::cerr);
}
