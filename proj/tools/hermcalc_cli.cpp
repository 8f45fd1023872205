#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hermcalc/errors.hpp"
#include "hermcalc/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"hermcalc: Hermite-basis distribution calculus experiments"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "run an experiment described by a config file");
    run->add_option("config", config_path, "path to the INI-style experiment config")->required();

    std::string dir;
    CLI::App* sum = app.add_subcommand("summarize", "aggregate residuals_level_<L>.csv files");
    sum->add_option("dir", dir, "output directory of a refinement run")->required();

    app.add_subcommand("list-presets", "print experiment kinds, model presets, config keys");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad usage is a config error
    }

    try {
        if (run->parsed()) return hermcalc::run_config(config_path);
        if (sum->parsed()) return hermcalc::summarize_dir(dir);
        std::cout << hermcalc::list_presets_text();
        return 0;
    } catch (const hermcalc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const hermcalc::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    }
}
