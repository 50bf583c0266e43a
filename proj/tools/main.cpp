#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "mpv/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Matched-pair moment and Vlasov toolkit"};
    app.require_subcommand(1, 1);

    mpv::RunRequest request;
    std::string config_path;
    std::uint64_t seed = 0;

    const std::map<std::string, std::string> about = {
        {"verify-algebra", "exact identity suite on random symbolic instances"},
        {"verify-dual", "adjointness and decomposition checks on grid data"},
        {"run-moments", "integrate the Euler or truncated moment hierarchy"},
        {"run-vlasov", "semi-Lagrangian Vlasov-Poisson run"},
        {"run-momvlasov", "momentum-form Vlasov run"},
        {"check-poisson-map", "moments of the Vlasov rate against the moment hierarchy"},
        {"check-intertwine", "divergence of the momentum form against the Vlasov rate"},
        {"dump", "text forms of a random bracket, its phase-space image and lift"},
    };
    for (const std::string& name : mpv::subcommands()) {
        CLI::App* sub = app.add_subcommand(name, about.at(name));
        sub->add_option("--config", config_path, "key = value configuration file");
        sub->add_option("--out", request.out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "overrides the configured seed");
        sub->add_flag("--quiet", request.quiet, "suppress the console report");
        sub->callback([&, sub, name] {
            request.subcommand = name;
            if (sub->count("--config") > 0) request.config_path = config_path;
            if (sub->count("--seed") > 0) request.seed = seed;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return mpv::kExitConfig;
    }
    return mpv::run(request, std::cout, std::cerr);
}
