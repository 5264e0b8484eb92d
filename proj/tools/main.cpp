#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "experiment.hpp"
#include "jspec/version.hpp"

namespace {

// Only flags the user passed go into params; defaults are resolved per
// command once the input dimension is known.
std::vector<std::function<void()>> collectors;

template <class T>
void flag(CLI::App& app, nlohmann::json& params, const std::string& name, const std::string& key,
          const std::string& help) {
    auto holder = std::make_shared<T>();
    auto* opt = app.add_option(name, *holder, help);
    collectors.push_back([&params, key, holder, opt] {
        if (opt->count() > 0) {
            params[key] = *holder;
        }
    });
}

} // namespace

int main(int argc, char** argv) {
    using namespace jspec::app;

    CLI::App app{"Joint spectra and random matrix products in SL(d,R)"};
    app.set_version_flag("--version", std::string(jspec::kVersion));

    ExperimentSpec spec;
    std::string command, input, out = ".", replay;
    std::string command_list;
    for (const auto& c : commands()) {
        command_list += (command_list.empty() ? "" : " | ") + c;
    }
    app.add_option("command", command, command_list)->check(CLI::IsMember(commands()));
    app.add_option("--input", input, "matrix-set JSON file");
    app.add_option("--out", out, "output directory")->capture_default_str();
    app.add_option("--replay", replay, "re-run the experiment recorded in a manifest.json");

    auto& p = spec.params;
    flag<std::uint64_t>(app, p, "--seed", "seed", "master seed (default 0)");
    flag<int>(app, p, "--n", "n", "word length / walk length / maximal level");
    flag<int>(app, p, "--depth", "depth", "branch-and-bound depth");
    flag<std::size_t>(app, p, "--samples", "samples", "walkers or sampled pairs (default 10000)");
    flag<int>(app, p, "--dirs", "dirs", "support directions (default 64(d-1))");
    flag<std::string>(app, p, "--grid", "grid", "lo,hi,cells per axis, axes separated by ';', or auto");
    flag<double>(app, p, "--eps", "eps", "proximality threshold or decay radius");
    flag<double>(app, p, "--r", "r", "projective separation for (r,eps)-proximality");
    flag<int>(app, p, "--k", "k", "exterior power (0 = all)");
    flag<std::size_t>(app, p, "--budget", "budget", "product budget before sampling (default 2000000)");
    flag<double>(app, p, "--prune-delta", "prune_delta", "branch-and-bound slack (default 0.005)");
    flag<std::string>(app, p, "--projection", "projection", "kappa | lambda");
    flag<unsigned>(app, p, "--workers", "workers", "worker threads (results do not depend on it)");
    flag<std::string>(app, p, "--n-list", "n_list", "comma-separated lengths (decay, cone)");
    flag<std::string>(app, p, "--word-len", "word_len", "word length(s) for defect / ams");
    flag<std::string>(app, p, "--extend", "extend", "words appended to the set for cone, e.g. 0.1,1.1.0");
    flag<int>(app, p, "--fix-len", "fix_len", "maximal length of the fixing words for ams");
    flag<double>(app, p, "--theta-radius", "theta_radius", "half-width of the dual grid for mgf");
    flag<int>(app, p, "--theta-points", "theta_points", "dual grid points per axis for mgf");
    flag<int>(app, p, "--mu-n", "mu_n", "walk length for the Lyapunov estimate used by decay");
    flag<std::size_t>(app, p, "--mu-samples", "mu_samples", "walkers for the Lyapunov estimate used by decay");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }
    for (const auto& collect : collectors) {
        collect();
    }

    if (!replay.empty()) {
        std::ifstream in(replay);
        nlohmann::json manifest;
        try {
            manifest = nlohmann::json::parse(in);
            spec = spec_from_manifest(manifest, out);
        } catch (const std::exception& e) {
            std::cerr << "jspec: cannot replay " << replay << ": " << e.what() << '\n';
            return kExitValidation;
        }
        return run_experiment(spec, std::cerr);
    }
    if (command.empty() || input.empty()) {
        std::cerr << "jspec: a command and --input are required\n" << app.help();
        return kExitValidation;
    }
    spec.command = command;
    spec.input_path = input;
    spec.output_dir = out;
    return run_experiment(spec, std::cerr);
}
