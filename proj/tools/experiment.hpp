#pragma once

// Command dispatch shared by the jspec executable and its tests.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "jspec/spectrum.hpp"

namespace jspec::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

const std::vector<std::string>& commands();

struct ExperimentSpec {
    std::string command;
    std::filesystem::path input_path;
    std::filesystem::path output_dir;
    // Only the flags the user gave; resolve_params fills in the rest.
    nlohmann::json params = nlohmann::json::object();
    // The input document itself, when it did not come from input_path
    // (manifest replay).
    nlohmann::json input_document;
};

/// Full parameter set for `command` on `set`: user values win, documented
/// defaults fill the rest (the automatic grid depends on the generators).
/// Throws InvalidArgument for unknown commands or parameters.
nlohmann::json resolve_params(const std::string& command, const nlohmann::json& given, const MatrixSet& set);

/// Rebuilds a spec from a manifest written by a previous run.
ExperimentSpec spec_from_manifest(const nlohmann::json& manifest, const std::filesystem::path& output_dir);

/// Runs the experiment and writes its files plus manifest.json into
/// spec.output_dir.  Returns the process exit code; messages go to `err`.
int run_experiment(const ExperimentSpec& spec, std::ostream& err);

} // namespace jspec::app
