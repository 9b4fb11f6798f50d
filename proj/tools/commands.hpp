#pragma once

#include <functional>

#include <CLI11.hpp>

namespace pdsphere::cli {

// Adds every subcommand to app. The returned action runs the one that was
// selected on the command line.
std::function<void()> register_commands(CLI::App& app);

}  // namespace pdsphere::cli
