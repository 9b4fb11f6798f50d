#include <exception>
#include <iostream>

#include <json.hpp>

#include "commands.hpp"
#include "pdsphere/error.hpp"

namespace {

constexpr int kExitOther = 1;
constexpr int kExitFileNotFound = 2;
constexpr int kExitParse = 3;
constexpr int kExitParameter = 4;

int report(const std::string& kind, const std::string& message, int code) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
  return code;
}

int exit_code(pdsphere::ErrorKind kind) {
  switch (kind) {
    case pdsphere::ErrorKind::kFileNotFound:
      return kExitFileNotFound;
    case pdsphere::ErrorKind::kParse:
      return kExitParse;
    case pdsphere::ErrorKind::kParameter:
      return kExitParameter;
    default:
      return kExitOther;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistence diagrams as square-root densities on the Hilbert sphere"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pdsphere 1.0.0");
  const auto run = pdsphere::cli::register_commands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report("parameter", e.what(), kExitParameter);
  }

  try {
    run();
  } catch (const pdsphere::Error& e) {
    return report(pdsphere::to_string(e.kind()), e.what(), exit_code(e.kind()));
  } catch (const std::exception& e) {
    return report("internal", e.what(), kExitOther);
  }
  return 0;
}
