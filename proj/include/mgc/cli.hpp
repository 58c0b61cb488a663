#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mgc::cli {

enum class Command { Simulate, Analyze, Counterexample, Stages };

struct RunConfig {
    Command command = Command::Stages;
    std::optional<std::filesystem::path> scenario;
    std::filesystem::path out_dir = ".";
    std::optional<double> dt;
    std::optional<double> omega_c;
    std::optional<std::size_t> stride;
    bool raw_removal = false;
    std::uint64_t seed = 1;
    int random_nodes = 6;              // analyze without --scenario
    std::string random_regime = "commuting";
    bool json = false;
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitAssumption = 3;
inline constexpr int kExitNumerical = 4;

/// Parses argv, runs the subcommand and maps errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mgc::cli
