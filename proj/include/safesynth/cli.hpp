#ifndef SAFESYNTH_CLI_HPP_
#define SAFESYNTH_CLI_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "safesynth/game.hpp"
#include "safesynth/limits.hpp"

namespace safesynth {

// Exit codes follow the synthesis-competition convention.
inline constexpr int kExitRealizable = 10;
inline constexpr int kExitUnrealizable = 20;
inline constexpr int kExitError = 1;
inline constexpr int kExitFragment = 2;
inline constexpr int kExitResource = 3;

struct RunConfig {
    std::string formula_path;
    std::string partition_path;
    enum class Mode { Symbolic, Horn, Both } mode = Mode::Symbolic;
    FirstMover first_mover = FirstMover::Environment;
    std::optional<unsigned> expand_length;
    std::string out_format = "json";
    std::optional<std::string> out_file;
    size_t state_cap = size_t{1} << 20;
    std::optional<double> timeout_seconds;
    uint64_t seed = 0;
    bool verbose = false;

    RunLimits limits() const;
};

int cmd_synth(const RunConfig& config);
int cmd_expand(const std::string& formula_path, unsigned l);
int cmd_dfa(const RunConfig& config);

// Full argument handling; argv[0] is the program name.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace safesynth

#endif  // SAFESYNTH_CLI_HPP_
