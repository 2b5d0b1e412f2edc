#pragma once

// Batch front-end: configuration, command execution, CSV/JSON emission.
//
// Output files are UTF-8 CSV with '\n' line endings. The first line is
// "#JSON:" followed by the metadata object (command, config echo, library
// version, seed scheme); trailing "#SUMMARY:" lines carry scalar results.
// Exit codes: 0 success, 1 numerical/acceptance failure, 2 configuration error.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gfdm/numerics.hpp"

namespace gfdm::cli {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr double kRoundtripTolerance = 1e-8;

enum class Command { roundtrip, complexity, ser, oob, papr };

std::string_view to_string(Command c);
Command parse_command(std::string_view name);

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    Command command = Command::roundtrip;

    std::size_t K = 128;
    std::size_t M = 16;
    std::optional<std::size_t> Kon;
    std::optional<std::size_t> Mon;
    std::string filter = "rc_time";
    double rolloff = 0.5;
    /// Unset: FT, except complexity which reports all four domains.
    std::optional<std::string> domain;
    std::string rx = "ZF";
    std::string constellation = "QPSK";

    // ser
    std::vector<double> snr_db{0.0, 2.0, 4.0, 6.0, 8.0, 10.0};
    std::uint64_t frames = 1000;
    std::uint64_t min_errors = 100;
    ComplexVector channel{cplx{1.0, 0.0}};
    std::size_t cp = 0;
    std::string equalizer = "ZF";

    // complexity
    std::size_t L = 2;
    std::string impl = "all";

    // oob
    std::size_t nfft = 0;  // 0: 4 N
    std::size_t segments = 64;
    std::string window = "rect";

    // papr / roundtrip
    std::size_t blocks = 2000;
    double papr_min_db = 0.0;
    double papr_max_db = 14.0;
    double papr_step_db = 0.25;

    std::uint64_t seed = 1;
    std::string out;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Rejects unknown fields; fields absent from `j` keep the values of `base`.
ExperimentConfig from_json(const nlohmann::json& j, ExperimentConfig base = {});

/// Metadata object written after "#JSON:".
nlohmann::json metadata(const ExperimentConfig& cfg);
/// Parses a "#JSON:{...}" header line back into a config.
ExperimentConfig config_from_header(std::string_view header_line);

/// Runs one validated command; writes its file body to `out`.
int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line entry point (argv[1] is the subcommand).
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gfdm::cli
