#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sampleahead/engine.hpp"
#include "sampleahead/errors.hpp"

namespace sampleahead::cli {

/// Bad key, bad value or invariant violation in a config file. `line` is 0
/// when the problem is not tied to a single line (e.g. a missing key).
class ConfigError : public Error {
public:
    ConfigError(std::string key, std::size_t line, const std::string& what, const std::string& file = {});

    [[nodiscard]] const std::string& key() const noexcept { return key_; }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    /// The message without file, line and key prefixes.
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    std::string key_;
    std::size_t line_;
    std::string detail_;
};

struct RunConfig {
    std::string experiment;
    LoopConfig loop;
    std::vector<std::uint64_t> seeds = {1};
    std::filesystem::path output_dir;
    /// Derived from the generator; kept so snapshots are self-describing.
    std::string descriptor;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Environment variable that overrides `mnist.data_dir`.
inline constexpr const char* kDataDirEnv = "SAMPLEAHEAD_DATA_DIR";

/// Parse `key = value` lines. Keys are dotted (`sampler.alpha`) or scoped by
/// a `[section]` header; `#` starts a comment. Unknown keys are errors.
[[nodiscard]] RunConfig parse_config_text(std::string_view text, bool apply_env = true);
[[nodiscard]] RunConfig parse_config(const std::filesystem::path& path, bool apply_env = true);

/// Every key with its resolved value. parse_config_text(serialize_config(c))
/// reproduces c.
[[nodiscard]] std::string serialize_config(const RunConfig& config);

}  // namespace sampleahead::cli
