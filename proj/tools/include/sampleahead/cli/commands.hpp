#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sampleahead/cli/config.hpp"
#include "sampleahead/engine.hpp"

namespace sampleahead::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitData = 2,
    kExitDivergence = 3,
    kExitIo = 4,
};

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
};

/// Writes epochs.csv, distribution.csv, config.snapshot, report.json and
/// classifier.ckpt (the last one only for runs that did not diverge).
int cmd_run(const std::filesystem::path& config, const RunOverrides& overrides, std::ostream& out, std::ostream& err);

/// Writes compare.csv and compare_summary.json. Without explicit seeds the
/// first config's seed list is used.
int cmd_compare(const std::vector<std::filesystem::path>& configs, const std::vector<std::uint64_t>& seeds,
                const std::optional<std::filesystem::path>& out_dir, std::size_t jobs, std::ostream& out,
                std::ostream& err);

/// Reads a run directory and writes heatmap.csv and summary.txt next to it.
int cmd_report(const std::filesystem::path& dir, std::ostream& out, std::ostream& err);

/// Write to `<file>.tmp` and rename over `file`. Throws IoError.
void write_atomic(const std::filesystem::path& file, std::string_view content);

[[nodiscard]] std::string epochs_csv(const RunReport& report);
[[nodiscard]] std::string distribution_csv(const RunReport& report);
[[nodiscard]] std::string report_json(const RunConfig& config, const RunReport& report);

/// RFC-4180 field: quoted only when it contains a comma, quote or newline.
[[nodiscard]] std::string csv_field(std::string_view text);

}  // namespace sampleahead::cli
