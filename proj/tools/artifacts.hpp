#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace s4cast::cli {

/// Advisory single-writer lock on an output directory. Creating the ".lock"
/// file must succeed exclusively; a leftover lock from a crashed run has to
/// be removed by hand, which the error message says.
class OutputLock {
public:
    explicit OutputLock(const std::filesystem::path& out_dir);  ///< throws ConfigError
    ~OutputLock();

    OutputLock(const OutputLock&) = delete;
    OutputLock& operator=(const OutputLock&) = delete;

private:
    std::filesystem::path lock_path_;
};

/// Creates the directory if needed and takes the lock.
/// Returned lock must outlive all writes into the directory.
OutputLock prepare_output_dir(const std::filesystem::path& out_dir);

std::string read_text_file(const std::filesystem::path& path);  ///< throws DataError
void write_text_file(const std::filesystem::path& path, const std::string& text);

struct ManifestInput {
    std::string path;
    std::string fnv1a64;  ///< 16-digit hex over the file bytes
    std::uintmax_t bytes = 0;
};

ManifestInput fingerprint_file(const std::filesystem::path& path);

/// manifest.json beside the outputs: tool version, subcommand, effective
/// config snapshot, input fingerprints, output file names. Everything a rerun
/// needs; no timestamps, so identical runs produce identical manifests.
void write_manifest(const std::filesystem::path& out_dir, const std::string& subcommand,
                    const nlohmann::json& config_snapshot,
                    const std::vector<ManifestInput>& inputs,
                    const std::vector<std::string>& outputs);

}  // namespace s4cast::cli
