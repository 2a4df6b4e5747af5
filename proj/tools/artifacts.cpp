#include "artifacts.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <fstream>
#include <sstream>

#include "s4cast/csv.hpp"
#include "s4cast/errors.hpp"

namespace s4cast::cli {

namespace {
// Keep in sync with the project version in the top-level CMakeLists.
constexpr const char* kToolVersion = "0.1.0";
}  // namespace

OutputLock::OutputLock(const std::filesystem::path& out_dir) : lock_path_(out_dir / ".lock") {
    const int fd = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
        throw ConfigError("output directory " + out_dir.string() +
                          " is locked by another run (remove " + lock_path_.string() +
                          " if that run is gone)");
    }
    ::close(fd);
}

OutputLock::~OutputLock() {
    std::error_code ec;
    std::filesystem::remove(lock_path_, ec);
}

OutputLock prepare_output_dir(const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + out_dir.string());
    return OutputLock(out_dir);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("short write to " + path.string());
}

ManifestInput fingerprint_file(const std::filesystem::path& path) {
    const std::string bytes = read_text_file(path);
    return ManifestInput{path.string(), format_hex64(fnv1a64_bytes(bytes)), bytes.size()};
}

void write_manifest(const std::filesystem::path& out_dir, const std::string& subcommand,
                    const nlohmann::json& config_snapshot,
                    const std::vector<ManifestInput>& inputs,
                    const std::vector<std::string>& outputs) {
    nlohmann::json j;
    j["format"] = "s4cast-manifest";
    j["version"] = 1;
    j["tool_version"] = kToolVersion;
    j["subcommand"] = subcommand;
    j["config"] = config_snapshot;
    j["inputs"] = nlohmann::json::array();
    for (const auto& in : inputs) {
        j["inputs"].push_back({{"path", in.path}, {"fnv1a64", in.fnv1a64}, {"bytes", in.bytes}});
    }
    j["outputs"] = outputs;
    write_text_file(out_dir / "manifest.json", j.dump(2) + "\n");
}

}  // namespace s4cast::cli
