#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace negclass::cli {

// Exit codes of `run`.
enum ExitCode : int { kSuccess = 0, kUsage = 1, kDataError = 2, kModelError = 3 };

// Flat `key = value` settings with a fixed schema; every key has a default.
// Unknown keys and invalid values are rejected with UsageError when set.
class PipelineConfig {
public:
    PipelineConfig();

    // Lines `key = value`; '#' starts a comment line.
    void merge_text(const std::string& text, const std::string& origin);
    void merge_file(const std::filesystem::path& path);
    void set(const std::string& key, const std::string& value);

    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::size_t get_size(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;

    static std::vector<std::string> keys();

private:
    std::map<std::string, std::string> values_;
};

// Runs one invocation. Data goes to files or `out`, diagnostics to `err`.
// The environment variable NEGCLASS_CONFIG may name a config file applied
// before any --config file and the command-line flags.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace negclass::cli
