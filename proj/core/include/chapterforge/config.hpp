#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chapterforge/http_backend.hpp"
#include "chapterforge/prompt.hpp"

namespace chapterforge {

// Minimal TOML reader covering this project's config surface: [section]
// headers and key = value lines with string, integer, float, and boolean
// values. Comments start with '#'.
class TomlTable {
public:
    using Value = std::variant<std::string, std::int64_t, double, bool>;

    static TomlTable parse(std::string_view text);
    static TomlTable parse_file(const std::filesystem::path& path);

    std::optional<std::string> get_string(const std::string& section, const std::string& key) const;
    std::optional<std::int64_t> get_int(const std::string& section, const std::string& key) const;
    std::optional<double> get_double(const std::string& section, const std::string& key) const;
    std::optional<bool> get_bool(const std::string& section, const std::string& key) const;

    bool has_section(const std::string& section) const;

    // Keys present in the file under a section.
    std::vector<std::string> keys(const std::string& section) const;

private:
    const Value* find(const std::string& section, const std::string& key) const;

    std::map<std::string, std::map<std::string, Value>> sections_;
};

enum class BackendKind { mock, http };

std::string_view backend_kind_name(BackendKind kind);

// Resolved pipeline configuration: config file first, CLI flags override.
struct PipelineConfig {
    BackendKind backend_kind = BackendKind::mock;
    HttpBackendConfig http;
    std::size_t window_tokens = 15000;
    PromptOptions prompt = PromptOptions::defaults();

    static PipelineConfig from_toml(const TomlTable& table);
    static PipelineConfig from_file(const std::filesystem::path& path);

    // "key = value" lines describing the fully resolved configuration, for
    // reproducibility logging.
    std::string describe() const;
};

std::unique_ptr<GeneratorBackend> make_backend(const PipelineConfig& config);

}  // namespace chapterforge
