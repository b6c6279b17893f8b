#include "chapterforge/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "chapterforge/errors.hpp"

namespace chapterforge {

namespace {

std::string_view trim_view(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

// Strips a trailing comment that is not inside a string literal.
std::string_view strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) {
            in_string = !in_string;
        } else if (line[i] == '#' && !in_string) {
            return line.substr(0, i);
        }
    }
    return line;
}

TomlTable::Value parse_value(std::string_view raw, std::size_t line_number) {
    raw = trim_view(raw);
    if (raw.empty()) {
        throw ParseError("line " + std::to_string(line_number) + ": missing value",
                         std::nullopt, line_number);
    }
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') {
            throw ParseError("line " + std::to_string(line_number) + ": unterminated string",
                             std::nullopt, line_number);
        }
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
            char c = raw[i];
            if (c == '\\' && i + 2 < raw.size()) {
                char next = raw[++i];
                switch (next) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case 'r': out += '\r'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    default:
                        throw ParseError("line " + std::to_string(line_number) +
                                             ": unsupported escape \\" + std::string(1, next),
                                         std::nullopt, line_number);
                }
            } else {
                out += c;
            }
        }
        return out;
    }
    if (raw == "true") {
        return true;
    }
    if (raw == "false") {
        return false;
    }
    const std::string text(raw);
    const bool is_float = text.find_first_of(".eE") != std::string::npos;
    try {
        std::size_t consumed = 0;
        if (is_float) {
            const double d = std::stod(text, &consumed);
            if (consumed == text.size()) {
                return d;
            }
        } else {
            const std::int64_t i = std::stoll(text, &consumed);
            if (consumed == text.size()) {
                return i;
            }
        }
    } catch (const std::exception&) {
    }
    throw ParseError("line " + std::to_string(line_number) + ": cannot parse value '" + text + "'",
                     std::nullopt, line_number);
}

}  // namespace

TomlTable TomlTable::parse(std::string_view text) {
    TomlTable table;
    std::string section;
    std::size_t line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = (nl == std::string_view::npos) ? text.substr(pos)
                                                               : text.substr(pos, nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_number;

        line = trim_view(strip_comment(line));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ParseError("line " + std::to_string(line_number) + ": malformed section header",
                                 std::nullopt, line_number);
            }
            section = std::string(trim_view(line.substr(1, line.size() - 2)));
            table.sections_[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("line " + std::to_string(line_number) + ": expected key = value",
                             std::nullopt, line_number);
        }
        const std::string key(trim_view(line.substr(0, eq)));
        if (key.empty()) {
            throw ParseError("line " + std::to_string(line_number) + ": empty key",
                             std::nullopt, line_number);
        }
        table.sections_[section][key] = parse_value(line.substr(eq + 1), line_number);
    }
    return table;
}

TomlTable TomlTable::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse(buf.str());
    } catch (const ParseError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

const TomlTable::Value* TomlTable::find(const std::string& section, const std::string& key) const {
    auto sec = sections_.find(section);
    if (sec == sections_.end()) {
        return nullptr;
    }
    auto it = sec->second.find(key);
    return it == sec->second.end() ? nullptr : &it->second;
}

std::optional<std::string> TomlTable::get_string(const std::string& section,
                                                 const std::string& key) const {
    const Value* v = find(section, key);
    if (v == nullptr) {
        return std::nullopt;
    }
    if (const auto* s = std::get_if<std::string>(v)) {
        return *s;
    }
    throw ConfigError("[" + section + "] " + key + " must be a string");
}

std::optional<std::int64_t> TomlTable::get_int(const std::string& section,
                                               const std::string& key) const {
    const Value* v = find(section, key);
    if (v == nullptr) {
        return std::nullopt;
    }
    if (const auto* i = std::get_if<std::int64_t>(v)) {
        return *i;
    }
    throw ConfigError("[" + section + "] " + key + " must be an integer");
}

std::optional<double> TomlTable::get_double(const std::string& section,
                                            const std::string& key) const {
    const Value* v = find(section, key);
    if (v == nullptr) {
        return std::nullopt;
    }
    if (const auto* d = std::get_if<double>(v)) {
        return *d;
    }
    if (const auto* i = std::get_if<std::int64_t>(v)) {
        return static_cast<double>(*i);
    }
    throw ConfigError("[" + section + "] " + key + " must be a number");
}

std::optional<bool> TomlTable::get_bool(const std::string& section, const std::string& key) const {
    const Value* v = find(section, key);
    if (v == nullptr) {
        return std::nullopt;
    }
    if (const auto* b = std::get_if<bool>(v)) {
        return *b;
    }
    throw ConfigError("[" + section + "] " + key + " must be true or false");
}

bool TomlTable::has_section(const std::string& section) const {
    return sections_.count(section) > 0;
}

std::vector<std::string> TomlTable::keys(const std::string& section) const {
    std::vector<std::string> out;
    auto sec = sections_.find(section);
    if (sec != sections_.end()) {
        for (const auto& [key, value] : sec->second) {
            out.push_back(key);
        }
    }
    return out;
}

std::string_view backend_kind_name(BackendKind kind) {
    return kind == BackendKind::mock ? "mock" : "http";
}

namespace {

void reject_unknown_keys(const TomlTable& table, const std::string& section,
                         std::initializer_list<std::string_view> known) {
    for (const std::string& key : table.keys(section)) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown key '" + key + "' in [" + section + "]");
        }
    }
}

}  // namespace

PipelineConfig PipelineConfig::from_toml(const TomlTable& table) {
    reject_unknown_keys(table, "backend",
                        {"kind", "base_url", "model", "retries", "retry_initial_delay_ms",
                         "timeout_seconds"});
    reject_unknown_keys(table, "windowing", {"window_tokens"});
    reject_unknown_keys(table, "prompt",
                        {"include_speech", "include_captions", "modality_prefixes",
                         "include_asr_end", "task_text"});

    PipelineConfig config;
    if (auto kind = table.get_string("backend", "kind")) {
        if (*kind == "mock") {
            config.backend_kind = BackendKind::mock;
        } else if (*kind == "http") {
            config.backend_kind = BackendKind::http;
        } else {
            throw ConfigError("backend kind must be \"mock\" or \"http\", got \"" + *kind + "\"");
        }
    }
    if (auto url = table.get_string("backend", "base_url")) {
        config.http.base_url = *url;
    }
    if (auto model = table.get_string("backend", "model")) {
        config.http.model = *model;
    }
    if (auto retries = table.get_int("backend", "retries")) {
        if (*retries < 0) {
            throw ConfigError("backend retries must be non-negative");
        }
        config.http.retries = static_cast<int>(*retries);
    }
    if (auto delay = table.get_int("backend", "retry_initial_delay_ms")) {
        config.http.retry_initial_delay_ms = static_cast<int>(*delay);
    }
    if (auto timeout = table.get_int("backend", "timeout_seconds")) {
        config.http.timeout_seconds = static_cast<int>(*timeout);
    }
    if (auto tokens = table.get_int("windowing", "window_tokens")) {
        if (*tokens <= 0) {
            throw ConfigError("window_tokens must be positive");
        }
        config.window_tokens = static_cast<std::size_t>(*tokens);
    }

    const bool speech = table.get_bool("prompt", "include_speech").value_or(true);
    const bool captions = table.get_bool("prompt", "include_captions").value_or(true);
    config.prompt = PromptOptions::defaults(speech, captions);
    if (auto prefixes = table.get_bool("prompt", "modality_prefixes")) {
        config.prompt.modality_prefixes = *prefixes;
    }
    if (auto asr_end = table.get_bool("prompt", "include_asr_end")) {
        config.prompt.include_asr_end = *asr_end;
    }
    if (auto task = table.get_string("prompt", "task_text")) {
        config.prompt.task_text = *task;
    }
    config.prompt.validate();
    return config;
}

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
    return from_toml(TomlTable::parse_file(path));
}

std::string PipelineConfig::describe() const {
    std::ostringstream out;
    out << "backend.kind = " << backend_kind_name(backend_kind) << '\n';
    if (backend_kind == BackendKind::http) {
        out << "backend.base_url = " << http.base_url << '\n'
            << "backend.model = " << http.model << '\n'
            << "backend.retries = " << http.retries << '\n';
    }
    out << "windowing.window_tokens = " << window_tokens << '\n'
        << "prompt.include_speech = " << (prompt.include_speech ? "true" : "false") << '\n'
        << "prompt.include_captions = " << (prompt.include_captions ? "true" : "false") << '\n'
        << "prompt.modality_prefixes = " << (prompt.modality_prefixes ? "true" : "false") << '\n'
        << "prompt.include_asr_end = " << (prompt.include_asr_end ? "true" : "false") << '\n'
        << "prompt.task_text = " << prompt.task_text << '\n';
    return std::move(out).str();
}

std::unique_ptr<GeneratorBackend> make_backend(const PipelineConfig& config) {
    if (config.backend_kind == BackendKind::mock) {
        return std::make_unique<MockBackend>();
    }
    if (config.http.base_url.empty()) {
        throw ConfigError("http backend requires backend.base_url");
    }
    return std::make_unique<HttpBackend>(config.http);
}

}  // namespace chapterforge
