#include "chapterforge/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chapterforge/errors.hpp"

namespace chapterforge {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failure on " + path.string());
    }
    return std::move(buf).str();
}

// Splits on '\n', tolerating a missing final newline and CRLF endings.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size()) {
                lines.push_back(text.substr(pos));
            }
            break;
        }
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        pos = nl + 1;
    }
    return lines;
}

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t") == std::string_view::npos;
}

Timestamp floor_seconds(double value, const std::string& field, std::size_t record) {
    if (!(value >= 0.0)) {
        throw ParseError("record " + std::to_string(record) + ": " + field +
                             " must be non-negative, got " + std::to_string(value),
                         std::nullopt, record);
    }
    const double floored = std::floor(value);
    if (floored > static_cast<double>(kMaxTimestampSeconds)) {
        throw ParseError("record " + std::to_string(record) + ": " + field +
                             " exceeds the representable range",
                         std::nullopt, record);
    }
    return Timestamp{static_cast<std::uint32_t>(floored)};
}

json parse_record(std::string_view line, std::size_t record, const std::filesystem::path& path) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw ParseError(path.string() + ": record " + std::to_string(record) +
                             " is not a JSON object",
                         std::nullopt, record);
    }
    return j;
}

double number_field(const json& j, const char* key, std::size_t record,
                    const std::filesystem::path& path) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ParseError(path.string() + ": record " + std::to_string(record) +
                             " lacks numeric field '" + key + "'",
                         std::nullopt, record);
    }
    return j[key].get<double>();
}

std::string text_field(const json& j, std::size_t record, const std::filesystem::path& path) {
    if (!j.contains("text") || !j["text"].is_string()) {
        throw ParseError(path.string() + ": record " + std::to_string(record) +
                             " lacks string field 'text'",
                         std::nullopt, record);
    }
    std::string text = j["text"].get<std::string>();
    if (text.empty()) {
        throw ParseError(path.string() + ": record " + std::to_string(record) +
                             " has empty text",
                         std::nullopt, record);
    }
    return text;
}

UtteranceLoadResult load_jsonl_utterances(const std::filesystem::path& path, Timestamp duration,
                                          bool speech) {
    const std::string contents = read_file(path);
    UtteranceLoadResult result;
    std::size_t record = 0;
    for (std::string_view line : split_lines(contents)) {
        if (is_blank(line)) {
            continue;
        }
        ++record;
        const json j = parse_record(line, record, path);
        TimedUtterance u;
        if (speech) {
            const double start = number_field(j, "start", record, path);
            const double end = number_field(j, "end", record, path);
            if (end < start) {
                throw ParseError(path.string() + ": record " + std::to_string(record) +
                                     ": end precedes start",
                                 std::nullopt, record);
            }
            u = make_speech(floor_seconds(start, "start", record),
                            floor_seconds(end, "end", record),
                            text_field(j, record, path));
        } else {
            const double time = number_field(j, "time", record, path);
            u = make_caption(floor_seconds(time, "time", record), text_field(j, record, path));
        }
        if (u.start.seconds > duration.seconds) {
            ++result.stats.dropped_out_of_range;
            continue;
        }
        ++result.stats.records;
        result.utterances.push_back(std::move(u));
    }
    std::stable_sort(result.utterances.begin(), result.utterances.end(),
                     [](const TimedUtterance& a, const TimedUtterance& b) {
                         return a.start.seconds < b.start.seconds;
                     });
    return result;
}

}  // namespace

UtteranceLoadResult load_asr(const std::filesystem::path& path, Timestamp duration) {
    return load_jsonl_utterances(path, duration, /*speech=*/true);
}

UtteranceLoadResult load_captions(const std::filesystem::path& path, Timestamp duration) {
    return load_jsonl_utterances(path, duration, /*speech=*/false);
}

ChapterSet parse_chapter_text(std::string_view text, Timestamp duration) {
    struct PendingChapter {
        Timestamp start;
        std::string title;
        std::size_t line_number;
    };
    std::vector<PendingChapter> pending;
    std::size_t line_number = 0;
    for (std::string_view line : split_lines(text)) {
        ++line_number;
        if (is_blank(line)) {
            continue;
        }
        Timestamp start;
        if (line.size() >= 8 && try_parse_timestamp(line.substr(0, 8), start)) {
            std::string_view rest = line.substr(8);
            std::string_view title;
            if (rest.rfind(" - ", 0) == 0) {
                title = rest.substr(3);
            } else if (rest == " -") {
                title = "";
            } else {
                throw ParseError("line " + std::to_string(line_number) +
                                     ": expected ' - ' after the timestamp",
                                 std::nullopt, line_number);
            }
            if (!pending.empty() && start.seconds <= pending.back().start.seconds) {
                throw ParseError("line " + std::to_string(line_number) + ": start " +
                                     format_timestamp(start) +
                                     " does not increase over the chapter on line " +
                                     std::to_string(pending.back().line_number),
                                 std::nullopt, line_number);
            }
            if (start.seconds >= duration.seconds) {
                throw ParseError("line " + std::to_string(line_number) + ": start " +
                                     format_timestamp(start) +
                                     " lies at or beyond the video duration",
                                 std::nullopt, line_number);
            }
            pending.push_back(PendingChapter{start, std::string(title), line_number});
        } else {
            // Continuation of a wrapped title.
            if (pending.empty()) {
                throw ParseError("line 1: chapter files must begin with an HH:MM:SS entry",
                                 std::nullopt, line_number);
            }
            pending.back().title += ' ';
            pending.back().title += std::string(line);
        }
    }
    if (pending.empty()) {
        throw ParseError("no chapter entries found", std::nullopt, line_number);
    }
    std::vector<Chapter> chapters;
    chapters.reserve(pending.size());
    for (PendingChapter& p : pending) {
        chapters.emplace_back(p.start, std::move(p.title));
    }
    return ChapterSet::create(std::move(chapters), duration);
}

ChapterSet load_chapters(const std::filesystem::path& path, Timestamp duration) {
    try {
        return parse_chapter_text(read_file(path), duration);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.byte_offset, e.line);
    }
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    const std::string contents = read_file(path);
    const std::filesystem::path base = path.parent_path();
    const auto resolve = [&base](const json& j, const char* key) -> std::optional<std::filesystem::path> {
        if (!j.contains(key) || j[key].is_null()) {
            return std::nullopt;
        }
        std::filesystem::path p = j[key].get<std::string>();
        return p.is_absolute() ? p : base / p;
    };

    std::vector<ManifestEntry> entries;
    std::size_t record = 0;
    for (std::string_view line : split_lines(contents)) {
        if (is_blank(line)) {
            continue;
        }
        ++record;
        const json j = parse_record(line, record, path);
        if (!j.contains("video_id") || !j["video_id"].is_string()) {
            throw ParseError(path.string() + ": record " + std::to_string(record) +
                                 " lacks string field 'video_id'",
                             std::nullopt, record);
        }
        ManifestEntry entry;
        entry.video_id = j["video_id"].get<std::string>();
        entry.duration = floor_seconds(number_field(j, "duration", record, path), "duration", record);
        entry.asr = resolve(j, "asr");
        entry.captions = resolve(j, "captions");
        entry.chapters = resolve(j, "chapters");
        entries.push_back(std::move(entry));
    }
    return entries;
}

DocumentLoadResult load_document(const ManifestEntry& entry) {
    DocumentLoadResult result;
    std::vector<TimedUtterance> utterances;
    if (entry.asr) {
        UtteranceLoadResult asr = load_asr(*entry.asr, entry.duration);
        result.asr_stats = asr.stats;
        utterances.insert(utterances.end(), std::make_move_iterator(asr.utterances.begin()),
                          std::make_move_iterator(asr.utterances.end()));
    }
    if (entry.captions) {
        UtteranceLoadResult captions = load_captions(*entry.captions, entry.duration);
        result.caption_stats = captions.stats;
        utterances.insert(utterances.end(), std::make_move_iterator(captions.utterances.begin()),
                          std::make_move_iterator(captions.utterances.end()));
    }
    result.document = VideoDocument::create(entry.video_id, entry.duration, std::move(utterances));
    return result;
}

}  // namespace chapterforge
