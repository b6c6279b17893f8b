#include "chapterforge/generate.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "chapterforge/errors.hpp"

namespace chapterforge {

GeneratorResponse generate(const GeneratorBackend& backend, const GeneratorRequest& request) {
    if (request.prompt.empty()) {
        throw ValidationError("generator request must carry a non-empty prompt");
    }
    if (request.temperature < 0.0) {
        throw ValidationError("generator temperature must be non-negative");
    }
    return backend.generate(request);
}

namespace {

std::string_view trim_view(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

// Matches a rendered transcript line: optional modality prefix, a start
// timestamp, an optional end timestamp, then ": " and the text.
bool match_transcript_line(std::string_view line, Timestamp& start, std::string_view& text) {
    for (std::string_view prefix : {std::string_view{"ASR "}, std::string_view{"Caption "}}) {
        if (line.rfind(prefix, 0) == 0) {
            line.remove_prefix(prefix.size());
            break;
        }
    }
    if (line.size() < 8 || !try_parse_timestamp(line.substr(0, 8), start)) {
        return false;
    }
    line.remove_prefix(8);
    Timestamp end;
    if (line.size() >= 11 && line.rfind(" - ", 0) == 0 && try_parse_timestamp(line.substr(3, 8), end)) {
        line.remove_prefix(11);
    }
    if (line.rfind(": ", 0) != 0) {
        return false;
    }
    text = line.substr(2);
    return true;
}

void for_each_line(std::string_view text, const auto& fn) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size()) {
                fn(text.substr(pos));
            }
            break;
        }
        fn(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
}

}  // namespace

GeneratorResponse MockBackend::generate(const GeneratorRequest& request) const {
    std::string out;
    for_each_line(request.prompt, [&out](std::string_view line) {
        Timestamp start;
        std::string_view text;
        if (!match_transcript_line(line, start, text)) {
            return;
        }
        const std::size_t marker = text.find(kChapterMarker);
        if (marker == std::string_view::npos) {
            return;
        }
        const std::string_view title = trim_view(text.substr(marker + kChapterMarker.size()));
        out += format_timestamp(start);
        out += " - ";
        out += title;
        out += '\n';
    });
    return GeneratorResponse{std::move(out), std::nullopt};
}

namespace {

// A chapter entry after whitespace trimming: "HH:MM:SS - Title" (the title may
// be empty, in which case the separator may lack its trailing space).
bool match_chapter_line(std::string_view line, Timestamp& start, std::string_view& title) {
    line = trim_view(line);
    if (line.size() < 8 || !try_parse_timestamp(line.substr(0, 8), start)) {
        return false;
    }
    std::string_view rest = line.substr(8);
    if (rest.rfind(" - ", 0) == 0) {
        title = rest.substr(3);
        return true;
    }
    if (rest == " -") {
        title = "";
        return true;
    }
    return false;
}

struct RawChapter {
    Timestamp start;
    std::string title;
};

// Shared extraction: filter, clamp, enforce monotonicity.
std::vector<RawChapter> extract_chapters(const std::string& raw, Timestamp duration,
                                         ParseReport& report) {
    std::vector<RawChapter> kept;
    for_each_line(raw, [&](std::string_view line) {
        if (trim_view(line).empty()) {
            return;
        }
        Timestamp start;
        std::string_view title;
        if (!match_chapter_line(line, start, title)) {
            ++report.discarded_lines;
            return;
        }
        if (start.seconds >= duration.seconds) {
            start.seconds = duration.seconds == 0 ? 0 : duration.seconds - 1;
            ++report.clamped;
        }
        if (!kept.empty() && start.seconds <= kept.back().start.seconds) {
            ++report.dropped_non_monotonic;
            return;
        }
        kept.push_back(RawChapter{start, std::string(title)});
    });
    return kept;
}

}  // namespace

ParsedChapters parse_chapter_output(const std::string& raw, Timestamp duration,
                                    bool coerce_first_to_zero) {
    ParseReport report;
    std::vector<RawChapter> kept = extract_chapters(raw, duration, report);
    if (kept.empty()) {
        throw NoChaptersParsedError(raw);
    }
    if (coerce_first_to_zero && kept.front().start.seconds > 0) {
        kept.front().start.seconds = 0;
        report.coerced_first_to_zero = true;
    }
    std::vector<Chapter> chapters;
    chapters.reserve(kept.size());
    for (RawChapter& rc : kept) {
        chapters.emplace_back(rc.start, std::move(rc.title));
    }
    return ParsedChapters{ChapterSet::create(std::move(chapters), duration), report};
}

std::string write_chapters(const ChapterSet& cs) {
    std::string out;
    for (const Chapter& c : cs.chapters()) {
        out += format_timestamp(c.start);
        out += " - ";
        out += c.title;
        out += '\n';
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> partition_windows(
    const std::vector<TranscriptLine>& lines, std::size_t window_tokens) {
    std::vector<std::pair<std::size_t, std::size_t>> windows;
    std::size_t first = 0;
    while (first < lines.size()) {
        // A window always takes at least one line, so a single oversized line
        // occupies its own window.
        std::size_t tokens = lines[first].token_count;
        std::size_t last = first + 1;
        while (last < lines.size() && tokens + lines[last].token_count <= window_tokens) {
            tokens += lines[last].token_count;
            ++last;
        }
        windows.emplace_back(first, last);
        first = last;
    }
    return windows;
}

ChapterRunResult chapter_video(const VideoDocument& doc, const PromptOptions& opts,
                               const GeneratorBackend& backend, const WindowingConfig& windowing) {
    opts.validate();
    if (windowing.window_tokens == 0) {
        throw ConfigError("window token budget must be positive");
    }
    const std::size_t overhead = prompt_overhead_tokens(doc, opts, windowing.counter);
    if (windowing.window_tokens <= overhead) {
        throw ConfigError("window token budget " + std::to_string(windowing.window_tokens) +
                          " does not clear the prompt template overhead of " +
                          std::to_string(overhead) + " tokens");
    }

    const std::vector<TranscriptLine> lines = build_transcript(doc, opts, windowing.counter);
    if (lines.empty()) {
        throw EmptyTranscriptError("empty transcript for video '" + doc.video_id() +
                                   "': no utterances pass the modality filter");
    }

    auto windows = partition_windows(lines, windowing.window_tokens);
    if (windowing.first_window_only && windows.size() > 1) {
        windows.resize(1);
    }

    RunReport report;
    std::vector<RawChapter> kept;
    for (std::size_t w = 0; w < windows.size(); ++w) {
        const auto [first, last] = windows[w];
        WindowReport window_report;
        window_report.lines = last - first;

        std::string text;
        for (std::size_t i = first; i < last; ++i) {
            text += lines[i].rendered;
            window_report.tokens += lines[i].token_count;
        }
        report.total_transcript_tokens += window_report.tokens;

        // Every window's prompt carries the full video duration; merging is by
        // absolute timestamp.
        GeneratorRequest request;
        request.prompt = build_prompt(doc, text, opts);

        GeneratorResponse response;
        try {
            response = generate(backend, request);
        } catch (const Error& e) {
            throw Error("window " + std::to_string(w + 1) + " of " +
                        std::to_string(windows.size()) + " (video '" + doc.video_id() +
                        "'): " + e.what());
        }

        ParseReport parse_report;
        std::vector<RawChapter> parsed = extract_chapters(response.raw_text, doc.duration(), parse_report);
        report.discarded_lines += parse_report.discarded_lines;
        report.clamped += parse_report.clamped;
        report.dropped_non_monotonic += parse_report.dropped_non_monotonic;
        window_report.chapters_parsed = parsed.size();

        if (parsed.empty()) {
            if (w == 0) {
                throw NoChaptersParsedError(response.raw_text);
            }
            ++report.empty_windows;
            report.windows.push_back(window_report);
            continue;
        }

        const Timestamp window_start = doc.utterances()[lines[first].source_index].start;
        for (RawChapter& rc : parsed) {
            if (w > 0 && rc.start.seconds < window_start.seconds) {
                ++report.dropped_out_of_window;
                continue;
            }
            if (!kept.empty() && rc.start.seconds <= kept.back().start.seconds) {
                ++report.dropped_non_monotonic;
                continue;
            }
            window_report.chapters_kept += 1;
            kept.push_back(std::move(rc));
        }
        report.windows.push_back(window_report);
    }

    if (kept.empty()) {
        throw NoChaptersParsedError("all windows were empty or filtered");
    }
    if (kept.front().start.seconds > 0) {
        kept.front().start.seconds = 0;
        report.coerced_first_to_zero = true;
    }
    std::vector<Chapter> chapters;
    chapters.reserve(kept.size());
    for (RawChapter& rc : kept) {
        chapters.emplace_back(rc.start, std::move(rc.title));
    }
    return ChapterRunResult{ChapterSet::create(std::move(chapters), doc.duration()), report};
}

std::string to_json_string(const RunReport& report) {
    nlohmann::ordered_json j;
    j["windows"] = nlohmann::ordered_json::array();
    for (const WindowReport& w : report.windows) {
        j["windows"].push_back({{"lines", w.lines},
                                {"tokens", w.tokens},
                                {"chapters_parsed", w.chapters_parsed},
                                {"chapters_kept", w.chapters_kept}});
    }
    j["total_transcript_tokens"] = report.total_transcript_tokens;
    j["discarded_lines"] = report.discarded_lines;
    j["clamped"] = report.clamped;
    j["dropped_non_monotonic"] = report.dropped_non_monotonic;
    j["dropped_out_of_window"] = report.dropped_out_of_window;
    j["empty_windows"] = report.empty_windows;
    j["coerced_first_to_zero"] = report.coerced_first_to_zero;
    j["used_fallback_frame_plan"] = report.used_fallback_frame_plan;
    return j.dump();
}

}  // namespace chapterforge
