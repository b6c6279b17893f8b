#include "chapterforge/synth.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "chapterforge/errors.hpp"
#include "chapterforge/generate.hpp"

namespace chapterforge {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// mt19937_64 plus hand-rolled range mapping; std::uniform_int_distribution is
// implementation-defined, which would break byte-identical corpora across
// toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bounded(std::uint64_t lo, std::uint64_t hi) {
        return lo + engine_() % (hi - lo + 1);
    }

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

constexpr std::array<std::string_view, 48> kWords = {
    "river",   "canyon",  "trail",    "bridge",  "market",  "harbor",  "engine",  "signal",
    "garden",  "summit",  "village",  "desert",  "window",  "stone",   "meadow",  "lantern",
    "forest",  "thunder", "compass",  "saddle",  "timber",  "quarry",  "orchard", "prairie",
    "beacon",  "current", "granite",  "hollow",  "journey", "keeper",  "ledge",   "mineral",
    "notch",   "outpost", "pasture",  "ridge",   "shelter", "tunnel",  "upland",  "valley",
    "wagon",   "yonder",  "basin",    "cliff",   "dune",    "ember",   "fjord",   "glacier",
};

std::string random_words(Rng& rng, std::size_t target_bytes) {
    std::string out;
    while (true) {
        std::string_view word = kWords[rng.bounded(0, kWords.size() - 1)];
        const std::size_t added = word.size() + (out.empty() ? 0 : 1);
        if (!out.empty() && out.size() + added > target_bytes) {
            break;
        }
        if (!out.empty()) {
            out += ' ';
        }
        out += word;
    }
    return out;
}

std::string title_words(Rng& rng, std::size_t count) {
    std::string out;
    for (std::size_t i = 0; i < count; ++i) {
        std::string_view word = kWords[rng.bounded(0, kWords.size() - 1)];
        if (!out.empty()) {
            out += ' ';
        }
        out += static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
        out += word.substr(1);
    }
    return out;
}

}  // namespace

void SynthConfig::validate() const {
    if (num_videos == 0) {
        throw ConfigError("num_videos must be positive");
    }
    if (duration_min_seconds == 0 || duration_min_seconds > duration_max_seconds) {
        throw ConfigError("duration range is empty");
    }
    if (duration_max_seconds > kMaxTimestampSeconds) {
        throw ConfigError("duration exceeds the representable timestamp range");
    }
    if (chapters_min == 0 || chapters_min > chapters_max) {
        throw ConfigError("chapter count range is empty");
    }
    if (duration_min_seconds < kMinChapterGapSeconds * chapters_min) {
        throw ConfigError("duration " + std::to_string(duration_min_seconds) +
                          "s cannot hold " + std::to_string(chapters_min) + " chapters at the " +
                          std::to_string(kMinChapterGapSeconds) + "s minimum gap");
    }
    if (marker_rate < 0.0 || marker_rate > 1.0) {
        throw ConfigError("marker_rate must lie in [0, 1]");
    }
    if (2 * boundary_jitter_seconds >= kMinChapterGapSeconds) {
        throw ConfigError("boundary jitter of " + std::to_string(boundary_jitter_seconds) +
                          "s could reorder boundaries spaced " +
                          std::to_string(kMinChapterGapSeconds) + "s apart");
    }
    if (speech_tokens_per_minute <= 0.0 || caption_tokens <= 0.0) {
        throw ConfigError("token-rate targets must be positive");
    }
}

namespace {

SynthVideo generate_video(const SynthConfig& cfg, std::size_t index) {
    Rng rng(splitmix64(cfg.seed ^ splitmix64(index)));
    const auto duration_s = static_cast<std::uint32_t>(
        rng.bounded(cfg.duration_min_seconds, cfg.duration_max_seconds));
    const Timestamp duration{duration_s};

    // Chapter count, capped by what the duration can hold at the minimum gap.
    const std::size_t feasible_max =
        std::min<std::size_t>(cfg.chapters_max, duration_s / kMinChapterGapSeconds);
    const std::size_t count = rng.bounded(cfg.chapters_min, feasible_max);

    // Starts: 0 plus sorted slack offsets on a min-gap grid.
    const std::uint32_t slack = duration_s - static_cast<std::uint32_t>(count) * kMinChapterGapSeconds;
    std::vector<std::uint32_t> cuts(count - 1);
    for (auto& cut : cuts) {
        cut = static_cast<std::uint32_t>(rng.bounded(0, slack));
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::uint32_t> starts(count);
    starts[0] = 0;
    for (std::size_t i = 1; i < count; ++i) {
        starts[i] = static_cast<std::uint32_t>(i) * kMinChapterGapSeconds + cuts[i - 1];
    }

    // Distinct titles per video.
    std::vector<std::string> titles;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < count; ++i) {
        std::string title = title_words(rng, rng.bounded(2, 4));
        for (int attempt = 0; attempt < 16 && seen.count(title) > 0; ++attempt) {
            title = title_words(rng, rng.bounded(2, 4));
        }
        if (seen.count(title) > 0) {
            title += ' ';
            title += std::to_string(i + 1);
        }
        seen.insert(title);
        titles.push_back(std::move(title));
    }

    // Marked chapters carry the oracle marker at a possibly jittered time.
    struct Marker {
        std::uint32_t time;
        std::size_t chapter;
    };
    std::vector<Marker> markers;
    for (std::size_t i = 0; i < count; ++i) {
        if (rng.unit() >= cfg.marker_rate) {
            continue;
        }
        std::int64_t t = starts[i];
        if (cfg.boundary_jitter_seconds > 0) {
            t += static_cast<std::int64_t>(rng.bounded(0, 2 * cfg.boundary_jitter_seconds)) -
                 cfg.boundary_jitter_seconds;
        }
        t = std::clamp<std::int64_t>(t, 0, static_cast<std::int64_t>(duration_s) - 1);
        markers.push_back(Marker{static_cast<std::uint32_t>(t), i});
    }

    std::vector<TimedUtterance> utterances;

    // Filler speech on a 3-4 s cadence, text sized so the rendered
    // single-modality line ("HH:MM:SS: ...\n") hits the token-rate target.
    const double tokens_per_second = cfg.speech_tokens_per_minute / 60.0;
    std::uint32_t t = 0;
    while (t < duration_s) {
        const auto step = static_cast<std::uint32_t>(rng.bounded(3, 4));
        const double line_tokens = tokens_per_second * step;
        const auto target_bytes = static_cast<std::size_t>(
            std::max(8.0, 4.0 * line_tokens - 11.0));
        const Timestamp start{t};
        const Timestamp end{std::min(t + 3, duration_s)};
        utterances.push_back(make_speech(start, end, random_words(rng, target_bytes)));
        t += step;
    }
    for (const Marker& m : markers) {
        std::string text(kChapterMarker);
        text += ' ';
        text += titles[m.chapter];
        const Timestamp start{m.time};
        const Timestamp end{std::min(m.time + 3, duration_s)};
        utterances.push_back(make_speech(start, end, std::move(text)));
    }

    // Captions at true chapter starts plus uniform extras, sized for the
    // caption token target under the prefixed rendering.
    const auto caption_bytes = static_cast<std::size_t>(
        std::max(16.0, 4.0 * cfg.caption_tokens - 19.0));
    const auto add_caption = [&](std::uint32_t at) {
        std::string text = "The image shows a ";
        text += random_words(rng, caption_bytes > text.size() ? caption_bytes - text.size() : 16);
        utterances.push_back(make_caption(Timestamp{at}, std::move(text)));
    };
    for (const std::uint32_t s : starts) {
        add_caption(s);
    }
    for (std::size_t i = 0; i < cfg.extra_captions; ++i) {
        add_caption(static_cast<std::uint32_t>(rng.bounded(0, duration_s - 1)));
    }

    char id[32];
    std::snprintf(id, sizeof(id), "synth-%04zu", index + 1);

    SynthVideo video;
    video.document = VideoDocument::create(id, duration, std::move(utterances));

    std::vector<Chapter> gt;
    gt.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        gt.emplace_back(Timestamp{starts[i]}, titles[i]);
    }
    video.ground_truth = ChapterSet::create(std::move(gt), duration);

    if (!markers.empty()) {
        std::vector<Chapter> expected;
        expected.reserve(markers.size());
        for (std::size_t i = 0; i < markers.size(); ++i) {
            const std::uint32_t at = (i == 0 && markers[i].time > 0) ? 0 : markers[i].time;
            expected.emplace_back(Timestamp{at}, titles[markers[i].chapter]);
        }
        video.expected_prediction = ChapterSet::create(std::move(expected), duration);
    }
    return video;
}

}  // namespace

std::vector<SynthVideo> generate_corpus(const SynthConfig& config) {
    config.validate();
    std::vector<SynthVideo> corpus;
    corpus.reserve(config.num_videos);
    for (std::size_t i = 0; i < config.num_videos; ++i) {
        corpus.push_back(generate_video(config, i));
    }
    return corpus;
}

namespace {

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot create " + path.string());
    }
    out << contents;
    if (!out.good()) {
        throw IoError("write failure on " + path.string());
    }
}

}  // namespace

std::filesystem::path write_corpus(std::span<const SynthVideo> corpus,
                                   const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir / "asr");
    fs::create_directories(out_dir / "captions");
    fs::create_directories(out_dir / "chapters");

    std::string manifest;
    for (const SynthVideo& video : corpus) {
        const std::string& id = video.document.video_id();
        std::string asr_lines;
        std::string caption_lines;
        for (const TimedUtterance& u : video.document.utterances()) {
            nlohmann::ordered_json j;
            if (u.modality == Modality::speech) {
                j["start"] = u.start.seconds;
                j["end"] = u.end ? u.end->seconds : u.start.seconds;
                j["text"] = u.text;
                asr_lines += j.dump();
                asr_lines += '\n';
            } else {
                j["time"] = u.start.seconds;
                j["text"] = u.text;
                caption_lines += j.dump();
                caption_lines += '\n';
            }
        }
        write_text_file(out_dir / "asr" / (id + ".jsonl"), asr_lines);
        write_text_file(out_dir / "captions" / (id + ".jsonl"), caption_lines);
        write_text_file(out_dir / "chapters" / (id + ".txt"), write_chapters(video.ground_truth));

        nlohmann::ordered_json entry;
        entry["video_id"] = id;
        entry["duration"] = video.document.duration().seconds;
        entry["asr"] = "asr/" + id + ".jsonl";
        entry["captions"] = "captions/" + id + ".jsonl";
        entry["chapters"] = "chapters/" + id + ".txt";
        manifest += entry.dump();
        manifest += '\n';
    }
    const fs::path manifest_path = out_dir / "manifest.jsonl";
    write_text_file(manifest_path, manifest);
    return manifest_path;
}

}  // namespace chapterforge
