#include "chapterforge/frame_select.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chapterforge/errors.hpp"

namespace chapterforge {

std::string_view strategy_name(SelectionStrategy s) {
    switch (s) {
        case SelectionStrategy::equidistant:
            return "equidistant";
        case SelectionStrategy::every_k_seconds:
            return "every-k";
        case SelectionStrategy::shot_boundaries:
            return "shots";
        case SelectionStrategy::speech_based:
            return "speech";
        case SelectionStrategy::no_speech_fallback:
            return "no-speech-fallback";
    }
    return "unknown";
}

namespace {

FramePlan finalize(std::vector<Timestamp> timestamps, SelectionStrategy strategy) {
    std::sort(timestamps.begin(), timestamps.end());
    timestamps.erase(std::unique(timestamps.begin(), timestamps.end()), timestamps.end());
    if (timestamps.size() > kFrameCap) {
        timestamps.resize(kFrameCap);
    }
    return FramePlan{std::move(timestamps), strategy};
}

}  // namespace

FramePlan select_equidistant(Timestamp duration, std::size_t n) {
    if (n == 0) {
        throw ValidationError("equidistant selection requires n >= 1");
    }
    if (duration.seconds == 0) {
        throw ValidationError("equidistant selection requires a positive duration");
    }
    std::vector<Timestamp> out;
    out.reserve(std::min(n, kFrameCap));
    for (std::size_t i = 0; i < n; ++i) {
        // floor(duration * (i + 0.5) / n) in integer arithmetic
        const std::uint64_t numer = static_cast<std::uint64_t>(duration.seconds) * (2 * i + 1);
        out.push_back(Timestamp{static_cast<std::uint32_t>(numer / (2 * n))});
    }
    return finalize(std::move(out), SelectionStrategy::equidistant);
}

FramePlan select_every_k(Timestamp duration, std::uint32_t k) {
    if (k == 0) {
        throw ValidationError("every-k selection requires k >= 1");
    }
    std::vector<Timestamp> out;
    for (std::uint64_t t = 0; t < duration.seconds && out.size() < kFrameCap; t += k) {
        out.push_back(Timestamp{static_cast<std::uint32_t>(t)});
    }
    return FramePlan{std::move(out), SelectionStrategy::every_k_seconds};
}

FramePlan select_from_boundaries(const ChapterSet& predicted) {
    FramePlan plan = finalize(predicted.starts(), SelectionStrategy::speech_based);
    return plan;
}

FramePlan select_no_speech_fallback(const VideoDocument& doc) {
    if (doc.has_speech()) {
        throw ValidationError("no-speech fallback invoked on a document with speech (video '" +
                              doc.video_id() + "')");
    }
    FramePlan plan = select_every_k(doc.duration(), 10);
    plan.strategy = SelectionStrategy::no_speech_fallback;
    return plan;
}

ShotBoundaryLoadResult load_shot_boundaries(const std::filesystem::path& path, Timestamp duration) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string contents = std::move(buf).str();

    ShotBoundaryLoadResult result;
    std::vector<Timestamp> times;
    std::size_t record = 0;
    std::size_t pos = 0;
    while (pos < contents.size()) {
        std::size_t nl = contents.find('\n', pos);
        if (nl == std::string::npos) {
            nl = contents.size();
        }
        std::string_view line(contents.data() + pos, nl - pos);
        pos = nl + 1;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
            continue;
        }
        ++record;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("time") || !j["time"].is_number()) {
            throw ParseError(path.string() + ": record " + std::to_string(record) +
                                 " is not {\"time\": <number>}",
                             std::nullopt, record);
        }
        const double value = j["time"].get<double>();
        if (!(value >= 0.0)) {
            throw ParseError(path.string() + ": record " + std::to_string(record) +
                                 ": time must be non-negative",
                             std::nullopt, record);
        }
        const auto seconds = static_cast<std::uint64_t>(std::floor(value));
        if (seconds >= duration.seconds) {
            ++result.dropped_out_of_range;
            continue;
        }
        times.push_back(Timestamp{static_cast<std::uint32_t>(seconds)});
    }
    result.plan = finalize(std::move(times), SelectionStrategy::shot_boundaries);
    return result;
}

}  // namespace chapterforge
