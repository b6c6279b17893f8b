#include "chapterforge/model.hpp"

#include <algorithm>
#include <cctype>

#include "chapterforge/errors.hpp"

namespace chapterforge {

std::string_view modality_prefix(Modality m) {
    return m == Modality::speech ? "ASR" : "Caption";
}

TimedUtterance make_speech(Timestamp start, std::optional<Timestamp> end, std::string text) {
    return TimedUtterance{Modality::speech, start, end, std::move(text)};
}

TimedUtterance make_caption(Timestamp time, std::string text) {
    return TimedUtterance{Modality::caption, time, std::nullopt, std::move(text)};
}

namespace {

void validate_utterance(const TimedUtterance& u, std::size_t index, Timestamp duration) {
    const std::string where = "utterance " + std::to_string(index);
    if (u.text.empty()) {
        throw ValidationError(where + ": text must be non-empty");
    }
    if (u.modality == Modality::caption && u.end.has_value()) {
        throw ValidationError(where + ": caption records never carry an end timestamp");
    }
    if (u.end && u.end->seconds < u.start.seconds) {
        throw ValidationError(where + ": end " + std::to_string(u.end->seconds) +
                              "s precedes start " + std::to_string(u.start.seconds) + "s");
    }
    if (u.start.seconds > duration.seconds) {
        throw ValidationError(where + ": start " + std::to_string(u.start.seconds) +
                              "s lies beyond the video duration " +
                              std::to_string(duration.seconds) + "s");
    }
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

}  // namespace

VideoDocument VideoDocument::create(std::string video_id, Timestamp duration,
                                    std::vector<TimedUtterance> utterances) {
    for (std::size_t i = 0; i < utterances.size(); ++i) {
        validate_utterance(utterances[i], i, duration);
    }
    // Stable sort keeps insertion order for records with equal key, so file
    // order is the final tie-break.
    std::stable_sort(utterances.begin(), utterances.end(),
                     [](const TimedUtterance& a, const TimedUtterance& b) {
                         if (a.start.seconds != b.start.seconds) {
                             return a.start.seconds < b.start.seconds;
                         }
                         return static_cast<int>(a.modality) < static_cast<int>(b.modality);
                     });
    VideoDocument doc;
    doc.video_id_ = std::move(video_id);
    doc.duration_ = duration;
    doc.utterances_ = std::move(utterances);
    return doc;
}

bool VideoDocument::has_speech() const {
    return std::any_of(utterances_.begin(), utterances_.end(),
                       [](const TimedUtterance& u) { return u.modality == Modality::speech; });
}

bool VideoDocument::has_captions() const {
    return std::any_of(utterances_.begin(), utterances_.end(),
                       [](const TimedUtterance& u) { return u.modality == Modality::caption; });
}

Chapter::Chapter(Timestamp start, std::string title) : start(start), title(trim(std::move(title))) {
    if (this->title.find('\n') != std::string::npos ||
        this->title.find('\r') != std::string::npos) {
        throw ValidationError("chapter title contains a newline: '" + this->title + "'");
    }
}

ChapterSet ChapterSet::create(std::vector<Chapter> chapters, Timestamp duration) {
    if (chapters.empty()) {
        throw ValidationError("chapter set must contain at least one chapter");
    }
    for (std::size_t i = 0; i < chapters.size(); ++i) {
        if (chapters[i].start.seconds >= duration.seconds) {
            throw ValidationError("chapter " + std::to_string(i) + " starts at " +
                                  std::to_string(chapters[i].start.seconds) +
                                  "s, at or beyond the video duration " +
                                  std::to_string(duration.seconds) + "s");
        }
        if (i > 0 && chapters[i].start.seconds <= chapters[i - 1].start.seconds) {
            throw ValidationError("chapter starts must be strictly increasing: chapter " +
                                  std::to_string(i) + " at " +
                                  std::to_string(chapters[i].start.seconds) +
                                  "s does not follow " +
                                  std::to_string(chapters[i - 1].start.seconds) + "s");
        }
    }
    ChapterSet cs;
    cs.chapters_ = std::move(chapters);
    cs.duration_ = duration;
    return cs;
}

std::vector<Timestamp> ChapterSet::starts() const {
    std::vector<Timestamp> out;
    out.reserve(chapters_.size());
    for (const Chapter& c : chapters_) {
        out.push_back(c.start);
    }
    return out;
}

std::vector<Segment> segments_of(const ChapterSet& cs) {
    const auto& chapters = cs.chapters();
    std::vector<Segment> segments;
    segments.reserve(chapters.size());
    for (std::size_t i = 0; i < chapters.size(); ++i) {
        const Timestamp end =
            (i + 1 < chapters.size()) ? chapters[i + 1].start : cs.duration();
        segments.push_back(Segment{chapters[i].start, end});
    }
    return segments;
}

}  // namespace chapterforge
