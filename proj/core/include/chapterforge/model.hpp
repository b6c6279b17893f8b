#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chapterforge/timestamp.hpp"

namespace chapterforge {

enum class Modality { speech, caption };

// Transcript prefix for a modality: "ASR" or "Caption".
std::string_view modality_prefix(Modality m);

// One timestamped record from either modality. Captions come from a single
// point in time and never carry an end timestamp.
struct TimedUtterance {
    Modality modality = Modality::speech;
    Timestamp start;
    std::optional<Timestamp> end;
    std::string text;
};

TimedUtterance make_speech(Timestamp start, std::optional<Timestamp> end, std::string text);
TimedUtterance make_caption(Timestamp time, std::string text);

// A video's identity, duration, and all of its timed records, kept sorted by
// (start, speech before caption, original insertion order).
class VideoDocument {
public:
    VideoDocument() = default;

    // Validates every record (non-empty text, end >= start, caption records
    // without ends, start <= duration) and canonicalizes the order.
    static VideoDocument create(std::string video_id, Timestamp duration,
                                std::vector<TimedUtterance> utterances);

    const std::string& video_id() const { return video_id_; }
    Timestamp duration() const { return duration_; }
    const std::vector<TimedUtterance>& utterances() const { return utterances_; }

    bool has_speech() const;
    bool has_captions() const;

private:
    std::string video_id_;
    Timestamp duration_;
    std::vector<TimedUtterance> utterances_;
};

// Chapter start plus free-form title. The title is trimmed of surrounding
// whitespace at construction and may not contain newline characters.
struct Chapter {
    Chapter(Timestamp start, std::string title);

    Timestamp start;
    std::string title;
};

// Half-open time interval [begin, end).
struct Segment {
    Timestamp begin;
    Timestamp end;
};

// Ordered chapter list over a video of known duration. Starts are strictly
// increasing and all lie before the duration; the set is never empty. Each
// chapter ends implicitly where the next one starts (or at the duration).
class ChapterSet {
public:
    // Default-constructed sets are empty placeholders; create() is the
    // validated constructor and the only way to obtain a usable set.
    ChapterSet() = default;

    static ChapterSet create(std::vector<Chapter> chapters, Timestamp duration);

    const std::vector<Chapter>& chapters() const { return chapters_; }
    Timestamp duration() const { return duration_; }
    std::size_t size() const { return chapters_.size(); }

    std::vector<Timestamp> starts() const;

private:
    std::vector<Chapter> chapters_;
    Timestamp duration_;
};

// Materializes the implicit chapter intervals: segment i is
// [start_i, start_{i+1}) and the last segment ends at the video duration.
std::vector<Segment> segments_of(const ChapterSet& cs);

}  // namespace chapterforge
