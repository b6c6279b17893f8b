#include "chapterforge/prompt.hpp"

#include "chapterforge/errors.hpp"

namespace chapterforge {

std::size_t heuristic_token_count(std::string_view text) {
    return (text.size() + 3) / 4;
}

TokenCounter default_token_counter() {
    return [](std::string_view text) { return heuristic_token_count(text); };
}

PromptOptions PromptOptions::defaults(bool speech, bool captions) {
    PromptOptions opts;
    opts.include_speech = speech;
    opts.include_captions = captions;
    if (speech && captions) {
        opts.task_text = kTaskBothModalities;
    } else if (speech) {
        opts.task_text = kTaskSpeechOnly;
    } else {
        opts.task_text = kTaskCaptionsOnly;
    }
    return opts;
}

void PromptOptions::validate() const {
    if (!include_speech && !include_captions) {
        throw ValidationError("prompt options must include at least one modality");
    }
    if (task_text.empty()) {
        throw ValidationError("prompt task text must be non-empty");
    }
}

std::string render_line(const TimedUtterance& u, const PromptOptions& opts) {
    std::string line;
    line.reserve(u.text.size() + 32);
    if (opts.modality_prefixes && opts.include_speech && opts.include_captions) {
        line += modality_prefix(u.modality);
        line += ' ';
    }
    line += format_timestamp(u.start);
    if (opts.include_asr_end && u.modality == Modality::speech && u.end.has_value()) {
        line += " - ";
        line += format_timestamp(*u.end);
    }
    line += ": ";
    line += u.text;
    return line;
}

std::vector<TranscriptLine> build_transcript(const VideoDocument& doc, const PromptOptions& opts,
                                             const TokenCounter& counter) {
    opts.validate();
    std::vector<TranscriptLine> lines;
    const auto& utterances = doc.utterances();
    for (std::size_t i = 0; i < utterances.size(); ++i) {
        const TimedUtterance& u = utterances[i];
        if (u.modality == Modality::speech && !opts.include_speech) {
            continue;
        }
        if (u.modality == Modality::caption && !opts.include_captions) {
            continue;
        }
        TranscriptLine line;
        line.source_index = i;
        line.rendered = render_line(u, opts);
        line.rendered += '\n';
        line.token_count = counter(line.rendered);
        lines.push_back(std::move(line));
    }
    return lines;
}

std::string transcript_text(const std::vector<TranscriptLine>& lines) {
    std::size_t size = 0;
    for (const TranscriptLine& line : lines) {
        size += line.rendered.size();
    }
    std::string text;
    text.reserve(size);
    for (const TranscriptLine& line : lines) {
        text += line.rendered;
    }
    return text;
}

namespace {

// The fixed instruction block. The task sentence carries its own terminating
// period, and the transcript follows on the next line.
std::string instruction_text(Timestamp duration, const std::string& task) {
    std::string out;
    out.reserve(task.size() + 384);
    out += "Given the complete transcript of a video of duration ";
    out += format_timestamp(duration);
    out += ", ";
    out += task;
    out +=
        " Identify the approximate start time of each chapter in the format "
        "`hh:mm:ss - Title'. Ensure each chapter entry is on a new line. Focus on "
        "significant topic changes that would merit a new chapter in a video, but do "
        "not provide summaries of the chapters.\n";
    return out;
}

}  // namespace

std::string build_prompt(const VideoDocument& doc, const std::string& transcript,
                         const PromptOptions& opts) {
    opts.validate();
    if (transcript.empty()) {
        throw ValidationError("cannot build a prompt from an empty transcript");
    }
    std::string prompt = instruction_text(doc.duration(), opts.task_text);
    prompt += transcript;
    return prompt;
}

TokenCountReport count_tokens(const TokenCounter& counter, const std::vector<TranscriptLine>& lines) {
    TokenCountReport report;
    report.per_line.reserve(lines.size());
    for (const TranscriptLine& line : lines) {
        const std::size_t n = counter(line.rendered);
        report.per_line.push_back(n);
        report.total += n;
    }
    return report;
}

std::size_t prompt_overhead_tokens(const VideoDocument& doc, const PromptOptions& opts,
                                   const TokenCounter& counter) {
    opts.validate();
    return counter(instruction_text(doc.duration(), opts.task_text));
}

}  // namespace chapterforge
