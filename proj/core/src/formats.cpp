#include "oadeval/formats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

namespace oadeval {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(pos)));
            break;
        }
        fields.push_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return fields;
}

double parse_number(std::string_view field, const char* what, int line) {
    double value{};
    const auto* begin = field.data();
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value))
        throw ParseError(std::string("malformed ") + what + " '" + std::string(field) + "'",
                         line);
    return value;
}

double parse_score(std::string_view field, int line) {
    const double value = parse_number(field, "score", line);
    if (value < 0.0 || value > 1.0)
        throw ParseError("score out of range [0,1]: '" + std::string(field) + "'", line);
    return value;
}

// Reads logical lines, skipping blanks and '#' comments; tracks line numbers.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(&in) {}

    std::optional<std::string_view> next() {
        while (std::getline(*in_, buffer_)) {
            ++line_;
            const auto content = trim(buffer_);
            if (content.empty() || content.front() == '#') continue;
            return content;
        }
        return std::nullopt;
    }

    int line() const { return line_; }

private:
    std::istream* in_;
    std::string buffer_;
    int line_ = 0;
};

void check_name(std::string_view name, const char* what, int line) {
    if (name.empty()) throw ParseError(std::string("empty ") + what, line);
    if (name.find(',') != std::string_view::npos ||
        name.find('[') != std::string_view::npos)
        throw ParseError(std::string("invalid character in ") + what, line);
}

TimeInterval parse_span(std::string_view start_field, std::string_view end_field,
                        int line) {
    const double start = parse_number(start_field, "start time", line);
    const double end = parse_number(end_field, "end time", line);
    if (start < 0.0) throw ParseError("negative start time", line);
    if (!(end > start)) throw ParseError("end before start", line);
    return {start, end};
}

void append_number(std::string& out, double value) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, value);
    out.append(buf, r.ptr);
}

void append_fixed6(std::string& out, double value) {
    char buf[64];
    const int n = std::snprintf(buf, sizeof buf, "%.6f", value);
    out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

ClassId ClassCatalog::add(std::string name) {
    if (name.empty()) throw std::invalid_argument("class names must be non-empty");
    const auto [it, inserted] =
        ids_.emplace(std::move(name), static_cast<ClassId>(names_.size() + 1));
    if (!inserted) throw std::invalid_argument("duplicate class name '" + it->first + "'");
    names_.push_back(it->first);
    return it->second;
}

ClassId ClassCatalog::id_of(std::string_view name) const {
    const auto it = ids_.find(name);
    return it == ids_.end() ? kBackgroundClass : it->second;
}

const std::string& ClassCatalog::name_of(ClassId id) const {
    static const std::string background = "background";
    if (id == kBackgroundClass) return background;
    if (id < 1 || id > class_count()) throw std::invalid_argument("unknown class id");
    return names_[static_cast<std::size_t>(id - 1)];
}

const VideoMeta* Corpus::find_video(std::string_view id) const {
    for (const auto& v : videos)
        if (v.video_id == id) return &v;
    return nullptr;
}

std::span<const LabeledInterval> Corpus::annotations_for(const std::string& id) const {
    const auto it = annotations.find(id);
    if (it == annotations.end()) return {};
    return it->second;
}

Corpus parse_ground_truth(std::istream& in) {
    enum class Section { None, Classes, Videos, Annotations };

    Corpus corpus;
    std::map<std::string, double, std::less<>> durations;
    bool catalog_declared = false;
    Section section = Section::None;
    LineReader reader(in);

    while (const auto line = reader.next()) {
        const int at = reader.line();
        if (line->front() == '[') {
            if (*line == "[classes]") {
                if (section != Section::None)
                    throw ParseError("classes section must come first", at);
                catalog_declared = true;
                section = Section::Classes;
            } else if (*line == "[videos]") {
                if (section == Section::Videos || section == Section::Annotations)
                    throw ParseError("duplicate or misplaced [videos] section", at);
                section = Section::Videos;
            } else if (*line == "[annotations]") {
                if (section != Section::Videos)
                    throw ParseError("[annotations] must follow [videos]", at);
                section = Section::Annotations;
            } else {
                throw ParseError("unknown section " + std::string(*line), at);
            }
            continue;
        }

        const auto fields = split_fields(*line);
        switch (section) {
            case Section::None:
                throw ParseError("expected a section header before data rows", at);
            case Section::Classes: {
                if (fields.size() != 1) throw ParseError("expected one class name", at);
                check_name(fields[0], "class name", at);
                if (corpus.catalog.id_of(fields[0]) != kBackgroundClass)
                    throw ParseError("duplicate class '" + std::string(fields[0]) + "'", at);
                corpus.catalog.add(std::string(fields[0]));
                break;
            }
            case Section::Videos: {
                if (fields.size() != 2)
                    throw ParseError("expected video_id,duration", at);
                check_name(fields[0], "video id", at);
                const double duration = parse_number(fields[1], "duration", at);
                if (!(duration > 0.0)) throw ParseError("duration must be positive", at);
                auto id = std::string(fields[0]);
                if (!durations.emplace(id, duration).second)
                    throw ParseError("duplicate video '" + id + "'", at);
                corpus.videos.push_back({std::move(id), duration});
                break;
            }
            case Section::Annotations: {
                if (fields.size() != 4)
                    throw ParseError("expected video_id,class_name,start,end", at);
                const auto duration_it = durations.find(fields[0]);
                if (duration_it == durations.end())
                    throw ParseError("unknown video '" + std::string(fields[0]) + "'", at);
                check_name(fields[1], "class name", at);
                ClassId class_id = corpus.catalog.id_of(fields[1]);
                if (class_id == kBackgroundClass) {
                    if (catalog_declared)
                        throw ParseError("unknown class '" + std::string(fields[1]) + "'",
                                         at);
                    class_id = corpus.catalog.add(std::string(fields[1]));
                }
                const auto span = parse_span(fields[2], fields[3], at);
                if (span.end > duration_it->second)
                    throw ParseError("interval ends beyond the video duration", at);
                corpus.annotations[std::string(fields[0])].push_back(
                    {span, class_id, std::nullopt});
                break;
            }
        }
    }

    if (corpus.videos.empty()) throw ParseError("no videos declared");
    return corpus;
}

DetectionMap parse_detections(std::istream& in, const Corpus& corpus) {
    DetectionMap detections;
    bool in_section = false;
    LineReader reader(in);

    while (const auto line = reader.next()) {
        const int at = reader.line();
        if (line->front() == '[') {
            if (*line != "[detections]")
                throw ParseError("unknown section " + std::string(*line), at);
            in_section = true;
            continue;
        }
        if (!in_section)
            throw ParseError("expected a [detections] section before data rows", at);

        const auto fields = split_fields(*line);
        if (fields.size() != 5)
            throw ParseError("expected video_id,class_name,start,end,score", at);
        if (corpus.find_video(fields[0]) == nullptr)
            throw ParseError("unknown video '" + std::string(fields[0]) + "'", at);
        const ClassId class_id = corpus.catalog.id_of(fields[1]);
        if (class_id == kBackgroundClass)
            throw ParseError("unknown class '" + std::string(fields[1]) + "'", at);
        const auto span = parse_span(fields[2], fields[3], at);
        const double score = parse_score(fields[4], at);
        detections[std::string(fields[0])].push_back({span, class_id, score});
    }
    return detections;
}

EventStreamReader::EventStreamReader(std::istream& in, const Corpus& corpus)
    : in_(&in), corpus_(&corpus) {}

std::optional<DetectionEvent> EventStreamReader::next() {
    std::string buffer;
    while (std::getline(*in_, buffer)) {
        ++line_;
        const auto content = trim(buffer);
        if (content.empty() || content.front() == '#') continue;

        const auto fields = split_fields(content);
        if (fields.size() != 6)
            throw ParseError("expected video_id,class_name,start,end,score,emit_time",
                             line_);
        if (corpus_->find_video(fields[0]) == nullptr)
            throw ParseError("unknown video '" + std::string(fields[0]) + "'", line_);
        const ClassId class_id = corpus_->catalog.id_of(fields[1]);
        if (class_id == kBackgroundClass)
            throw ParseError("unknown class '" + std::string(fields[1]) + "'", line_);
        const auto span = parse_span(fields[2], fields[3], line_);
        const double score = parse_score(fields[4], line_);
        const double emit_time = parse_number(fields[5], "emit time", line_);
        if (emit_time < 0.0) throw ParseError("negative emit time", line_);

        if (span.end > emit_time)
            throw CausalityError("event claims time beyond its emit instant, line " +
                                 std::to_string(line_));
        auto [it, inserted] = last_emit_.try_emplace(std::string(fields[0]), emit_time);
        if (!inserted) {
            if (emit_time < it->second)
                throw StreamOrderError("emit times went backwards for video '" +
                                       std::string(fields[0]) + "', line " +
                                       std::to_string(line_));
            it->second = emit_time;
        }
        return DetectionEvent{std::string(fields[0]), {span, class_id, score}, emit_time};
    }
    return std::nullopt;
}

void write_metric_series(std::ostream& out, const MetricSeries& series) {
    std::string buffer = "t,ia,weighted_ia\n";
    buffer.reserve(buffer.size() + series.points.size() * 30);
    for (const auto& p : series.points) {
        append_fixed6(buffer, p.t_prime);
        buffer.push_back(',');
        append_fixed6(buffer, p.ia);
        buffer.push_back(',');
        append_fixed6(buffer, p.weighted_ia);
        buffer.push_back('\n');
    }
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
}

void write_summary(std::ostream& out, const DatasetSummary& summary) {
    std::string buffer = "video_id,avg_ia,avg_weighted_ia\n";
    for (const auto& v : summary.per_video) {
        buffer.append(v.video_id);
        buffer.push_back(',');
        append_fixed6(buffer, v.avg_ia);
        buffer.push_back(',');
        append_fixed6(buffer, v.avg_weighted_ia);
        buffer.push_back('\n');
    }
    buffer.append("maIA,");
    append_fixed6(buffer, summary.maia);
    buffer.push_back(',');
    append_fixed6(buffer, summary.weighted_maia);
    buffer.push_back('\n');
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
}

void write_ground_truth(std::ostream& out, const Corpus& corpus) {
    std::string buffer;
    if (!corpus.catalog.empty()) {
        buffer.append("[classes]\n");
        for (const auto& name : corpus.catalog.names()) {
            buffer.append(name);
            buffer.push_back('\n');
        }
    }
    buffer.append("[videos]\n");
    for (const auto& v : corpus.videos) {
        buffer.append(v.video_id);
        buffer.push_back(',');
        append_number(buffer, v.duration);
        buffer.push_back('\n');
    }
    buffer.append("[annotations]\n");
    for (const auto& v : corpus.videos) {
        for (const auto& li : corpus.annotations_for(v.video_id)) {
            buffer.append(v.video_id);
            buffer.push_back(',');
            buffer.append(corpus.catalog.name_of(li.class_id));
            buffer.push_back(',');
            append_number(buffer, li.span.start);
            buffer.push_back(',');
            append_number(buffer, li.span.end);
            buffer.push_back('\n');
        }
    }
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
}

void write_detections(std::ostream& out, const Corpus& corpus,
                      const DetectionMap& detections) {
    std::string buffer = "[detections]\n";
    for (const auto& v : corpus.videos) {
        const auto it = detections.find(v.video_id);
        if (it == detections.end()) continue;
        for (const auto& li : it->second) {
            buffer.append(v.video_id);
            buffer.push_back(',');
            buffer.append(corpus.catalog.name_of(li.class_id));
            buffer.push_back(',');
            append_number(buffer, li.span.start);
            buffer.push_back(',');
            append_number(buffer, li.span.end);
            buffer.push_back(',');
            append_number(buffer, li.score.value_or(0.0));
            buffer.push_back('\n');
        }
    }
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
}

}  // namespace oadeval
