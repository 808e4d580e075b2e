#include "evsat/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <regex>
#include <system_error>

#include "evsat/errors.hpp"

namespace evsat::io {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    std::string contents;
    in.seekg(0, std::ios::end);
    const auto size = in.tellg();
    if (size < 0) {
        throw IoError("cannot determine size of " + path.string());
    }
    contents.resize(static_cast<std::size_t>(size));
    in.seekg(0);
    in.read(contents.data(), size);
    if (!in) {
        throw IoError("short read on " + path.string());
    }
    return contents;
}

// All writers go through a temp file + rename so readers never observe a
// partially written file.
void write_file_atomic(const fs::path& path, const std::string& contents) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw IoError("short write on " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                      ec.message());
    }
}

[[noreturn]] void parse_fail(const fs::path& path, std::size_t line, const std::string& what) {
    throw ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
}

// Splits one CSV line; no quoting (none of the formats need it).
std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::int64_t parse_int(std::string_view text, const fs::path& path, std::size_t line,
                       const char* what) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        parse_fail(path, line, std::string("invalid ") + what + " '" + std::string(text) + "'");
    }
    return value;
}

double parse_double(std::string_view text, const fs::path& path, std::size_t line,
                    const char* what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        parse_fail(path, line, std::string("invalid ") + what + " '" + std::string(text) + "'");
    }
    return value;
}

// Iterates lines without copying; returns false when exhausted.
class LineCursor {
public:
    explicit LineCursor(std::string_view text) : text_(text) {}

    bool next(std::string_view& line) {
        if (pos_ >= text_.size()) {
            return false;
        }
        const std::size_t nl = text_.find('\n', pos_);
        if (nl == std::string_view::npos) {
            line = text_.substr(pos_);
            pos_ = text_.size();
        } else {
            line = text_.substr(pos_, nl - pos_);
            pos_ = nl + 1;
        }
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        ++line_no_;
        return true;
    }

    std::size_t line_no() const { return line_no_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
};

void append_int(std::string& out, std::int64_t value) {
    char buf[24];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, ptr);
}

void append_double(std::string& out, double value) {
    out += format_double(value);
}

constexpr char kEventMagic[4] = {'E', 'V', 'S', '1'};
constexpr std::size_t kEventRecordSize = 16;

}  // namespace

std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

EventFileFormat format_from_extension(const fs::path& path) {
    return path.extension() == ".csv" ? EventFileFormat::csv : EventFileFormat::binary;
}

EventStream read_events(const fs::path& path, EventFileFormat format,
                        const SensorGeometry& geometry) {
    const std::string contents = read_file(path);
    EventStream stream;
    stream.geometry = geometry;

    auto check_event = [&](std::int64_t t, std::int64_t x, std::int64_t y, std::int64_t p,
                           const std::string& where) {
        if (t < 0) {
            throw ParseError(where + ": negative timestamp " + std::to_string(t));
        }
        if (p != 1 && p != -1) {
            throw ParseError(where + ": polarity must be -1 or 1, got " + std::to_string(p));
        }
        if (x < 0 || x >= geometry.width || y < 0 || y >= geometry.height) {
            throw ParseError(where + ": coordinates (" + std::to_string(x) + "," +
                             std::to_string(y) + ") outside the " + std::to_string(geometry.width) +
                             "x" + std::to_string(geometry.height) + " sensor");
        }
        if (!stream.events.empty() && t < stream.events.back().t) {
            throw ParseError(where + ": timestamp " + std::to_string(t) +
                             " is before the previous event at " +
                             std::to_string(stream.events.back().t));
        }
    };

    if (format == EventFileFormat::csv) {
        LineCursor cursor(contents);
        std::string_view line;
        if (!cursor.next(line) || line != "t_us,x,y,p") {
            parse_fail(path, 1, "expected header 't_us,x,y,p'");
        }
        while (cursor.next(line)) {
            if (line.empty()) {
                continue;
            }
            const auto fields = split_fields(line);
            if (fields.size() != 4) {
                parse_fail(path, cursor.line_no(),
                           "expected 4 fields, got " + std::to_string(fields.size()));
            }
            const std::int64_t t = parse_int(fields[0], path, cursor.line_no(), "timestamp");
            const std::int64_t x = parse_int(fields[1], path, cursor.line_no(), "x coordinate");
            const std::int64_t y = parse_int(fields[2], path, cursor.line_no(), "y coordinate");
            const std::int64_t p = parse_int(fields[3], path, cursor.line_no(), "polarity");
            check_event(t, x, y, p, path.string() + ":" + std::to_string(cursor.line_no()));
            stream.events.push_back(Event{t, static_cast<std::uint16_t>(x),
                                          static_cast<std::uint16_t>(y), static_cast<std::int8_t>(p)});
        }
        return stream;
    }

    // binary
    if (contents.size() < sizeof(kEventMagic) ||
        std::memcmp(contents.data(), kEventMagic, sizeof(kEventMagic)) != 0) {
        throw ParseError(path.string() + ": byte 0: bad magic, expected 'EVS1'");
    }
    const std::size_t payload = contents.size() - sizeof(kEventMagic);
    if (payload % kEventRecordSize != 0) {
        throw ParseError(path.string() + ": byte " + std::to_string(contents.size()) +
                         ": truncated record (payload of " + std::to_string(payload) +
                         " bytes is not a multiple of 16)");
    }
    const auto n = payload / kEventRecordSize;
    stream.events.reserve(n);
    const auto* bytes = reinterpret_cast<const unsigned char*>(contents.data()) + sizeof(kEventMagic);
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned char* rec = bytes + i * kEventRecordSize;
        std::uint64_t t = 0;
        for (int b = 7; b >= 0; --b) {
            t = (t << 8) | rec[b];
        }
        const std::uint16_t x = static_cast<std::uint16_t>(rec[8] | (rec[9] << 8));
        const std::uint16_t y = static_cast<std::uint16_t>(rec[10] | (rec[11] << 8));
        const auto p = static_cast<std::int8_t>(rec[12]);
        const std::string where =
            path.string() + ": record " + std::to_string(i) + " (byte " +
            std::to_string(sizeof(kEventMagic) + i * kEventRecordSize) + ")";
        if (rec[13] != 0 || rec[14] != 0 || rec[15] != 0) {
            throw ParseError(where + ": non-zero padding bytes");
        }
        if (t > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
            throw ParseError(where + ": timestamp out of range");
        }
        check_event(static_cast<std::int64_t>(t), x, y, p, where);
        stream.events.push_back(Event{static_cast<std::int64_t>(t), x, y, p});
    }
    return stream;
}

void write_events(const fs::path& path, const EventStream& stream, EventFileFormat format) {
    std::string out;
    if (format == EventFileFormat::csv) {
        out.reserve(stream.events.size() * 20 + 16);
        out += "t_us,x,y,p\n";
        for (const Event& e : stream.events) {
            append_int(out, e.t);
            out += ',';
            append_int(out, e.x);
            out += ',';
            append_int(out, e.y);
            out += ',';
            append_int(out, e.p);
            out += '\n';
        }
    } else {
        out.reserve(sizeof(kEventMagic) + stream.events.size() * kEventRecordSize);
        out.append(kEventMagic, sizeof(kEventMagic));
        for (const Event& e : stream.events) {
            char rec[kEventRecordSize] = {};
            const auto t = static_cast<std::uint64_t>(e.t);
            for (int b = 0; b < 8; ++b) {
                rec[b] = static_cast<char>((t >> (8 * b)) & 0xff);
            }
            rec[8] = static_cast<char>(e.x & 0xff);
            rec[9] = static_cast<char>(e.x >> 8);
            rec[10] = static_cast<char>(e.y & 0xff);
            rec[11] = static_cast<char>(e.y >> 8);
            rec[12] = static_cast<char>(e.p);
            out.append(rec, kEventRecordSize);
        }
    }
    write_file_atomic(path, out);
}

std::vector<TimedPose> read_poses(const fs::path& path) {
    const std::string contents = read_file(path);
    LineCursor cursor(contents);
    std::string_view line;
    if (!cursor.next(line) || line != "t_us,tx,ty,tz,qw,qx,qy,qz") {
        parse_fail(path, 1, "expected header 't_us,tx,ty,tz,qw,qx,qy,qz'");
    }
    std::vector<TimedPose> poses;
    while (cursor.next(line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 8) {
            parse_fail(path, cursor.line_no(),
                       "expected 8 fields, got " + std::to_string(fields.size()));
        }
        TimedPose tp;
        tp.t = parse_int(fields[0], path, cursor.line_no(), "timestamp");
        double v[7];
        static const char* names[7] = {"tx", "ty", "tz", "qw", "qx", "qy", "qz"};
        for (int i = 0; i < 7; ++i) {
            v[i] = parse_double(fields[static_cast<std::size_t>(i) + 1], path, cursor.line_no(),
                                names[i]);
        }
        tp.pose.translation = {v[0], v[1], v[2]};
        tp.pose.rotation = Eigen::Quaterniond(v[3], v[4], v[5], v[6]);
        const double norm = tp.pose.rotation.norm();
        if (std::abs(norm - 1.0) >= 1e-3) {
            parse_fail(path, cursor.line_no(),
                       "quaternion norm " + format_double(norm) + " deviates from 1 by 1e-3 or more");
        }
        // keep bits when already unit to machine precision
        if (std::abs(norm - 1.0) > 1e-12) {
            tp.pose.rotation.normalize();
        }
        if (!poses.empty() && tp.t <= poses.back().t) {
            parse_fail(path, cursor.line_no(),
                       "timestamp " + std::to_string(tp.t) + " does not increase past " +
                           std::to_string(poses.back().t));
        }
        poses.push_back(tp);
    }
    return poses;
}

void write_poses(const fs::path& path, std::span<const TimedPose> poses) {
    std::string out = "t_us,tx,ty,tz,qw,qx,qy,qz\n";
    for (const TimedPose& tp : poses) {
        append_int(out, tp.t);
        out += ',';
        append_double(out, tp.pose.translation.x());
        out += ',';
        append_double(out, tp.pose.translation.y());
        out += ',';
        append_double(out, tp.pose.translation.z());
        out += ',';
        append_double(out, tp.pose.rotation.w());
        out += ',';
        append_double(out, tp.pose.rotation.x());
        out += ',';
        append_double(out, tp.pose.rotation.y());
        out += ',';
        append_double(out, tp.pose.rotation.z());
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_pgm(const fs::path& path, const Image<float>& image) {
    std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                      "\n255\n";
    out.reserve(out.size() + image.pixel_count());
    for (const float v : image.data) {
        const float clamped = std::clamp(v, 0.0f, 1.0f);
        out += static_cast<char>(std::lround(clamped * 255.0f));
    }
    write_file_atomic(path, out);
}

Image<float> read_pgm(const fs::path& path) {
    const std::string contents = read_file(path);
    std::size_t pos = 0;
    auto next_token = [&]() -> std::string_view {
        while (pos < contents.size() && std::isspace(static_cast<unsigned char>(contents[pos]))) {
            ++pos;
        }
        const std::size_t start = pos;
        while (pos < contents.size() && !std::isspace(static_cast<unsigned char>(contents[pos]))) {
            ++pos;
        }
        return std::string_view(contents).substr(start, pos - start);
    };
    if (next_token() != "P5") {
        throw ParseError(path.string() + ": byte 0: not a P5 PGM file");
    }
    auto parse_dim = [&](const char* what) {
        const auto tok = next_token();
        std::int64_t v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || v <= 0 || v > 1000000) {
            throw ParseError(path.string() + ": byte " + std::to_string(pos) + ": invalid " + what);
        }
        return v;
    };
    const std::int64_t width = parse_dim("width");
    const std::int64_t height = parse_dim("height");
    const std::int64_t maxval = parse_dim("maxval");
    if (maxval != 255) {
        throw ParseError(path.string() + ": byte " + std::to_string(pos) + ": maxval must be 255");
    }
    if (pos >= contents.size()) {
        throw ParseError(path.string() + ": byte " + std::to_string(pos) + ": missing pixel data");
    }
    ++pos;  // single whitespace after maxval
    const auto expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (contents.size() - pos != expected) {
        throw ParseError(path.string() + ": byte " + std::to_string(pos) + ": expected " +
                         std::to_string(expected) + " pixel bytes, found " +
                         std::to_string(contents.size() - pos));
    }
    Image<float> image(static_cast<int>(width), static_cast<int>(height));
    for (std::size_t i = 0; i < expected; ++i) {
        image.data[i] =
            static_cast<float>(static_cast<unsigned char>(contents[pos + i])) / 255.0f;
    }
    return image;
}

void write_event_frames(const fs::path& dir, std::span<const EventFrame> frames) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    }
    std::string index = "filename,t_us\n";
    for (std::size_t i = 0; i < frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06zu.pgm", i);
        write_pgm(dir / name, frames[i].pixels);
        index += name;
        index += ',';
        append_int(index, frames[i].timestamp);
        index += '\n';
    }
    write_file_atomic(dir / "index.csv", index);
}

std::vector<FrameIndexEntry> read_frame_index(const fs::path& dir) {
    const fs::path path = dir / "index.csv";
    const std::string contents = read_file(path);
    LineCursor cursor(contents);
    std::string_view line;
    if (!cursor.next(line) || line != "filename,t_us") {
        parse_fail(path, 1, "expected header 'filename,t_us'");
    }
    std::vector<FrameIndexEntry> entries;
    while (cursor.next(line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 2) {
            parse_fail(path, cursor.line_no(),
                       "expected 2 fields, got " + std::to_string(fields.size()));
        }
        FrameIndexEntry entry;
        entry.filename = std::string(fields[0]);
        entry.t = parse_int(fields[1], path, cursor.line_no(), "timestamp");
        if (!entries.empty() && entry.t < entries.back().t) {
            parse_fail(path, cursor.line_no(), "timestamps must be non-decreasing");
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

LandmarkSet read_landmarks(const fs::path& path) {
    const std::string contents = read_file(path);
    LineCursor cursor(contents);
    std::string_view line;
    if (!cursor.next(line) || line != "index,x,y,z") {
        parse_fail(path, 1, "expected header 'index,x,y,z'");
    }
    LandmarkSet set;
    while (cursor.next(line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 4) {
            parse_fail(path, cursor.line_no(),
                       "expected 4 fields, got " + std::to_string(fields.size()));
        }
        const std::int64_t idx = parse_int(fields[0], path, cursor.line_no(), "index");
        if (idx != static_cast<std::int64_t>(set.points.size())) {
            parse_fail(path, cursor.line_no(),
                       "indices must be contiguous from 0; expected " +
                           std::to_string(set.points.size()));
        }
        set.points.emplace_back(parse_double(fields[1], path, cursor.line_no(), "x"),
                                parse_double(fields[2], path, cursor.line_no(), "y"),
                                parse_double(fields[3], path, cursor.line_no(), "z"));
    }
    return set;
}

void write_landmarks(const fs::path& path, const LandmarkSet& landmarks) {
    std::string out = "index,x,y,z\n";
    for (std::size_t i = 0; i < landmarks.points.size(); ++i) {
        append_int(out, static_cast<std::int64_t>(i));
        out += ',';
        append_double(out, landmarks.points[i].x());
        out += ',';
        append_double(out, landmarks.points[i].y());
        out += ',';
        append_double(out, landmarks.points[i].z());
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::vector<TimedCorrespondences> read_correspondences(const fs::path& path) {
    const std::string contents = read_file(path);
    LineCursor cursor(contents);
    std::string_view line;
    if (!cursor.next(line) || line != "t_us,landmark_index,u,v,confidence") {
        parse_fail(path, 1, "expected header 't_us,landmark_index,u,v,confidence'");
    }
    std::vector<TimedCorrespondences> groups;
    while (cursor.next(line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 5) {
            parse_fail(path, cursor.line_no(),
                       "expected 5 fields, got " + std::to_string(fields.size()));
        }
        const std::int64_t t = parse_int(fields[0], path, cursor.line_no(), "timestamp");
        Correspondence corr;
        corr.landmark_index =
            static_cast<int>(parse_int(fields[1], path, cursor.line_no(), "landmark index"));
        corr.uv = {parse_double(fields[2], path, cursor.line_no(), "u"),
                   parse_double(fields[3], path, cursor.line_no(), "v")};
        corr.confidence = parse_double(fields[4], path, cursor.line_no(), "confidence");
        if (corr.landmark_index < 0) {
            parse_fail(path, cursor.line_no(), "landmark index must be non-negative");
        }
        if (!(corr.confidence >= 0.0 && corr.confidence <= 1.0)) {
            parse_fail(path, cursor.line_no(), "confidence must lie in [0, 1]");
        }
        if (!groups.empty() && t < groups.back().t) {
            parse_fail(path, cursor.line_no(), "timestamps must be non-decreasing");
        }
        if (groups.empty() || groups.back().t != t) {
            groups.push_back(TimedCorrespondences{t, {}});
        }
        groups.back().correspondences.push_back(corr);
    }
    return groups;
}

void write_correspondences(const fs::path& path, std::span<const TimedCorrespondences> groups) {
    std::string out = "t_us,landmark_index,u,v,confidence\n";
    for (const auto& group : groups) {
        for (const auto& corr : group.correspondences) {
            append_int(out, group.t);
            out += ',';
            append_int(out, corr.landmark_index);
            out += ',';
            append_double(out, corr.uv.x());
            out += ',';
            append_double(out, corr.uv.y());
            out += ',';
            append_double(out, corr.confidence);
            out += '\n';
        }
    }
    write_file_atomic(path, out);
}

std::vector<GroundTruthRecord> read_labels(const fs::path& path) {
    const std::string contents = read_file(path);
    LineCursor cursor(contents);
    std::string_view line;
    if (!cursor.next(line)) {
        parse_fail(path, 1, "missing header");
    }
    const auto header = split_fields(line);
    constexpr std::size_t kBase = 13;
    if (header.size() < kBase || (header.size() - kBase) % 3 != 0) {
        parse_fail(path, 1, "malformed label header");
    }
    static const char* base_names[kBase] = {"t_us",   "tx",         "ty",         "tz",
                                            "qw",     "qx",         "qy",         "qz",
                                            "degenerate", "bbox_x_min", "bbox_y_min", "bbox_x_max",
                                            "bbox_y_max"};
    for (std::size_t i = 0; i < kBase; ++i) {
        if (header[i] != base_names[i]) {
            parse_fail(path, 1, std::string("expected header field '") + base_names[i] + "'");
        }
    }
    const std::size_t z = (header.size() - kBase) / 3;

    std::vector<GroundTruthRecord> records;
    while (cursor.next(line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != kBase + 3 * z) {
            parse_fail(path, cursor.line_no(),
                       "expected " + std::to_string(kBase + 3 * z) + " fields, got " +
                           std::to_string(fields.size()));
        }
        GroundTruthRecord rec;
        rec.t = parse_int(fields[0], path, cursor.line_no(), "timestamp");
        double v[7];
        for (int i = 0; i < 7; ++i) {
            v[i] = parse_double(fields[static_cast<std::size_t>(i) + 1], path, cursor.line_no(),
                                "pose field");
        }
        rec.pose.translation = {v[0], v[1], v[2]};
        rec.pose.rotation = Eigen::Quaterniond(v[3], v[4], v[5], v[6]);
        if (std::abs(rec.pose.rotation.norm() - 1.0) >= 1e-3) {
            parse_fail(path, cursor.line_no(), "quaternion is not unit");
        }
        const std::int64_t degenerate = parse_int(fields[8], path, cursor.line_no(), "degenerate");
        if (degenerate != 0 && degenerate != 1) {
            parse_fail(path, cursor.line_no(), "degenerate flag must be 0 or 1");
        }
        rec.degenerate = degenerate == 1;
        rec.bbox.x_min = parse_double(fields[9], path, cursor.line_no(), "bbox_x_min");
        rec.bbox.y_min = parse_double(fields[10], path, cursor.line_no(), "bbox_y_min");
        rec.bbox.x_max = parse_double(fields[11], path, cursor.line_no(), "bbox_x_max");
        rec.bbox.y_max = parse_double(fields[12], path, cursor.line_no(), "bbox_y_max");
        rec.landmarks2d.reserve(z);
        for (std::size_t i = 0; i < z; ++i) {
            LandmarkProjection lm;
            lm.uv = {parse_double(fields[kBase + 3 * i], path, cursor.line_no(), "landmark u"),
                     parse_double(fields[kBase + 3 * i + 1], path, cursor.line_no(), "landmark v")};
            const std::int64_t vis =
                parse_int(fields[kBase + 3 * i + 2], path, cursor.line_no(), "visibility");
            if (vis != 0 && vis != 1) {
                parse_fail(path, cursor.line_no(), "visibility flag must be 0 or 1");
            }
            lm.visible = vis == 1;
            rec.landmarks2d.push_back(lm);
        }
        if (!records.empty() && rec.t <= records.back().t) {
            parse_fail(path, cursor.line_no(), "timestamps must be strictly increasing");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

void write_labels(const fs::path& path, std::span<const GroundTruthRecord> records) {
    std::string out = "t_us,tx,ty,tz,qw,qx,qy,qz,degenerate,bbox_x_min,bbox_y_min,bbox_x_max,bbox_y_max";
    const std::size_t z = records.empty() ? 0 : records.front().landmarks2d.size();
    for (std::size_t i = 0; i < z; ++i) {
        const std::string tag = "lm" + std::to_string(i);
        out += "," + tag + "_u," + tag + "_v," + tag + "_vis";
    }
    out += '\n';
    for (const auto& rec : records) {
        if (rec.landmarks2d.size() != z) {
            throw ParameterError("write_labels: records disagree on landmark count");
        }
        append_int(out, rec.t);
        const double pose_fields[7] = {rec.pose.translation.x(), rec.pose.translation.y(),
                                       rec.pose.translation.z(), rec.pose.rotation.w(),
                                       rec.pose.rotation.x(),    rec.pose.rotation.y(),
                                       rec.pose.rotation.z()};
        for (const double f : pose_fields) {
            out += ',';
            append_double(out, f);
        }
        out += ',';
        append_int(out, rec.degenerate ? 1 : 0);
        const double bbox_fields[4] = {rec.bbox.x_min, rec.bbox.y_min, rec.bbox.x_max,
                                       rec.bbox.y_max};
        for (const double f : bbox_fields) {
            out += ',';
            append_double(out, f);
        }
        for (const auto& lm : rec.landmarks2d) {
            out += ',';
            append_double(out, lm.uv.x());
            out += ',';
            append_double(out, lm.uv.y());
            out += ',';
            append_int(out, lm.visible ? 1 : 0);
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::map<std::string, std::string> read_key_values(const fs::path& path) {
    const std::string contents = read_file(path);
    LineCursor cursor(contents);
    std::string_view line;
    std::map<std::string, std::string> values;
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
            s.remove_prefix(1);
        }
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
            s.remove_suffix(1);
        }
        return s;
    };
    while (cursor.next(line)) {
        const std::string_view trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') {
            continue;
        }
        const std::size_t eq = trimmed.find('=');
        if (eq == std::string_view::npos) {
            parse_fail(path, cursor.line_no(), "expected 'key = value'");
        }
        const std::string key{trim(trimmed.substr(0, eq))};
        std::string_view value = trim(trimmed.substr(eq + 1));
        // tolerate TOML-style quoted strings
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        if (key.empty()) {
            parse_fail(path, cursor.line_no(), "empty key");
        }
        values[key] = std::string(value);
    }
    return values;
}

DatasetManifest read_manifest(const fs::path& path) {
    const auto values = read_key_values(path);
    auto require = [&](const char* key) -> const std::string& {
        const auto it = values.find(key);
        if (it == values.end()) {
            throw ParseError(path.string() + ": missing required key '" + std::string(key) + "'");
        }
        return it->second;
    };
    DatasetManifest manifest;
    manifest.name = require("name");
    const fs::path base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        const fs::path candidate(p);
        return candidate.is_absolute() ? candidate : base / candidate;
    };
    manifest.events_path = resolve(require("events"));
    manifest.poses_path = resolve(require("poses"));
    if (const auto it = values.find("labels"); it != values.end()) {
        manifest.labels_path = resolve(it->second);
    }
    auto get_number = [&](const char* key, double fallback) {
        const auto it = values.find(key);
        if (it == values.end()) {
            return fallback;
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(it->second.data(),
                                               it->second.data() + it->second.size(), v);
        if (ec != std::errc{} || ptr != it->second.data() + it->second.size()) {
            throw ParseError(path.string() + ": invalid number for key '" + std::string(key) + "'");
        }
        return v;
    };
    manifest.geometry.width = static_cast<int>(get_number("width", 640));
    manifest.geometry.height = static_cast<int>(get_number("height", 480));
    manifest.intrinsics.fx = get_number("fx", 0.0);
    manifest.intrinsics.fy = get_number("fy", 0.0);
    manifest.intrinsics.cx = get_number("cx", 0.0);
    manifest.intrinsics.cy = get_number("cy", 0.0);
    if (manifest.geometry.width <= 0 || manifest.geometry.height <= 0) {
        throw ParseError(path.string() + ": sensor dimensions must be positive");
    }
    return manifest;
}

bool is_paper_layout_name(const std::string& name) {
    static const std::regex pattern(
        "(approach|orbit)-(slow|fast)-(ambient|centre|lightbox|ringbelow|ringside)");
    return std::regex_match(name, pattern);
}

std::optional<std::int64_t> default_tau_us(const std::string& sequence_name) {
    if (!is_paper_layout_name(sequence_name)) {
        return std::nullopt;
    }
    if (sequence_name.starts_with("approach-")) {
        return 50000;  // 0.05 s
    }
    if (sequence_name.starts_with("orbit-slow-")) {
        return 200000;  // 0.2 s
    }
    return 10000;  // orbit-fast: 0.01 s
}

std::int64_t parse_duration_us(const std::string& text) {
    if (text.empty()) {
        throw ParameterError("empty duration");
    }
    double scale = 1.0;
    std::string_view number = text;
    if (text.ends_with("us")) {
        number = std::string_view(text).substr(0, text.size() - 2);
    } else if (text.ends_with("ms")) {
        scale = 1e3;
        number = std::string_view(text).substr(0, text.size() - 2);
    } else if (text.ends_with("s")) {
        scale = 1e6;
        number = std::string_view(text).substr(0, text.size() - 1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
    if (ec != std::errc{} || ptr != number.data() + number.size()) {
        throw ParameterError("invalid duration '" + text + "'");
    }
    const double us = value * scale;
    if (!(us > 0.0) || us > 9e18) {
        throw ParameterError("duration '" + text + "' is out of range");
    }
    return static_cast<std::int64_t>(std::llround(us));
}

}  // namespace evsat::io
