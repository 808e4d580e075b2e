#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evsat/events.hpp"
#include "evsat/geometry.hpp"
#include "evsat/ground_truth.hpp"
#include "evsat/oracle.hpp"
#include "evsat/trajectory.hpp"

namespace evsat::io {

enum class EventFileFormat { csv, binary };

/// Event files. CSV: header `t_us,x,y,p`, one event per line. Binary: magic
/// `EVS1`, then little-endian 16-byte records (u64 t_us, u16 x, u16 y, i8 p,
/// 3 zero pad bytes). Timestamps must be non-decreasing and p in {-1, 1};
/// coordinates are validated against the geometry. Round-trips are bit-exact.
EventStream read_events(const std::filesystem::path& path, EventFileFormat format,
                        const SensorGeometry& geometry = {});
void write_events(const std::filesystem::path& path, const EventStream& stream,
                  EventFileFormat format);

/// Infers the format from the extension: `.csv` is CSV, anything else binary.
EventFileFormat format_from_extension(const std::filesystem::path& path);

/// Pose files: CSV header `t_us,tx,ty,tz,qw,qx,qy,qz` (Hamilton, w-first).
/// Quaternions are renormalized on read when the norm deviates by less than
/// 1e-3 and rejected otherwise; timestamps must be strictly increasing.
std::vector<TimedPose> read_poses(const std::filesystem::path& path);
void write_poses(const std::filesystem::path& path, std::span<const TimedPose> poses);

/// 8-bit grayscale PGM (P5, maxval 255). Values quantize from [0, 1].
void write_pgm(const std::filesystem::path& path, const Image<float>& image);
Image<float> read_pgm(const std::filesystem::path& path);

/// An event-frame directory holds numbered PGM files plus `index.csv` with
/// header `filename,t_us`.
struct FrameIndexEntry {
    std::string filename;
    std::int64_t t = 0;
};
void write_event_frames(const std::filesystem::path& dir, std::span<const EventFrame> frames);
std::vector<FrameIndexEntry> read_frame_index(const std::filesystem::path& dir);

/// Landmark files: CSV header `index,x,y,z` with contiguous indices from 0.
LandmarkSet read_landmarks(const std::filesystem::path& path);
void write_landmarks(const std::filesystem::path& path, const LandmarkSet& landmarks);

/// Correspondence files: CSV header `t_us,landmark_index,u,v,confidence`,
/// grouped by non-decreasing timestamp.
struct TimedCorrespondences {
    std::int64_t t = 0;
    std::vector<Correspondence> correspondences;
};
std::vector<TimedCorrespondences> read_correspondences(const std::filesystem::path& path);
void write_correspondences(const std::filesystem::path& path,
                           std::span<const TimedCorrespondences> groups);

/// Ground-truth label files: one row per record holding the pose, degenerate
/// flag, bounding box and every landmark as (u, v, visible).
std::vector<GroundTruthRecord> read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, std::span<const GroundTruthRecord> records);

/// Plain `key = value` text file (TOML-style scalars only, `#` comments).
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

/// Dataset manifest: key=value file naming the sequence and its files.
/// Relative paths resolve against the manifest's directory. Recognized keys:
/// name, events, poses, labels, width, height, fx, fy, cx, cy.
struct DatasetManifest {
    std::string name;
    std::filesystem::path events_path;
    std::filesystem::path poses_path;
    std::optional<std::filesystem::path> labels_path;
    SensorGeometry geometry;
    CameraIntrinsics intrinsics;
};
DatasetManifest read_manifest(const std::filesystem::path& path);

/// True when the name matches the dataset layout pattern
/// (approach|orbit)-(slow|fast)-(ambient|centre|lightbox|ringbelow|ringside).
bool is_paper_layout_name(const std::string& name);

/// Scenario batching default: 0.05 s for approach, 0.2 s for orbit-slow,
/// 0.01 s for orbit-fast; empty for unrecognized names.
std::optional<std::int64_t> default_tau_us(const std::string& sequence_name);

/// Parses durations like "50ms", "0.05s", "10000us"; bare numbers are
/// microseconds.
std::int64_t parse_duration_us(const std::string& text);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace evsat::io
