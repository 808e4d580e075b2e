// evsat: event-based satellite pose estimation toolkit.
//
// Subcommands: simulate, e2f, augment, estimate, evaluate. See README.md for
// the file formats and a full pipeline walkthrough.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "evsat/augment.hpp"
#include "evsat/errors.hpp"
#include "evsat/event_synthesis.hpp"
#include "evsat/events.hpp"
#include "evsat/ground_truth.hpp"
#include "evsat/io.hpp"
#include "evsat/metrics.hpp"
#include "evsat/oracle.hpp"
#include "evsat/pnp.hpp"
#include "evsat/render.hpp"
#include "evsat/rng.hpp"
#include "evsat/trajectory.hpp"

namespace fs = std::filesystem;
using namespace evsat;

namespace {

struct SimulateOptions {
    std::string kind = "orbit";
    double speed = 0.0142;
    double duration = 10.0;
    double radius = 1.0;
    std::vector<double> start_offset{0.0, -2.0, 0.0};
    std::vector<double> target{0.0, 0.0, 0.0};
    double frame_rate = 100.0;
    double pose_rate = 10.0;
    double contrast = 0.2;
    std::string resolution = "10ms";
    double fx = 600.0, fy = 600.0, cx = 320.0, cy = 240.0;
    int width = 640, height = 480;
    std::string format = "binary";
    std::string name;
    std::string out_dir;
};

struct E2fOptions {
    std::string events;
    std::string manifest;
    std::vector<std::string> taus;
    int width = 640, height = 480;
    std::string out_dir;
};

struct AugmentOptions {
    std::string frames_dir;
    std::string labels;
    std::string out_dir;
    double noise_density = 0.02;
    std::vector<double> noise_range{0.5, 1.0};
    std::vector<int> line_count{1, 4};
    double line_intensity = 0.8;
    double rotation_range = 0.0;
    double translation_range = 0.0;
};

struct EstimateOptions {
    std::string correspondences;
    std::string labels;
    std::string frames_dir;
    std::string oracle;
    std::string landmarks;
    double fx = 600.0, fy = 600.0, cx = 320.0, cy = 240.0;
    double threshold = 0.95;
    int min_count = 15;
    double decay = 0.8;
    double floor = 0.0;
    std::string out;
};

struct EvaluateOptions {
    std::string estimated;
    std::string ground_truth;
    std::string out;
};

void run_simulate(const SimulateOptions& opt, std::uint64_t /*seed*/) {
    TrajectorySpec spec;
    spec.kind = opt.kind == "approach" ? TrajectoryKind::approach : TrajectoryKind::orbit;
    spec.speed_mps = opt.speed;
    spec.duration_s = opt.duration;
    spec.orbit_radius_m = opt.radius;
    spec.start_offset = {opt.start_offset[0], opt.start_offset[1], opt.start_offset[2]};
    spec.target_center = {opt.target[0], opt.target[1], opt.target[2]};
    spec.frame_rate_hz = opt.frame_rate;
    spec.pose_rate_hz = opt.pose_rate;

    const CameraIntrinsics intrinsics{opt.fx, opt.fy, opt.cx, opt.cy};
    const SensorGeometry geometry{opt.width, opt.height};
    const auto model = make_reference_satellite();

    const auto poses = generate_trajectory(spec);
    const auto gt_poses = decimate_poses(poses, spec.frame_rate_hz, spec.pose_rate_hz);
    const auto records = make_ground_truth(model, poses, intrinsics, geometry);

    EventStream stream;
    stream.geometry = geometry;
    EventSynthesizer synth(opt.contrast, io::parse_duration_us(opt.resolution));
    for (const auto& tp : poses) {
        auto frame = render_wireframe(model, tp.pose, intrinsics, geometry);
        frame.t = tp.t;
        synth.push(frame, stream.events);
    }

    const fs::path dir(opt.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir.string());
    }
    const bool csv = opt.format == "csv";
    const fs::path events_path = dir / (csv ? "events.csv" : "events.evs");
    io::write_events(events_path, stream, csv ? io::EventFileFormat::csv : io::EventFileFormat::binary);
    io::write_poses(dir / "poses.csv", gt_poses);
    io::write_labels(dir / "labels.csv", records);
    io::write_landmarks(dir / "landmarks.csv", model.landmarks());

    const std::string name = opt.name.empty()
                                 ? (opt.kind + "-custom")
                                 : opt.name;
    std::string manifest = "name = " + name + "\n";
    manifest += "events = " + events_path.filename().string() + "\n";
    manifest += "poses = poses.csv\nlabels = labels.csv\n";
    manifest += "width = " + std::to_string(geometry.width) + "\n";
    manifest += "height = " + std::to_string(geometry.height) + "\n";
    manifest += "fx = " + io::format_double(intrinsics.fx) + "\nfy = " + io::format_double(intrinsics.fy) +
                "\ncx = " + io::format_double(intrinsics.cx) + "\ncy = " + io::format_double(intrinsics.cy) +
                "\n";
    {
        std::ofstream out(dir / "manifest.txt");
        out << manifest;
    }
    std::cout << "simulate: " << stream.events.size() << " events, " << gt_poses.size()
              << " ground-truth poses, " << records.size() << " label records -> " << dir.string()
              << "\n";
}

void run_e2f(const E2fOptions& opt) {
    fs::path events_path(opt.events);
    SensorGeometry geometry{opt.width, opt.height};
    std::string sequence_name;
    if (!opt.manifest.empty()) {
        const auto manifest = io::read_manifest(opt.manifest);
        events_path = manifest.events_path;
        geometry = manifest.geometry;
        sequence_name = manifest.name;
    }
    if (events_path.empty()) {
        throw ParameterError("e2f: no event file given (use --events or --manifest)");
    }

    std::vector<std::int64_t> taus;
    std::vector<std::string> tau_names;
    if (!opt.taus.empty()) {
        for (const auto& text : opt.taus) {
            taus.push_back(io::parse_duration_us(text));
            tau_names.push_back(text);
        }
    } else if (const auto scenario_tau = io::default_tau_us(sequence_name)) {
        taus.push_back(*scenario_tau);
        tau_names.push_back(std::to_string(*scenario_tau) + "us");
    } else {
        // multi-duration training default
        for (const char* text : {"0.2s", "0.1s", "0.05s", "0.01s"}) {
            taus.push_back(io::parse_duration_us(text));
            tau_names.push_back(text);
        }
    }

    const auto stream = io::read_events(events_path, io::format_from_extension(events_path), geometry);
    const fs::path out_root(opt.out_dir);
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const auto batches = batch_events(stream, taus[i]);
        std::vector<EventFrame> frames;
        frames.reserve(batches.size());
        for (const auto& batch : batches) {
            frames.push_back(events_to_frame(batch, geometry));
        }
        const fs::path out_dir = taus.size() == 1 ? out_root : out_root / ("tau_" + tau_names[i]);
        io::write_event_frames(out_dir, frames);
        std::cout << "e2f: tau " << tau_names[i] << " -> " << frames.size() << " frames in "
                  << out_dir.string() << "\n";
    }
}

void run_augment(const AugmentOptions& opt, std::uint64_t seed) {
    AugmentConfig cfg;
    cfg.noise_density = opt.noise_density;
    cfg.noise_intensity_range = {opt.noise_range[0], opt.noise_range[1]};
    cfg.line_count_range = {opt.line_count[0], opt.line_count[1]};
    cfg.line_intensity = opt.line_intensity;
    cfg.rotation_range_deg = opt.rotation_range;
    cfg.translation_range_px = opt.translation_range;
    cfg.seed = seed;

    const fs::path frames_dir(opt.frames_dir);
    const auto index = io::read_frame_index(frames_dir);
    const auto records = io::read_labels(opt.labels);

    std::vector<EventFrame> frames;
    frames.reserve(index.size());
    for (const auto& entry : index) {
        EventFrame frame;
        frame.pixels = io::read_pgm(frames_dir / entry.filename);
        frame.timestamp = entry.t;
        frames.push_back(std::move(frame));
    }
    const auto pairs = assign_labels_to_frames(frames, records);

    Rng rng(cfg.seed);
    std::vector<EventFrame> out_frames;
    std::vector<GroundTruthRecord> out_records;
    for (const auto& [frame, record] : pairs) {
        auto noisy = random_event_noise(*frame, cfg, rng);
        noisy = random_event_lines(noisy, cfg, rng);
        auto [augmented, labels] = random_rigid_augment(noisy, *record, cfg, rng);
        labels.t = frame->timestamp;
        out_frames.push_back(std::move(augmented));
        out_records.push_back(std::move(labels));
    }
    const fs::path out_dir(opt.out_dir);
    io::write_event_frames(out_dir, out_frames);
    io::write_labels(out_dir / "labels.csv", out_records);
    std::cout << "augment: " << out_frames.size() << " frames -> " << out_dir.string() << "\n";
}

OracleConfig parse_oracle_spec(const std::string& text, std::uint64_t seed) {
    OracleConfig cfg;
    cfg.seed = seed;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string item =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) {
            throw ParameterError("estimate: --oracle expects key=value pairs, got '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        double value = 0.0;
        try {
            value = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw ParameterError("estimate: invalid oracle value in '" + item + "'");
        }
        if (key == "sigma") {
            cfg.pixel_noise_sigma = value;
        } else if (key == "outlier_rate") {
            cfg.outlier_rate = value;
        } else if (key == "spread") {
            cfg.outlier_spread_px = value;
        } else {
            throw ParameterError("estimate: unknown oracle key '" + key + "'");
        }
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    return cfg;
}

void run_estimate(const EstimateOptions& opt, std::uint64_t seed) {
    const CameraIntrinsics intrinsics{opt.fx, opt.fy, opt.cx, opt.cy};
    FilterPolicy policy{opt.threshold, opt.min_count, opt.decay, opt.floor};
    const auto landmarks = io::read_landmarks(opt.landmarks);

    struct Job {
        std::int64_t t;
        std::vector<Correspondence> corrs;
    };
    std::vector<Job> jobs;

    if (!opt.correspondences.empty()) {
        for (auto& group : io::read_correspondences(opt.correspondences)) {
            jobs.push_back({group.t, std::move(group.correspondences)});
        }
    } else if (!opt.labels.empty()) {
        if (opt.oracle.empty()) {
            throw ParameterError("estimate: label input needs --oracle (or use --correspondences)");
        }
        const OracleConfig oracle = parse_oracle_spec(opt.oracle, seed);
        Rng rng(oracle.seed);
        const auto records = io::read_labels(opt.labels);
        if (!opt.frames_dir.empty()) {
            const auto index = io::read_frame_index(opt.frames_dir);
            std::vector<EventFrame> frames(index.size());
            for (std::size_t i = 0; i < index.size(); ++i) {
                frames[i].timestamp = index[i].t;  // only timestamps matter here
            }
            for (const auto& [frame, record] : assign_labels_to_frames(frames, records)) {
                jobs.push_back({frame->timestamp, predict_landmarks(*record, oracle, rng)});
            }
        } else {
            for (const auto& record : records) {
                jobs.push_back({record.t, predict_landmarks(record, oracle, rng)});
            }
        }
    } else {
        throw ParameterError("estimate: need --correspondences or --labels");
    }

    std::vector<TimedPose> estimates;
    std::size_t skipped = 0;
    for (const auto& job : jobs) {
        if (job.corrs.size() < 6) {
            ++skipped;
            continue;
        }
        try {
            const auto result = estimate_pose(job.corrs, landmarks, intrinsics, policy);
            estimates.push_back({job.t, result.pose});
        } catch (const Error& e) {
            std::cerr << "estimate: skipping frame at t=" << job.t << ": " << e.what() << "\n";
            ++skipped;
        }
    }
    if (estimates.empty()) {
        throw ValidationError("estimate: no frame produced a pose");
    }
    io::write_poses(opt.out, estimates);
    std::cout << "estimate: " << estimates.size() << " poses (" << skipped << " skipped) -> "
              << opt.out << "\n";
}

void run_evaluate(const EvaluateOptions& opt) {
    const auto gt = io::read_poses(opt.ground_truth);
    const auto est = io::read_poses(opt.estimated);
    const auto errors = evaluate_sequence(gt, est);
    if (!opt.out.empty()) {
        std::string csv = "t_us,phi_m,psi_deg\n";
        for (const auto& step : errors.per_step) {
            csv += std::to_string(step.t) + "," + io::format_double(step.translation_error_m) + "," +
                   io::format_double(step.rotation_error_deg) + "\n";
        }
        std::ofstream out(opt.out);
        if (!out) {
            throw IoError("cannot open " + opt.out + " for writing");
        }
        out << csv;
    }
    std::printf("Phi=%.6f,Psi=%.6f\n", errors.rms_translation_error_m,
                errors.mean_rotation_error_deg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"event-based satellite pose estimation toolkit"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed for all randomized steps")->capture_default_str();

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "generate a synthetic rendezvous sequence");
    simulate->add_option("--kind", sim.kind)->check(CLI::IsMember({"approach", "orbit"}));
    simulate->add_option("--speed", sim.speed, "m/s")->capture_default_str();
    simulate->add_option("--duration", sim.duration, "seconds")->capture_default_str();
    simulate->add_option("--radius", sim.radius, "orbit radius, m")->capture_default_str();
    simulate->add_option("--start-offset", sim.start_offset, "approach start, m")->expected(3);
    simulate->add_option("--target", sim.target, "target center, m")->expected(3);
    simulate->add_option("--frame-rate", sim.frame_rate, "Hz")->capture_default_str();
    simulate->add_option("--pose-rate", sim.pose_rate, "ground-truth Hz")->capture_default_str();
    simulate->add_option("--contrast", sim.contrast, "DVS contrast threshold")->capture_default_str();
    simulate->add_option("--resolution", sim.resolution, "event timestamp resolution")
        ->capture_default_str();
    simulate->add_option("--fx", sim.fx)->capture_default_str();
    simulate->add_option("--fy", sim.fy)->capture_default_str();
    simulate->add_option("--cx", sim.cx)->capture_default_str();
    simulate->add_option("--cy", sim.cy)->capture_default_str();
    simulate->add_option("--width", sim.width)->capture_default_str();
    simulate->add_option("--height", sim.height)->capture_default_str();
    simulate->add_option("--format", sim.format)->check(CLI::IsMember({"csv", "binary"}));
    simulate->add_option("--name", sim.name, "sequence name for the manifest");
    simulate->add_option("--out-dir", sim.out_dir)->required();

    E2fOptions e2f;
    auto* e2f_cmd = app.add_subcommand("e2f", "convert an event file to event frames");
    e2f_cmd->add_option("--events", e2f.events);
    e2f_cmd->add_option("--manifest", e2f.manifest);
    e2f_cmd->add_option("--tau", e2f.taus,
                        "batch duration(s), e.g. 50ms or 0.2s,0.1s,0.05s,0.01s");
    e2f_cmd->add_option("--width", e2f.width)->capture_default_str();
    e2f_cmd->add_option("--height", e2f.height)->capture_default_str();
    e2f_cmd->add_option("--out-dir", e2f.out_dir)->required();

    AugmentOptions aug;
    auto* augment = app.add_subcommand("augment", "apply event-frame augmentations");
    augment->add_option("--frames-dir", aug.frames_dir)->required();
    augment->add_option("--labels", aug.labels)->required();
    augment->add_option("--out-dir", aug.out_dir)->required();
    augment->add_option("--noise-density", aug.noise_density)->capture_default_str();
    augment->add_option("--noise-range", aug.noise_range)->expected(2);
    augment->add_option("--line-count", aug.line_count)->expected(2);
    augment->add_option("--line-intensity", aug.line_intensity)->capture_default_str();
    augment->add_option("--rotation-range", aug.rotation_range, "degrees")->capture_default_str();
    augment->add_option("--translation-range", aug.translation_range, "pixels")
        ->capture_default_str();

    EstimateOptions est;
    auto* estimate = app.add_subcommand("estimate", "estimate poses from correspondences");
    estimate->add_option("--correspondences", est.correspondences);
    estimate->add_option("--labels", est.labels);
    estimate->add_option("--frames-dir", est.frames_dir);
    estimate->add_option("--oracle", est.oracle, "sigma=S[,outlier_rate=R,spread=P]");
    estimate->add_option("--landmarks", est.landmarks)->required();
    estimate->add_option("--fx", est.fx)->capture_default_str();
    estimate->add_option("--fy", est.fy)->capture_default_str();
    estimate->add_option("--cx", est.cx)->capture_default_str();
    estimate->add_option("--cy", est.cy)->capture_default_str();
    estimate->add_option("--threshold", est.threshold)->capture_default_str();
    estimate->add_option("--min-count", est.min_count)->capture_default_str();
    estimate->add_option("--decay", est.decay)->capture_default_str();
    estimate->add_option("--floor", est.floor)->capture_default_str();
    estimate->add_option("--out", est.out)->required();

    EvaluateOptions eval;
    auto* evaluate = app.add_subcommand("evaluate", "compare estimated poses to ground truth");
    evaluate->add_option("--estimated", eval.estimated)->required();
    evaluate->add_option("--ground-truth", eval.ground_truth)->required();
    evaluate->add_option("--out", eval.out, "per-step error CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage problems map to exit 1
    }

    try {
        if (simulate->parsed()) {
            run_simulate(sim, seed);
        } else if (e2f_cmd->parsed()) {
            run_e2f(e2f);
        } else if (augment->parsed()) {
            run_augment(aug, seed);
        } else if (estimate->parsed()) {
            run_estimate(est, seed);
        } else if (evaluate->parsed()) {
            run_evaluate(eval);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
