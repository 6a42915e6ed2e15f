// semimg — batch front-end for the segmentation / rank-pooling pipeline.
//
// Subcommands:
//   segment   <in_dir>  — one segmented PNG per input frame (suffix `_seg`)
//   represent <in_dir>  — windowed pooled representations (PNG + float dump)
//   verify    <suite>   — self-contained oracle suites
//   windows             — dry-run window enumeration
//
// Exit codes: 0 success, 1 runtime/verification failure, 2 usage/config error.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "semimg/io.hpp"
#include "semimg/lssgc.hpp"
#include "semimg/maplayer.hpp"
#include "semimg/parallel.hpp"
#include "semimg/rankpool.hpp"
#include "semimg/semantics.hpp"
#include "semimg/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace semimg;

namespace {

constexpr const char* kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Config plumbing: flags mirror config-file keys and override them
// (precedence: flags > config file > built-in defaults).

struct ConfigFlags {
    std::string config_path;
    PipelineConfig flag_values;
    std::map<std::string, CLI::Option*> opts;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "flat key = value config file");
        opts["n0"] = app->add_option("--n0", flag_values.n0, "initial cluster count");
        opts["z"] = app->add_option("--z", flag_values.z, "segmentation epochs");
        opts["a"] = app->add_option("--a", flag_values.a, "level-set iterations per epoch");
        opts["p0"] = app->add_option("--p0", flag_values.p0, "initial seed-window diameter");
        opts["epsilon"] =
            app->add_option("--epsilon", flag_values.epsilon, "Heaviside smoothing width");
        opts["v"] = app->add_option("--v", flag_values.v, "level-set length penalty");
        opts["gamma"] = app->add_option("--gamma", flag_values.gamma, "Potts jump penalty");
        opts["tau"] = app->add_option("--tau", flag_values.tau, "window duration (frames)");
        opts["stride"] = app->add_option("--stride", flag_values.stride, "window stride (frames)");
        opts["alpha_blend"] =
            app->add_option("--alpha-blend", flag_values.alpha_blend, "background overlay alpha");
        opts["sil_threshold"] = app->add_option("--sil-threshold", flag_values.sil_threshold,
                                                "silhouette threshold");
        opts["potts_sweeps"] =
            app->add_option("--potts-sweeps", flag_values.potts_sweeps, "2D Potts sweeps");
        opts["open_radius"] =
            app->add_option("--open-radius", flag_values.open_radius, "opening disk radius");
    }

    PipelineConfig resolve() const {
        PipelineConfig cfg;
        if (!config_path.empty())
            cfg = load_config(config_path);
        auto given = [&](const char* key) { return opts.at(key)->count() > 0; };
        if (given("n0")) cfg.n0 = flag_values.n0;
        if (given("z")) cfg.z = flag_values.z;
        if (given("a")) cfg.a = flag_values.a;
        if (given("p0")) cfg.p0 = flag_values.p0;
        if (given("epsilon")) cfg.epsilon = flag_values.epsilon;
        if (given("v")) cfg.v = flag_values.v;
        if (given("gamma")) cfg.gamma = flag_values.gamma;
        if (given("tau")) cfg.tau = flag_values.tau;
        if (given("stride")) cfg.stride = flag_values.stride;
        if (given("alpha_blend")) cfg.alpha_blend = flag_values.alpha_blend;
        if (given("sil_threshold")) cfg.sil_threshold = flag_values.sil_threshold;
        if (given("potts_sweeps")) cfg.potts_sweeps = flag_values.potts_sweeps;
        if (given("open_radius")) cfg.open_radius = flag_values.open_radius;
        cfg.validate();
        return cfg;
    }
};

unsigned resolve_jobs(const CLI::Option* jobs_opt, unsigned flag_value) {
    if (jobs_opt->count() > 0 && flag_value >= 1)
        return flag_value;
    if (const char* env = std::getenv("SEMIMG_JOBS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return default_jobs();
}

json config_json(const PipelineConfig& cfg) {
    return json{{"n0", cfg.n0},
                {"z", cfg.z},
                {"a", cfg.a},
                {"p0", cfg.p0},
                {"epsilon", cfg.epsilon},
                {"v", cfg.v},
                {"gamma", cfg.gamma},
                {"tau", cfg.tau},
                {"stride", cfg.stride},
                {"alpha_blend", cfg.alpha_blend},
                {"sil_threshold", cfg.sil_threshold},
                {"potts_sweeps", cfg.potts_sweeps},
                {"open_radius", cfg.open_radius}};
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const json& inputs, const PipelineConfig& cfg,
                    const json& extra = json::object()) {
    json manifest{{"tool", "semimg"},
                  {"version", kVersion},
                  {"command", command},
                  {"inputs", inputs},
                  {"config", config_json(cfg)},
                  {"config_hash", fnv1a_hex(config_json(cfg).dump())}};
    manifest.update(extra);
    std::ofstream os(out_dir / "manifest.json");
    if (!os)
        throw Error(ErrorKind::IoError, "cannot write manifest in " + out_dir.string());
    os << manifest.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Frame listing (same ordering contract as load_frames: numeric index
// embedded in the stem, filename as tie-break).

std::optional<long> numeric_index(const std::string& stem) {
    int end = -1;
    for (int i = static_cast<int>(stem.size()) - 1; i >= 0; --i) {
        if (std::isdigit(static_cast<unsigned char>(stem[i]))) { end = i; break; }
    }
    if (end < 0) return std::nullopt;
    int begin = end;
    while (begin > 0 && std::isdigit(static_cast<unsigned char>(stem[begin - 1]))) --begin;
    return std::stol(stem.substr(begin, end - begin + 1));
}

std::vector<fs::path> sorted_rasters(const fs::path& directory) {
    std::vector<std::pair<long, fs::path>> entries;
    if (fs::exists(directory)) {
        for (const auto& it : fs::directory_iterator(directory)) {
            if (!it.is_regular_file()) continue;
            auto ext = it.path().extension().string();
            std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
            if (ext != ".png" && ext != ".ppm" && ext != ".pgm") continue;
            entries.emplace_back(numeric_index(it.path().stem().string()).value_or(0), it.path());
        }
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second.filename().string() < b.second.filename().string();
    });
    std::vector<fs::path> files;
    files.reserve(entries.size());
    for (auto& e : entries) files.push_back(e.second);
    return files;
}

std::string window_name(std::size_t index, const std::string& kind, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "win_%04zu_%s%s", index, kind.c_str(), ext);
    return buf;
}

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_segment(const std::string& in_dir, const ConfigFlags& flags,
                const std::string& out_dir, unsigned jobs) {
    const PipelineConfig cfg = flags.resolve();
    const auto files = sorted_rasters(in_dir);
    const FrameSequence frames = load_frames(in_dir);
    fs::create_directories(out_dir);
    const FrameSequence segmented = segment_sequence(frames, cfg, jobs);
    for (std::size_t i = 0; i < segmented.size(); ++i) {
        const std::string stem = files[i].stem().string();
        save_png(fs::path(out_dir) / (stem + "_seg.png"), encode_unit_range(segmented[i]));
    }
    json inputs = json::array();
    for (const auto& f : files) inputs.push_back(f.filename().string());
    write_manifest(out_dir, "segment", json{{"frames", inputs}, {"directory", in_dir}}, cfg);
    std::cout << "segmented " << segmented.size() << " frame(s) into " << out_dir << "\n";
    return 0;
}

int cmd_represent(const std::string& in_dir, const std::string& kind,
                  const std::string& flow_dir, const ConfigFlags& flags,
                  const std::string& out_dir, unsigned jobs) {
    const PipelineConfig cfg = flags.resolve();
    fs::create_directories(out_dir);

    std::vector<PooledImage> pooled;
    json inputs{{"directory", in_dir}};

    if (kind == "semof") {
        if (flow_dir.empty())
            throw Error(ErrorKind::ConfigError, "kind=semof requires --flows");
        const auto flows = load_flows(flow_dir);
        const auto ranges = windows(flows.size(), {cfg.tau, cfg.stride});
        const auto coeffs = coefficients(cfg.tau, RankVariant::Linear);
        pooled.resize(ranges.size());
        parallel_for(ranges.size(), jobs, [&](std::size_t w) {
            const std::vector<FlowField> clip(flows.begin() + static_cast<std::ptrdiff_t>(ranges[w].begin),
                                              flows.begin() + static_cast<std::ptrdiff_t>(ranges[w].end));
            pooled[w] = semof(clip, coeffs);
        });
        inputs["flows"] = flow_dir;
        inputs["flow_count"] = flows.size();
    } else {
        const FrameSequence video = load_frames(in_dir);
        inputs["frame_count"] = video.size();
        if (kind == "semi") {
            pooled = multiple_semi(video, cfg, jobs);
        } else {
            const auto ranges = windows(video.size(), {cfg.tau, cfg.stride});
            const auto coeffs = coefficients(cfg.tau, RankVariant::Linear);
            pooled.resize(ranges.size());
            parallel_for(ranges.size(), jobs, [&](std::size_t w) {
                const FrameSequence clip(video.begin() + static_cast<std::ptrdiff_t>(ranges[w].begin),
                                         video.begin() + static_cast<std::ptrdiff_t>(ranges[w].end));
                if (kind == "dynamic") pooled[w] = pool(clip, coeffs);
                else if (kind == "mhi") pooled[w] = mhi(clip, cfg.tau, cfg.sil_threshold);
                else if (kind == "mean") pooled[w] = mean_pool(clip);
                else if (kind == "max") pooled[w] = max_pool(clip);
                else throw Error(ErrorKind::ConfigError, "unknown representation kind: " + kind);
            });
        }
    }

    for (std::size_t w = 0; w < pooled.size(); ++w) {
        save_png(fs::path(out_dir) / window_name(w, kind, ".png"),
                 normalize_to_u8(pooled[w].grid));
        write_float_dump(fs::path(out_dir) / window_name(w, kind, ".bin"), pooled[w].grid);
    }
    write_manifest(out_dir, "represent", inputs, cfg,
                   json{{"kind", kind}, {"window_count", pooled.size()}});
    std::cout << "wrote " << pooled.size() << " " << kind << " window(s) into " << out_dir << "\n";
    return 0;
}

int cmd_verify(const std::string& suite) {
    std::vector<VerifyResult> results;
    if (suite == "coeffs") results = verify_coeffs();
    else if (suite == "gradcheck") results = verify_gradcheck();
    else if (suite == "potts") results = verify_potts();
    else if (suite == "median") results = verify_median();
    else if (suite == "all") results = verify_all();
    else throw Error(ErrorKind::ConfigError, "unknown verify suite: " + suite);

    bool all_passed = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "PASS" : "FAIL") << " " << r.name;
        if (!r.detail.empty()) std::cout << " — " << r.detail;
        std::cout << "\n";
        all_passed = all_passed && r.passed;
    }
    return all_passed ? 0 : 1;
}

int cmd_windows(const std::string& in_dir, long frame_count, const ConfigFlags& flags) {
    const PipelineConfig cfg = flags.resolve();
    std::size_t total = 0;
    if (frame_count > 0)
        total = static_cast<std::size_t>(frame_count);
    else if (!in_dir.empty())
        total = sorted_rasters(in_dir).size();
    else
        throw Error(ErrorKind::ConfigError, "windows needs --frames or an input directory");

    const auto ranges = windows(total, {cfg.tau, cfg.stride});
    for (std::size_t i = 0; i < ranges.size(); ++i)
        std::cout << "window " << i << ": frames " << ranges[i].begin + 1 << ".."
                  << ranges[i].end << "\n";
    std::cout << ranges.size() << " window(s) over " << total << " frame(s), tau=" << cfg.tau
              << " stride=" << cfg.stride << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"semimg — level-set segmentation and rank-pooled video representations"};
    app.require_subcommand(1);

    std::string seg_in, seg_out = "out";
    unsigned seg_jobs = 0;
    ConfigFlags seg_flags;
    auto* seg = app.add_subcommand("segment", "segment every frame of a directory");
    seg->add_option("input", seg_in, "input frame directory")->required();
    seg->add_option("--out", seg_out, "output directory");
    auto* seg_jobs_opt = seg->add_option("--jobs", seg_jobs, "worker threads");
    seg_flags.attach(seg);

    std::string rep_in, rep_out = "out", rep_kind = "semi", rep_flows;
    unsigned rep_jobs = 0;
    ConfigFlags rep_flags;
    auto* rep = app.add_subcommand("represent", "pooled representation per clip window");
    rep->add_option("input", rep_in, "input frame directory")->required();
    rep->add_option("--kind", rep_kind, "semi|dynamic|mhi|mean|max|semof")
        ->check(CLI::IsMember({"semi", "dynamic", "mhi", "mean", "max", "semof"}));
    rep->add_option("--flows", rep_flows, "flow image directory (kind=semof)");
    rep->add_option("--out", rep_out, "output directory");
    auto* rep_jobs_opt = rep->add_option("--jobs", rep_jobs, "worker threads");
    rep_flags.attach(rep);

    std::string ver_suite = "all";
    auto* ver = app.add_subcommand("verify", "run the oracle suites");
    ver->add_option("suite", ver_suite, "coeffs|gradcheck|potts|median|all")
        ->check(CLI::IsMember({"coeffs", "gradcheck", "potts", "median", "all"}));

    std::string win_in;
    long win_frames = 0;
    ConfigFlags win_flags;
    auto* win = app.add_subcommand("windows", "dry-run window enumeration");
    win->add_option("input", win_in, "input frame directory");
    win->add_option("--frames", win_frames, "frame count (overrides directory scan)");
    win_flags.attach(win);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (seg->parsed())
            return cmd_segment(seg_in, seg_flags, seg_out,
                               resolve_jobs(seg_jobs_opt, seg_jobs));
        if (rep->parsed())
            return cmd_represent(rep_in, rep_kind, rep_flows, rep_flags, rep_out,
                                 resolve_jobs(rep_jobs_opt, rep_jobs));
        if (ver->parsed())
            return cmd_verify(ver_suite);
        if (win->parsed())
            return cmd_windows(win_in, win_frames, win_flags);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::ConfigError ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
