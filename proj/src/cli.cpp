#include "hueseg/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <system_error>
#include <thread>

#include "hueseg/evalkit.hpp"
#include "hueseg/imgio.hpp"
#include "hueseg/segment.hpp"

namespace hueseg::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

const std::map<std::string, std::string>& flag_names() {
  static const std::map<std::string, std::string> names = {
      {"border", "--border"},
      {"threshold", "--threshold"},
      {"threshold_fraction", "--threshold-fraction"},
      {"tolerance", "--tolerance"},
      {"median_kernel", "--median"},
      {"median_passes", "--passes"},
      {"size", "--size"},
      {"bg_bin", "--bg-bin"},
      {"fg_bin", "--fg-bin"},
      {"noise", "--noise"},
      {"shape", "--rect/--disk"},
  };
  return names;
}

std::string describe(const ConfigError& e) {
  const auto it = flag_names().find(e.field());
  return it == flag_names().end() ? std::string(e.what())
                                  : "invalid " + it->second + ": " + e.what();
}

/// Maps library exceptions onto exit codes. Anything else propagates.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "error: " << describe(e) << "\n";
    return kConfigError;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kDimensionMismatch;
  } catch (const DecodeError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::system_error& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
}

// ---------------------------------------------------------------------------
// Flag parsing helpers

std::vector<long> parse_ints(const std::string& text, char sep, std::size_t count,
                             const std::string& field) {
  std::vector<long> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = text.find(sep, start);
    const std::string part = text.substr(start, end == std::string::npos ? end : end - start);
    if (!std::regex_match(part, std::regex("-?[0-9]{1,9}"))) {
      throw ConfigError(field, "cannot parse '" + text + "'");
    }
    out.push_back(std::stol(part));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (out.size() != count) {
    throw ConfigError(field, "expected " + std::to_string(count) + " values in '" + text + "'");
  }
  return out;
}

Rgb parse_fill(const std::string& text) {
  const auto v = parse_ints(text, ',', 3, "fill");
  for (long c : v) {
    if (c < 0 || c > 255) throw ConfigError("fill", "channels must lie in [0, 255]");
  }
  return {static_cast<std::uint8_t>(v[0]), static_cast<std::uint8_t>(v[1]),
          static_cast<std::uint8_t>(v[2])};
}

struct SegFlags {
  Index border = 0;
  std::int64_t threshold = kDefaultThreshold;
  double threshold_fraction = 0.0;
  int tolerance = 0;
  int median = 3;
  int passes = 1;
  std::string fill = "0,0,0";
  bool deterministic = false;

  void attach(CLI::App& cmd) {
    cmd.add_option("--border", border,
                   "Border strip thickness in px; 0 = max(1, round(2% of min(width, height)))")
        ->capture_default_str();
    cmd.add_option("--threshold", threshold,
                   "Absolute count a border hue bin must exceed to be background")
        ->capture_default_str();
    cmd.add_option("--threshold-fraction", threshold_fraction,
                   "Relative mode: count must exceed this fraction of the strip size; 0 = off")
        ->capture_default_str();
    cmd.add_option("--tolerance", tolerance, "Circular hue-bin tolerance around background bins")
        ->capture_default_str();
    cmd.add_option("--median", median, "Median filter kernel size (odd; 1 disables)")
        ->capture_default_str();
    cmd.add_option("--passes", passes, "Median filter passes")->capture_default_str();
    cmd.add_option("--fill", fill, "Background fill colour r,g,b")->capture_default_str();
    cmd.add_flag("--deterministic", deterministic, "Zero all wall-time fields in reports");
  }

  SegConfig config() const {
    SegConfig cfg;
    if (border != 0) cfg.border = border;
    cfg.threshold.count = threshold;
    if (threshold_fraction != 0.0) cfg.threshold.fraction = threshold_fraction;
    cfg.tolerance = tolerance;
    cfg.median_kernel = median;
    cfg.median_passes = passes;
    cfg.fill = parse_fill(fill);
    return cfg;
  }
};

// ---------------------------------------------------------------------------
// JSON

Json to_json(const MaskMetrics& m) {
  return Json{{"tp", m.tp},
              {"fp", m.fp},
              {"fn", m.fn},
              {"tn", m.tn},
              {"iou", m.iou},
              {"precision", m.precision},
              {"recall", m.recall},
              {"f1", m.f1},
              {"pixel_accuracy", m.pixel_accuracy}};
}

Json config_json(const SegConfig& cfg, const BorderSpec& border) {
  return Json{{"border", border.thickness},
              {"threshold", cfg.threshold.count},
              {"threshold_fraction",
               cfg.threshold.fraction ? Json(*cfg.threshold.fraction) : Json(nullptr)},
              {"tolerance", cfg.tolerance},
              {"median_kernel", cfg.median_kernel},
              {"median_passes", cfg.median_passes},
              {"fill", Json::array({cfg.fill.r, cfg.fill.g, cfg.fill.b})}};
}

Json record_json(const std::string& input, Json outputs, const SegConfig& cfg,
                 const Segmentation& seg, const std::optional<MaskMetrics>& metrics,
                 double wall_ms) {
  const auto fg = seg.filtered.count();
  Json rec{{"input", input},
           {"status", "ok"},
           {"outputs", std::move(outputs)},
           {"config", config_json(cfg, seg.border)},
           {"background",
            Json{{"bins", seg.background.bin_list()},
                 {"achromatic", seg.background.achromatic_is_background()}}},
           {"pixels", Json{{"foreground", fg}, {"background", seg.filtered.size() - fg}}}};
  if (metrics) rec["metrics"] = to_json(*metrics);
  rec["wall_time_ms"] = wall_ms;
  return rec;
}

Json report_json(std::vector<Json> records) {
  std::sort(records.begin(), records.end(), [](const Json& a, const Json& b) {
    return a["input"].get<std::string>() < b["input"].get<std::string>();
  });
  return Json{{"tool_version", kToolVersion}, {"records", std::move(records)}};
}

void write_json(const fs::path& path, const Json& doc) {
  const std::string text = doc.dump(2) + "\n";
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

double elapsed_ms(std::chrono::steady_clock::time_point start, bool deterministic) {
  if (deterministic) return 0.0;
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

unsigned worker_count() {
  const char* env = std::getenv("HUESEG_THREADS");
  unsigned requested = 0;
  if (env != nullptr && *env != '\0') {
    const std::string text(env);
    if (!std::regex_match(text, std::regex("[0-9]{1,6}"))) {
      throw ConfigError("HUESEG_THREADS", "must be a non-negative integer, got '" + text + "'");
    }
    requested = static_cast<unsigned>(std::stoul(text));
  }
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

// ---------------------------------------------------------------------------
// Commands

struct SegmentArgs {
  std::string input;
  std::string output;
  std::string mask;
  std::string raw_mask;
  std::string report;
  SegFlags flags;
};

int cmd_segment(const SegmentArgs& a, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = std::chrono::steady_clock::now();
    const SegConfig cfg = a.flags.config();
    const RgbImage img = read_ppm(read_file(a.input));
    const Segmentation seg = segment_image(img, cfg);

    Json outputs{{"composite", a.output}};
    write_file(a.output, write_ppm(seg.composite));
    if (!a.mask.empty()) {
      write_file(a.mask, write_mask(seg.filtered));
      outputs["mask"] = a.mask;
    }
    if (!a.raw_mask.empty()) {
      write_file(a.raw_mask, write_mask(seg.raw));
      outputs["raw_mask"] = a.raw_mask;
    }
    if (!a.report.empty()) {
      std::vector<Json> records;
      records.push_back(record_json(a.input, std::move(outputs), cfg, seg, std::nullopt,
                                    elapsed_ms(start, a.flags.deterministic)));
      write_json(a.report, report_json(std::move(records)));
    }
    return static_cast<int>(kOk);
  });
}

struct BatchArgs {
  std::string input_dir;
  std::string output_dir;
  std::string masks_dir;
  std::string report;
  SegFlags flags;
};

struct BatchJob {
  fs::path relative;
  Json record;
  bool failed = false;
};

bool is_within(const fs::path& path, const fs::path& dir) {
  const auto rel = path.lexically_relative(dir);
  return !rel.empty() && *rel.begin() != "..";
}

std::vector<fs::path> list_inputs(const fs::path& root, const fs::path& exclude) {
  std::vector<fs::path> out;
  const fs::path excluded = fs::weakly_canonical(exclude);
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator();
       ++it) {
    if (!it->is_regular_file() || it->path().extension() != ".ppm") continue;
    if (is_within(fs::weakly_canonical(it->path()), excluded)) continue;
    out.push_back(it->path().lexically_relative(root));
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
  return out;
}

void run_job(BatchJob& job, const BatchArgs& a, const SegConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path in_root(a.input_dir);
  const fs::path out_root(a.output_dir);
  const std::string input = job.relative.generic_string();
  try {
    const RgbImage img = read_ppm(read_file(in_root / job.relative));
    const Segmentation seg = segment_image(img, cfg);

    fs::path mask_rel = job.relative;
    mask_rel.replace_extension(".mask.pgm");
    write_file(out_root / job.relative, write_ppm(seg.composite));
    write_file(out_root / mask_rel, write_mask(seg.filtered));

    std::optional<MaskMetrics> metrics;
    if (!a.masks_dir.empty()) {
      fs::path truth_path = fs::path(a.masks_dir) / job.relative;
      truth_path.replace_extension(".pgm");
      if (fs::exists(truth_path)) metrics = score(seg.filtered, read_mask(read_file(truth_path)));
    }
    job.record = record_json(
        input, Json{{"composite", job.relative.generic_string()}, {"mask", mask_rel.generic_string()}},
        cfg, seg, metrics, elapsed_ms(start, a.flags.deterministic));
  } catch (const std::exception& e) {
    job.failed = true;
    job.record = Json{{"input", input},
                      {"status", "error"},
                      {"error", e.what()},
                      {"wall_time_ms", elapsed_ms(start, a.flags.deterministic)}};
  }
}

int cmd_batch(const BatchArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const SegConfig cfg = a.flags.config();
    // Border validity depends on each image's size and is checked per image.
    SegConfig probe = cfg;
    probe.border = 1;
    validate(probe, 3, 3);
    const unsigned workers = worker_count();

    const fs::path in_root(a.input_dir);
    const fs::path out_root(a.output_dir);
    std::error_code ec;
    if (!fs::is_directory(in_root, ec)) {
      err << "error: cannot read input directory " << in_root.string() << "\n";
      return kIoError;
    }
    fs::create_directories(out_root);
    std::vector<BatchJob> jobs;
    for (auto& rel : list_inputs(in_root, out_root)) {
      fs::create_directories((out_root / rel).parent_path());
      jobs.push_back({std::move(rel), Json(), false});
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(jobs[i], a, cfg);
    };
    {
      std::vector<std::jthread> pool;
      const auto n = std::min<std::size_t>(workers, std::max<std::size_t>(jobs.size(), 1));
      for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    }

    std::vector<Json> records;
    std::size_t failures = 0;
    for (auto& job : jobs) {
      if (job.failed) {
        ++failures;
        err << "error: " << job.record["input"].get<std::string>() << ": "
            << job.record["error"].get<std::string>() << "\n";
      }
      records.push_back(std::move(job.record));
    }
    const fs::path report = a.report.empty() ? out_root / "report.json" : fs::path(a.report);
    write_json(report, report_json(std::move(records)));
    out << jobs.size() - failures << " of " << jobs.size() << " images segmented; report "
        << report.string() << "\n";
    return failures == 0 ? kOk : kPartialFailure;
  });
}

struct SynthArgs {
  std::string size = "64x64";
  int bg_bin = 85;
  int fg_bin = 0;
  std::string rect;
  std::string disk;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string output;
  std::string truth;
};

int cmd_synth(const SynthArgs& a, std::ostream& err) {
  return guarded(err, [&]() -> int {
    SynthSpec spec;
    const auto size = parse_ints(a.size, 'x', 2, "size");
    spec.width = size[0];
    spec.height = size[1];
    spec.bg_bin = a.bg_bin;
    spec.fg_bin = a.fg_bin;
    spec.noise_fraction = a.noise;
    spec.seed = a.seed;
    if (!a.rect.empty() && !a.disk.empty()) {
      throw ConfigError("shape", "give either --rect or --disk, not both");
    }
    if (!a.disk.empty()) {
      const auto d = parse_ints(a.disk, ',', 3, "shape");
      spec.shape = DiskShape{d[0], d[1], d[2]};
    } else if (!a.rect.empty()) {
      const auto r = parse_ints(a.rect, ',', 4, "shape");
      spec.shape = RectShape{r[0], r[1], r[2], r[3]};
    } else {
      throw ConfigError("shape", "one of --rect or --disk is required");
    }
    const SynthScene scene = synth_scene(spec);
    write_file(a.output, write_ppm(scene.image));
    if (!a.truth.empty()) write_file(a.truth, write_mask(scene.truth));
    return kOk;
  });
}

int cmd_eval(const std::string& pred_path, const std::string& truth_path, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&]() -> int {
    const SegMask pred = read_mask(read_file(pred_path));
    const SegMask truth = read_mask(read_file(truth_path));
    out << to_json(score(pred, truth)).dump(2) << "\n";
    return kOk;
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hue-histogram background removal for images with a near-uniform background"};
  app.name(args.empty() ? "hueseg" : fs::path(args.front()).filename().string());
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  SegmentArgs seg;
  auto* segment = app.add_subcommand("segment", "Segment one PPM image");
  segment->add_option("input", seg.input, "Input PPM (P6)")->required();
  segment->add_option("-o,--output", seg.output, "Composite output PPM")->required();
  segment->add_option("--mask", seg.mask, "Write the filtered mask (PGM)");
  segment->add_option("--raw-mask", seg.raw_mask, "Write the unfiltered mask (PGM)");
  segment->add_option("--report", seg.report, "Write a JSON run report");
  seg.flags.attach(*segment);

  BatchArgs batch;
  auto* batch_cmd = app.add_subcommand("batch", "Segment every .ppm under a directory");
  batch_cmd->add_option("input_dir", batch.input_dir, "Input directory")->required();
  batch_cmd->add_option("-o,--output", batch.output_dir, "Output directory (tree is mirrored)")
      ->required();
  batch_cmd->add_option("--masks-dir", batch.masks_dir,
                        "Ground-truth masks: <masks-dir>/<relative stem>.pgm");
  batch_cmd->add_option("--report", batch.report, "Report path (default <output>/report.json)");
  batch.flags.attach(*batch_cmd);

  SynthArgs syn;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scene and its ground truth");
  synth->add_option("--size", syn.size, "WIDTHxHEIGHT")->capture_default_str();
  synth->add_option("--bg-bin", syn.bg_bin, "Background hue bin")->capture_default_str();
  synth->add_option("--fg-bin", syn.fg_bin, "Foreground hue bin")->capture_default_str();
  synth->add_option("--rect", syn.rect, "Rectangle x,y,w,h");
  synth->add_option("--disk", syn.disk, "Disk cx,cy,r");
  synth->add_option("--noise", syn.noise, "Fraction of background pixels recoloured")
      ->capture_default_str();
  synth->add_option("--seed", syn.seed, "PRNG seed")->capture_default_str();
  synth->add_option("-o,--output", syn.output, "Scene output PPM")->required();
  synth->add_option("--gt", syn.truth, "Ground-truth mask output PGM");

  std::string pred_path, truth_path;
  auto* eval = app.add_subcommand("eval", "Score a predicted mask against a reference mask");
  eval->add_option("prediction", pred_path, "Predicted mask PGM")->required();
  eval->add_option("reference", truth_path, "Reference mask PGM")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("hueseg");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  if (*segment) return cmd_segment(seg, err);
  if (*batch_cmd) return cmd_batch(batch, out, err);
  if (*synth) return cmd_synth(syn, err);
  return cmd_eval(pred_path, truth_path, out, err);
}

}  // namespace hueseg::cli
