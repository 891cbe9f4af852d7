#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"

#include "bodycomp/config.hpp"
#include "bodycomp/errors.hpp"
#include "bodycomp/masks.hpp"
#include "bodycomp/metaimage.hpp"
#include "bodycomp/metrics.hpp"
#include "bodycomp/parallel.hpp"
#include "bodycomp/phantom.hpp"
#include "bodycomp/pipeline.hpp"

namespace bodycomp::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write " + path.string());
  file << text;
  if (!file) throw IoError("write failed: " + path.string());
}

void write_json(const fs::path& path, const nlohmann::ordered_json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

struct SegmentArgs {
  std::string ct, cavity, out, config;
  bool no_resample = false;
};

int cmd_segment(const SegmentArgs& a, std::ostream& err) {
  PipelineConfig cfg;
  if (!a.config.empty()) cfg = read_config(a.config);
  const auto ct = read_ct(a.ct);
  const auto cavity = read_mask(a.cavity);

  RunOptions opts;
  opts.resample = !a.no_resample;
  opts.ct_path = a.ct;
  opts.cavity_path = a.cavity;
  const auto result = run_pipeline(ct, cavity, cfg, opts);
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";

  const fs::path out(a.out);
  make_dir(out);
  const auto& m = result.masks;
  write_mhd(result.labels, out / "labels.mhd");
  write_mhd(m.body, out / "body.mhd");
  write_mhd(m.cavity, out / "cavity.mhd");
  write_mhd(m.bone, out / "bone.mhd");
  write_mhd(m.lung, out / "lung.mhd");
  write_mhd(m.sat, out / "sat.mhd");
  write_mhd(m.muscle, out / "muscle.mhd");
  write_mhd(m.vat, out / "vat.mhd");
  write_json(out / "composition.json", to_json(composition(result.labels), &result.config));

  std::string run_cfg = "# ct: " + result.provenance.ct_path + "\n";
  run_cfg += "# cavity: " + result.provenance.cavity_path + "\n";
  run_cfg += std::string("# resampled: ") + (result.provenance.resampled ? "yes" : "no") + "\n";
  run_cfg += format_config(result.config);
  write_text(out / "config.txt", run_cfg);
  return kOk;
}

struct PhantomArgs {
  std::string preset = "default";
  std::uint64_t seed = 0;
  double noise = 0.0;
  std::string out;
};

int cmd_phantom(const PhantomArgs& a) {
  PhantomSpec spec;
  try {
    spec = preset(a.preset);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  spec.seed = a.seed;
  spec.noise_sigma = a.noise;
  const auto ph = generate(spec);
  make_dir(a.out);
  write_phantom(ph, spec, a.preset, a.out);
  return kOk;
}

struct EvaluateArgs {
  std::string pred, truth, cavity;
  int slices = 0;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& err) {
  const auto pred = read_labels(a.pred);
  const auto truth = read_labels(a.truth);
  std::optional<SliceSample> sample;
  if (a.slices > 0) {
    const auto cavity = read_mask(a.cavity);
    require_same_geometry(cavity.geometry(), truth.geometry(), "cavity vs truth labels");
    if (empty(cavity)) throw IoError("cavity mask " + a.cavity + " is empty; cannot sample slices");
    sample = sample_slices(cavity, a.slices);
    if (sample->duplicates_removed > 0) {
      err << "warning: " << sample->duplicates_removed
          << " duplicate slice index(es) removed; scoring " << sample->indices.size()
          << " slices\n";
    }
  }
  const auto report = evaluate(pred, truth, sample);
  write_json(fs::path(a.pred).parent_path() / "eval.json", to_json(report));
  return kOk;
}

int cmd_report(const std::string& labels_path) {
  const auto labels = read_labels(labels_path);
  const fs::path dir = fs::path(labels_path).parent_path();
  std::optional<PipelineConfig> cfg;
  if (fs::exists(dir / "config.txt")) cfg = read_config(dir / "config.txt");
  write_json(dir / "composition.json", to_json(composition(labels), cfg ? &*cfg : nullptr));
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CT body composition: segmentation, phantoms, evaluation and reports",
               "bodycomp"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 1;
  app.add_option("--threads", threads, "worker threads for voxel kernels")
      ->check(CLI::PositiveNumber);

  SegmentArgs seg;
  auto* segment = app.add_subcommand("segment", "segment compartments of one CT volume");
  segment->add_option("--ct", seg.ct, "CT volume (.mhd)")->required();
  segment->add_option("--cavity", seg.cavity, "ventral cavity mask (.mhd)")->required();
  segment->add_option("--out", seg.out, "output directory")->required();
  segment->add_option("--config", seg.config, "pipeline parameter file");
  segment->add_flag("--no-resample", seg.no_resample, "keep the input slice spacing");

  PhantomArgs ph;
  auto* phantom = app.add_subcommand("phantom", "write a synthetic torso with ground truth");
  phantom->add_option("--preset", ph.preset, "phantom preset")->capture_default_str();
  phantom->add_option("--seed", ph.seed, "noise seed")->capture_default_str();
  phantom->add_option("--noise", ph.noise, "Gaussian noise sigma (HU)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  phantom->add_option("--out", ph.out, "output directory")->required();

  EvaluateArgs ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "score a label map against ground truth");
  evaluate_cmd->add_option("--pred", ev.pred, "predicted label map (.mhd)")->required();
  evaluate_cmd->add_option("--truth", ev.truth, "ground-truth label map (.mhd)")->required();
  auto* cavity_opt = evaluate_cmd->add_option("--cavity", ev.cavity, "cavity mask for slice sampling");
  evaluate_cmd->add_option("--slices", ev.slices, "score K slices spread over the cavity")
      ->check(CLI::PositiveNumber)
      ->needs(cavity_opt);

  std::string labels_path;
  auto* report = app.add_subcommand("report", "volume report for a label map");
  report->add_option("--labels", labels_path, "label map (.mhd)")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e, out, err);
    app.exit(e, err, err);
    return kUsage;
  }

  try {
    set_thread_count(threads);
    if (*segment) return cmd_segment(seg, err);
    if (*phantom) return cmd_phantom(ph);
    if (*evaluate_cmd) return cmd_evaluate(ev, err);
    return cmd_report(labels_path);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const PipelineError& e) {
    err << "pipeline failure: " << e.what() << "\n";
    return kPipeline;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  }
}

}  // namespace bodycomp::cli
