// Copyright 2026 The gesteval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gesteval/core_model.h"
#include "gesteval/dataset_pipeline.h"
#include "gesteval/errors.h"
#include "gesteval/evaluation.h"
#include "gesteval/fgd.h"
#include "gesteval/gmm.h"
#include "gesteval/key_value.h"
#include "gesteval/motion_metrics.h"
#include "gesteval/pcoa.h"
#include "gesteval/procrustes.h"
#include "gesteval/reports.h"
#include "gesteval/skeleton_io.h"
#include "gesteval/skeleton_mapping.h"
#include "gesteval/synth_corpus.h"

namespace {

using namespace gesteval;

constexpr int kExitOk = 0;
constexpr int kExitStage = 1;
constexpr int kExitInput = 2;

struct Globals {
  std::uint64_t seed = 0;
  std::string profile;
  std::string out;
  std::string format = "json";
};

// Input and validation problems (exit 2) as opposed to metric failures.
class InputError : public Error {
 public:
  using Error::Error;
};

RobotProfile load_profile(const Globals& g) {
  return g.profile.empty() ? RobotProfile::pepper() : RobotProfile::load(g.profile);
}

void write_text(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw InputError("cannot open " + g.out + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + g.out);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path + " for writing");
  f << text;
}

void write_report(const Globals& g, const nlohmann::json& j) {
  write_text(g, g.format == "csv" ? flatten_csv(j) : dump_json(j));
}

template <typename F>
std::string to_string_with(F&& f) {
  std::ostringstream out;
  f(out);
  return out.str();
}

// --- map -------------------------------------------------------------------
struct MapArgs {
  std::string input;
  std::string output;
  std::string layout;
  std::string params;
  double rate = 0.0;
};

int run_map(const Globals& g, const MapArgs& a) {
  const RobotProfile profile = load_profile(g);
  MappingParams params = MappingParams::defaults(profile);
  if (!a.params.empty())
    params = MappingParams::from_document(KeyValueDocument::load(a.params), profile);
  std::ifstream in(a.input);
  if (!in) throw InputError("cannot open " + a.input);
  const auto frames = read_skeleton_records(in);
  if (frames.empty()) throw InputError("no skeleton records in " + a.input);
  if (!a.layout.empty()) {
    const SkeletonLayout expected = parse_layout(a.layout);
    for (const auto& f : frames)
      if (f.layout != expected)
        throw InputError("record layout " + layout_name(f.layout) + " does not match --layout " +
                         a.layout);
  }
  MappingStream mapper(params, profile, g.seed);
  std::vector<Pose> poses;
  poses.reserve(frames.size());
  for (const auto& f : frames) {
    Pose p = mapper.map(f);
    p.timestamp = f.timestamp;
    poses.push_back(p);
  }
  const double span = frames.back().timestamp - frames.front().timestamp;
  const double native = frames.size() > 1 && span > 0.0 ? (frames.size() - 1) / span : 1.0;
  PoseStream stream(std::move(poses), native);
  if (a.rate > 0.0) stream = resample(stream, a.rate);
  Globals out = g;
  if (!a.output.empty()) out.out = a.output;
  write_text(out, to_string_with([&](std::ostream& o) { write_pose_stream(o, stream); }));
  return kExitOk;
}

// --- resample / window / match-lengths ---------------------------------------
int run_resample(const Globals& g, const std::string& input, double rate) {
  const PoseStream s = resample(load_pose_stream(input), rate);
  write_text(g, to_string_with([&](std::ostream& o) { write_pose_stream(o, s); }));
  return kExitOk;
}

int run_window(const Globals& g, const std::string& input, int mu, int stride,
               const std::string& tag) {
  const GestureDataset ds = window(load_pose_stream(input), mu, stride,
                                   tag.empty() ? std::filesystem::path(input).stem().string()
                                               : tag);
  write_text(g, to_string_with([&](std::ostream& o) { write_dataset(o, ds); }));
  return kExitOk;
}

int run_match_lengths(const std::string& a, const std::string& b, const std::string& out_a,
                      const std::string& out_b) {
  const auto [ma, mb] = match_lengths(load_pose_stream(a), load_pose_stream(b));
  save_pose_stream(ma, out_a);
  save_pose_stream(mb, out_b);
  return kExitOk;
}

// --- pcoa ------------------------------------------------------------------
struct PcoaArgs {
  std::string original;
  std::string generated;
  int dims = 10;
  std::string spectrum_csv;
  std::string svg;
};

int run_pcoa(const Globals& g, const PcoaArgs& a) {
  const GestureDataset o = load_dataset(a.original);
  if (a.generated.empty()) {
    DistanceMatrix dm;
    const PcoaResult r = joint_pcoa(as_matrix(o), &dm);
    nlohmann::json j = to_json(r);
    j["zero_variance"] = dm.zero_variance;
    j["mu"] = o.mu();
    if (!a.spectrum_csv.empty()) {
      FidelityReport fr;
      fr.eigen_spectrum_original.assign(r.spectrum.data(),
                                        r.spectrum.data() + std::min<Eigen::Index>(28, r.spectrum.size()));
      write_file(a.spectrum_csv, spectrum_csv(fr));
    }
    if (!a.svg.empty()) {
      FidelityReport fr;
      fr.eigen_spectrum_original.assign(r.spectrum.data(),
                                        r.spectrum.data() + std::min<Eigen::Index>(28, r.spectrum.size()));
      write_file(a.svg, spectrum_svg(fr, a.original));
    }
    write_report(g, j);
    return kExitOk;
  }
  const GestureDataset gen = load_dataset(a.generated);
  if (o.mu() != gen.mu()) throw InputError("mu mismatch between datasets");
  const FidelityAnalysis fa = fidelity_analysis(as_matrix(o), as_matrix(gen), a.dims);
  if (!a.spectrum_csv.empty()) write_file(a.spectrum_csv, spectrum_csv(fa.report));
  if (!a.svg.empty()) write_file(a.svg, spectrum_svg(fa.report, "PCoA eigenvalue spectra"));
  write_report(g, to_json(fa.report));
  return kExitOk;
}

// --- procrustes --------------------------------------------------------------
struct ProcrustesArgs {
  std::string original;
  std::string generated;
  int dims = 10;
  bool coords = false;
  bool proper = false;
  int mu = 0;
  bool rotation = false;
};

int run_procrustes(const Globals& g, const ProcrustesArgs& a) {
  ProcrustesOptions opt;
  opt.proper_rotation = a.proper;
  ProcrustesResult r;
  if (a.coords) {
    if (a.mu < 1) throw InputError("--coords requires --mu");
    r = procrustes(load_matrix_csv(a.original), load_matrix_csv(a.generated), a.mu, opt);
  } else {
    const GestureDataset o = load_dataset(a.original);
    const GestureDataset gen = load_dataset(a.generated);
    if (o.mu() != gen.mu()) throw InputError("mu mismatch between datasets");
    const PcoaResult po = joint_pcoa(as_matrix(o));
    const PcoaResult pg = joint_pcoa(as_matrix(gen));
    const int l = std::min({a.dims, po.dimensions(), pg.dimensions()});
    if (l < 1) throw DegenerateError("no retained principal coordinates");
    r = procrustes(po.coordinates.leftCols(l), pg.coordinates.leftCols(l), o.mu(), opt);
  }
  write_report(g, to_json(r, a.rotation));
  return kExitOk;
}

// --- motion-stats ------------------------------------------------------------
int run_motion(const Globals& g, const std::string& input) {
  write_report(g, to_json(motion_report(load_dataset(input), load_profile(g))));
  return kExitOk;
}

// --- gmm-train / generate ------------------------------------------------------
struct TrainArgs {
  std::string input;
  int k = 24;
  int max_iterations = 500;
  double tolerance = 1e-7;
  double regularization = 1e-6;
  std::string report;
};

int run_train(const Globals& g, const TrainArgs& a) {
  if (g.out.empty()) throw InputError("gmm-train requires --out");
  GmmConfig cfg;
  cfg.max_iterations = a.max_iterations;
  cfg.tolerance = a.tolerance;
  cfg.regularization = a.regularization;
  const GmmFit fit = fit_gmm(load_dataset(a.input), a.k, g.seed, cfg);
  save_model(fit.model, g.out);
  if (!a.report.empty()) {
    nlohmann::json j = {
        {"k", fit.model.k()},
        {"d", fit.model.dimension()},
        {"mu", fit.model.mu()},
        {"seed", g.seed},
        {"iterations", fit.iterations},
        {"converged", fit.converged},
        {"epsilon", fit.epsilon},
        {"covariance_floor_applied", fit.covariance_floor_applied},
        {"objective_history", fit.objective_history},
        {"log_likelihood_history", fit.log_likelihood_history},
    };
    write_file(a.report, g.format == "csv" ? flatten_csv(j) : dump_json(j));
  }
  return kExitOk;
}

int run_generate(const Globals& g, const std::string& model, int n, const std::string& tag) {
  const GestureDataset ds = sample(load_model(model), n, g.seed, tag);
  write_text(g, to_string_with([&](std::ostream& o) { write_dataset(o, ds); }));
  return kExitOk;
}

// --- fgd -----------------------------------------------------------------------
int run_fgd(const Globals& g, const std::string& model, const std::string& a,
            const std::string& b, int bootstrap) {
  const GmmModel m = load_model(model);
  const GestureDataset da = load_dataset(a);
  const GestureDataset db = load_dataset(b);
  if (da.dimension() != m.dimension() || db.dimension() != m.dimension())
    throw InputError("dataset dimension does not match model dimension " +
                     std::to_string(m.dimension()));
  write_report(g, to_json(fgd(m, da, db, bootstrap, g.seed)));
  return kExitOk;
}

// --- evaluate ------------------------------------------------------------------
struct EvaluateArgs {
  std::string original;
  std::string generated;
  std::string model;
  int dims = 10;
  int bootstrap = 0;
  bool proper = false;
  std::string artifacts;
};

int run_evaluate(const Globals& g, const EvaluateArgs& a) {
  const RobotProfile profile = load_profile(g);
  const GestureDataset o = load_dataset(a.original);
  const GestureDataset gen = load_dataset(a.generated);
  std::optional<GmmModel> model;
  if (!a.model.empty()) model = load_model(a.model);
  EvaluationOptions opt;
  opt.dims = a.dims;
  opt.bootstrap = a.bootstrap;
  opt.seed = g.seed;
  opt.procrustes.proper_rotation = a.proper;
  EvaluationSummary s;
  try {
    s = evaluate(o, gen, model ? &*model : nullptr, profile, opt);
  } catch (const StructuralError& e) {
    throw InputError(e.what());
  }
  write_report(g, to_json(s));
  if (!a.artifacts.empty() && s.fidelity) {
    std::filesystem::create_directories(a.artifacts);
    const std::filesystem::path dir(a.artifacts);
    write_file((dir / "spectrum.csv").string(), spectrum_csv(s.fidelity->report));
    write_file((dir / "spectrum.svg").string(),
               spectrum_svg(s.fidelity->report, "PCoA eigenvalue spectra"));
  }
  return s.any_failed() ? kExitStage : kExitOk;
}

// --- synth-corpus ----------------------------------------------------------------
struct SynthArgs {
  SynthCorpusConfig config;
  std::uint64_t template_seed = 1;
  int mu = 0;
};

int run_synth(const Globals& g, const SynthArgs& a) {
  const RobotProfile profile = load_profile(g);
  if (a.mu > 0) {
    const GestureDataset ds = synth_corpus(profile, a.config, a.mu, g.seed, a.template_seed);
    write_text(g, to_string_with([&](std::ostream& o) { write_dataset(o, ds); }));
  } else {
    const PoseStream s = synth_pose_stream(profile, a.config, g.seed, a.template_seed);
    write_text(g, to_string_with([&](std::ostream& o) { write_pose_stream(o, s); }));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gesteval: robot gesture retargeting and evaluation toolkit"};
  app.set_version_flag("--version", GESTEVAL_VERSION);
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--profile", g.profile, "Robot profile file (default: built-in Pepper profile)");
  app.add_option("--out", g.out, "Output file (default: stdout)");
  app.add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  auto global = [&](CLI::App* sub) {
    sub->fallthrough();
    return sub;
  };

  int code = kExitOk;
  std::function<int()> action;

  MapArgs map_args;
  auto* map = global(app.add_subcommand("map", "Map skeleton records (JSON lines) to poses"));
  map->add_option("input", map_args.input, "Skeleton records")->required();
  map->add_option("output", map_args.output, "Pose stream CSV (default: --out)");
  map->add_option("--layout", map_args.layout, "Expected record layout")
      ->check(CLI::IsMember({"openni", "openpose"}));
  map->add_option("--params", map_args.params, "Mapping parameter file");
  map->add_option("--rate", map_args.rate, "Resample output to this rate (Hz)");
  map->callback([&] { action = [&] { return run_map(g, map_args); }; });

  std::string rs_input;
  double rs_rate = 4.0;
  auto* rs = global(app.add_subcommand("resample", "Resample a pose stream"));
  rs->add_option("input", rs_input)->required();
  rs->add_option("--rate", rs_rate, "Target rate (Hz)")->capture_default_str();
  rs->callback([&] { action = [&] { return run_resample(g, rs_input, rs_rate); }; });

  std::string win_input, win_tag;
  int win_mu = 4, win_stride = 0;
  auto* win = global(app.add_subcommand("window", "Cut a pose stream into units of movement"));
  win->add_option("input", win_input)->required();
  win->add_option("--mu", win_mu, "Poses per unit")->capture_default_str();
  win->add_option("--stride", win_stride, "Window stride (0 = mu)")->capture_default_str();
  win->add_option("--tag", win_tag, "Source tag");
  win->callback([&] {
    action = [&] { return run_window(g, win_input, win_mu, win_stride, win_tag); };
  });

  std::string ml_a, ml_b, ml_out_a, ml_out_b;
  auto* ml = global(app.add_subcommand("match-lengths", "Truncate two pose streams to equal length"));
  ml->add_option("a", ml_a)->required();
  ml->add_option("b", ml_b)->required();
  ml->add_option("--out-a", ml_out_a)->required();
  ml->add_option("--out-b", ml_out_b)->required();
  ml->callback([&] {
    action = [&] { return run_match_lengths(ml_a, ml_b, ml_out_a, ml_out_b); };
  });

  PcoaArgs pcoa_args;
  auto* pc = global(app.add_subcommand("pcoa", "PCoA of the joint columns of one or two datasets"));
  pc->add_option("original", pcoa_args.original)->required();
  pc->add_option("generated", pcoa_args.generated);
  pc->add_option("--dims", pcoa_args.dims)->capture_default_str();
  pc->add_option("--spectrum-csv", pcoa_args.spectrum_csv, "Write the eigenvalue spectrum");
  pc->add_option("--svg", pcoa_args.svg, "Write a spectrum bar chart");
  pc->callback([&] { action = [&] { return run_pcoa(g, pcoa_args); }; });

  ProcrustesArgs pr_args;
  auto* pr = global(app.add_subcommand("procrustes", "Procrustes statistic between two datasets"));
  pr->add_option("original", pr_args.original)->required();
  pr->add_option("generated", pr_args.generated)->required();
  pr->add_option("--dims", pr_args.dims)->capture_default_str();
  pr->add_flag("--coords", pr_args.coords, "Inputs are centered coordinate matrices");
  pr->add_option("--mu", pr_args.mu, "Unit length for normalization with --coords");
  pr->add_flag("--proper-rotation", pr_args.proper, "Exclude reflections");
  pr->add_flag("--rotation", pr_args.rotation, "Include the rotation matrix");
  pr->callback([&] { action = [&] { return run_procrustes(g, pr_args); }; });

  std::string ms_input;
  auto* ms = global(app.add_subcommand("motion-stats", "Jerk and path length statistics"));
  ms->add_option("input", ms_input)->required();
  ms->callback([&] { action = [&] { return run_motion(g, ms_input); }; });

  TrainArgs tr_args;
  auto* tr = global(app.add_subcommand("gmm-train", "Fit a tied-covariance GMM"));
  tr->add_option("input", tr_args.input)->required();
  tr->add_option("--k", tr_args.k)->capture_default_str();
  tr->add_option("--max-iter", tr_args.max_iterations)->capture_default_str();
  tr->add_option("--tol", tr_args.tolerance)->capture_default_str();
  tr->add_option("--reg", tr_args.regularization)->capture_default_str();
  tr->add_option("--report", tr_args.report, "Write a training report");
  tr->callback([&] { action = [&] { return run_train(g, tr_args); }; });

  std::string gen_model, gen_tag = "gmm-sample";
  int gen_n = 1000;
  auto* gen = global(app.add_subcommand("generate", "Sample units of movement from a GMM"));
  gen->add_option("--model", gen_model)->required();
  gen->add_option("-n", gen_n)->capture_default_str();
  gen->add_option("--tag", gen_tag)->capture_default_str();
  gen->callback([&] { action = [&] { return run_generate(g, gen_model, gen_n, gen_tag); }; });

  std::string fgd_model, fgd_a, fgd_b;
  int fgd_boot = 0;
  auto* fg = global(app.add_subcommand("fgd", "Frechet gesture distance between two datasets"));
  fg->add_option("--model", fgd_model)->required();
  fg->add_option("a", fgd_a)->required();
  fg->add_option("b", fgd_b)->required();
  fg->add_option("--bootstrap", fgd_boot)->capture_default_str();
  fg->callback([&] { action = [&] { return run_fgd(g, fgd_model, fgd_a, fgd_b, fgd_boot); }; });

  EvaluateArgs ev_args;
  auto* ev = global(app.add_subcommand("evaluate", "Run every metric on two datasets"));
  ev->add_option("original", ev_args.original)->required();
  ev->add_option("generated", ev_args.generated)->required();
  ev->add_option("--model", ev_args.model, "Reference GMM for FGD");
  ev->add_option("--dims", ev_args.dims)->capture_default_str();
  ev->add_option("--bootstrap", ev_args.bootstrap)->capture_default_str();
  ev->add_flag("--proper-rotation", ev_args.proper);
  ev->add_option("--artifacts", ev_args.artifacts, "Directory for spectrum CSV and SVG");
  ev->callback([&] { action = [&] { return run_evaluate(g, ev_args); }; });

  SynthArgs sy_args;
  auto* sy = global(app.add_subcommand("synth-corpus", "Generate a scripted-animation corpus"));
  sy->add_option("--poses", sy_args.config.poses)->capture_default_str();
  sy->add_option("--rate", sy_args.config.rate_hz)->capture_default_str();
  sy->add_option("--templates", sy_args.config.templates)->capture_default_str();
  sy->add_option("--template-seed", sy_args.template_seed)->capture_default_str();
  sy->add_option("--amplitude-min", sy_args.config.amplitude_min)->capture_default_str();
  sy->add_option("--amplitude-max", sy_args.config.amplitude_max)->capture_default_str();
  sy->add_option("--phase-jitter", sy_args.config.phase_jitter)->capture_default_str();
  sy->add_option("--noise", sy_args.config.noise)->capture_default_str();
  sy->add_option("--mu", sy_args.mu, "Window into a dataset (0 = pose stream)")
      ->capture_default_str();
  sy->callback([&] { action = [&] { return run_synth(g, sy_args); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    code = action ? action() : kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStage;
  }
  return code;
}
