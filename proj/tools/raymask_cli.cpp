#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "raymask/io.hpp"
#include "raymask/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

raymask::Layout parse_layout(const std::string& name) {
  if (name == "davis") return raymask::Layout::davis;
  if (name == "flat") return raymask::Layout::flat;
  throw std::invalid_argument("unknown layout: " + name);
}

int run(int argc, char** argv) {
  CLI::App app{"Polar mask toolkit: label generation, representation sweeps "
               "and VOS evaluation"};
  app.require_subcommand(1);

  std::string layout = "davis";
  std::string out;
  int jobs = 0;

  auto add_common = [&](CLI::App* cmd, bool with_layout = true) {
    cmd->add_option("--out", out, "Output directory (or file for ingest)");
    cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
    if (with_layout)
      cmd->add_option("--layout", layout, "Dataset layout: davis or flat")
          ->check(CLI::IsMember({"davis", "flat"}));
  };

  // ingest
  std::string ingest_root;
  auto* cmd_ingest = app.add_subcommand("ingest", "Index a dataset tree");
  cmd_ingest->add_option("root", ingest_root, "Dataset root")->required();
  add_common(cmd_ingest);

  // labels
  std::string labels_root;
  int rays = 36;
  double mu = 0.5;
  auto* cmd_labels =
      app.add_subcommand("labels", "Generate polar distance labels");
  cmd_labels->add_option("root", labels_root, "Dataset root")->required();
  cmd_labels->add_option("--rays", rays, "Number of rays");
  cmd_labels->add_option("--mu", mu, "Contour merge ratio");
  add_common(cmd_labels);

  // sweep
  std::string sweep_root;
  std::string sweep_param = "mu";
  std::vector<double> sweep_values;
  auto* cmd_sweep = app.add_subcommand(
      "sweep", "Representation upper-bound study over mu or ray count");
  cmd_sweep->add_option("root", sweep_root, "Dataset root")->required();
  cmd_sweep->add_option("--param", sweep_param, "Swept parameter: mu or rays")
      ->check(CLI::IsMember({"mu", "rays"}));
  cmd_sweep->add_option("--values", sweep_values, "Sweep values")
      ->required()
      ->delimiter(',');
  cmd_sweep->add_option("--rays", rays, "Ray count held fixed for mu sweeps");
  cmd_sweep->add_option("--mu", mu, "Merge ratio held fixed for ray sweeps");
  add_common(cmd_sweep);

  // eval
  std::string eval_pred, eval_gt;
  double tol = 1.0;
  std::string ape_mode = "paper";
  auto* cmd_eval =
      app.add_subcommand("eval", "Score predicted masks against ground truth");
  cmd_eval->add_option("--pred", eval_pred, "Prediction directory")->required();
  cmd_eval->add_option("--gt", eval_gt, "Ground-truth dataset root")
      ->required();
  cmd_eval->add_option("--tol", tol, "Boundary match tolerance in pixels");
  cmd_eval
      ->add_option("--ape-mode", ape_mode,
                   "paper (|M\\G|) or symmetric (|M xor G|)")
      ->check(CLI::IsMember({"paper", "symmetric"}));
  add_common(cmd_eval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // bad flags are validation errors
  }

  if (cmd_ingest->parsed()) {
    const auto index = raymask::ingest(ingest_root, parse_layout(layout));
    nlohmann::ordered_json j;
    j["root"] = index.root.string();
    j["layout"] = layout;
    j["sequences"] = nlohmann::ordered_json::array();
    for (const auto& seq : index.sequences) {
      nlohmann::ordered_json js;
      js["name"] = seq.name;
      js["frames"] = seq.frames.size();
      js["instance_ids"] = seq.instance_ids;
      j["sequences"].push_back(std::move(js));
    }
    if (!out.empty()) {
      std::ofstream f(out);
      if (!f) throw raymask::io_error("cannot write " + out);
      f << j.dump(2) << '\n';
    }
    std::printf("%s\n", j.dump(2).c_str());
    return 0;
  }

  if (cmd_labels->parsed()) {
    if (out.empty()) throw std::invalid_argument("--out is required");
    const auto index = raymask::ingest(labels_root, parse_layout(layout));
    const auto summary = raymask::generate_labels(index, rays, mu, out, jobs);
    int skipped = 0;
    for (const auto& inst : summary.instances) {
      skipped += static_cast<int>(inst.skipped_frames.size());
      for (const auto& frame : inst.skipped_frames)
        std::fprintf(stderr, "warning: %s#%d: no pixels in frame %s, skipped\n",
                     inst.sequence.c_str(), inst.instance_id, frame.c_str());
    }
    std::printf("wrote %zu label files under %s (%d frames skipped)\n",
                summary.instances.size(), out.c_str(), skipped);
    return 0;
  }

  if (cmd_sweep->parsed()) {
    if (out.empty()) throw std::invalid_argument("--out is required");
    const auto index = raymask::ingest(sweep_root, parse_layout(layout));
    raymask::SweepSpec spec;
    spec.param = sweep_param == "mu" ? raymask::SweepSpec::Param::mu
                                     : raymask::SweepSpec::Param::rays;
    spec.values = sweep_values;
    spec.rays = rays;
    spec.mu = mu;
    const auto report = raymask::sweep(index, spec, out, jobs);
    for (const auto& row : report.rows)
      if (row.video == "all")
        std::printf("%s=%g  all-video mean IoU %.6f\n", sweep_param.c_str(),
                    row.value, row.mean_iou);
    std::printf("wrote %s/sweep.csv\n", out.c_str());
    return 0;
  }

  if (cmd_eval->parsed()) {
    if (out.empty()) throw std::invalid_argument("--out is required");
    const auto gt = raymask::ingest(eval_gt, parse_layout(layout));
    raymask::EvalOptions options;
    options.boundary_tol = tol;
    options.ape_mode = ape_mode == "paper" ? raymask::ApeMode::one_sided
                                           : raymask::ApeMode::symmetric;
    options.jobs = jobs;
    const auto report = raymask::evaluate(eval_pred, gt, out, options);
    std::printf("J_M %.6f  J_R %.6f  J_D %.6f\n", report.j_global.mean,
                report.j_global.recall, report.j_global.decay);
    std::printf("F_M %.6f  F_R %.6f  F_D %.6f\n", report.f_global.mean,
                report.f_global.recall, report.f_global.decay);
    std::printf("wrote %s/report.json and %s/report.csv\n", out.c_str(),
                out.c_str());
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const raymask::io_error& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
