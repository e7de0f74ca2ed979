#include "raymask/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "parallel.hpp"
#include "raymask/io.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace raymask {

namespace {

bool is_mask_file(const fs::path& p) {
  const auto e = p.extension().string();
  return e == ".png" || e == ".PNG" || e == ".pbm" || e == ".PBM";
}

std::vector<fs::path> sorted_mask_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && is_mask_file(entry.path()))
      files.push_back(entry.path());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.filename().string() < b.filename().string();
            });
  return files;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

std::string instance_file_name(int id) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d.jsonl", id);
  return buf;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path.string());
  out << text;
  if (!out) throw io_error("failed writing " + path.string());
}

ordered_json stats_json(const AggregateStats& s) {
  return ordered_json{{"mean", s.mean}, {"recall", s.recall}, {"decay", s.decay}};
}

}  // namespace

DatasetIndex ingest(const fs::path& root, Layout layout) {
  if (!fs::exists(root)) throw io_error("dataset root not found: " + root.string());
  if (!fs::is_directory(root))
    throw io_error("dataset root is not a directory: " + root.string());

  std::vector<std::pair<std::string, fs::path>> sequence_dirs;
  if (layout == Layout::davis) {
    const fs::path ann = root / "Annotations";
    if (!fs::is_directory(ann))
      throw io_error("Annotations directory not found under " + root.string());
    for (const auto& entry : fs::directory_iterator(ann))
      if (entry.is_directory())
        sequence_dirs.emplace_back(entry.path().filename().string(),
                                   entry.path());
  } else {
    for (const auto& entry : fs::directory_iterator(root))
      if (entry.is_directory())
        sequence_dirs.emplace_back(entry.path().filename().string(),
                                   entry.path());
    if (sequence_dirs.empty() && !sorted_mask_files(root).empty()) {
      std::string name = root.filename().string();
      if (name.empty()) name = root.parent_path().filename().string();
      if (name.empty()) name = "default";
      sequence_dirs.emplace_back(name, root);
    }
  }
  std::sort(sequence_dirs.begin(), sequence_dirs.end());

  DatasetIndex index{root, layout, {}};
  std::vector<std::string> offending;
  for (const auto& [name, dir] : sequence_dirs) {
    auto frames = sorted_mask_files(dir);
    if (frames.empty()) continue;
    SequenceEntry seq{name, std::move(frames), {}};
    std::set<int> ids;
    for (const auto& frame : seq.frames) {
      try {
        const auto img = load_mask_image(frame);
        for (int id : instance_ids(img)) ids.insert(id);
      } catch (const io_error&) {
        offending.push_back(frame.string());
      }
    }
    seq.instance_ids.assign(ids.begin(), ids.end());
    index.sequences.push_back(std::move(seq));
  }

  if (!offending.empty()) {
    std::string msg = "unreadable annotation files:";
    for (const auto& p : offending) msg += "\n  " + p;
    throw io_error(msg);
  }
  if (index.sequences.empty()) throw std::invalid_argument("no sequences found");
  return index;
}

LabelSummary generate_labels(const DatasetIndex& index, int rays, double mu,
                             const fs::path& out_dir, int jobs) {
  if (rays < 3) throw std::invalid_argument("rays must be at least 3");
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  fs::create_directories(out_dir);

  LabelSummary summary{rays, mu, {}};
  for (const auto& seq : index.sequences) {
    if (seq.instance_ids.empty()) continue;
    fs::create_directories(out_dir / seq.name);

    // line + encode-decode IoU per (frame, instance); nullopt = instance
    // absent from the frame
    using Cell = std::optional<std::pair<std::string, double>>;
    std::vector<std::vector<Cell>> table(seq.frames.size());
    detail::parallel_for(seq.frames.size(), jobs, [&](std::size_t fi) {
      const auto img = load_mask_image(seq.frames[fi]);
      auto& row = table[fi];
      row.resize(seq.instance_ids.size());
      for (std::size_t k = 0; k < seq.instance_ids.size(); ++k) {
        const auto binary = binary_from_id(img, seq.instance_ids[k]);
        if (binary.count() == 0) continue;
        const auto center = mass_center(binary);
        const auto polar = encode(binary, center, rays, {mu});
        const double iou =
            jaccard(decode(polar, binary.width(), binary.height()), binary);
        row[k] = {to_jsonl(polar), iou};
      }
    });

    for (std::size_t k = 0; k < seq.instance_ids.size(); ++k) {
      InstanceLabelSummary inst;
      inst.sequence = seq.name;
      inst.instance_id = seq.instance_ids[k];
      inst.frame_count = static_cast<int>(seq.frames.size());
      inst.output_file =
          out_dir / seq.name / instance_file_name(inst.instance_id);

      std::string lines;
      for (std::size_t fi = 0; fi < seq.frames.size(); ++fi) {
        if (table[fi][k]) {
          lines += table[fi][k]->first;
          lines += '\n';
          inst.per_frame_iou.push_back(table[fi][k]->second);
        } else {
          inst.skipped_frames.push_back(seq.frames[fi].stem().string());
        }
      }
      inst.encoded = static_cast<int>(inst.per_frame_iou.size());
      inst.mean_iou =
          inst.per_frame_iou.empty() ? 0.0 : mean_of(inst.per_frame_iou);
      write_text_file(inst.output_file, lines);
      summary.instances.push_back(std::move(inst));
    }
  }

  ordered_json j;
  j["rays"] = summary.rays;
  j["mu"] = summary.mu;
  j["instances"] = ordered_json::array();
  for (const auto& inst : summary.instances) {
    ordered_json ji;
    ji["sequence"] = inst.sequence;
    ji["id"] = inst.instance_id;
    ji["frames"] = inst.frame_count;
    ji["encoded"] = inst.encoded;
    ji["skipped"] = inst.skipped_frames;
    ji["mean_iou"] = inst.mean_iou;
    ji["per_frame_iou"] = inst.per_frame_iou;
    // relative to the summary itself, so reports are relocatable
    ji["file"] = inst.sequence + "/" + instance_file_name(inst.instance_id);
    j["instances"].push_back(std::move(ji));
  }
  write_text_file(out_dir / "summary.json", j.dump(2) + "\n");
  return summary;
}

SweepReport sweep(const DatasetIndex& index, const SweepSpec& spec,
                  const fs::path& out_dir, int jobs) {
  if (spec.values.empty()) throw std::invalid_argument("no sweep values");
  for (double v : spec.values) {
    if (spec.param == SweepSpec::Param::mu && !(v > 0.0))
      throw std::invalid_argument("mu values must be positive");
    if (spec.param == SweepSpec::Param::rays &&
        (v != std::floor(v) || v < 3.0))
      throw std::invalid_argument("ray values must be integers of at least 3");
  }
  if (spec.rays < 3) throw std::invalid_argument("rays must be at least 3");
  if (!(spec.mu > 0.0)) throw std::invalid_argument("mu must be positive");
  fs::create_directories(out_dir);

  SweepReport report;
  for (double value : spec.values) {
    const int rays = spec.param == SweepSpec::Param::rays
                         ? static_cast<int>(value)
                         : spec.rays;
    const double mu = spec.param == SweepSpec::Param::mu ? value : spec.mu;

    std::vector<double> video_means;
    for (const auto& seq : index.sequences) {
      std::vector<std::vector<double>> per_frame(seq.frames.size());
      detail::parallel_for(seq.frames.size(), jobs, [&](std::size_t fi) {
        const auto img = load_mask_image(seq.frames[fi]);
        for (int id : seq.instance_ids) {
          const auto binary = binary_from_id(img, id);
          if (binary.count() == 0) continue;
          const auto center = mass_center(binary);
          const auto polar = encode(binary, center, rays, {mu});
          per_frame[fi].push_back(
              jaccard(decode(polar, binary.width(), binary.height()), binary));
        }
      });

      std::vector<double> ious;
      for (const auto& row : per_frame)
        ious.insert(ious.end(), row.begin(), row.end());
      if (ious.empty()) continue;
      const double video_mean = mean_of(ious);
      report.rows.push_back({value, seq.name, video_mean});
      video_means.push_back(video_mean);
    }
    if (!video_means.empty())
      report.rows.push_back({value, "all", mean_of(video_means)});
  }

  std::string csv = "sweep_value,video,mean_iou\n";
  for (const auto& row : report.rows) {
    csv += spec.param == SweepSpec::Param::rays
               ? std::to_string(static_cast<int>(row.value))
               : fixed6(row.value);
    csv += ',';
    csv += row.video;
    csv += ',';
    csv += fixed6(row.mean_iou);
    csv += '\n';
  }
  write_text_file(out_dir / "sweep.csv", csv);
  return report;
}

EvalReport evaluate(const fs::path& pred_root, const DatasetIndex& gt,
                    const fs::path& out_dir, const EvalOptions& options) {
  if (!fs::is_directory(pred_root))
    throw io_error("prediction root not found: " + pred_root.string());
  fs::create_directories(out_dir);

  EvalReport report;
  for (const auto& seq : gt.sequences) {
    if (seq.instance_ids.empty()) continue;
    const fs::path pdir = pred_root / seq.name;
    if (!fs::is_directory(pdir))
      throw io_error("missing prediction directory for sequence " + seq.name);
    const auto pred_files = sorted_mask_files(pdir);
    if (pred_files.size() != seq.frames.size())
      throw std::invalid_argument("frame count mismatch in sequence " +
                                  seq.name);
    std::map<std::string, fs::path> pred_by_stem;
    for (const auto& p : pred_files) pred_by_stem[p.stem().string()] = p;

    const bool multi = seq.instance_ids.size() > 1;
    for (int id : seq.instance_ids) {
      SequenceEval ev;
      ev.name = multi ? seq.name + "#" + std::to_string(id) : seq.name;
      const std::size_t n = seq.frames.size();
      ev.frame_names.resize(n);
      ev.per_frame_j.resize(n);
      ev.per_frame_f.resize(n);
      ev.per_frame_ape.resize(n);

      detail::parallel_for(n, options.jobs, [&](std::size_t fi) {
        const std::string stem = seq.frames[fi].stem().string();
        const auto found = pred_by_stem.find(stem);
        if (found == pred_by_stem.end())
          throw io_error("prediction missing for sequence " + seq.name +
                         " frame " + stem);
        const auto gt_img = load_mask_image(seq.frames[fi]);
        const auto pred_img = load_mask_image(found->second);
        const auto gt_mask = binary_from_id(gt_img, id);
        const auto pred_mask = multi ? binary_from_id(pred_img, id)
                                     : binary_any_foreground(pred_img);
        ev.frame_names[fi] = stem;
        ev.per_frame_j[fi] = jaccard(pred_mask, gt_mask);
        ev.per_frame_f[fi] =
            contour_f(pred_mask, gt_mask, options.boundary_tol);
        ev.per_frame_ape[fi] =
            ape(std::span{&pred_mask, 1}, std::span{&gt_mask, 1},
                options.ape_mode);
      });

      ev.j = aggregate(ev.per_frame_j);
      ev.f = aggregate(ev.per_frame_f);
      ev.ape = mean_of(ev.per_frame_ape);
      report.sequences.push_back(std::move(ev));
    }
  }
  if (report.sequences.empty())
    throw std::invalid_argument("no instances to evaluate");

  std::vector<double> jm, jr, jd, fm, fr, fd;
  for (const auto& ev : report.sequences) {
    jm.push_back(ev.j.mean);
    jr.push_back(ev.j.recall);
    jd.push_back(ev.j.decay);
    fm.push_back(ev.f.mean);
    fr.push_back(ev.f.recall);
    fd.push_back(ev.f.decay);
  }
  report.j_global = {mean_of(jm), mean_of(jr), mean_of(jd)};
  report.f_global = {mean_of(fm), mean_of(fr), mean_of(fd)};

  ordered_json j;
  j["global"] = ordered_json{{"J", stats_json(report.j_global)},
                             {"F", stats_json(report.f_global)}};
  j["sequences"] = ordered_json::array();
  for (const auto& ev : report.sequences) {
    ordered_json js;
    js["name"] = ev.name;
    js["J"] = stats_json(ev.j);
    js["F"] = stats_json(ev.f);
    js["APE"] = ev.ape;
    js["frames"] = ordered_json::array();
    for (std::size_t fi = 0; fi < ev.frame_names.size(); ++fi)
      js["frames"].push_back(ordered_json{{"name", ev.frame_names[fi]},
                                          {"J", ev.per_frame_j[fi]},
                                          {"F", ev.per_frame_f[fi]},
                                          {"APE", ev.per_frame_ape[fi]}});
    j["sequences"].push_back(std::move(js));
  }
  write_text_file(out_dir / "report.json", j.dump(2) + "\n");

  std::string csv = "sequence,frame,J,F,APE\n";
  for (const auto& ev : report.sequences)
    for (std::size_t fi = 0; fi < ev.frame_names.size(); ++fi)
      csv += ev.name + ',' + ev.frame_names[fi] + ',' +
             fixed6(ev.per_frame_j[fi]) + ',' + fixed6(ev.per_frame_f[fi]) +
             ',' + fixed6(ev.per_frame_ape[fi]) + '\n';
  write_text_file(out_dir / "report.csv", csv);
  return report;
}

}  // namespace raymask
