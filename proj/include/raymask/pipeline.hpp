#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "raymask/metrics.hpp"
#include "raymask/polar.hpp"

namespace raymask {

enum class Layout { davis, flat };

struct SequenceEntry {
  std::string name;
  std::vector<std::filesystem::path> frames;  // annotation masks, sorted
  std::vector<int> instance_ids;              // union over frames
};

struct DatasetIndex {
  std::filesystem::path root;
  Layout layout = Layout::davis;
  std::vector<SequenceEntry> sequences;
};

// Scans the annotation tree and validates that every mask is readable.
// davis layout: <root>/Annotations/<sequence>/<frame>.png
// flat layout:  <root>/<sequence>/<frame>.{png,pbm}, or mask files directly
// under <root> forming a single sequence.
DatasetIndex ingest(const std::filesystem::path& root, Layout layout);

struct InstanceLabelSummary {
  std::string sequence;
  int instance_id = 0;
  int frame_count = 0;
  int encoded = 0;
  std::vector<std::string> skipped_frames;  // frames with no instance pixels
  std::vector<double> per_frame_iou;        // encode-decode IoU, encoded frames
  double mean_iou = 0.0;
  std::filesystem::path output_file;
};

struct LabelSummary {
  int rays = 0;
  double mu = 0.0;
  std::vector<InstanceLabelSummary> instances;
};

// Writes one JSON-lines file per (sequence, instance) of mass-centered polar
// masks, plus a summary.json. Frames where the instance is absent are skipped
// and recorded.
LabelSummary generate_labels(const DatasetIndex& index, int rays, double mu,
                             const std::filesystem::path& out_dir,
                             int jobs = 0);

struct SweepSpec {
  enum class Param { mu, rays };
  Param param = Param::mu;
  std::vector<double> values;
  int rays = 36;    // held fixed when sweeping mu
  double mu = 0.5;  // held fixed when sweeping rays
};

struct SweepRow {
  double value = 0.0;
  std::string video;  // sequence name, or "all" for the cross-video average
  double mean_iou = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
};

// Encode-decode upper-bound study: per sweep value, the mean IoU between
// ground truth and its round-tripped polar form for every video, plus an
// unweighted "all" average. Written as sweep.csv under out_dir.
SweepReport sweep(const DatasetIndex& index, const SweepSpec& spec,
                  const std::filesystem::path& out_dir, int jobs = 0);

// Per-frame series plus aggregates; name is "<sequence>" or
// "<sequence>#<id>" when the sequence carries several instances.
struct SequenceEval : SequenceResult {
  std::vector<std::string> frame_names;
  AggregateStats j;
  AggregateStats f;
  double ape = 0.0;  // mean of per-frame |M \ G|
};

struct EvalOptions {
  double boundary_tol = 1.0;
  ApeMode ape_mode = ApeMode::one_sided;
  int jobs = 0;
};

struct EvalReport {
  std::vector<SequenceEval> sequences;
  AggregateStats j_global;  // unweighted means over sequences
  AggregateStats f_global;
};

// Scores predicted masks against the ground-truth index, writing report.json
// and report.csv under out_dir. Predictions mirror the sequence layout:
// <pred_root>/<sequence>/<frame>.{png,pbm}.
EvalReport evaluate(const std::filesystem::path& pred_root,
                    const DatasetIndex& gt,
                    const std::filesystem::path& out_dir,
                    const EvalOptions& options = {});

}  // namespace raymask
