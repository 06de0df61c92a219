#ifndef GAUSSGROUND_ENV_H_
#define GAUSSGROUND_ENV_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gaussground/geometry.h"
#include "gaussground/policy.h"

namespace gg {

class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FileNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedRecord : public std::runtime_error {
 public:
  MalformedRecord(std::size_t line, const std::string& why)
      : std::runtime_error("line " + std::to_string(line) + ": " + why),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ElementKind { kText, kIcon, kWidget, kUnknown };
inline constexpr std::size_t kNumKinds = 4;

std::string_view kind_name(ElementKind k);
std::optional<ElementKind> parse_kind(std::string_view name);

// Feature layout: logit of normalized gt center (x, y), log of normalized gt
// size (w, h), kind one-hot (text, icon, widget), distractors / 32.
inline constexpr std::size_t kFeatureDim = 8;

struct TaskInstance {
  std::uint64_t task_id = 0;
  double screen_w = 0.0;
  double screen_h = 0.0;
  BBox gt_box;
  std::vector<double> features;
  ElementKind element_kind = ElementKind::kText;
  int distractors = 0;

  Screen screen() const { return {screen_w, screen_h}; }
};

struct GeneratorConfig {
  std::uint64_t seed = 0;
  int n_tasks = 1000;
  double screen_w = 1920.0;
  double screen_h = 1080.0;
  double min_w = 8.0, min_h = 8.0;
  double max_w = 512.0, max_h = 512.0;
  // text, icon, widget
  std::array<double, 3> kind_mix = {0.5, 0.3, 0.2};
  int min_distractors = 0;
  int max_distractors = 32;

  void validate() const;  // throws InvalidConfig
};

std::vector<double> task_features(const BBox& gt, const Screen& screen,
                                  ElementKind kind, int distractors);

// Deterministic for a given config: sizes log-uniform in the configured
// range, positions uniform subject to the box lying on screen.
std::vector<TaskInstance> generate(const GeneratorConfig& cfg);

struct AnnotationRecord {
  std::size_t line = 0;
  BBox gt;
  std::optional<BBox> pred;  // nullopt: missing or malformed prediction
  std::optional<std::string> pred_raw;
  ElementKind kind = ElementKind::kUnknown;
  double format = 0.0;  // format reward of the prediction
};

// Line-delimited JSON: {"gt":[4], "pred":[4]?, "pred_raw":str?, "kind":str?}.
// Blank lines are skipped. Throws FileNotFound or MalformedRecord.
std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path);
std::vector<AnnotationRecord> parse_annotations(std::string_view text);

struct EvalPair {
  std::optional<BBox> pred;
  BBox gt;
  ElementKind kind = ElementKind::kUnknown;
};

struct KindTally {
  std::size_t hits = 0;
  std::size_t n = 0;
};

struct EvalReport {
  double accuracy = 0.0;
  // Over well-formed predictions only; 0 when there are none.
  double mean_center_distance = 0.0;
  std::array<KindTally, kNumKinds> per_kind{};
  std::size_t n = 0;
  std::size_t hits = 0;
  std::size_t malformed = 0;
};

// Center-in-box accuracy; malformed predictions count as misses.
// Throws EmptyInput.
EvalReport evaluate(const std::vector<EvalPair>& pairs);

namespace reference {
EvalReport evaluate(const std::vector<EvalPair>& pairs);
}

// Greedy (mean-action) center-hit accuracy of a policy on tasks.
double greedy_accuracy(const GaussianBoxPolicy& policy,
                       const std::vector<TaskInstance>& tasks);

// Mean center distance over n_samples sampled predictions per task. Noise is
// drawn from streams keyed by (seed, task, sample) only, so repeated probes of
// different policy snapshots share the same noise.
double probe_mean_distance(const GaussianBoxPolicy& policy,
                           const std::vector<TaskInstance>& tasks,
                           int n_samples, std::uint64_t seed);

// The `count` tasks with the largest probe distance under `policy`.
std::vector<TaskInstance> select_probe_tasks(
    const GaussianBoxPolicy& policy, const std::vector<TaskInstance>& pool,
    std::size_t count, int n_samples, std::uint64_t seed);

struct TracePoint {
  int step = 0;
  double mean_distance = 0.0;
};

// Records the probe distance every `every_k_steps` training steps.
class DistanceTrace {
 public:
  DistanceTrace(std::vector<TaskInstance> probes, int every_k_steps,
                int n_samples, std::uint64_t seed);

  // Records and returns true when step is a multiple of every_k_steps.
  bool maybe_record(int step, const GaussianBoxPolicy& policy);
  double measure(const GaussianBoxPolicy& policy) const;

  const std::vector<TracePoint>& points() const { return points_; }
  const std::vector<TaskInstance>& probes() const { return probes_; }

 private:
  std::vector<TaskInstance> probes_;
  int every_k_steps_;
  int n_samples_;
  std::uint64_t seed_;
  std::vector<TracePoint> points_;
};

}  // namespace gg

#endif  // GAUSSGROUND_ENV_H_
