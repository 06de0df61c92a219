#include "gaussground/env.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "gaussground/rewards.h"
#include "gaussground/rng.h"
#include "json.hpp"

namespace gg {
namespace {

constexpr std::string_view kKindNames[kNumKinds] = {"text", "icon", "widget",
                                                    "unknown"};

double logit(double p) {
  p = std::clamp(p, 1e-6, 1.0 - 1e-6);
  return std::log(p / (1.0 - p));
}

std::optional<BBox> box_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4) return std::nullopt;
  std::array<double, 4> v{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[i].is_number()) return std::nullopt;
    v[i] = j[i].get<double>();
    if (!std::isfinite(v[i])) return std::nullopt;
  }
  return BBox(v[0], v[1], v[2], v[3]);
}

// Parses "[x1, y1, x2, y2]" after format_reward has accepted it.
std::optional<BBox> box_from_text(const std::string& raw) {
  if (format_reward(raw) != 1.0) return std::nullopt;
  try {
    return box_from_json(nlohmann::json::parse(raw));
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::string_view kind_name(ElementKind k) {
  return kKindNames[static_cast<std::size_t>(k)];
}

std::optional<ElementKind> parse_kind(std::string_view name) {
  for (std::size_t i = 0; i < kNumKinds; ++i)
    if (kKindNames[i] == name) return static_cast<ElementKind>(i);
  return std::nullopt;
}

void GeneratorConfig::validate() const {
  if (n_tasks < 0) throw InvalidConfig("n_tasks must be >= 0");
  if (!(screen_w >= 1.0 && screen_h >= 1.0))
    throw InvalidConfig("screen must be at least 1x1 px");
  if (!(min_w > 0.0 && min_h > 0.0 && min_w <= max_w && min_h <= max_h))
    throw InvalidConfig("element size range must be positive and ordered");
  if (max_w > screen_w || max_h > screen_h)
    throw InvalidConfig("element size range exceeds the screen");
  double total = 0.0;
  for (double p : kind_mix) {
    if (!(p >= 0.0)) throw InvalidConfig("kind proportions must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw InvalidConfig("kind proportions must sum to 1");
  if (min_distractors < 0 || min_distractors > max_distractors)
    throw InvalidConfig("distractor range must be non-negative and ordered");
}

std::vector<double> task_features(const BBox& gt, const Screen& screen,
                                  ElementKind kind, int distractors) {
  const Point2 c = center(gt);
  std::vector<double> f(kFeatureDim, 0.0);
  f[0] = logit(c.x / screen.width);
  f[1] = logit(c.y / screen.height);
  f[2] = std::log(std::max(gt.width(), 1e-6) / screen.width);
  f[3] = std::log(std::max(gt.height(), 1e-6) / screen.height);
  if (kind != ElementKind::kUnknown) f[4 + static_cast<std::size_t>(kind)] = 1.0;
  f[7] = static_cast<double>(distractors) / 32.0;
  return f;
}

std::vector<TaskInstance> generate(const GeneratorConfig& cfg) {
  cfg.validate();
  std::vector<TaskInstance> tasks;
  tasks.reserve(static_cast<std::size_t>(cfg.n_tasks));
  const Screen screen{cfg.screen_w, cfg.screen_h};
  for (int i = 0; i < cfg.n_tasks; ++i) {
    Engine eng = make_engine(cfg.seed, {0x7a5c, static_cast<std::uint64_t>(i)});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto log_uniform = [&](double lo, double hi) {
      if (lo == hi) return lo;
      const double v = std::exp(std::log(lo) + unit(eng) * (std::log(hi) - std::log(lo)));
      return std::clamp(v, lo, hi);
    };
    const double w = log_uniform(cfg.min_w, cfg.max_w);
    const double h = log_uniform(cfg.min_h, cfg.max_h);
    const double x1 = unit(eng) * (cfg.screen_w - w);
    const double y1 = unit(eng) * (cfg.screen_h - h);
    const double k = unit(eng);
    ElementKind kind = ElementKind::kWidget;
    if (k < cfg.kind_mix[0]) {
      kind = ElementKind::kText;
    } else if (k < cfg.kind_mix[0] + cfg.kind_mix[1]) {
      kind = ElementKind::kIcon;
    }
    std::uniform_int_distribution<int> dist(cfg.min_distractors, cfg.max_distractors);
    const int distractors = dist(eng);

    TaskInstance t;
    t.task_id = static_cast<std::uint64_t>(i);
    t.screen_w = cfg.screen_w;
    t.screen_h = cfg.screen_h;
    t.gt_box = BBox(x1, y1, x1 + w, y1 + h);
    t.element_kind = kind;
    t.distractors = distractors;
    t.features = task_features(t.gt_box, screen, kind, distractors);
    tasks.push_back(std::move(t));
  }
  return tasks;
}

std::vector<AnnotationRecord> parse_annotations(std::string_view text) {
  std::vector<AnnotationRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw MalformedRecord(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw MalformedRecord(line_no, "record is not an object");
    if (!j.contains("gt")) throw MalformedRecord(line_no, "missing gt");
    const std::optional<BBox> gt = box_from_json(j["gt"]);
    if (!gt) throw MalformedRecord(line_no, "gt must be 4 finite numbers");

    AnnotationRecord rec;
    rec.line = line_no;
    rec.gt = *gt;
    if (j.contains("kind")) {
      if (!j["kind"].is_string())
        throw MalformedRecord(line_no, "kind must be a string");
      rec.kind = parse_kind(j["kind"].get<std::string>()).value_or(ElementKind::kUnknown);
    }
    if (j.contains("pred_raw")) {
      if (!j["pred_raw"].is_string())
        throw MalformedRecord(line_no, "pred_raw must be a string");
      rec.pred_raw = j["pred_raw"].get<std::string>();
    }
    if (j.contains("pred")) {
      rec.pred = box_from_json(j["pred"]);
      rec.format = rec.pred ? 1.0 : 0.0;
      if (rec.pred_raw) rec.format = format_reward(*rec.pred_raw);
    } else if (rec.pred_raw) {
      rec.pred = box_from_text(*rec.pred_raw);
      rec.format = format_reward(*rec.pred_raw);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound("cannot open annotation file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_annotations(buf.str());
}

namespace {

EvalReport tally(const std::vector<EvalPair>& pairs,
                 const std::vector<unsigned char>& hit,
                 const std::vector<double>& dist) {
  EvalReport r;
  r.n = pairs.size();
  double dist_sum = 0.0;
  std::size_t formed = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto& k = r.per_kind[static_cast<std::size_t>(pairs[i].kind)];
    ++k.n;
    if (!pairs[i].pred) {
      ++r.malformed;
      continue;
    }
    ++formed;
    dist_sum += dist[i];
    if (hit[i]) {
      ++r.hits;
      ++k.hits;
    }
  }
  r.accuracy = static_cast<double>(r.hits) / static_cast<double>(r.n);
  r.mean_center_distance = formed > 0 ? dist_sum / static_cast<double>(formed) : 0.0;
  return r;
}

}  // namespace

EvalReport evaluate(const std::vector<EvalPair>& pairs) {
  if (pairs.empty()) throw EmptyInput("evaluate: no pairs");
  std::vector<unsigned char> hit(pairs.size(), 0);
  std::vector<double> dist(pairs.size(), 0.0);
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const EvalPair& p = pairs[static_cast<std::size_t>(i)];
    if (!p.pred) continue;
    hit[static_cast<std::size_t>(i)] = contains(p.gt, center(*p.pred)) ? 1 : 0;
    dist[static_cast<std::size_t>(i)] = center_distance(*p.pred, p.gt);
  }
  return tally(pairs, hit, dist);
}

namespace reference {

EvalReport evaluate(const std::vector<EvalPair>& pairs) {
  if (pairs.empty()) throw EmptyInput("evaluate: no pairs");
  std::vector<unsigned char> hit(pairs.size(), 0);
  std::vector<double> dist(pairs.size(), 0.0);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!pairs[i].pred) continue;
    hit[i] = contains(pairs[i].gt, center(*pairs[i].pred)) ? 1 : 0;
    dist[i] = center_distance(*pairs[i].pred, pairs[i].gt);
  }
  return tally(pairs, hit, dist);
}

}  // namespace reference

double greedy_accuracy(const GaussianBoxPolicy& policy,
                       const std::vector<TaskInstance>& tasks) {
  if (tasks.empty()) return 0.0;
  std::size_t hits = 0;
  const auto n = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(static) reduction(+ : hits)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const TaskInstance& t = tasks[static_cast<std::size_t>(i)];
    const BBox pred = decode(policy.mean_action(t.features), t.screen());
    if (contains(t.gt_box, center(pred))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(tasks.size());
}

double probe_mean_distance(const GaussianBoxPolicy& policy,
                           const std::vector<TaskInstance>& tasks,
                           int n_samples, std::uint64_t seed) {
  if (tasks.empty() || n_samples <= 0) return 0.0;
  std::vector<double> per_task(tasks.size(), 0.0);
  const auto n = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const TaskInstance& t = tasks[static_cast<std::size_t>(i)];
    double sum = 0.0;
    for (int s = 0; s < n_samples; ++s) {
      Engine eng = make_engine(seed, {0x9b0be, t.task_id, static_cast<std::uint64_t>(s)});
      const ActionSample a = policy.sample(t.features, t.screen(), eng);
      sum += center_distance(a.pred_box, t.gt_box);
    }
    per_task[static_cast<std::size_t>(i)] = sum;
  }
  const double total = std::accumulate(per_task.begin(), per_task.end(), 0.0);
  return total / static_cast<double>(tasks.size() * static_cast<std::size_t>(n_samples));
}

std::vector<TaskInstance> select_probe_tasks(
    const GaussianBoxPolicy& policy, const std::vector<TaskInstance>& pool,
    std::size_t count, int n_samples, std::uint64_t seed) {
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i)
    scored.emplace_back(probe_mean_distance(policy, {pool[i]}, n_samples, seed), i);
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<TaskInstance> out;
  for (std::size_t i = 0; i < std::min(count, scored.size()); ++i)
    out.push_back(pool[scored[i].second]);
  return out;
}

DistanceTrace::DistanceTrace(std::vector<TaskInstance> probes,
                             int every_k_steps, int n_samples,
                             std::uint64_t seed)
    : probes_(std::move(probes)),
      every_k_steps_(every_k_steps),
      n_samples_(n_samples),
      seed_(seed) {
  if (every_k_steps_ <= 0) throw InvalidConfig("trace interval must be > 0");
}

double DistanceTrace::measure(const GaussianBoxPolicy& policy) const {
  return probe_mean_distance(policy, probes_, n_samples_, seed_);
}

bool DistanceTrace::maybe_record(int step, const GaussianBoxPolicy& policy) {
  if (step % every_k_steps_ != 0) return false;
  points_.push_back({step, measure(policy)});
  return true;
}

}  // namespace gg
