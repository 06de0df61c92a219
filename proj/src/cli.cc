#include "gaussground/cli.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gaussground/env.h"
#include "gaussground/geometry.h"
#include "gaussground/grpo.h"
#include "gaussground/rewards.h"
#include "gaussground/train.h"

#ifndef GAUSSGROUND_VERSION
#define GAUSSGROUND_VERSION "dev"
#endif

namespace gg::cli {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The "w/o adaptive sigma" sweep point when --fixed-sigma is not given.
constexpr double kDefaultFixedSigma = 25.0;
constexpr std::size_t kSmoothWindow = 5;

std::string num(double x) { return fmt::format("{:.9g}", x); }

using KeyValues = std::vector<std::pair<std::string, std::string>>;

void print_kv(std::ostream& os, const KeyValues& kv) {
  for (const auto& [k, v] : kv) os << k << '=' << v << '\n';
}

void write_kv(const fs::path& path, const KeyValues& kv) {
  std::ofstream os(path);
  if (!os) throw FileNotFound("cannot write " + path.string());
  print_kv(os, kv);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw FileNotFound("cannot write " + path.string());
  return os;
}

fs::path default_root() {
  const char* env = std::getenv("GAUSSGROUND_OUT");
  return (env != nullptr && *env != '\0') ? fs::path(env) : fs::path("runs");
}

std::vector<std::string> split(std::string_view s, char delim) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(delim, start);
    parts.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::optional<double> parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

BBox parse_box(const std::string& flag, const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4)
    throw UsageError(flag + ": expected x1,y1,x2,y2, got '" + text + "'");
  double c[4];
  for (int i = 0; i < 4; ++i) {
    const auto v = parse_number(parts[static_cast<std::size_t>(i)]);
    if (!v)
      throw UsageError(flag + ": '" + parts[static_cast<std::size_t>(i)] +
                       "' is not a finite number");
    c[i] = *v;
  }
  return BBox(c[0], c[1], c[2], c[3]);
}

// Every flag the subcommands share, bound straight into the configs.
struct Options {
  TrainConfig train;
  std::string variant = "gaussian";
  std::string optimizer = "adam";
  bool no_lr_decay = false;
  std::uint64_t seed = 0;
  std::string out_dir;

  // Reward config resolved from the flags.
  RewardConfig reward() const {
    RewardConfig r = train.reward;
    const auto v = parse_variant(variant);
    if (!v) throw UsageError("unknown reward variant '" + variant + "'");
    r.variant = *v;
    r.rng_seed = seed;
    return r;
  }

  TrainConfig resolved() const {
    TrainConfig c = train;
    c.reward = reward();
    if (optimizer == "adam") {
      c.grpo.optimizer = OptimizerKind::kAdam;
    } else if (optimizer == "sgd") {
      c.grpo.optimizer = OptimizerKind::kGradientAscent;
    } else {
      throw UsageError("unknown optimizer '" + optimizer + "'");
    }
    c.grpo.linear_decay = !no_lr_decay;
    c.grpo.seed = seed;
    c.generator.seed = seed;
    return c;
  }
};

void add_reward_flags(CLI::App* app, Options& o) {
  RewardConfig& r = o.train.reward;
  app->add_option("--variant,--reward", o.variant,
                  "gaussian | gaussian-point | gaussian-coverage | "
                  "sparse-point | sparse-iou | sparse-point+iou | "
                  "inside-gaussian | random-uniform | random-binary")
      ->capture_default_str();
  app->add_option("--alpha", r.alpha, "sigma = alpha * extent")
      ->capture_default_str();
  app->add_option("--nu", r.nu, "point reward weight")->capture_default_str();
  app->add_option("--gamma", r.gamma, "coverage reward weight")
      ->capture_default_str();
  app->add_option("--sigma-floor", r.sigma_floor)->capture_default_str();
  app->add_option("--fixed-sigma", r.fixed_sigma,
                  "fixed sigma in px for every element (0: adaptive)")
      ->capture_default_str();
  app->add_option("--iou-threshold", r.iou_threshold)->capture_default_str();
  app->add_flag("--format-bonus", r.format_bonus_enabled,
                "add the format reward to the total");
  app->add_option("--seed", o.seed)->capture_default_str();
}

void add_train_flags(CLI::App* app, Options& o) {
  GrpoConfig& g = o.train.grpo;
  TrainConfig& t = o.train;
  app->add_option("--beta", g.kl_beta, "KL penalty weight")->capture_default_str();
  app->add_option("--epsilon", g.clip_epsilon, "ratio clip")->capture_default_str();
  app->add_option("--group-size", g.group_size, "samples per task (N)")
      ->capture_default_str();
  app->add_option("--lr", g.learning_rate)->capture_default_str();
  app->add_option("--steps", g.steps)->capture_default_str();
  app->add_option("--optimizer", o.optimizer, "adam | sgd")->capture_default_str();
  app->add_flag("--no-lr-decay", o.no_lr_decay, "keep the learning rate constant");
  app->add_option("--max-grad-norm", g.max_grad_norm, "0 disables clipping")
      ->capture_default_str();
  app->add_option("--std-floor", g.std_floor)->capture_default_str();
  app->add_option("--n-train", t.n_train)->capture_default_str();
  app->add_option("--n-holdout", t.n_holdout)->capture_default_str();
  app->add_option("--n-probe", t.n_probe)->capture_default_str();
  app->add_option("--tasks-per-step", t.tasks_per_step)->capture_default_str();
  app->add_option("--trace-every", t.trace_every)->capture_default_str();
  app->add_option("--probe-samples", t.probe_samples)->capture_default_str();
  app->add_option("--init-log-std", t.init_log_std)->capture_default_str();
  app->add_option("--init-center-gain", t.init_center_gain)->capture_default_str();
  app->add_option("--init-size-gain", t.init_size_gain)->capture_default_str();
  app->add_option("--init-size-offset", t.init_size_offset)->capture_default_str();
  app->add_option("--screen-w", t.generator.screen_w)->capture_default_str();
  app->add_option("--screen-h", t.generator.screen_h)->capture_default_str();
  app->add_option("--out", o.out_dir, "output directory");
}

KeyValues reward_kv(const RewardConfig& r) {
  return {{"variant", std::string(variant_name(r.variant))},
          {"alpha", num(r.alpha)},
          {"nu", num(r.nu)},
          {"gamma", num(r.gamma)},
          {"sigma_floor", num(r.sigma_floor)},
          {"fixed_sigma", num(r.fixed_sigma)},
          {"iou_threshold", num(r.iou_threshold)},
          {"format_bonus", r.format_bonus_enabled ? "1" : "0"},
          {"reward_seed", std::to_string(r.rng_seed)}};
}

KeyValues train_manifest(const TrainConfig& c, const fs::path& dir,
                         const std::string& command) {
  KeyValues kv = {{"command", command}, {"version", GAUSSGROUND_VERSION}};
  for (auto& e : reward_kv(c.reward)) kv.push_back(std::move(e));
  const GrpoConfig& g = c.grpo;
  const KeyValues rest = {
      {"epsilon", num(g.clip_epsilon)},
      {"beta", num(g.kl_beta)},
      {"group_size", std::to_string(g.group_size)},
      {"lr", num(g.learning_rate)},
      {"optimizer", g.optimizer == OptimizerKind::kAdam ? "adam" : "sgd"},
      {"lr_decay", g.linear_decay ? "linear" : "none"},
      {"max_grad_norm", num(g.max_grad_norm)},
      {"std_floor", num(g.std_floor)},
      {"steps", std::to_string(g.steps)},
      {"seed", std::to_string(g.seed)},
      {"generator_seed", std::to_string(c.generator.seed)},
      {"screen_w", num(c.generator.screen_w)},
      {"screen_h", num(c.generator.screen_h)},
      {"n_train", std::to_string(c.n_train)},
      {"n_holdout", std::to_string(c.n_holdout)},
      {"n_probe", std::to_string(c.n_probe)},
      {"tasks_per_step", std::to_string(c.tasks_per_step)},
      {"trace_every", std::to_string(c.trace_every)},
      {"probe_samples", std::to_string(c.probe_samples)},
      {"init_log_std", num(c.init_log_std)},
      {"init_center_gain", num(c.init_center_gain)},
      {"init_size_gain", num(c.init_size_gain)},
      {"init_size_offset", num(c.init_size_offset)},
      {"metrics", (dir / "metrics.csv").string()},
      {"trace", (dir / "trace.csv").string()},
      {"checkpoint", (dir / "checkpoint.txt").string()},
      {"summary", (dir / "summary.txt").string()},
  };
  kv.insert(kv.end(), rest.begin(), rest.end());
  return kv;
}

struct TraceStats {
  double initial = 0.0;
  double final = 0.0;
  double smoothed_tv = 0.0;
  bool smoothed_monotone = true;
};

TraceStats trace_stats(const std::vector<TracePoint>& trace) {
  TraceStats s;
  const auto d = trace_distances(trace);
  if (d.empty()) return s;
  s.initial = d.front();
  s.final = d.back();
  const auto sm = moving_average(d, kSmoothWindow);
  s.smoothed_tv = total_variation(sm);
  s.smoothed_monotone = is_non_increasing(sm);
  return s;
}

// Runs one training job into `dir`: manifest first, then metrics (streamed),
// trace, checkpoint and summary.
TrainResult train_into(const TrainConfig& cfg, const fs::path& dir,
                       const std::string& command) {
  cfg.validate();
  fs::create_directories(dir);
  write_kv(dir / "manifest.txt", train_manifest(cfg, dir, command));

  std::ofstream metrics = open_out(dir / "metrics.csv");
  metrics << "step,mean_reward,reward_std,kl,grad_norm,holdout_accuracy,"
             "probe_distance\n";
  const TrainResult result = run_training(cfg, [&](const MetricsRow& r) {
    metrics << r.step << ',' << num(r.mean_reward) << ',' << num(r.reward_std)
            << ',' << num(r.kl) << ',' << num(r.grad_norm) << ','
            << num(r.holdout_accuracy) << ',' << num(r.probe_distance) << '\n';
  });
  metrics.close();

  std::ofstream trace = open_out(dir / "trace.csv");
  trace << "step,mean_distance\n";
  for (const auto& p : result.trace)
    trace << p.step << ',' << num(p.mean_distance) << '\n';
  trace.close();

  std::ofstream ckpt = open_out(dir / "checkpoint.txt");
  result.policy.save(ckpt);
  ckpt.close();

  const TraceStats ts = trace_stats(result.trace);
  write_kv(dir / "summary.txt",
           {{"baseline_accuracy", num(result.baseline_accuracy)},
            {"final_accuracy", num(result.final_accuracy)},
            {"initial_probe_distance", num(ts.initial)},
            {"final_probe_distance", num(ts.final)},
            {"smoothed_trace_tv", num(ts.smoothed_tv)},
            {"smoothed_trace_monotone", ts.smoothed_monotone ? "1" : "0"}});
  return result;
}

KeyValues breakdown_kv(const RewardBreakdown& b) {
  return {{"variant", std::string(variant_name(b.variant))},
          {"point", num(b.point)},
          {"coverage", num(b.coverage)},
          {"format", num(b.format)},
          {"total", num(b.total)}};
}

KeyValues sparse_kv(const BBox& pred, const BBox& gt, const RewardConfig& cfg) {
  return {{"sparse_point", num(sparse_point_reward(pred, gt))},
          {"sparse_iou", num(sparse_iou_reward(pred, gt, cfg))},
          {"sparse_point_plus_iou", num(sparse_point_plus_iou_reward(pred, gt, cfg))},
          {"inside_gaussian", num(inside_gaussian_reward(pred, gt, cfg))},
          {"iou", num(iou(pred, gt))}};
}

struct RewardArgs {
  std::string pred;
  std::string gt;
  std::optional<std::string> pred_raw;
  std::string file;
  bool sparse = false;
};

int cmd_reward(const Options& o, const RewardArgs& a, std::ostream& out) {
  const RewardConfig cfg = o.reward();
  cfg.validate();
  if (!a.file.empty()) {
    const auto records = load_annotations(a.file);
    for (const auto& rec : records) {
      out << "line=" << rec.line << '\n';
      if (!rec.pred) {
        out << "malformed=1\n";
        continue;
      }
      RewardRng rng(cfg.rng_seed, rec.line);
      print_kv(out, breakdown_kv(compute_reward(*rec.pred, rec.gt, cfg, &rng,
                                                rec.format)));
      if (a.sparse) print_kv(out, sparse_kv(*rec.pred, rec.gt, cfg));
    }
    return kOk;
  }
  if (a.gt.empty()) throw UsageError("--gt is required (or use --file)");
  const BBox gt = parse_box("--gt", a.gt);
  double format = 1.0;
  BBox pred;
  if (!a.pred.empty()) {
    pred = parse_box("--pred", a.pred);
    if (a.pred_raw) format = format_reward(*a.pred_raw);
  } else if (a.pred_raw) {
    format = format_reward(*a.pred_raw);
    if (format == 0.0)
      throw UsageError("--pred-raw: '" + *a.pred_raw +
                       "' is not a bracketed list of 4 numbers");
    std::string inner = *a.pred_raw;
    const auto l = inner.find('['), r = inner.rfind(']');
    pred = parse_box("--pred-raw", inner.substr(l + 1, r - l - 1));
  } else {
    throw UsageError("--pred or --pred-raw is required (or use --file)");
  }
  RewardRng rng(cfg.rng_seed, 0);
  print_kv(out, breakdown_kv(compute_reward(pred, gt, cfg, &rng, format)));
  if (a.sparse) print_kv(out, sparse_kv(pred, gt, cfg));
  return kOk;
}

int cmd_score(const Options& o, const std::string& annotations,
              std::ostream& out) {
  const RewardConfig cfg = o.reward();
  cfg.validate();
  const fs::path dir = o.out_dir.empty() ? default_root() / "score" : fs::path(o.out_dir);
  const auto records = load_annotations(annotations);
  if (records.empty()) throw EmptyInput("no records in " + annotations);

  fs::create_directories(dir);
  KeyValues manifest = {{"command", "score"},
                        {"version", GAUSSGROUND_VERSION},
                        {"annotations", annotations}};
  for (auto& e : reward_kv(cfg)) manifest.push_back(std::move(e));
  manifest.emplace_back("samples", (dir / "samples.csv").string());
  manifest.emplace_back("report", (dir / "report.txt").string());
  write_kv(dir / "manifest.txt", manifest);

  std::vector<EvalPair> pairs;
  pairs.reserve(records.size());
  std::ofstream samples = open_out(dir / "samples.csv");
  samples << "line,kind,well_formed,hit,center_distance,point,coverage,format,"
             "total\n";
  double reward_sum = 0.0;
  for (const auto& rec : records) {
    pairs.push_back({rec.pred, rec.gt, rec.kind});
    samples << rec.line << ',' << kind_name(rec.kind) << ',';
    if (!rec.pred) {
      samples << "0,0,nan,0,0," << num(rec.format) << ",0\n";
      continue;
    }
    RewardRng rng(cfg.rng_seed, rec.line);
    const RewardBreakdown b = compute_reward(*rec.pred, rec.gt, cfg, &rng, rec.format);
    reward_sum += b.total;
    samples << "1," << (contains(rec.gt, center(*rec.pred)) ? 1 : 0) << ','
            << num(center_distance(*rec.pred, rec.gt)) << ',' << num(b.point)
            << ',' << num(b.coverage) << ',' << num(rec.format) << ','
            << num(b.total) << '\n';
  }
  samples.close();

  const EvalReport rep = evaluate(pairs);
  KeyValues report = {{"n", std::to_string(rep.n)},
                      {"hits", std::to_string(rep.hits)},
                      {"accuracy", num(rep.accuracy)},
                      {"malformed", std::to_string(rep.malformed)},
                      {"mean_center_distance", num(rep.mean_center_distance)},
                      {"mean_reward", num(reward_sum / static_cast<double>(rep.n))}};
  for (std::size_t k = 0; k < kNumKinds; ++k) {
    const KindTally& t = rep.per_kind[k];
    if (t.n == 0) continue;
    const std::string name(kind_name(static_cast<ElementKind>(k)));
    report.emplace_back("n_" + name, std::to_string(t.n));
    report.emplace_back("accuracy_" + name,
                        num(static_cast<double>(t.hits) / static_cast<double>(t.n)));
  }
  write_kv(dir / "report.txt", report);
  print_kv(out, report);
  return kOk;
}

int cmd_train(const Options& o, std::ostream& out) {
  const TrainConfig cfg = o.resolved();
  const fs::path dir = o.out_dir.empty() ? default_root() / "train" : fs::path(o.out_dir);
  const TrainResult r = train_into(cfg, dir, "train");
  const TraceStats ts = trace_stats(r.trace);
  print_kv(out, {{"out", dir.string()},
                 {"baseline_accuracy", num(r.baseline_accuracy)},
                 {"final_accuracy", num(r.final_accuracy)},
                 {"initial_probe_distance", num(ts.initial)},
                 {"final_probe_distance", num(ts.final)}});
  return kOk;
}

struct SweepPoint {
  std::string label;
  TrainConfig cfg;
};

std::vector<SweepPoint> sweep_points(const std::string& axis,
                                     const std::string& grid,
                                     const TrainConfig& base) {
  std::string g = grid;
  if (g.empty()) {
    if (axis == "alpha") g = "0.25,0.5,1,2,3,fixed";
    else if (axis == "weights") g = "1:1,0.8:0.2,0.2:0.8";
    else g = "gaussian,sparse-point,sparse-iou,sparse-point+iou,inside-gaussian";
  }
  std::vector<SweepPoint> points;
  for (const std::string& item : split(g, ',')) {
    if (item.empty()) throw UsageError("--grid: empty entry");
    SweepPoint p{item, base};
    RewardConfig& r = p.cfg.reward;
    if (axis == "alpha") {
      if (item == "fixed") {
        if (!(r.fixed_sigma > 0.0)) r.fixed_sigma = kDefaultFixedSigma;
      } else {
        const auto v = parse_number(item);
        if (!v) throw UsageError("--grid: bad alpha '" + item + "'");
        r.alpha = *v;
        r.fixed_sigma = 0.0;
      }
    } else if (axis == "weights") {
      const auto nw = split(item, ':');
      const auto nu = nw.size() == 2 ? parse_number(nw[0]) : std::nullopt;
      const auto gamma = nw.size() == 2 ? parse_number(nw[1]) : std::nullopt;
      if (!nu || !gamma) throw UsageError("--grid: weights must be nu:gamma, got '" + item + "'");
      r.nu = *nu;
      r.gamma = *gamma;
    } else {
      const auto v = parse_variant(item);
      if (!v) throw UsageError("--grid: unknown variant '" + item + "'");
      r.variant = *v;
    }
    points.push_back(std::move(p));
  }
  return points;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

std::string dir_label(std::string s) {
  for (char& c : s)
    if (c == '/' || c == ':') c = '_';
  return s;
}

int cmd_sweep(const Options& o, const std::string& axis, const std::string& grid,
              int n_seeds, std::ostream& out, std::ostream& err) {
  if (axis != "alpha" && axis != "weights" && axis != "variant")
    throw UsageError("--axis must be alpha, weights or variant");
  if (n_seeds < 1) throw UsageError("--seeds must be >= 1");
  const TrainConfig base = o.resolved();
  const std::vector<SweepPoint> points = sweep_points(axis, grid, base);
  const fs::path dir =
      o.out_dir.empty() ? default_root() / ("sweep-" + axis) : fs::path(o.out_dir);
  fs::create_directories(dir);

  KeyValues manifest = train_manifest(base, dir, "sweep");
  manifest.resize(manifest.size() - 4);  // per-run paths live in the run dirs
  manifest.emplace_back("axis", axis);
  std::string labels;
  for (const auto& p : points) labels += (labels.empty() ? "" : ";") + p.label;
  manifest.emplace_back("grid", labels);
  manifest.emplace_back("seeds", std::to_string(n_seeds));
  manifest.emplace_back("summary", (dir / "summary.csv").string());
  write_kv(dir / "manifest.txt", manifest);

  std::ofstream summary = open_out(dir / "summary.csv");
  summary << "point,variant,alpha,fixed_sigma,nu,gamma,seeds,failures,"
             "accuracy_mean,accuracy_std,probe_distance_mean,trace_tv_mean,"
             "error\n";
  for (const auto& p : points) {
    std::vector<double> acc, probe, tv;
    int failures = 0;
    std::string first_error;
    for (int s = 0; s < n_seeds; ++s) {
      TrainConfig cfg = p.cfg;
      const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(s);
      cfg.grpo.seed = seed;
      cfg.generator.seed = seed;
      cfg.reward.rng_seed = seed;
      const fs::path run_dir =
          dir / dir_label(p.label) / ("seed-" + std::to_string(seed));
      try {
        const TrainResult r = train_into(cfg, run_dir, "sweep");
        const TraceStats ts = trace_stats(r.trace);
        acc.push_back(r.final_accuracy);
        probe.push_back(ts.final);
        tv.push_back(ts.smoothed_tv);
      } catch (const std::exception& e) {
        ++failures;
        if (first_error.empty()) first_error = e.what();
        err << "sweep point " << p.label << " seed " << seed
            << " failed: " << e.what() << '\n';
      }
    }
    auto mean = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return v.empty() ? std::nan("") : s / static_cast<double>(v.size());
    };
    const double acc_mean = mean(acc);
    double ss = 0.0;
    for (double x : acc) ss += (x - acc_mean) * (x - acc_mean);
    const double acc_std =
        acc.empty() ? std::nan("") : std::sqrt(ss / static_cast<double>(acc.size()));
    const RewardConfig& r = p.cfg.reward;
    const std::string row = fmt::format(
        "{},{},{},{},{},{},{},{},{},{},{},{},{}", sanitize(p.label),
        variant_name(r.variant), num(r.alpha), num(r.fixed_sigma), num(r.nu),
        num(r.gamma), n_seeds, failures, num(acc_mean), num(acc_std),
        num(mean(probe)), num(mean(tv)), sanitize(first_error));
    summary << row << '\n';
    out << row << '\n';
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Gaussian grounding rewards and GRPO training", "gaussground"};
  app.set_version_flag("--version", GAUSSGROUND_VERSION);
  app.require_subcommand(1);

  Options o;
  RewardArgs ra;
  std::string annotations;
  std::string axis = "variant";
  std::string grid;
  int n_seeds = 10;

  CLI::App* reward = app.add_subcommand("reward", "score one prediction");
  reward->add_option("--pred", ra.pred, "x1,y1,x2,y2");
  reward->add_option("--gt", ra.gt, "x1,y1,x2,y2");
  reward->add_option("--pred-raw", ra.pred_raw, "raw model output, e.g. [1,2,3,4]");
  reward->add_option("--file", ra.file, "annotation file (JSON lines)");
  reward->add_flag("--sparse", ra.sparse, "also print the sparse baselines");
  add_reward_flags(reward, o);

  CLI::App* score = app.add_subcommand("score", "evaluate an annotation file");
  score->add_option("--annotations", annotations, "JSON lines file")->required();
  score->add_option("--out", o.out_dir, "output directory");
  add_reward_flags(score, o);

  CLI::App* train = app.add_subcommand("train", "GRPO training on synthetic tasks");
  add_reward_flags(train, o);
  add_train_flags(train, o);

  CLI::App* sweep = app.add_subcommand("sweep", "multi-seed ablation sweep");
  sweep->add_option("--axis", axis, "alpha | weights | variant")->capture_default_str();
  sweep->add_option("--grid", grid,
                    "comma-separated points (alpha values or 'fixed', nu:gamma "
                    "pairs, variant names)");
  sweep->add_option("--seeds", n_seeds, "seeds per point")->capture_default_str();
  add_reward_flags(sweep, o);
  add_train_flags(sweep, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (reward->parsed()) return cmd_reward(o, ra, out);
    if (score->parsed()) return cmd_score(o, annotations, out);
    if (train->parsed()) return cmd_train(o, out);
    return cmd_sweep(o, axis, grid, n_seeds, out, err);
  } catch (const NonFiniteGradient& e) {
    err << "numerical failure (task " << e.task_id() << "): " << e.what() << '\n';
    return kNumericalError;
  } catch (const MalformedRecord& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const FileNotFound& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const EmptyInput& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace gg::cli
