// telephantom command-line front end.
//
// Log level: TELEPHANTOM_LOG_LEVEL=trace|debug|info|warn|error|off (default info).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "telephantom/error.hpp"
#include "telephantom/evaluation.hpp"
#include "telephantom/io_streams.hpp"
#include "telephantom/model_io.hpp"
#include "telephantom/replay.hpp"
#include "telephantom/server.hpp"
#include "telephantom/training.hpp"

namespace fs = std::filesystem;
using namespace telephantom;

namespace {

void configure_logging() {
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("TELEPHANTOM_LOG_LEVEL")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

SceneConfig scene_or_bundled(const std::string& path) {
  return load_scene(path.empty() ? bundled_scene_path() : fs::path(path));
}

KinematicModel model_or_bundled(const std::string& path) {
  return path.empty() ? bundled_hand() : load_model(path);
}

struct TrainArgs {
  std::string model;
  Eigen::Index n = 200000;
  std::uint64_t seed = 1;
  TrainingConfig config;
  std::string out;
  std::string log;
};

void add_train_flags(CLI::App* cmd, TrainArgs& a) {
  cmd->add_option("--model", a.model, "hand model JSON (default: bundled hand)");
  cmd->add_option("--n", a.n, "dataset size")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed, "dataset and initialization seed");
  cmd->add_option("--lr", a.config.learning_rate, "Adam learning rate")->check(CLI::PositiveNumber);
  cmd->add_option("--epochs", a.config.epochs, "training epochs")->check(CLI::PositiveNumber);
  cmd->add_option("--batch", a.config.batch_size, "minibatch size")->check(CLI::PositiveNumber);
  cmd->add_option("--log", a.log, "per-epoch CSV log");
}

CollisionDataset dataset_for(const KinematicModel& model, const TrainArgs& a) {
  spdlog::info("sampling {} configurations (seed {})", a.n, a.seed);
  CollisionDataset d = generate_dataset(model, a.n, a.seed);
  spdlog::info("colliding fraction {:.4f}", d.positive_rate());
  return d;
}

EpochCallback epoch_logger() {
  return [](const EpochStats& e) {
    spdlog::info("epoch {:3d}  train {:.6f}  val {:.6f}  metric {:.4f}", e.epoch, e.train_loss, e.val_loss,
                 e.val_metric);
  };
}

int cmd_serve(const std::string& config, unsigned short port, const std::string& address) {
  const SceneConfig scene = scene_or_bundled(config);
  ServeOptions opts;
  opts.port = port;
  opts.address = address;
  opts.rate_hz = scene.rate_hz;
  Server server(Session(scene), opts);
  spdlog::info("serving on ws://{}:{} at {} Hz", address, server.port(), scene.rate_hz);
  server.run();
  return 0;
}

int cmd_replay(const std::string& trace, const std::string& pedal, const std::string& out, const std::string& config,
               const std::string& summary_out) {
  const SceneConfig scene = scene_or_bundled(config);
  const std::vector<InputFrame> frames = load_trace(trace);
  const std::vector<PedalEvent> events = pedal.empty() ? std::vector<PedalEvent>{} : load_pedal_script(pedal);
  Session session(scene);
  const ReplayResult result = replay(session, frames, events);
  session.recorder().finalize(out);
  const std::string summary = result.summary_json().dump(2);
  if (summary_out.empty()) {
    std::cout << summary << '\n';
  } else {
    write_text_file(summary_out, summary + "\n");
  }
  return 0;
}

int cmd_gen_trace(const std::string& kind, double duration, double rate, double radius, double period,
                  double amplitude, std::uint64_t seed, double step, const std::string& out) {
  std::array<double, kGloveChannels> rest{};
  for (std::size_t f = 0; f < 5; ++f) {
    rest[5 * f + 1] = 0.4;
    rest[5 * f + 2] = 0.4;
  }
  std::vector<InputFrame> frames;
  if (kind == "circle") {
    ScriptedSource src(circle_wrist(radius, period), flexing_fingers(amplitude, period, rest), rate, duration);
    frames = drain(src);
  } else if (kind == "static") {
    ScriptedSource src(constant_wrist(RigidTransform::from_translation(Vec3(0.0, 0.0, 1.0))), constant_glove(rest),
                       rate, duration);
    frames = drain(src);
  } else if (kind == "random-walk") {
    RandomWalkSource::Options o;
    o.rate_hz = rate;
    o.duration = duration;
    o.glove_start = rest;
    RandomWalkSource src(seed, step, o);
    frames = drain(src);
  } else {
    throw Error("gen-trace: unknown kind '" + kind + "'");
  }
  record_trace(out, frames);
  spdlog::info("wrote {} frames to {}", frames.size(), out);
  return 0;
}

int cmd_train_cpn(const TrainArgs& a, const std::vector<int>& hidden) {
  TrainingConfig cfg = a.config;
  cfg.seed = a.seed;
  cfg.cpn_hidden = hidden;
  const KinematicModel model = model_or_bundled(a.model);
  const CollisionDataset data = dataset_for(model, a);
  const TrainedNetwork net = train_cpn(model, data, cfg, epoch_logger());
  save_network(net.params, a.out);
  if (!a.log.empty()) net.report.write_csv(a.log);
  spdlog::info("test accuracy {:.4f}", cpn_accuracy(net.params, data, data.indices(Split::kTest)));
  return 0;
}

int cmd_train_ccn(const TrainArgs& a, const std::string& cpn_path, const std::vector<int>& hidden) {
  TrainingConfig cfg = a.config;
  cfg.seed = a.seed;
  cfg.ccn_hidden = hidden;
  const KinematicModel model = model_or_bundled(a.model);
  const NetworkParams cpn = load_network(cpn_path);
  const CollisionDataset data = dataset_for(model, a);
  const TrainedNetwork net = train_ccn(model, data, cpn, cfg, epoch_logger());
  save_network(net.params, a.out);
  if (!a.log.empty()) net.report.write_csv(a.log);
  const auto test = data.colliding_indices(Split::kTest);
  const CorrectionQuality q = evaluate_correction(model, net.params, data.subset(test).configs);
  spdlog::info("test: {} colliding configs, oracle collision rate {:.4f}, mean deviation {:.4f} of range", q.count,
               q.oracle_collision_rate, q.mean_relative_deviation);
  return 0;
}

int cmd_grid_search(const TrainArgs& a, const std::string& cpn_path, const std::vector<double>& alphas,
                    const std::vector<double>& betas, double mse_cap, const std::string& table,
                    const std::vector<int>& hidden) {
  TrainingConfig cfg = a.config;
  cfg.seed = a.seed;
  cfg.ccn_hidden = hidden;
  const KinematicModel model = model_or_bundled(a.model);
  const NetworkParams cpn = load_network(cpn_path);
  const CollisionDataset data = dataset_for(model, a);
  const GridSearchResult r = grid_search(model, data, cpn, alphas, betas, cfg, mse_cap);
  if (r.no_feasible_cell) spdlog::warn("no cell met the MSE cap {}; picked the lowest collision rate", mse_cap);
  spdlog::info("best alpha {} beta {}", r.best_alpha, r.best_beta);
  save_network(r.best_ccn, a.out);
  if (table.empty()) {
    std::cout << r.to_csv();
  } else {
    write_text_file(table, r.to_csv());
  }
  return 0;
}

int cmd_eval(const std::string& config, const EvalOptions& opts, const std::string& out) {
  const SceneConfig scene = scene_or_bundled(config);
  const Json report = evaluate_scene(scene, opts);
  std::cerr << "pipeline latency (map_hand + correct)\n";
  std::cerr << "  median " << report["latency"]["median_us"].get<double>() << " us, p99 "
            << report["latency"]["p99_us"].get<double>() << " us\n";
  if (out.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    write_text_file(out, report.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"telephantom: assisted dexterous teleoperation with a preview phantom"};
  app.require_subcommand(1);

  std::string config;
  unsigned short port = 8765;
  std::string address = "127.0.0.1";
  auto* serve = app.add_subcommand("serve", "run the operator WebSocket endpoint");
  serve->add_option("--config", config, "scene JSON (default: bundled scene)");
  serve->add_option("--port", port, "TCP port");
  serve->add_option("--address", address, "listen address");

  std::string trace, pedal, out, summary_out;
  auto* rp = app.add_subcommand("replay", "headless session over a recorded trace and pedal script");
  rp->add_option("--trace", trace, "input trace (JSON lines)")->required()->check(CLI::ExistingFile);
  rp->add_option("--pedal", pedal, "pedal script (JSON lines)")->check(CLI::ExistingFile);
  rp->add_option("--out", out, "demo output file")->required();
  rp->add_option("--config", config, "scene JSON (default: bundled scene)");
  rp->add_option("--summary", summary_out, "write the summary here instead of stdout");

  std::string kind = "circle";
  double duration = 10.0, rate = 60.0, radius = 0.1, period = 4.0, amplitude = 0.3, step = 0.002;
  std::uint64_t walk_seed = 1;
  auto* gt = app.add_subcommand("gen-trace", "write a scripted input trace");
  gt->add_option("--kind", kind, "circle | static | random-walk");
  gt->add_option("--duration", duration, "seconds");
  gt->add_option("--rate", rate, "samples per second")->check(CLI::PositiveNumber);
  gt->add_option("--radius", radius, "circle radius (m)");
  gt->add_option("--period", period, "circle and finger period (s)");
  gt->add_option("--amplitude", amplitude, "finger oscillation amplitude (rad)");
  gt->add_option("--seed", walk_seed, "random-walk seed");
  gt->add_option("--step", step, "random-walk step");
  gt->add_option("--out", out, "trace output file")->required();

  TrainArgs cpn_args;
  std::vector<int> cpn_hidden{128, 128};
  auto* tc = app.add_subcommand("train-cpn", "train the collision prediction network");
  add_train_flags(tc, cpn_args);
  tc->add_option("--hidden", cpn_hidden, "hidden layer widths");
  tc->add_option("--out", cpn_args.out, "weights output")->required();

  TrainArgs ccn_args;
  std::string cpn_path;
  std::vector<int> ccn_hidden{256, 256};
  auto* tr = app.add_subcommand("train-ccn", "train the collision correction network");
  add_train_flags(tr, ccn_args);
  tr->add_option("--cpn", cpn_path, "trained CPN weights")->required()->check(CLI::ExistingFile);
  tr->add_option("--alpha", ccn_args.config.alpha, "MSE weight");
  tr->add_option("--beta", ccn_args.config.beta, "collision weight");
  tr->add_option("--hidden", ccn_hidden, "hidden layer widths");
  tr->add_option("--out", ccn_args.out, "weights output")->required();

  TrainArgs grid_args;
  std::vector<double> alphas{0.5, 1.0, 2.0}, betas{1.0, 5.0, 20.0};
  double mse_cap = 0.05;
  std::string table;
  auto* gs = app.add_subcommand("grid-search", "pick CCN loss weights by validation collision rate");
  add_train_flags(gs, grid_args);
  gs->add_option("--cpn", cpn_path, "trained CPN weights")->required()->check(CLI::ExistingFile);
  gs->add_option("--alphas", alphas, "alpha grid");
  gs->add_option("--betas", betas, "beta grid");
  gs->add_option("--mse-cap", mse_cap, "largest acceptable validation MSE");
  gs->add_option("--hidden", ccn_hidden, "hidden layer widths");
  gs->add_option("--table", table, "CSV table output (default stdout)");
  gs->add_option("--out", grid_args.out, "best CCN weights output")->required();

  EvalOptions eval_opts;
  auto* ev = app.add_subcommand("eval", "latency histogram, network metrics and mapping checks");
  ev->add_option("--config", config, "scene JSON (default: bundled scene)");
  ev->add_option("--iterations", eval_opts.latency_iterations, "latency iterations");
  ev->add_option("--n", eval_opts.dataset_size, "fresh samples for network metrics");
  ev->add_option("--seed", eval_opts.seed, "evaluation seed");
  ev->add_option("--out", out, "report output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) return cmd_serve(config, port, address);
    if (*rp) return cmd_replay(trace, pedal, out, config, summary_out);
    if (*gt) return cmd_gen_trace(kind, duration, rate, radius, period, amplitude, walk_seed, step, out);
    if (*tc) return cmd_train_cpn(cpn_args, cpn_hidden);
    if (*tr) return cmd_train_ccn(ccn_args, cpn_path, ccn_hidden);
    if (*gs) return cmd_grid_search(grid_args, cpn_path, alphas, betas, mse_cap, table, ccn_hidden);
    if (*ev) return cmd_eval(config, eval_opts, out);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
