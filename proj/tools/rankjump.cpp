// rankjump: classify rational elliptic surfaces and search for rank jumps.

#include "rankjump/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_budget_options(CLI::App* cmd, rankjump::Budget& b) {
  cmd->add_option("--x0-height", b.x0_height, "height bound for conic fibres x = x0")->capture_default_str();
  cmd->add_option("--param-height", b.param_height, "height bound for conic parameters")->capture_default_str();
  cmd->add_option("--count,--budget", b.count, "stop after this many certificates")->capture_default_str();
  cmd->add_option("--naive-bound", b.naive_bound, "base-point search bound on each conic")->capture_default_str();
  cmd->add_option("--t0-height", b.t0_height, "skip t0 above this height (0: no limit)")->capture_default_str();
  cmd->add_option("--threads", b.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rankjump;
  CLI::App app{"Rank jumps on rational elliptic surfaces"};
  app.require_subcommand(1);

  std::string config_path;
  auto* classify = app.add_subcommand("classify", "singular fibres, Euler number and generic rank bound");
  classify->add_option("config", config_path, "surface config file")->required();

  JumpOptions jopts;
  std::string avoid_path, store_path;
  auto* jump = app.add_subcommand("jump", "emit rank-jump certificates as JSON lines");
  jump->add_option("config", config_path, "surface config file")->required();
  jump->add_option("--rank", jopts.rank, "1 or 2 new independent points")->capture_default_str()->check(
      CLI::IsMember({1, 2}));
  jump->add_option("--avoid", avoid_path, "file of cover polynomials y^2 = h(t) to avoid");
  jump->add_option("--store", store_path, "store directory to append to");
  jump->add_option("--timestamp", jopts.timestamp, "timestamp recorded in each certificate");
  add_budget_options(jump, jopts.budget);

  unsigned census_height = 10, census_params = 2, census_threads = 1;
  auto* census = app.add_subcommand("census", "extension classes and rank-jump counts by height");
  census->add_option("config", config_path, "surface config file")->required();
  census->add_option("--height", census_height, "largest height bound")->capture_default_str();
  census->add_option("--param-height", census_params, "conic parameter height for jump counts")
      ->capture_default_str();
  census->add_option("--threads", census_threads, "worker threads")->capture_default_str()->check(
      CLI::PositiveNumber);

  std::string verify_dir;
  auto* verify = app.add_subcommand("verify", "re-verify every certificate in a store");
  verify->add_option("store", verify_dir, "store directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*classify) return cmd_classify(load_config(config_path), std::cout);
    if (*jump) {
      if (!avoid_path.empty()) jopts.avoid = load_challenge(avoid_path);
      if (!store_path.empty()) jopts.store = store_path;
      return cmd_jump(load_config(config_path), jopts, std::cout, std::cerr);
    }
    if (*census) return cmd_census(load_config(config_path), census_height, census_params, census_threads, std::cout);
    if (*verify) return cmd_verify(verify_dir, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "error: invalid config: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
