#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sfi/errors.hpp"
#include "sfi/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"stablefisher: stable densities, Fisher functionals, and convergence checks"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  int threads = 0;
  for (const char* name : {"density", "fisher", "verify", "converge", "decompose"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "config file (key = value)")->required();
    sub->add_option("--out", out_path, "output directory (overrides the config)");
    sub->add_option("--threads", threads, "concurrency degree (overrides the config)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    sfi::RunConfig cfg =
        sfi::load_config(config_path, app.get_subcommands().front()->get_name());
    if (!out_path.empty()) cfg.output_path = out_path;
    if (threads > 0) cfg.threads = threads;
    return sfi::run(cfg);
  } catch (const sfi::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const sfi::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
}
