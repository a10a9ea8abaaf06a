// Command-line front end for the reconstruction pipeline.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "mrecon/experiment.hpp"
#include "mrecon/io.hpp"
#include "mrecon/kernels.hpp"

namespace ex = mrecon::experiment;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::string method;
  std::string mask;
  std::string seed;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "key = value configuration file");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--method", c.method, "fbp | iht | dore | ista");
  cmd->add_option("--mask", c.mask, "full | fov | hull | file");
  cmd->add_option("--seed", c.seed, "seed for the spectral-norm start vector");
  cmd->add_option("--set", c.sets, "override a config key (key=value), repeatable");
}

ex::ExperimentConfig resolve(const Common& c) {
  ex::ExperimentConfig cfg = c.config.empty() ? ex::ExperimentConfig{} : ex::load_config(c.config);
  if (!c.out.empty()) cfg.set("out", c.out);
  if (!c.method.empty()) cfg.set("method", c.method);
  if (!c.mask.empty()) cfg.set("mask", c.mask);
  if (!c.seed.empty()) cfg.set("seed", c.seed);
  for (const auto& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ex::ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mask-restricted sparse CT reconstruction"};
  app.require_subcommand(1);
  bool show_isa = false;
  app.add_flag("--isa", show_isa, "print the selected SIMD kernel set to stderr");

  Common common;
  int (*run)(const ex::ExperimentConfig&) = nullptr;
  struct Entry {
    const char* name;
    const char* help;
    int (*fn)(const ex::ExperimentConfig&);
  };
  const Entry entries[] = {
      {"phantom", "rasterize the phantom and write analytic sinograms", ex::cmd_phantom},
      {"sinogram", "discrete Radon transform of an image", ex::cmd_sinogram},
      {"hull", "extract the convex-hull mask from a sinogram", ex::cmd_hull},
      {"reconstruct", "reconstruct from a sinogram", ex::cmd_reconstruct},
      {"eval", "PSNR of a reconstruction inside a mask", ex::cmd_eval},
  };
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, common);
    sub->callback([&run, fn = e.fn] { run = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ex::kExitConfig;
  }
  if (show_isa) std::cerr << "isa = " << mrecon::kernels::isa_name(mrecon::kernels::active_isa()) << "\n";

  try {
    return run(resolve(common));
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ex::kExitConfig;
  } catch (const mrecon::io::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return ex::kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return ex::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
