#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <string>

#include "bcm/error.hpp"
#include "bcm/version.hpp"
#include "commands.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string seed;
  std::string epsilon;
  std::string out;
  std::string threads;
};

void attach_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "Flat key = value config file");
  cmd->add_option("--seed", flags.seed, "Seed for the per-trial RNG streams");
  cmd->add_option("--epsilon", flags.epsilon, "Entropic regularization parameter");
  cmd->add_option("--out", flags.out, "Output directory");
  cmd->add_option("--threads", flags.threads, "Worker threads for independent trials/solves");
}

std::map<std::string, std::string> overrides_from(const CommonFlags& flags) {
  std::map<std::string, std::string> overrides;
  if (!flags.seed.empty()) overrides["seed"] = flags.seed;
  if (!flags.epsilon.empty()) overrides["epsilon"] = flags.epsilon;
  if (!flags.out.empty()) overrides["out"] = flags.out;
  if (!flags.threads.empty()) overrides["threads"] = flags.threads;
  return overrides;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure estimation under the barycentric coding model"};
  app.set_version_flag("--version", std::string("bcm ") + bcm::kVersion);
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
    void (*run)(bcm::cli::RunConfig&);
  };
  const Entry entries[] = {
      {"estimate-coords", "Recover barycentric coordinates for a query measure",
       bcm::cli::cmd_estimate_coords},
      {"covariance", "Barycenter-parameterized covariance estimation experiment",
       bcm::cli::cmd_covariance},
      {"inpaint", "Image inpainting/denoising under the barycentric coding model",
       bcm::cli::cmd_inpaint},
      {"synthesize", "Synthesize a barycenter from coordinates and references",
       bcm::cli::cmd_synthesize},
      {"convergence", "Gram-matrix estimation error versus sample size",
       bcm::cli::cmd_convergence},
      {"classify", "Topic prediction over labeled reference measures",
       bcm::cli::cmd_classify},
  };

  std::map<const CLI::App*, const Entry*> dispatch;
  std::map<const CLI::App*, CommonFlags> flags;
  for (const auto& entry : entries) {
    CLI::App* cmd = app.add_subcommand(entry.name, entry.help);
    dispatch[cmd] = &entry;
    attach_common(cmd, flags[cmd]);
  }

  CLI11_PARSE(app, argc, argv);

  const CLI::App* chosen = app.get_subcommands().front();
  const Entry* entry = dispatch.at(chosen);
  const CommonFlags& common = flags.at(chosen);
  try {
    bcm::cli::RunConfig config(entry->name, common.config_path, overrides_from(common));
    entry->run(config);
    return 0;
  } catch (const bcm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const bcm::ConvergenceError& e) {
    std::cerr << "numerical non-convergence: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
