#pragma once

#include "common.hpp"

namespace bcm::cli {

void cmd_estimate_coords(RunConfig& config);
void cmd_covariance(RunConfig& config);
void cmd_inpaint(RunConfig& config);
void cmd_synthesize(RunConfig& config);
void cmd_convergence(RunConfig& config);
void cmd_classify(RunConfig& config);

}  // namespace bcm::cli
