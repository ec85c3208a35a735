#pragma once

#include <iosfwd>

#include "report/config.hpp"

namespace simdist::report {

/// Each command writes its artifacts into config.out_dir and a short summary
/// to `out`. Failures surface as simdist::Error.
void cmd_calibrate(const RunConfig& config, std::ostream& out, std::ostream& err);
void cmd_assign_stats(const RunConfig& config, std::ostream& out, std::ostream& err);
void cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err);
void cmd_synth(const RunConfig& config, std::ostream& out, std::ostream& err);
void cmd_nms_demo(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full CLI entry point. Exit codes: 0 success, 2 configuration error, 3 data error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace simdist::report
