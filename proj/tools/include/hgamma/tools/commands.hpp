#pragma once

#include <iosfwd>

#include <json.hpp>

#include "hgamma/gamma_harness.hpp"
#include "hgamma/geometry.hpp"
#include "hgamma/tools/config.hpp"

namespace hgamma::tools {

JumpGeometry make_geometry(const RunConfig& cfg);
SweepConfig make_sweep_config(const RunConfig& cfg);

// Runs cfg.command, writes its side files into cfg.out_dir and returns the
// result document (without the embedded config).
nlohmann::json run_command(const RunConfig& cfg);

// Full command line entry: parse, run, write <out>/<command>.json with the
// resolved config, print the document.  Returns 0 on success, 1 for
// configuration and domain errors, 2 for internal failures.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hgamma::tools
