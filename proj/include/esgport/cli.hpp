/**
 * @file cli.hpp
 * @brief `esgport` command-line front end.
 *
 * Subcommands: harmonize, corr, ensemble, dmv, capm, synth, backtest. Each
 * writes CSV outputs plus `manifest.txt` into the output directory. Failures
 * print one line `esgport: error=<category> code=<code> detail="..."` and
 * exit 1 (config), 2 (data) or 3 (numerical).
 */
#pragma once

#include <iosfwd>
#include <string>

namespace esgport::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// The diagnostic line for an error category/code/message.
std::string diagnostic(std::string_view category, std::string_view code, std::string_view detail);

}  // namespace esgport::cli
