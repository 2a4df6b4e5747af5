#pragma once

#include <string>

#include "run_config.hpp"

namespace s4cast::cli {

// One function per subcommand. Each validates its required inputs, locks the
// output directory, writes its artifacts plus manifest.json, and prints a
// short human summary to stdout. Errors surface as the library exceptions;
// main() maps them to exit codes.

int cmd_ingest(const RunConfig& cfg);
int cmd_preprocess(const RunConfig& cfg);
int cmd_synth(const RunConfig& cfg);
int cmd_train(const RunConfig& cfg);
int cmd_tune(const RunConfig& cfg);
int cmd_eval(const RunConfig& cfg);
int cmd_predict(const RunConfig& cfg);

/// report reads a stored metrics.json or confusion.json and re-renders it to
/// stdout; it writes no files and therefore takes no lock.
struct ReportRequest {
    std::string path;
    std::string format = "text";  ///< "text" | "json" | "csv"
};
int cmd_report(const ReportRequest& req);

}  // namespace s4cast::cli
