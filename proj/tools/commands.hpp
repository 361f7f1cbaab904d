#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "delib/pipeline.hpp"

namespace delib::cli {

// Process exit codes; stable for scripts.
enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 2,
  kExitPipelineError = 3,
  kExitProviderError = 4,
};

struct ServeOptions {
  std::string host = "0.0.0.0";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path data_dir = "data";
  std::optional<std::filesystem::path> mock_script;
};

struct ReplayOptions {
  std::filesystem::path transcript;
  std::filesystem::path context;
  std::filesystem::path out_dir = "out";
  std::string stage = "all";  // all | stakeholders | reflection | question
  std::optional<std::filesystem::path> mock_script;
  std::size_t persona_index = 0;
  PipelineOptions pipeline;
};

struct AnalyzeOptions {
  std::filesystem::path csv;
  std::optional<std::filesystem::path> out;
};

int cmd_serve(const ServeOptions& options, std::ostream& out, std::ostream& err);
int cmd_replay(const ReplayOptions& options, std::ostream& out, std::ostream& err);
int cmd_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err);

}  // namespace delib::cli
