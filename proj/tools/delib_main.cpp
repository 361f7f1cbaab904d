#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace delib::cli;

  CLI::App app{"Stakeholder persona pipeline for deliberative assemblies"};
  app.require_subcommand(1);

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service until SIGINT/SIGTERM");
  serve_cmd->add_option("--host", serve.host, "Address to bind")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "Port to listen on (0 picks a free one)")
      ->envname("PORT")
      ->capture_default_str();
  serve_cmd->add_option("--data-dir", serve.data_dir, "Directory for session snapshots")
      ->envname("DATA_DIR")
      ->capture_default_str();
  serve_cmd->add_option("--mock-script", serve.mock_script, "Scripted provider replies (JSON) instead of a live model");

  ReplayOptions replay;
  auto* replay_cmd = app.add_subcommand("replay", "Run pipeline stages offline over a transcript");
  replay_cmd->add_option("transcript", replay.transcript, "Transcript (JSONL)")->required();
  replay_cmd->add_option("context", replay.context, "Assembly context (JSON)")->required();
  replay_cmd->add_option("--stage", replay.stage, "all | stakeholders | reflection | question")
      ->capture_default_str()
      ->check(CLI::IsMember({"all", "stakeholders", "reflection", "question"}));
  replay_cmd->add_option("--out", replay.out_dir, "Artifact directory")->capture_default_str();
  replay_cmd->add_option("--mock-script", replay.mock_script, "Scripted provider replies (JSON)");
  replay_cmd->add_option("--persona", replay.persona_index, "Zero-based persona index for later stages")
      ->capture_default_str();
  replay_cmd->add_option("--max-retries", replay.pipeline.max_retries, "Corrective retries per stage")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  replay_cmd->add_option("--window-chars", replay.pipeline.transcript_char_budget, "Transcript window budget")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Summarize a Likert survey CSV");
  analyze_cmd->add_option("survey", analyze.csv, "CSV with respondent_id,item_id,phase,value")->required();
  analyze_cmd->add_option("--out", analyze.out, "Write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (*serve_cmd) return cmd_serve(serve, std::cout, std::cerr);
  if (*replay_cmd) return cmd_replay(replay, std::cout, std::cerr);
  return cmd_analyze(analyze, std::cout, std::cerr);
}
