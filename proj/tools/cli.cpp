#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>

#include "ddp/errors.hpp"
#include "ddp/harness.hpp"
#include "ddp/raster_ops.hpp"
#include "ddp/taxonomy.hpp"

namespace ddp::cli {

namespace {

using nlohmann::json;

class RecordingGateway final : public gateway::Gateway {
 public:
  explicit RecordingGateway(gateway::Gateway& inner) : inner_(inner) {}
  gateway::Reply send(const gateway::ChatRequest& req) override {
    {
      std::lock_guard lock(mu_);
      requests_.push_back(req);
    }
    return inner_.send(req);
  }
  [[nodiscard]] std::vector<gateway::BackendTrace> traces() const override {
    return inner_.traces();
  }
  [[nodiscard]] std::vector<gateway::ChatRequest> requests() const {
    std::lock_guard lock(mu_);
    return requests_;
  }

 private:
  gateway::Gateway& inner_;
  mutable std::mutex mu_;
  std::vector<gateway::ChatRequest> requests_;
};

struct BackendFlags {
  std::string mock;
  bool live = false;
};

std::unique_ptr<gateway::Gateway> make_backend(const BackendFlags& f,
                                               const pipeline::PipelineConfig& config) {
  if (!f.mock.empty() && f.live) throw ConfigError("--mock and --live are mutually exclusive");
  if (!f.mock.empty()) {
    return std::make_unique<gateway::MockGateway>(gateway::MockScript::load(f.mock));
  }
  if (f.live) {
    const char* env = std::getenv("DDP_API_KEYS");
    const auto keys = gateway::parse_keys(env != nullptr ? env : "");
    if (keys.empty()) throw ConfigError("--live requires DDP_API_KEYS (comma-separated keys)");
    return std::make_unique<gateway::LiveGateway>(config.gateway, keys,
                                                  gateway::make_http_transport());
  }
  throw ConfigError("choose a backend: --mock SCRIPT for a scripted run or --live for real API calls");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
}

std::string valid_tool_list() {
  std::string s;
  for (auto t : taxonomy::kAllTools) s += std::string(taxonomy::tool_name(t)) + ", ";
  return s + "downsample, smooth";
}

raster::Rect parse_rect(const std::string& text) {
  raster::Rect r;
  char c1 = 0, c2 = 0, c3 = 0;
  std::istringstream is(text);
  if (!(is >> r.x >> c1 >> r.y >> c2 >> r.w >> c3 >> r.h) || c1 != ',' || c2 != ',' || c3 != ',') {
    throw InvalidArgument("--rect expects x,y,w,h");
  }
  return r;
}

// ---------------------------------------------------------------- run

struct RunArgs {
  std::string manifest;
  std::string config;
  BackendFlags backend;
  std::string out_dir = "ddp_out";
  int concurrency = 0;
  bool no_tools = false;
  bool no_prompts = false;
  bool no_degradation = false;
  std::string record;
  std::string prompts_dir;
};

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err,
            const std::atomic<bool>* cancel) {
  pipeline::PipelineConfig config;
  std::unique_ptr<gateway::Gateway> backend;
  std::vector<Query> queries;
  critic::PromptLibrary library = critic::PromptLibrary::builtin();
  try {
    config = pipeline::PipelineConfig::load(a.config);
    if (a.concurrency > 0) config.concurrency = a.concurrency;
    if (a.no_tools) config.toggles.tools = false;
    if (a.no_prompts) config.toggles.prompts = false;
    if (a.no_degradation) config.toggles.degradation = false;
    config.validate();
    if (!a.prompts_dir.empty()) library = critic::PromptLibrary::load_dir(a.prompts_dir);
    queries = harness::load_manifest(a.manifest);
    backend = make_backend(a.backend, config);
    std::filesystem::create_directories(a.out_dir);
  } catch (const std::exception& e) {
    err << "ddp run: " << e.what() << '\n';
    return kExitUsage;
  }

  RecordingGateway recorder(*backend);
  harness::BatchOptions opts;
  opts.concurrency = config.concurrency;
  opts.jsonl_path = (std::filesystem::path(a.out_dir) / "records.jsonl").string();
  opts.cancel = cancel;
  const auto records = harness::run_batch(queries, config, recorder, opts, library);

  // Rewrite in id order; the incremental file is in completion order.
  {
    std::ofstream jsonl(opts.jsonl_path, std::ios::trunc);
    for (const auto& r : records) jsonl << r.to_json().dump() << '\n';
  }
  if (!a.record.empty()) gateway::write_request_log(recorder.requests(), a.record);

  std::size_t failed = 0;
  for (const auto& r : records) failed += r.status == pipeline::RecordStatus::kFailed ? 1 : 0;
  if (records.empty()) {
    err << "ddp run: manifest has no queries\n";
    return kExitUsage;
  }
  const auto summary = harness::score(records);
  write_file((std::filesystem::path(a.out_dir) / "summary.json").string(),
             summary.to_json().dump(2) + "\n");
  write_file((std::filesystem::path(a.out_dir) / "report.md").string(),
             harness::report(summary, records, harness::ReportFormat::kMarkdown));
  out << harness::pass_line(summary) << '\n';
  if (failed > 0) {
    err << "ddp run: " << failed << " of " << records.size() << " queries failed\n";
    return kExitPartial;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- classify

int cmd_classify(const std::string& image, const std::string& question,
                 const std::string& config_path, const BackendFlags& backend_flags,
                 std::ostream& out, std::ostream& err) {
  try {
    pipeline::PipelineConfig config;
    if (!config_path.empty()) config = pipeline::PipelineConfig::load(config_path);
    auto backend = make_backend(backend_flags, config);
    const raster::Raster base =
        raster::gaussian_smooth(raster::read_image_file(image), config.sigma1);
    const auto cls = taxonomy::classify(base, question, *backend);
    out << cls.config.class_id() << '\n';
    return kExitOk;
  } catch (const GatewayError& e) {
    err << "ddp classify: " << e.what() << '\n';
    return kExitPartial;
  } catch (const std::exception& e) {
    err << "ddp classify: " << e.what() << '\n';
    return kExitUsage;
  }
}

// ---------------------------------------------------------------- tools-apply

struct ToolArgs {
  std::string image;
  std::string tool;
  std::string params = "{}";
  std::string rect;
  int max_dim = 0;
  double sigma = 0.0;
  int thickness = 0;
  std::string out = "tool_out.png";
};

int cmd_tools_apply(const ToolArgs& a, std::ostream& out, std::ostream& err) {
  const bool is_raster_only = a.tool == "downsample" || a.tool == "smooth";
  const auto tool = taxonomy::tool_from_name(a.tool);
  if (!tool && !is_raster_only) {
    err << "ddp tools-apply: unknown tool '" << a.tool << "'; valid tools: " << valid_tool_list()
        << '\n';
    return kExitUsage;
  }
  try {
    const raster::Raster img = raster::read_image_file(a.image);
    raster::Raster result = img;
    if (a.tool == "downsample") {
      if (a.max_dim < 1) throw InvalidArgument("downsample needs --max-dim >= 1");
      result = raster::downsample_max_dim(img, a.max_dim);
    } else if (a.tool == "smooth") {
      result = raster::gaussian_smooth(img, a.sigma);
    } else {
      json params = json::parse(a.params, nullptr, false);
      if (params.is_discarded() || !params.is_object()) {
        throw InvalidArgument("--params must be a JSON object");
      }
      if (!a.rect.empty()) {
        const raster::Rect r = parse_rect(a.rect);
        const json rj = {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}};
        if (*tool == taxonomy::Tool::kBlurMask) {
          params["keep"] = rj;
        } else {
          params.update(rj);
        }
      }
      if (a.sigma > 0.0) params["sigma"] = a.sigma;
      if (a.thickness > 0) params["thickness"] = a.thickness;
      result = agent::apply_tool(*tool, params, img);
    }
    raster::write_png_file(result, a.out);
    out << result.width() << "x" << result.height() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "ddp tools-apply: " << e.what() << '\n';
    return kExitUsage;
  }
}

// ---------------------------------------------------------------- score / report

int cmd_score(const std::string& records_path, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
  try {
    const auto records = harness::load_records(records_path);
    const auto summary = harness::score(records);
    const std::string text = summary.to_json().dump(2) + "\n";
    if (!out_path.empty()) write_file(out_path, text);
    out << harness::pass_line(summary) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "ddp score: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cmd_report(const std::string& records_path, const std::string& format,
               const std::string& out_path, std::ostream& out, std::ostream& err) {
  try {
    const auto records = harness::load_records(records_path);
    const auto summary = harness::score(records);
    const auto fmt =
        format == "csv" ? harness::ReportFormat::kCsv : harness::ReportFormat::kMarkdown;
    const std::string doc = harness::report(summary, records, fmt);
    if (out_path.empty()) {
      out << doc;
    } else {
      write_file(out_path, doc);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "ddp report: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::atomic<bool>* cancel) {
  CLI::App app{"Degradation-driven VQA pipeline and benchmark harness", "ddp"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a manifest through the pipeline");
  run_cmd->add_option("manifest", run.manifest, "Manifest JSONL")->required();
  run_cmd->add_option("config", run.config, "Pipeline config JSON")->required();
  run_cmd->add_option("--mock", run.backend.mock, "Scripted mock backend (JSON)");
  run_cmd->add_flag("--live", run.backend.live, "Use the live API (needs DDP_API_KEYS)");
  run_cmd->add_option("--out", run.out_dir, "Output directory");
  run_cmd->add_option("--concurrency", run.concurrency, "Worker count override");
  run_cmd->add_flag("--no-tools", run.no_tools, "Skip the tool-manager stage");
  run_cmd->add_flag("--no-prompts", run.no_prompts, "Use the generic critic prompt");
  run_cmd->add_flag("--no-degradation", run.no_degradation, "Skip both downsampling stages");
  run_cmd->add_option("--record", run.record, "Write every model request as JSONL");
  run_cmd->add_option("--prompts", run.prompts_dir, "Directory overriding critic prompts");

  std::string cls_image, cls_question, cls_config;
  BackendFlags cls_backend;
  auto* cls_cmd = app.add_subcommand("classify", "Classify one image/question pair");
  cls_cmd->add_option("image", cls_image, "Image file")->required();
  cls_cmd->add_option("--question", cls_question, "Question text")->required();
  cls_cmd->add_option("--config", cls_config, "Pipeline config JSON");
  cls_cmd->add_option("--mock", cls_backend.mock, "Scripted mock backend (JSON)");
  cls_cmd->add_flag("--live", cls_backend.live, "Use the live API (needs DDP_API_KEYS)");

  ToolArgs tool;
  auto* tool_cmd = app.add_subcommand("tools-apply", "Apply one image tool and write a PNG");
  tool_cmd->add_option("image", tool.image, "Input image")->required();
  tool_cmd->add_option("tool", tool.tool, "Tool name")->required();
  tool_cmd->add_option("--params", tool.params, "Tool parameters as a JSON object");
  tool_cmd->add_option("--rect", tool.rect, "x,y,w,h (keep rect for masks)");
  tool_cmd->add_option("--max-dim", tool.max_dim, "Longest side for downsample");
  tool_cmd->add_option("--sigma", tool.sigma, "Gaussian sigma");
  tool_cmd->add_option("--thickness", tool.thickness, "Line or box thickness");
  tool_cmd->add_option("--out", tool.out, "Output PNG path");

  std::string score_records, score_out;
  auto* score_cmd = app.add_subcommand("score", "Recompute the summary from records");
  score_cmd->add_option("records", score_records, "records.jsonl")->required();
  score_cmd->add_option("--out", score_out, "Write summary JSON here");

  std::string rep_records, rep_format = "markdown", rep_out;
  auto* rep_cmd = app.add_subcommand("report", "Render a report from records");
  rep_cmd->add_option("records", rep_records, "records.jsonl")->required();
  rep_cmd->add_option("--format", rep_format, "markdown or csv")
      ->check(CLI::IsMember({"markdown", "csv"}));
  rep_cmd->add_option("--out", rep_out, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (*run_cmd) return cmd_run(run, out, err, cancel);
  if (*cls_cmd) return cmd_classify(cls_image, cls_question, cls_config, cls_backend, out, err);
  if (*tool_cmd) return cmd_tools_apply(tool, out, err);
  if (*score_cmd) return cmd_score(score_records, score_out, out, err);
  if (*rep_cmd) return cmd_report(rep_records, rep_format, rep_out, out, err);
  return kExitUsage;
}

}  // namespace ddp::cli
