#include <sstream>

#include "ddp/harness.hpp"

namespace ddp::harness {

namespace {

void csv_row(std::ostringstream& os, const std::string& name, const ClassScore& s) {
  os << name << ',' << s.total << ',' << s.correct << ',' << s.incorrect() << ',' << s.abstained
     << ',' << s.failed << ',' << percent(s.pass_at_1()) << '\n';
}

void md_table(std::ostringstream& os, const std::string& key_header,
              const std::map<std::string, ClassScore>& rows) {
  os << "| " << key_header << " | Total | Correct | Incorrect | Abstained | Failed | Pass@1 (%) |\n";
  os << "|---|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& [name, s] : rows) {
    os << "| " << name << " | " << s.total << " | " << s.correct << " | " << s.incorrect()
       << " | " << s.abstained << " | " << s.failed << " | " << percent(s.pass_at_1()) << " |\n";
  }
}

}  // namespace

std::string report(const ScoreSummary& summary, const std::vector<pipeline::RunRecord>& records,
                   ReportFormat format) {
  std::ostringstream os;
  if (format == ReportFormat::kCsv) {
    os << "class_id,total,correct,incorrect,abstained,failed,pass_at_1\n";
    for (const auto& [id, s] : summary.by_class) csv_row(os, id, s);
    csv_row(os, "overall", summary.overall);
    return os.str();
  }

  const ClassScore& o = summary.overall;
  os << "# Evaluation report\n\n";
  os << "- Overall Pass@1: **" << percent(o.pass_at_1()) << "%** (" << o.correct << "/" << o.total
     << ")\n";
  os << "- Incorrect: " << o.incorrect() << "\n";
  os << "- Abstained: " << o.abstained << "\n";
  os << "- Failed: " << o.failed << "\n";
  os << "- Mean latency: " << percent(summary.mean_latency_ms) << " ms\n";
  os << "- Config digest: `" << summary.config_digest << "`\n";
  os << "- Records: " << records.size() << "\n\n";
  os << "## By class\n\n";
  md_table(os, "class_id", summary.by_class);
  if (!summary.by_tag.empty()) {
    os << "\n## By tag\n\n";
    md_table(os, "tag", summary.by_tag);
  }
  std::size_t failed_listed = 0;
  for (const auto& r : records) {
    if (r.status != pipeline::RecordStatus::kFailed) continue;
    if (failed_listed++ == 0) os << "\n## Failed queries\n\n";
    os << "- `" << r.query_id << "`: " << r.error << "\n";
  }
  return os.str();
}

}  // namespace ddp::harness
