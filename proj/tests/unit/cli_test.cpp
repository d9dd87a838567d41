#include <doctest.h>

#include <sstream>

#include "cli.hpp"
#include "ddp/raster_ops.hpp"
#include "support.hpp"

using ddp::test::fixture;
using ddp::test::read_file;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ddp::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

TEST_CASE("run over the score fixtures") {
  ddp::test::TempDir dir;
  const Result r = cli({"run", fixture("score_manifest.jsonl"), fixture("config.json"), "--mock",
                        fixture("score_mock.json"), "--out", dir.path().string()});
  INFO(r.err);
  REQUIRE(r.code == 0);
  CHECK(r.out == "Pass@1: 75.00% (3/4)\n");
  const json summary = json::parse(read_file(dir.file("summary.json")));
  CHECK(summary["pass_at_1"] == 75.0);
  CHECK(summary["total"] == 4);
  CHECK(lines_of(read_file(dir.file("records.jsonl"))).size() == 4);
  CHECK(read_file(dir.file("report.md")).find("75.00%") != std::string::npos);

  SUBCASE("score closes the loop") {
    const Result s = cli({"score", dir.file("records.jsonl"), "--out", dir.file("again.json")});
    CHECK(s.code == 0);
    CHECK(s.out == r.out);
    CHECK(json::parse(read_file(dir.file("again.json"))) == summary);
  }
  SUBCASE("csv report") {
    const Result c = cli({"report", dir.file("records.jsonl"), "--format", "csv"});
    CHECK(c.code == 0);
    const auto rows = lines_of(c.out);
    CHECK(rows.size() == summary["by_class"].size() + 2);
    CHECK(rows.back() == "overall,4,3,1,0,0,75.00");
  }
}

TEST_CASE("run without degradation sends the native image to the critic") {
  ddp::test::TempDir dir;
  const Result r = cli({"run", fixture("score_manifest.jsonl"), fixture("config.json"), "--mock",
                        fixture("score_mock.json"), "--out", dir.path().string(),
                        "--no-degradation", "--record", dir.file("requests.jsonl")});
  REQUIRE(r.code == 0);
  const auto log = lines_of(read_file(dir.file("requests.jsonl")));
  std::size_t critic_requests = 0;
  for (const auto& line : log) {
    const json j = json::parse(line);
    const std::string text = j.dump();
    if (text.find("Final Answer: X") == std::string::npos) continue;
    ++critic_requests;
    for (const json& part : j["messages"][1]["parts"]) {
      if (part["type"] == "image") {
        CHECK(part["width"] == 500);
        CHECK(part["height"] == 400);
        break;
      }
    }
  }
  CHECK(critic_requests == 4);
}

TEST_CASE("run usage errors exit 2") {
  ddp::test::TempDir dir;
  CHECK(cli({"run", fixture("score_manifest.jsonl"), dir.file("missing.json"), "--mock",
             fixture("score_mock.json"), "--out", dir.path().string()})
            .code == 2);
  const Result none = cli({"run", fixture("score_manifest.jsonl"), fixture("config.json"), "--out",
                           dir.path().string()});
  CHECK(none.code == 2);
  CHECK(none.err.find("--mock") != std::string::npos);
  CHECK(cli({"run", fixture("score_manifest.jsonl"), fixture("config.json"), "--mock",
             fixture("score_mock.json"), "--live"})
            .code == 2);
  CHECK(cli({"bogus"}).code == 2);
  CHECK(cli({}).code == 2);
}

TEST_CASE("tools-apply") {
  ddp::test::TempDir dir;
  const std::string img = fixture("occluded_dog.png");

  const Result d = cli({"tools-apply", img, "downsample", "--max-dim", "80", "--out",
                        dir.file("small.png")});
  CHECK(d.code == 0);
  CHECK(d.out == "80x64\n");
  const auto small = ddp::raster::read_image_file(dir.file("small.png"));
  CHECK(small.width() == 80);
  CHECK(small.height() == 64);

  const Result w = cli({"tools-apply", img, "white_mask", "--params",
                        R"({"x": 10, "y": 10, "w": 20, "h": 20})", "--out", dir.file("w.png")});
  CHECK(w.code == 0);
  CHECK(w.out == "500x400\n");
  const auto masked = ddp::raster::read_image_file(dir.file("w.png"));
  const auto original = ddp::raster::read_image_file(img);
  CHECK(masked.at(5, 5) == ddp::raster::kWhite);
  CHECK(masked.at(15, 15) == original.at(15, 15));

  const Result c = cli({"tools-apply", img, "crop", "--rect", "20,60,110,50", "--out",
                        dir.file("c.png")});
  CHECK(c.out == "110x50\n");

  const Result u = cli({"tools-apply", img, "sharpen"});
  CHECK(u.code == 2);
  CHECK(u.err.find("valid tools: crop") != std::string::npos);

  CHECK(cli({"tools-apply", img, "crop", "--rect", "490,0,50,50", "--out", dir.file("x.png")})
            .code == 2);
  CHECK(cli({"tools-apply", img, "downsample", "--out", dir.file("y.png")}).code == 2);
}

TEST_CASE("score and report errors") {
  ddp::test::TempDir dir;
  ddp::test::write_file(dir.file("empty.jsonl"), "");
  CHECK(cli({"score", dir.file("empty.jsonl")}).code == 2);
  CHECK(cli({"score", dir.file("absent.jsonl")}).code == 2);
  CHECK(cli({"report", dir.file("empty.jsonl"), "--format", "csv"}).code == 2);
  CHECK(cli({"report", dir.file("empty.jsonl"), "--format", "pdf"}).code == 2);
}

TEST_CASE("help exits 0") {
  const Result h = cli({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("tools-apply") != std::string::npos);
  CHECK(cli({"run", "--help"}).code == 0);
}
