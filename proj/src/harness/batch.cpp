#include <algorithm>
#include <fstream>
#include <mutex>
#include <thread>

#include "ddp/errors.hpp"
#include "ddp/harness.hpp"

namespace ddp::harness {

void run_pool(std::size_t n, int concurrency, Clock& clock,
              const std::function<void(std::size_t)>& work) {
  if (concurrency < 1) throw InvalidArgument("concurrency must be >= 1");
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(concurrency), n);
  std::atomic<std::size_t> next{0};

  // All workers join the clock before the first one starts.
  std::vector<Clock::Participation> seats;
  seats.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) seats.push_back(clock.enter());

  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, seat = std::move(seats[w])]() mutable {
      for (std::size_t i = next++; i < n; i = next++) work(i);
      Clock::Participation done = std::move(seat);
    });
  }
  for (auto& t : threads) t.join();
}

std::vector<pipeline::RunRecord> run_batch(const std::vector<Query>& queries,
                                           const pipeline::PipelineConfig& config,
                                           gateway::Gateway& gw, const BatchOptions& options,
                                           const critic::PromptLibrary& library) {
  Clock& clock = options.clock != nullptr ? *options.clock : steady_clock();
  std::vector<pipeline::RunRecord> records(queries.size());

  std::mutex writer_mu;
  std::ofstream jsonl;
  if (!options.jsonl_path.empty()) {
    jsonl.open(options.jsonl_path, std::ios::trunc);
    if (!jsonl) throw ConfigError("cannot write " + options.jsonl_path);
  }

  run_pool(queries.size(), options.concurrency, clock, [&](std::size_t i) {
    const Query& q = queries[i];
    pipeline::RunRecord rec;
    if (options.cancel != nullptr && options.cancel->load()) {
      rec.query_id = q.id;
      rec.status = pipeline::RecordStatus::kFailed;
      rec.error = "cancelled";
      rec.answer = q.answer;
      if (q.answer) rec.correct = false;
      rec.tags = q.tags;
      rec.config_digest = config.digest();
    } else {
      rec = pipeline::run_query(q, config, gw, library, clock);
    }
    {
      std::lock_guard lock(writer_mu);
      if (jsonl.is_open()) {
        jsonl << rec.to_json().dump() << '\n';
        jsonl.flush();
      }
      if (options.on_record) options.on_record(rec);
    }
    records[i] = std::move(rec);
  });

  std::stable_sort(records.begin(), records.end(),
                   [](const auto& a, const auto& b) { return a.query_id < b.query_id; });
  return records;
}

}  // namespace ddp::harness
