// Acceptance suite: runs every acceptance criterion end to end and prints
// one pass/fail line per criterion. Exits nonzero if any criterion fails.
//
// Corpora are generated into the work directory on first use and reused on
// later runs. Extra NDJSON corpora (for example downloaded real-world
// datasets) can be added to the soundness criterion via the
// JSINFER_EXTRA_CORPORA environment variable (colon-separated paths).

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "jsinfer/bench.hpp"
#include "jsinfer/emit.hpp"
#include "jsinfer/gen.hpp"
#include "jsinfer/merge.hpp"
#include "jsinfer/runner.hpp"
#include "jsinfer/validate.hpp"
#include "test_helpers.hpp"

using namespace jsinfer;
namespace fs = std::filesystem;
namespace t = jsinfer::test;
using Clock = std::chrono::steady_clock;

namespace {

struct ProcResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

ProcResult run_process(const std::string& cmd) {
  const std::string out_path = t::work_path("acc_stdout.txt");
  const std::string err_path = t::work_path("acc_stderr.txt");
  const int status = std::system((cmd + " >" + out_path + " 2>" + err_path).c_str());
  ProcResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = t::read_file(out_path);
  result.err = t::read_file(err_path);
  return result;
}

std::string fmt(double v, int digits = 2) {
  std::ostringstream out;
  out.precision(digits);
  out << std::fixed << v;
  return out.str();
}

// --- corpus materialization (cached between runs) ---------------------------

std::string cached_corpus(const CorpusSpec& spec, const std::string& name) {
  const std::string path = t::work_path(name);
  std::error_code ec;
  if (!fs::exists(path, ec) || fs::file_size(path, ec) == 0) {
    std::fprintf(stderr, "  [prep] generating %s ...\n", name.c_str());
    generate_corpus_file(spec, path);
  }
  return path;
}

std::string cached_athlete_corpus(std::uint64_t records, const std::string& name) {
  const std::string path = t::work_path(name);
  std::error_code ec;
  if (!fs::exists(path, ec) || fs::file_size(path, ec) == 0) {
    std::fprintf(stderr, "  [prep] writing %s ...\n", name.c_str());
    std::string buffer;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    for (std::uint64_t i = 0; i < records; ++i) {
      buffer += "{\"id\": " + std::to_string(i) + ", \"name\": \"athlete_" +
                std::to_string(i % 9973) + "\"}\n";
      if (buffer.size() > (1 << 20)) {
        out << buffer;
        buffer.clear();
      }
    }
    out << buffer;
  }
  return path;
}

// Sizes a generator spec so the corpus lands at or above target_bytes.
CorpusSpec sized_spec(std::uint64_t target_bytes, std::uint64_t seed) {
  CorpusSpec spec;
  spec.fields = 12;
  spec.max_depth = 3;
  spec.conflict_rate = 0.02;
  spec.missing_rate = 0.05;
  spec.seed = seed;
  CorpusSpec probe = spec;
  probe.records = 2000;
  const double avg = static_cast<double>(generate_corpus(probe).size()) / 2000.0;
  spec.records = static_cast<std::uint64_t>(std::ceil(target_bytes / avg)) + 1;
  return spec;
}

RunConfig config_for(std::vector<std::string> inputs, int parallelism) {
  RunConfig cfg;
  cfg.inputs = std::move(inputs);
  cfg.parallelism = parallelism;
  return cfg;
}

// --- criteria ----------------------------------------------------------------

bool criterion_golden(std::string& detail) {
  const auto t0 = Clock::now();
  const ProcResult result = run_process(
      std::string(JSINFER_BIN) + " infer --input " + t::data_path("product.ndjson") +
      " -P 2 --id https://example.com/product.schema.json --title Product");
  const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();

  const std::string golden = t::read_file(t::data_path("product.schema.json"));
  if (result.exit_code != 0) {
    detail = "inference exited with " + std::to_string(result.exit_code);
    return false;
  }
  if (result.out != golden) {
    detail = "schema bytes differ from the golden document";
    return false;
  }
  if (seconds >= 1.0) {
    detail = "took " + fmt(seconds) + " s (limit 1 s)";
    return false;
  }
  detail = "byte-exact golden document in " + fmt(seconds, 3) + " s";
  return true;
}

bool criterion_soundness(std::string& detail) {
  if (run_process("python3 -c \"import jsonschema\"").exit_code != 0) {
    detail = "python3 with the jsonschema package is required for the independent validator";
    return false;
  }

  struct Corpus {
    std::string name;
    std::string path;
  };
  std::vector<Corpus> corpora = {
      {"product", t::data_path("product.ndjson")},
      {"peeve", t::data_path("peeve.ndjson")},
      {"mixed", t::data_path("mixed.ndjson")},
  };

  CorpusSpec basic;
  basic.records = 10000;
  basic.fields = 10;
  basic.max_depth = 4;
  basic.conflict_rate = 0.15;
  basic.missing_rate = 0.15;
  basic.seed = 42;
  corpora.push_back({"generated-basic-10k", cached_corpus(basic, "acc_basic_10k.ndjson")});

  CorpusSpec conflict;
  conflict.records = 5000;
  conflict.fields = 8;
  conflict.max_depth = 5;
  conflict.conflict_rate = 0.35;
  conflict.missing_rate = 0.2;
  conflict.seed = 43;
  corpora.push_back(
      {"generated-conflict-5k", cached_corpus(conflict, "acc_conflict_5k.ndjson")});

  CorpusSpec plain;
  plain.records = 20000;
  plain.fields = 12;
  plain.max_depth = 2;
  plain.conflict_rate = 0.0;
  plain.missing_rate = 0.1;
  plain.seed = 44;
  corpora.push_back({"generated-plain-20k", cached_corpus(plain, "acc_plain_20k.ndjson")});

  corpora.push_back({"athlete-10k", cached_athlete_corpus(10000, "acc_athlete_10k.ndjson")});

  if (const char* extra = std::getenv("JSINFER_EXTRA_CORPORA")) {
    std::stringstream stream(extra);
    std::string path;
    int index = 0;
    while (std::getline(stream, path, ':')) {
      if (!path.empty()) corpora.push_back({"extra-" + std::to_string(index++), path});
    }
  }

  std::uint64_t total_checked = 0;
  for (const auto& corpus : corpora) {
    const RunResult result = run_open_inference(config_for({corpus.path}, 2));

    // internal oracle: every record conforms to the inferred SIS
    NdjsonSource source({{corpus.path, {}}});
    Record rec;
    std::uint64_t checked = 0;
    while (source.next(rec)) {
      ++checked;
      if (!conforms(rec.value, result.global_sis)) {
        const auto why = explain_violation(rec.value, result.global_sis);
        detail = corpus.name + ": record #" + std::to_string(rec.ordinal) +
                 " fails conforms() at " + why->path + ": " + why->message;
        return false;
      }
    }
    if (checked != result.stats.records_total) {
      detail = corpus.name + ": reader saw " + std::to_string(checked) +
               " records but the run counted " + std::to_string(result.stats.records_total);
      return false;
    }

    // independent draft 2020-12 validator on the emitted document
    const std::string schema_path = t::work_path("acc_schema.json");
    t::write_file(schema_path, result.schema.to_string());
    const ProcResult validated = run_process(std::string("python3 ") + JSINFER_PY_VALIDATOR +
                                             " " + schema_path + " " + corpus.path);
    std::uint64_t py_checked = 0, py_invalid = 0;
    if (std::sscanf(validated.out.c_str(), "%" SCNu64 " %" SCNu64, &py_checked,
                    &py_invalid) != 2) {
      detail = corpus.name + ": validator produced no verdict: " + validated.err;
      return false;
    }
    if (validated.exit_code != 0 || py_invalid != 0 || py_checked != checked) {
      detail = corpus.name + ": independent validator found " + std::to_string(py_invalid) +
               " invalid of " + std::to_string(py_checked) + " (" + validated.err + ")";
      return false;
    }
    total_checked += checked;
  }

  detail = std::to_string(corpora.size()) + " corpora, " + std::to_string(total_checked) +
           " records: conforms() and jsonschema (draft 2020-12) both at 100%";
  return true;
}

bool criterion_parallel_equivalence(std::string& detail) {
  t::Rng rng(500);
  const std::string path = t::work_path("acc_c3_corpus.ndjson");
  int runs = 0;
  for (int i = 0; i < 100; ++i) {
    CorpusSpec spec;
    spec.records = 30 + t::pick(rng, 300);
    spec.fields = 2 + static_cast<int>(t::pick(rng, 11));
    spec.max_depth = 1 + static_cast<int>(t::pick(rng, 5));
    spec.conflict_rate = static_cast<double>(t::pick(rng, 40)) / 100.0;
    spec.missing_rate = static_cast<double>(t::pick(rng, 30)) / 100.0;
    spec.array_max = 1 + static_cast<int>(t::pick(rng, 4));
    spec.seed = 1000 + i;
    generate_corpus_file(spec, path);
    const auto size = fs::file_size(path);

    const std::string reference = run_open_inference(config_for({path}, 1)).schema.to_string();
    for (int p : {2, 4, 8}) {
      if (run_open_inference(config_for({path}, p)).schema.to_string() != reference) {
        detail = "corpus " + std::to_string(i) + ": P=" + std::to_string(p) +
                 " produced different bytes";
        return false;
      }
      ++runs;
    }

    // randomized partition boundaries, straight through the phase APIs
    for (int round = 0; round < 3; ++round) {
      std::vector<std::uint64_t> cuts;
      const int k = 1 + static_cast<int>(t::pick(rng, 7));
      for (int c = 0; c < k; ++c) cuts.push_back(t::pick(rng, size + 1));
      std::vector<LocalSis> locals;
      std::uint32_t pid = 0;
      for (auto& span : plan_partitions_at({path}, cuts)) {
        NdjsonSource source(std::move(span));
        locals.push_back(compute_local_sis(source, pid++));
      }
      if (to_json_schema(merge_sis(locals)).to_string() != reference) {
        detail = "corpus " + std::to_string(i) + ": randomized boundaries changed the schema";
        return false;
      }
      ++runs;
    }
  }
  detail = "100 corpora x (P in {1,2,4,8} + 3 randomized-boundary runs): " +
           std::to_string(runs) + " runs, 0 mismatches";
  return true;
}

bool criterion_merge_algebra(std::string& detail) {
  t::Rng rng(600);
  const int iterations = 10000;
  for (int i = 0; i < iterations; ++i) {
    const SisNode a = t::random_sis(rng, 3);
    const SisNode b = t::random_sis(rng, 3);
    const SisNode c = t::random_sis(rng, 3);

    if (!sis_equal(merge_nodes(a, b), merge_nodes(b, a))) {
      detail = "commutativity violated at iteration " + std::to_string(i);
      return false;
    }
    if (!sis_equal(merge_nodes(merge_nodes(a, b), c), merge_nodes(a, merge_nodes(b, c)))) {
      detail = "associativity violated at iteration " + std::to_string(i);
      return false;
    }
    if (!sis_equal(merge_nodes(a, a), a)) {
      detail = "idempotence violated at iteration " + std::to_string(i);
      return false;
    }
    // flat unions, unique kinds, no singleton unions anywhere in the result
    try {
      check_invariants(canonicalize(merge_nodes(a, b)));
    } catch (const std::exception& e) {
      detail = "merge result violates invariants at iteration " + std::to_string(i) + ": " +
               e.what();
      return false;
    }
    // singleton-union collapse: same-kind joins never produce a union
    if (a.tag != TypeTag::Union && b.tag != TypeTag::Union &&
        kind_key(a) == kind_key(b) && make_union(a, b).tag == TypeTag::Union) {
      detail = "same-kind join produced a union at iteration " + std::to_string(i);
      return false;
    }
  }
  detail = std::to_string(iterations) +
           " random triples: commutative, associative, idempotent, flat unions";
  return true;
}

bool criterion_oracle_equivalence(std::string& detail) {
  t::Rng rng(700);
  int corpora = 0, partition_checks = 0;
  for (int round = 0; round < 200; ++round) {
    std::vector<nlohmann::json> records;
    const int n = static_cast<int>(t::pick(rng, 201));
    for (int i = 0; i < n; ++i) records.push_back(t::random_record(rng, 3));

    MemorySource whole(records);
    const LocalSis fused = compute_local_sis(whole, 0);
    const SisNode naive = t::naive_infer(records);
    if (!sis_equal(fused.root, naive)) {
      detail = "round " + std::to_string(round) + ": fused fold differs from the reference";
      return false;
    }
    ++corpora;

    // any partitioning must merge to the single-partition result
    const int parts = 1 + static_cast<int>(t::pick(rng, 8));
    std::vector<std::vector<nlohmann::json>> buckets(parts);
    for (const auto& record : records) buckets[t::pick(rng, parts)].push_back(record);
    std::vector<LocalSis> locals;
    for (int p = 0; p < parts; ++p) {
      MemorySource source(buckets[p]);
      locals.push_back(compute_local_sis(source, static_cast<std::uint32_t>(p)));
    }
    if (!sis_equal(merge_sis(locals), fused.root)) {
      detail = "round " + std::to_string(round) + ": partitioned merge differs";
      return false;
    }
    ++partition_checks;
  }
  detail = std::to_string(corpora) + " corpora vs the quadratic reference, " +
           std::to_string(partition_checks) + " random partitionings: 0 mismatches";
  return true;
}

bool criterion_speedup(std::string& detail) {
  const auto t0 = Clock::now();
  const int cores = physical_core_count();
  std::vector<int> p_list;
  for (int p = 1; p <= cores; p *= 2) p_list.push_back(p);
  if (p_list.size() < 2) {
    detail = "only " + std::to_string(cores) + " physical core(s); no doubling to evaluate";
    return false;
  }

  const CorpusSpec spec = sized_spec(520ull << 20, 77);
  const std::string corpus = cached_corpus(spec, "acc_speedup_520mb.ndjson");
  const auto corpus_bytes = fs::file_size(corpus);
  if (corpus_bytes < (500ull << 20)) {
    detail = "corpus only " + std::to_string(corpus_bytes >> 20) + " MiB";
    return false;
  }

  const BenchTable table = run_speedup({corpus}, p_list, 11);
  const double sweep_s = std::chrono::duration<double>(Clock::now() - t0).count();

  std::string timings;
  bool ok = true;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    timings += (i ? ", " : "") + std::string("P=") + std::to_string(table.rows[i].parallelism) +
               ": " + fmt(table.rows[i].total_ms, 0) + " ms";
    if (i > 0) {
      const double speedup = table.rows[i - 1].total_ms / table.rows[i].total_ms;
      timings += " (x" + fmt(speedup) + ")";
      if (table.rows[i].total_ms >= table.rows[i - 1].total_ms) ok = false;
      if (speedup < 1.5) ok = false;
    }
  }
  if (sweep_s >= 900.0) {
    detail = "sweep took " + fmt(sweep_s, 0) + " s (limit 900 s); " + timings;
    return false;
  }
  detail = std::to_string(corpus_bytes >> 20) + " MiB corpus, 11 iterations: " + timings +
           "; sweep " + fmt(sweep_s, 0) + " s; per-doubling threshold 1.5x";
  return ok;
}

bool criterion_closed_constancy(std::string& detail) {
  const std::string metadata = t::data_path("athlete.meta.json");
  const std::string small = cached_athlete_corpus(10000, "acc_athlete_1e4.ndjson");
  const std::string large = cached_athlete_corpus(1000000, "acc_athlete_1e6.ndjson");
  const int cores = physical_core_count();

  const auto bytes_before = record_bytes_read();
  const BenchTable on_small = run_open_vs_closed({small}, metadata, 15, cores);
  const BenchTable on_large = run_open_vs_closed({large}, metadata, 15, cores);

  const BenchRow& closed_small = on_small.rows[1];
  const BenchRow& closed_large = on_large.rows[1];
  const BenchRow& open_large = on_large.rows[0];

  if (closed_small.bytes != 0 || closed_large.bytes != 0) {
    detail = "closed path read record bytes";
    return false;
  }

  const double ratio = std::max(closed_small.total_ms, closed_large.total_ms) /
                       std::min(closed_small.total_ms, closed_large.total_ms);
  const double open_vs_closed = open_large.total_ms / closed_large.total_ms;

  // cross-path agreement on a corpus that matches the declared type
  const std::string from_open =
      run_open_inference(config_for({small}, cores)).schema.to_string();
  const std::string from_closed = run_closed(metadata).schema.to_string();
  if (from_open != from_closed) {
    detail = "open and closed paths emitted different schemas for the athlete dataset";
    return false;
  }
  if (record_bytes_read() == bytes_before) {
    detail = "instrumentation suspect: open runs recorded no bytes";
    return false;
  }

  detail = "closed: " + fmt(closed_small.total_ms, 3) + " / " + fmt(closed_large.total_ms, 3) +
           " ms across 1e4/1e6 records (ratio " + fmt(ratio) + ", limit 2); open 1e6: " +
           fmt(open_large.total_ms, 0) + " ms (" + fmt(open_vs_closed, 0) +
           "x closed, need >= 10); zero record bytes; schemas agree across paths";
  return ratio <= 2.0 && open_vs_closed >= 10.0;
}

bool criterion_scaleup(std::string& detail) {
  const int cores = physical_core_count();
  std::vector<int> factors;
  for (int f = 1; f <= std::min(cores, 4); f *= 2) factors.push_back(f);
  if (factors.size() < 2) {
    detail = "only " + std::to_string(cores) + " physical core(s); no doubling to evaluate";
    return false;
  }

  const CorpusSpec spec = sized_spec(150ull << 20, 78);
  const std::string base = cached_corpus(spec, "acc_scaleup_150mb.ndjson");

  const BenchTable table = run_scaleup(base, factors, 11);
  double min_ms = table.rows.front().total_ms, max_ms = min_ms, max_skew = 1.0;
  std::string timings;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    min_ms = std::min(min_ms, row.total_ms);
    max_ms = std::max(max_ms, row.total_ms);
    max_skew = std::max(max_skew, row.skew);
    timings += (i ? ", " : "") + std::string("f=") + std::to_string(row.parallelism) + ": " +
               fmt(row.total_ms, 0) + " ms (skew " + fmt(row.skew) + ")";
  }
  const double flatness = max_ms / min_ms;
  detail = timings + "; flatness " + fmt(flatness) + " (limit 1.3)";
  return flatness <= 1.3;
}

struct Criterion {
  int id;
  std::string name;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
  }

  fs::create_directories(t::work_path(""));
  std::fprintf(stderr, "acceptance: %d physical core(s), work dir %s\n", physical_core_count(),
               t::work_path("").c_str());

  const std::vector<Criterion> criteria = {
      {1, "golden-product-schema", criterion_golden},
      {2, "soundness-vs-independent-validator", criterion_soundness},
      {3, "parallel-sequential-equivalence", criterion_parallel_equivalence},
      {4, "merge-algebra", criterion_merge_algebra},
      {5, "oracle-equivalence", criterion_oracle_equivalence},
      {6, "speedup-shape", criterion_speedup},
      {7, "closed-path-constancy", criterion_closed_constancy},
      {8, "scaleup-flatness", criterion_scaleup},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (only != 0 && criterion.id != only) continue;
    std::string detail;
    bool pass = false;
    const auto t0 = Clock::now();
    try {
      pass = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("[%s] %d %s (%.1f s) :: %s\n", pass ? "PASS" : "FAIL", criterion.id,
                criterion.name.c_str(), seconds, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
