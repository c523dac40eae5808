#include "jsinfer/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "jsinfer/bench.hpp"
#include "jsinfer/error.hpp"
#include "jsinfer/gen.hpp"
#include "jsinfer/merge.hpp"
#include "jsinfer/runner.hpp"
#include "jsinfer/sis_io.hpp"
#include "jsinfer/validate.hpp"

namespace jsinfer {

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage:
      return 2;
    case ErrorCode::Io:
      return 3;
    case ErrorCode::JsonParse:
    case ErrorCode::NotARecord:
    case ErrorCode::SisMalformed:
    case ErrorCode::SisUnknownTag:
    case ErrorCode::SisSingletonUnion:
    case ErrorCode::SisDuplicateKind:
    case ErrorCode::SisNestedUnion:
    case ErrorCode::MetaParse:
    case ErrorCode::MetaDuplicateField:
    case ErrorCode::MetaUnknownType:
    case ErrorCode::SchemaParse:
      return 4;
    default:
      return 1;
  }
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot create '" + out_path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + out_path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  return std::move(buf).str();
}

struct InferArgs {
  std::vector<std::string> inputs;
  int parallelism = 1;
  std::string format = "ndjson";
  std::string out_path;
  std::string stats_path;
  bool lenient = false;
  bool emit_sis = false;
  std::string id;
  std::string title;
};

EmitMeta meta_from(const std::string& id, const std::string& title) {
  EmitMeta meta;
  if (!id.empty()) meta.id = id;
  if (!title.empty()) meta.title = title;
  return meta;
}

int cmd_infer(const InferArgs& args) {
  RunConfig cfg;
  cfg.inputs = args.inputs;
  cfg.parallelism = args.parallelism;
  cfg.format = args.format == "json-array" ? InputFormat::JsonArray : InputFormat::Ndjson;
  cfg.lenient = args.lenient;
  cfg.meta = meta_from(args.id, args.title);

  RunResult result = run_open_inference(cfg);

  if (!args.stats_path.empty()) {
    write_output(result.stats.to_json().dump(2) + "\n", args.stats_path);
  }
  const std::string text =
      args.emit_sis ? serialize_sis(result.global_sis) + "\n" : result.schema.to_string();
  write_output(text, args.out_path);
  return 0;
}

struct DeclaredArgs {
  std::string metadata;
  std::string out_path;
  std::string id;
  std::string title;
  bool emit_sis = false;
};

int cmd_declared(const DeclaredArgs& args) {
  ClosedRunResult result = run_closed(args.metadata, meta_from(args.id, args.title));
  if (result.openness == Openness::Open) {
    std::cerr << "note: dataset '" << result.dataset_name
              << "' is declared open; records may carry fields beyond the declared type."
              << " Run 'jsinfer infer' over the records for full discovery.\n";
  }
  const std::string text =
      args.emit_sis ? serialize_sis(result.sis) + "\n" : result.schema.to_string();
  write_output(text, args.out_path);
  return 0;
}

struct ValidateArgs {
  std::string schema_path;
  std::vector<std::string> inputs;
  std::uint64_t max_violations = 10;
};

SisNode load_schema_for_validation(const std::string& path) {
  const std::string text = read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SchemaParse,
                std::string("schema file is not valid JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("tag")) return deserialize_sis(text);
  return sis_from_json_schema(doc);
}

int cmd_validate(const ValidateArgs& args) {
  const SisNode schema = load_schema_for_validation(args.schema_path);

  std::vector<FileChunk> chunks;
  for (const auto& path : args.inputs) chunks.push_back({path, {}});
  NdjsonSource source(std::move(chunks));

  std::uint64_t checked = 0, violations = 0;
  Record rec;
  while (source.next(rec)) {
    ++checked;
    if (conforms(rec.value, schema)) continue;
    ++violations;
    if (violations <= args.max_violations) {
      const auto detail = explain_violation(rec.value, schema);
      std::cerr << "violation: record #" << rec.ordinal << " (byte " << rec.byte_offset
                << ") at " << detail->path << ": " << detail->message << "\n";
    }
  }
  std::cerr << "checked " << checked << " record(s), " << violations << " violation(s)\n";
  return violations == 0 ? 0 : 1;
}

struct BenchArgs {
  std::string mode;
  std::vector<std::string> corpus;
  std::string metadata;
  std::vector<int> p_list;
  std::vector<int> factors;
  int iterations = 11;
  int parallelism = 0;
  bool as_json = false;
  std::string out_path;
  std::string workdir;
  // generator fallback when no corpus is given
  std::uint64_t gen_records = 0;
  int gen_fields = 10;
  int gen_depth = 3;
  double gen_conflict_rate = 0.02;
  std::uint64_t gen_seed = 7;
};

std::vector<int> default_doublings() {
  std::vector<int> out;
  for (int p = 1; p <= physical_core_count(); p *= 2) out.push_back(p);
  return out;
}

std::vector<std::string> resolve_corpus(const BenchArgs& args) {
  if (!args.corpus.empty()) return args.corpus;
  if (args.gen_records == 0) {
    throw Error(ErrorCode::Usage, "bench needs --corpus or --gen-records");
  }
  CorpusSpec spec;
  spec.records = args.gen_records;
  spec.fields = args.gen_fields;
  spec.max_depth = args.gen_depth;
  spec.conflict_rate = args.gen_conflict_rate;
  spec.seed = args.gen_seed;

  namespace fs = std::filesystem;
  const fs::path dir = args.workdir.empty() ? fs::temp_directory_path() : fs::path(args.workdir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ostringstream name;
  name << "jsinfer_bench_r" << spec.records << "_f" << spec.fields << "_d" << spec.max_depth
       << "_c" << spec.conflict_rate << "_s" << spec.seed << ".ndjson";
  const fs::path path = dir / name.str();
  if (!fs::exists(path) || fs::file_size(path, ec) == 0) {
    std::cerr << "generating benchmark corpus at " << path << " ...\n";
    generate_corpus_file(spec, path.string());
  } else {
    std::cerr << "reusing benchmark corpus at " << path << "\n";
  }
  return {path.string()};
}

int cmd_bench(const BenchArgs& args) {
  const auto corpus = resolve_corpus(args);
  BenchTable table;
  if (args.mode == "speedup") {
    const auto p_list = args.p_list.empty() ? default_doublings() : args.p_list;
    table = run_speedup(corpus, p_list, args.iterations);
  } else if (args.mode == "scaleup") {
    const auto factors = args.factors.empty() ? default_doublings() : args.factors;
    table = run_scaleup(corpus.front(), factors, args.iterations);
  } else if (args.mode == "openclosed") {
    if (args.metadata.empty()) {
      throw Error(ErrorCode::Usage, "bench --mode openclosed requires --metadata");
    }
    const int p = args.parallelism > 0 ? args.parallelism : physical_core_count();
    table = run_open_vs_closed(corpus, args.metadata, args.iterations, p);
  } else {
    throw Error(ErrorCode::Usage, "unknown bench mode '" + args.mode + "'");
  }
  write_output(args.as_json ? table.to_json().dump(2) + "\n" : table.to_csv(), args.out_path);
  return 0;
}

struct GenArgs {
  CorpusSpec spec;
  std::string out_path;
};

int cmd_gen(const GenArgs& args) {
  const auto bytes = generate_corpus_file(args.spec, args.out_path);
  std::cerr << "wrote " << args.spec.records << " record(s), " << bytes << " byte(s) to "
            << args.out_path << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"JSON schema inference over NDJSON corpora"};
  app.require_subcommand(1);

  InferArgs infer_args;
  auto* infer = app.add_subcommand(
      "infer", "Infer a JSON Schema by scanning records (parallel local + global phases)");
  infer->add_option("--input", infer_args.inputs, "input file(s)")->required();
  infer->add_option("-P,--parallelism", infer_args.parallelism, "worker count")
      ->check(CLI::PositiveNumber);
  infer->add_option("--format", infer_args.format, "input format")
      ->check(CLI::IsMember({"ndjson", "json-array"}));
  infer->add_option("--out", infer_args.out_path, "write the schema here instead of stdout");
  infer->add_option("--stats", infer_args.stats_path, "write per-phase run stats (JSON)");
  infer->add_flag("--lenient", infer_args.lenient, "skip malformed records instead of failing");
  infer->add_flag("--sis", infer_args.emit_sis, "emit the SIS interchange form, not JSON Schema");
  infer->add_option("--id", infer_args.id, "value for the schema's $id");
  infer->add_option("--title", infer_args.title, "value for the schema's title");

  DeclaredArgs declared_args;
  auto* declared = app.add_subcommand(
      "declared", "Emit the schema from declared dataset metadata without scanning records");
  declared->add_option("--metadata", declared_args.metadata, "metadata file")->required();
  declared->add_option("--out", declared_args.out_path, "write the schema here instead of stdout");
  declared->add_flag("--sis", declared_args.emit_sis,
                     "emit the SIS interchange form, not JSON Schema");
  declared->add_option("--id", declared_args.id, "value for the schema's $id");
  declared->add_option("--title", declared_args.title, "value for the schema's title");

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Check records against a schema");
  validate->add_option("--schema", validate_args.schema_path,
                       "schema file (SIS interchange or emitted JSON Schema)")
      ->required();
  validate->add_option("--input", validate_args.inputs, "NDJSON input file(s)")->required();
  validate->add_option("--max-violations", validate_args.max_violations,
                       "number of violations to print");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Speed-up / scale-up / open-vs-closed sweeps");
  bench->add_option("--mode", bench_args.mode, "speedup | scaleup | openclosed")
      ->required()
      ->check(CLI::IsMember({"speedup", "scaleup", "openclosed"}));
  bench->add_option("--corpus", bench_args.corpus, "corpus file(s)");
  bench->add_option("--metadata", bench_args.metadata, "metadata file (openclosed mode)");
  bench->add_option("--p-list", bench_args.p_list, "parallelism sweep, e.g. 1,2,4")
      ->delimiter(',');
  bench->add_option("--factors", bench_args.factors, "scale factors, e.g. 1,2,4")
      ->delimiter(',');
  bench->add_option("--iterations", bench_args.iterations,
                    "runs per configuration; the first is warm-up")
      ->check(CLI::PositiveNumber);
  bench->add_option("-P,--parallelism", bench_args.parallelism,
                    "open-path workers (openclosed mode; defaults to physical cores)");
  bench->add_flag("--json", bench_args.as_json, "emit the result table as JSON, not CSV");
  bench->add_option("--out", bench_args.out_path, "write the table here instead of stdout");
  bench->add_option("--workdir", bench_args.workdir, "directory for generated corpora");
  bench->add_option("--gen-records", bench_args.gen_records,
                    "generate a corpus of this many records when --corpus is absent");
  bench->add_option("--gen-fields", bench_args.gen_fields, "generator: fields per record");
  bench->add_option("--gen-depth", bench_args.gen_depth, "generator: nesting depth");
  bench->add_option("--gen-conflict-rate", bench_args.gen_conflict_rate,
                    "generator: type-conflict rate");
  bench->add_option("--gen-seed", bench_args.gen_seed, "generator: seed");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic NDJSON corpus");
  gen->add_option("--records", gen_args.spec.records, "record count")->required();
  gen->add_option("--fields", gen_args.spec.fields, "top-level fields per record");
  gen->add_option("--depth", gen_args.spec.max_depth, "nesting depth");
  gen->add_option("--conflict-rate", gen_args.spec.conflict_rate, "type-conflict rate");
  gen->add_option("--missing-rate", gen_args.spec.missing_rate, "field absence rate");
  gen->add_option("--array-max", gen_args.spec.array_max, "maximum array length");
  gen->add_option("--seed", gen_args.spec.seed, "generator seed");
  gen->add_option("--out", gen_args.out_path, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e);
    return 2;
  }

  try {
    if (*infer) return cmd_infer(infer_args);
    if (*declared) return cmd_declared(declared_args);
    if (*validate) return cmd_validate(validate_args);
    if (*bench) return cmd_bench(bench_args);
    if (*gen) return cmd_gen(gen_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace jsinfer
