#include <doctest.h>

#include "jsinfer/error.hpp"
#include "jsinfer/infer.hpp"
#include "jsinfer/merge.hpp"
#include "jsinfer/validate.hpp"
#include "test_helpers.hpp"

using namespace jsinfer;
using nlohmann::json;
namespace t = jsinfer::test;

namespace {

const char* kProductLine =
    R"({"productId": 1, "productName": "Ice sculpture", "price": 12.50, "tags": ["cold", "ice"]})";

LocalSis fold_all(std::vector<json> records, std::uint32_t partition = 0,
                  InferOptions options = {}, SourceCounters* counters = nullptr) {
  MemorySource source(std::move(records));
  return compute_local_sis(source, partition, options, counters);
}

}  // namespace

TEST_CASE("tag_of_value distinguishes integer and number lexemes") {
  CHECK(tag_of_value(json::parse("1")) == TypeTag::Integer);
  CHECK(tag_of_value(json::parse("-7")) == TypeTag::Integer);
  CHECK(tag_of_value(json::parse("12.50")) == TypeTag::Number);
  CHECK(tag_of_value(json::parse("1.0")) == TypeTag::Number);
  CHECK(tag_of_value(json::parse("1e2")) == TypeTag::Number);
  CHECK(tag_of_value(json::parse("null")) == TypeTag::Null);
  CHECK(tag_of_value(json::parse("true")) == TypeTag::Boolean);
  CHECK(tag_of_value(json::parse(R"("x")")) == TypeTag::String);
  CHECK(tag_of_value(json::parse("{}")) == TypeTag::Object);
  CHECK(tag_of_value(json::parse("[]")) == TypeTag::Array);
}

TEST_CASE("node_from_value describes the product record") {
  const SisNode node = node_from_value(json::parse(kProductLine));
  const SisNode expected = make_object({
      {"price", make_primitive(TypeTag::Number)},
      {"productId", make_primitive(TypeTag::Integer)},
      {"productName", make_primitive(TypeTag::String)},
      {"tags", make_array(make_primitive(TypeTag::String))},
  });
  CHECK(node == expected);
  check_invariants(node);
}

TEST_CASE("node_from_value on an empty record is the empty object node") {
  CHECK(node_from_value(json::parse("{}")) == make_object());
}

TEST_CASE("mixed array elements fold into an item union") {
  const SisNode node = node_from_value(json::parse(R"([1, "x"])"));
  // brute-force pairwise merge of the element nodes
  const SisNode expected_item =
      merge_nodes(node_from_value(json(1)), node_from_value(json("x")));
  CHECK(node == make_array(expected_item));
  REQUIRE(node.item_node() != nullptr);
  CHECK(node.item_node()->tag == TypeTag::Union);
}

TEST_CASE("node_from_value matches the element-merge oracle on random arrays") {
  t::Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    json arr = json::array();
    const int n = static_cast<int>(t::pick(rng, 6));
    for (int k = 0; k < n; ++k) arr.push_back(t::random_value(rng, 2));

    SisNode expected = make_array();
    for (const auto& elem : arr) {
      if (expected.item.empty()) {
        expected.item.push_back(node_from_value(elem));
      } else {
        expected.item.front() =
            merge_nodes(std::move(expected.item.front()), node_from_value(elem));
      }
    }
    CHECK(node_from_value(arr) == expected);
  }
}

TEST_CASE("fold_record builds a union for a kind-conflicted field") {
  LocalSis acc;
  acc = fold_record(std::move(acc), json::parse(R"({"Peeve": 1})"));
  acc = fold_record(std::move(acc), json::parse(R"({"Peeve": "noise"})"));

  const SisNode* peeve = acc.root.find_field("Peeve");
  REQUIRE(peeve != nullptr);
  CHECK(*peeve == make_union(make_primitive(TypeTag::Integer),
                             make_primitive(TypeTag::String)));
  CHECK(acc.record_count == 2);
}

TEST_CASE("folding the first record equals node_from_value") {
  const json record = json::parse(kProductLine);
  const LocalSis acc = fold_record(LocalSis{}, record);
  CHECK(acc.root == node_from_value(record));
  CHECK(acc.record_count == 1);
}

TEST_CASE("folding the same record twice does not change the schema") {
  const json record = json::parse(kProductLine);
  const LocalSis once = fold_record(LocalSis{}, record);
  const LocalSis twice = fold_record(fold_record(LocalSis{}, record), record);
  CHECK(twice.root == once.root);
  CHECK(twice.record_count == 2);
}

TEST_CASE("fold_record rejects non-object records") {
  CHECK_THROWS_AS((void)fold_record(LocalSis{}, json::parse("[1]")), Error);
  try {
    (void)fold_record(LocalSis{}, json::parse("42"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotARecord);
  }
}

TEST_CASE("compute_local_sis over a homogeneous stream") {
  const json record = json::parse(kProductLine);
  const LocalSis local = fold_all({record, record, record}, 3);
  CHECK(local.record_count == 3);
  CHECK(local.partition_id == 3);
  CHECK(local.root == node_from_value(record));
}

TEST_CASE("compute_local_sis over an empty stream") {
  const LocalSis local = fold_all({});
  CHECK(local.record_count == 0);
  CHECK(local.root == make_object());
}

TEST_CASE("compute_local_sis equals the naive quadratic reference") {
  t::Rng rng(41);
  for (int round = 0; round < 25; ++round) {
    std::vector<json> records;
    const int n = static_cast<int>(t::pick(rng, 200));
    records.reserve(n);
    for (int i = 0; i < n; ++i) records.push_back(t::random_record(rng, 3));

    const LocalSis fused = fold_all(records);
    CHECK(fused.record_count == static_cast<std::uint64_t>(n));
    CHECK(sis_equal(fused.root, t::naive_infer(records)));
  }
}

TEST_CASE("fold order does not change the schema") {
  t::Rng rng(43);
  for (int round = 0; round < 15; ++round) {
    std::vector<json> records;
    const int n = 2 + static_cast<int>(t::pick(rng, 60));
    for (int i = 0; i < n; ++i) records.push_back(t::random_record(rng, 3));

    std::vector<json> shuffled = records;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(sis_equal(fold_all(records).root, fold_all(shuffled).root));
  }
}

TEST_CASE("every folded record conforms to the resulting schema") {
  t::Rng rng(47);
  std::vector<json> records;
  for (int i = 0; i < 150; ++i) records.push_back(t::random_record(rng, 3));
  const LocalSis local = fold_all(records);
  for (const auto& record : records) {
    CHECK(conforms(record, local.root));
  }
}

TEST_CASE("local merging absorbs into the global merge") {
  t::Rng rng(53);
  for (int round = 0; round < 15; ++round) {
    std::vector<json> all;
    const int n = 2 + static_cast<int>(t::pick(rng, 80));
    for (int i = 0; i < n; ++i) all.push_back(t::random_record(rng, 3));
    const std::size_t cut = 1 + t::pick(rng, all.size() - 1);
    const std::vector<json> first(all.begin(), all.begin() + cut);
    const std::vector<json> second(all.begin() + cut, all.end());

    const SisNode merged =
        merge_nodes(fold_all(first).root, fold_all(second).root);
    CHECK(sis_equal(merged, fold_all(all).root));
  }
}

TEST_CASE("schema size is bounded by distinct paths, not record count") {
  const json record = json::parse(kProductLine);
  const LocalSis one = fold_all({record});
  std::vector<json> many(1000, record);
  const LocalSis thousand = fold_all(std::move(many));
  CHECK(t::count_nodes(thousand.root) == t::count_nodes(one.root));
}

TEST_CASE("ndjson source streams records with ordinals and offsets") {
  const std::string path = t::work_path("infer_stream.ndjson");
  t::write_file(path, "{\"a\": 1}\n\n{\"a\": 2}\r\n{\"a\": 3}");
  NdjsonSource source({{path, {}}});
  Record rec;
  std::vector<std::uint64_t> ordinals;
  std::vector<std::int64_t> values;
  while (source.next(rec)) {
    ordinals.push_back(rec.ordinal);
    values.push_back(rec.value.at("a").get<std::int64_t>());
  }
  CHECK(ordinals == std::vector<std::uint64_t>{0, 1, 2});
  CHECK(values == std::vector<std::int64_t>{1, 2, 3});
  CHECK(source.counters().bytes > 0);
}

TEST_CASE("duplicate keys: last occurrence wins and the warning counter ticks") {
  NdjsonSource source({{t::data_path("dup_key.ndjson"), {}}});
  Record rec;
  REQUIRE(source.next(rec));
  CHECK(rec.value.at("a").get<std::int64_t>() == 2);
  CHECK(rec.value.at("b").at("c").get<std::int64_t>() == 3);
  REQUIRE(source.next(rec));
  CHECK(!source.next(rec));
  CHECK(source.counters().duplicate_keys == 3);
}

TEST_CASE("malformed ndjson lines carry a byte offset") {
  NdjsonSource source({{t::data_path("bad_line.ndjson"), {}}});
  Record rec;
  REQUIRE(source.next(rec));
  try {
    while (source.next(rec)) {
    }
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::JsonParse);
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
}

TEST_CASE("lenient sources skip malformed lines and count them") {
  NdjsonSource source({{t::data_path("bad_line.ndjson"), {}}}, /*lenient=*/true);
  const LocalSis local = compute_local_sis(source, 0, {.lenient = true, .cancel = nullptr});
  CHECK(local.record_count == 2);
  CHECK(source.counters().skipped == 1);
}

TEST_CASE("lenient fold skips non-object records and counts them") {
  NdjsonSource strict({{t::data_path("not_records.ndjson"), {}}});
  CHECK_THROWS_AS(compute_local_sis(strict, 0), Error);

  NdjsonSource source({{t::data_path("not_records.ndjson"), {}}});
  SourceCounters fold_counters;
  const LocalSis local =
      compute_local_sis(source, 0, {.lenient = true, .cancel = nullptr}, &fold_counters);
  CHECK(local.record_count == 2);
  CHECK(fold_counters.skipped == 1);
}

TEST_CASE("parse_record_array reads whole-file arrays") {
  SourceCounters counters;
  const auto records = parse_record_array(R"([{"a": 1}, {"a": 2, "a": 3}])", &counters);
  REQUIRE(records.size() == 2);
  CHECK(records[1].at("a").get<std::int64_t>() == 3);
  CHECK(counters.duplicate_keys == 1);

  CHECK_THROWS_AS((void)parse_record_array(R"({"not": "an array"})"), Error);
  CHECK_THROWS_AS((void)parse_record_array("[1,"), Error);
}

TEST_CASE("record byte counter advances only for record reads") {
  const auto before = record_bytes_read();
  NdjsonSource source({{t::data_path("product.ndjson"), {}}});
  Record rec;
  while (source.next(rec)) {
  }
  CHECK(record_bytes_read() > before);
}
