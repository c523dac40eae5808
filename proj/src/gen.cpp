#include "jsinfer/gen.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "jsinfer/error.hpp"
#include "jsinfer/sis.hpp"

namespace jsinfer {

namespace {

constexpr std::array<const char*, 20> kWords = {
    "id",    "name",  "score", "count", "active", "tags",  "meta",  "note",  "ts",    "label",
    "value", "flags", "depth", "lang",  "city",   "code",  "rate",  "attrs", "items", "extra",
};

struct ValuePlan {
  TypeTag base = TypeTag::Integer;
  std::optional<TypeTag> alt;  // conflicting kind, disjoint from base
  std::vector<std::pair<std::string, ValuePlan>> children;  // base == Object
  std::vector<ValuePlan> element;                           // base == Array
};

class Generator {
 public:
  explicit Generator(const CorpusSpec& spec) : spec_(spec), rng_(spec.seed) {
    spec_.fields = std::max(spec_.fields, 0);
    spec_.max_depth = std::max(spec_.max_depth, 0);
    spec_.array_max = std::max(spec_.array_max, 0);
    spec_.conflict_rate = std::clamp(spec_.conflict_rate, 0.0, 1.0);
    spec_.missing_rate = std::clamp(spec_.missing_rate, 0.0, 1.0);
    plan_.base = TypeTag::Object;
    for (int i = 0; i < spec_.fields; ++i) {
      plan_.children.emplace_back(field_name(i), make_plan(spec_.max_depth));
    }
  }

  void write_record(std::string& out) {
    write_value(out, plan_, /*conflicted=*/false, /*top_level=*/true);
    out += '\n';
  }

 private:
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  std::uint64_t pick(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_);
  }

  std::string field_name(int index) {
    std::string name = kWords[static_cast<std::size_t>(index) % kWords.size()];
    if (index >= static_cast<int>(kWords.size())) name += "_" + std::to_string(index);
    return name;
  }

  TypeTag pick_scalar() {
    switch (pick(5)) {
      case 0: return TypeTag::Null;
      case 1: return TypeTag::Boolean;
      case 2: return TypeTag::Integer;
      case 3: return TypeTag::Number;
      default: return TypeTag::String;
    }
  }

  // Disjoint under JSON Schema semantics: never pairs Integer with Number.
  TypeTag pick_conflict(TypeTag base) {
    for (;;) {
      const TypeTag alt = pick_scalar();
      if (alt == base) continue;
      const bool numeric_pair = (alt == TypeTag::Integer && base == TypeTag::Number) ||
                                (alt == TypeTag::Number && base == TypeTag::Integer);
      if (numeric_pair) continue;
      return alt;
    }
  }

  ValuePlan make_plan(int depth) {
    ValuePlan plan;
    const std::uint64_t roll = pick(100);
    if (depth > 0 && roll < 12) {
      plan.base = TypeTag::Object;
      const int n = 2 + static_cast<int>(pick(3));
      for (int i = 0; i < n; ++i) {
        plan.children.emplace_back(field_name(static_cast<int>(pick(kWords.size()))) +
                                       "_" + std::to_string(i),
                                   make_plan(depth - 1));
      }
    } else if (depth > 0 && roll < 26) {
      plan.base = TypeTag::Array;
      plan.element.push_back(make_plan(depth - 1));
    } else if (roll < 44) {
      plan.base = TypeTag::Integer;
    } else if (roll < 56) {
      plan.base = TypeTag::Number;
    } else if (roll < 66) {
      plan.base = TypeTag::Boolean;
    } else if (roll < 70) {
      plan.base = TypeTag::Null;
    } else {
      plan.base = TypeTag::String;
    }
    if (spec_.conflict_rate > 0.0) plan.alt = pick_conflict(plan.base);
    return plan;
  }

  void write_scalar(std::string& out, TypeTag tag) {
    switch (tag) {
      case TypeTag::Null:
        out += "null";
        break;
      case TypeTag::Boolean:
        out += pick(2) ? "true" : "false";
        break;
      case TypeTag::Integer:
        out += std::to_string(static_cast<std::int64_t>(pick(2000000)) - 1000000);
        break;
      case TypeTag::Number:
        out += std::to_string(pick(1000000));
        out += ".5";
        break;
      default: {  // String
        out += '"';
        out += kWords[pick(kWords.size())];
        const std::size_t extra = 4 + pick(14);
        out += '_';
        for (std::size_t i = 0; i < extra; ++i) {
          out += static_cast<char>('a' + pick(26));
        }
        out += '"';
        break;
      }
    }
  }

  void write_value(std::string& out, const ValuePlan& plan, bool conflicted, bool top_level) {
    const TypeTag tag = conflicted && plan.alt ? *plan.alt : plan.base;
    switch (tag) {
      case TypeTag::Object: {
        out += '{';
        bool first = true;
        for (const auto& [name, child] : plan.children) {
          if (!top_level || spec_.missing_rate <= 0.0 || uniform() >= spec_.missing_rate) {
            if (!first) out += ',';
            first = false;
            out += '"';
            out += name;
            out += "\":";
            write_value(out, child, plan_conflict(child), false);
          }
        }
        out += '}';
        break;
      }
      case TypeTag::Array: {
        out += '[';
        const std::uint64_t len = pick(static_cast<std::uint64_t>(spec_.array_max) + 1);
        for (std::uint64_t i = 0; i < len; ++i) {
          if (i) out += ',';
          write_value(out, plan.element.front(), plan_conflict(plan.element.front()), false);
        }
        out += ']';
        break;
      }
      default:
        write_scalar(out, tag);
        break;
    }
  }

  bool plan_conflict(const ValuePlan& plan) {
    return plan.alt && spec_.conflict_rate > 0.0 && uniform() < spec_.conflict_rate;
  }

  CorpusSpec spec_;
  std::mt19937_64 rng_;
  ValuePlan plan_;
};

}  // namespace

std::string generate_corpus(const CorpusSpec& spec) {
  Generator gen(spec);
  std::string out;
  for (std::uint64_t i = 0; i < spec.records; ++i) gen.write_record(out);
  return out;
}

std::uint64_t generate_corpus_file(const CorpusSpec& spec, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot create '" + path + "'");
  Generator gen(spec);
  std::string buffer;
  buffer.reserve(2 << 20);
  std::uint64_t bytes = 0;
  for (std::uint64_t i = 0; i < spec.records; ++i) {
    gen.write_record(buffer);
    if (buffer.size() >= (1 << 20)) {
      out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
      bytes += buffer.size();
      buffer.clear();
    }
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  bytes += buffer.size();
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
  return bytes;
}

}  // namespace jsinfer
