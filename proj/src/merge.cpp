#include "jsinfer/merge.hpp"

#include <algorithm>
#include <utility>

namespace jsinfer {

namespace {

// Inserts a non-union node into a kind-unique alternative list, deep-merging
// when the kind is already present. Keeps the list sorted by kind key.
void absorb_alternative(std::vector<SisNode>& alts, SisNode node) {
  const KindKey key = kind_key(node);
  auto it = std::lower_bound(alts.begin(), alts.end(), key,
                             [](const SisNode& alt, KindKey k) { return kind_key(alt) < k; });
  if (it != alts.end() && kind_key(*it) == key) {
    *it = merge_nodes(std::move(*it), std::move(node));
  } else {
    alts.insert(it, std::move(node));
  }
}

void absorb(std::vector<SisNode>& alts, SisNode node) {
  if (node.tag == TypeTag::Union) {
    for (auto& alt : node.alternatives) absorb_alternative(alts, std::move(alt));
  } else {
    absorb_alternative(alts, std::move(node));
  }
}

}  // namespace

SisNode make_union(SisNode a, SisNode b) {
  std::vector<SisNode> alts;
  absorb(alts, std::move(a));
  absorb(alts, std::move(b));
  if (alts.size() == 1) return std::move(alts.front());
  SisNode node;
  node.tag = TypeTag::Union;
  node.alternatives = std::move(alts);
  return node;
}

SisNode merge_nodes(SisNode a, SisNode b) {
  if (a.tag == TypeTag::Union || b.tag == TypeTag::Union || a.tag != b.tag) {
    return make_union(std::move(a), std::move(b));
  }

  switch (a.tag) {
    case TypeTag::Object: {
      // Keywise union of two sorted field maps; shared names merge recursively.
      std::vector<std::pair<std::string, SisNode>> merged;
      merged.reserve(a.fields.size() + b.fields.size());
      auto la = a.fields.begin(), lb = b.fields.begin();
      while (la != a.fields.end() && lb != b.fields.end()) {
        if (la->first < lb->first) {
          merged.push_back(std::move(*la++));
        } else if (lb->first < la->first) {
          merged.push_back(std::move(*lb++));
        } else {
          merged.emplace_back(std::move(la->first),
                              merge_nodes(std::move(la->second), std::move(lb->second)));
          ++la;
          ++lb;
        }
      }
      merged.insert(merged.end(), std::make_move_iterator(la),
                    std::make_move_iterator(a.fields.end()));
      merged.insert(merged.end(), std::make_move_iterator(lb),
                    std::make_move_iterator(b.fields.end()));
      a.fields = std::move(merged);
      return a;
    }
    case TypeTag::Array:
    case TypeTag::Multiset:
      if (b.has_item()) {
        if (a.has_item()) {
          a.item.front() = merge_nodes(std::move(a.item.front()), std::move(b.item.front()));
        } else {
          a.item = std::move(b.item);
        }
      }
      return a;
    default:
      // Matching primitive kinds collapse.
      return a;
  }
}

SisNode merge_sis(std::span<const LocalSis> locals) {
  SisNode acc = make_object();
  for (const LocalSis& local : locals) {
    acc = merge_nodes(std::move(acc), local.root);
  }
  return canonicalize(std::move(acc));
}

}  // namespace jsinfer
