#pragma once

// Reference views of a ZDD computed straight from the node store. Test-only.

#include <functional>
#include <map>
#include <vector>

#include "topzdd/top_zdd.hpp"
#include "topzdd/zdd.hpp"

namespace topzdd::testing {

// (label, zero, one) in recursive DFS preorder, 0-edge first; n+1 = ⊥, n+2 = ⊤.
inline std::vector<node_triple> reference_triples(const zdd_store& st, handle root) {
  std::map<handle, uint32_t> pre;
  std::vector<handle> order;
  std::function<void(handle)> visit = [&](handle h) {
    if (zdd_store::is_terminal(h) || pre.count(h)) return;
    order.push_back(h);
    pre[h] = static_cast<uint32_t>(order.size());
    visit(st.lo(h));
    visit(st.hi(h));
  };
  visit(root);
  const auto n = static_cast<uint32_t>(order.size());
  auto name = [&](handle h) { return h == kBottom ? n + 1 : h == kTop ? n + 2 : pre.at(h); };
  std::vector<node_triple> out;
  for (handle h : order) out.push_back({st.label(h), name(st.lo(h)), name(st.hi(h))});
  return out;
}

// Every T' vertex position in preorder.
inline std::vector<size_t> tprime_positions(const top_zdd& z) {
  std::vector<size_t> out;
  for (size_t q = 1; q <= z.vertex_count(); ++q) out.push_back(z.tree().preorder_select(q));
  return out;
}

}  // namespace topzdd::testing
