/** Copyright 2026 The tkgbench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * 	http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TKGBENCH_QUERY_HPP
#define TKGBENCH_QUERY_HPP

#include <cstdint>
#include <vector>

#include "tkgbench/error.hpp"
#include "tkgbench/graph.hpp"

namespace tkgbench {

enum class Direction : std::uint8_t { tail = 0, head = 1 };

/// (source, relation, ?, timestamp) with its answer. Head queries are
/// already rewritten into tail form over the inverse relation.
struct EvalQuery {
  NodeId source = 0;
  RelationId relation = 0;
  Timestamp timestamp = 0;
  NodeId true_destination = 0;
  Direction direction = Direction::tail;

  friend bool operator==(const EvalQuery&, const EvalQuery&) = default;
};

/// One tail query per quadruple for THGs; for TKGs also the head query
/// (o, r + R, ?, t) with answer s. Queries are grouped by timestamp,
/// ascending.
inline std::vector<EvalQuery> expand_queries(const TemporalMultiGraph& split,
                                             GraphKind kind) {
  if (split.augmented()) {
    throw ProtocolError("expand_queries expects a graph without inverse relations");
  }
  std::vector<EvalQuery> out;
  out.reserve(kind == GraphKind::tkg ? split.size() * 2 : split.size());
  const auto base = static_cast<RelationId>(split.relation_count());
  for (const auto& q : split) {
    out.push_back({q.subject, q.relation, q.timestamp, q.object, Direction::tail});
    if (kind == GraphKind::tkg) {
      out.push_back(
          {q.object, q.relation + base, q.timestamp, q.subject, Direction::head});
    }
  }
  return out;
}

}  // namespace tkgbench

#endif  // TKGBENCH_QUERY_HPP
