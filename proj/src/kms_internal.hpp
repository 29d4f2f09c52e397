#ifndef KGRAPH_KMS_INTERNAL_HPP
#define KGRAPH_KMS_INTERNAL_HPP

#include "kgraph/kms.hpp"

#include <string>
#include <vector>

namespace kgraph::detail {

/// Certification of C against precomputed partitions for I and for all
/// colours. Throws NotAClassError.
SubharmonicCheck check_component(const KGraph& g, const ComponentPartition& part,
                                 const ComponentPartition& full, const VertexSet& C,
                                 const Query& q);

/// components(g, I) for every I, indexed by mask.
std::vector<ComponentPartition> all_partitions(const KGraph& g);

std::string render_set(const KGraph& g, const VertexSet& set);

}  // namespace kgraph::detail

#endif  // KGRAPH_KMS_INTERNAL_HPP
