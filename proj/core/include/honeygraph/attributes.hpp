#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "honeygraph/graph.hpp"
#include "honeygraph/random.hpp"

namespace honeygraph {

struct NameCorpus {
  std::vector<std::string> first_names;
  std::vector<std::string> last_names;

  /// Bundled static lists.
  static const NameCorpus& builtin();
  /// Explicit (first, last) pairs: first_names[i] goes with last_names[i].
  static NameCorpus pairs(std::vector<std::pair<std::string, std::string>> names);

  bool paired = false;
  bool empty() const noexcept { return first_names.empty() || last_names.empty(); }
};

struct HoneyuserRecord {
  std::string node_id;
  std::string given_name;
  std::string surname;
  std::string cn;
  std::string sam_account_name;
  std::string distinguished_name;
  std::string display_name;
  std::string description;
  std::string user_principal_name;
  std::vector<std::string> member_of;  // group DNs
};

/// One component of a distinguished name, e.g. {"OU", "Staff"}.
struct Rdn {
  std::string attribute;
  std::string value;

  bool operator==(const Rdn&) const = default;
};

/// RFC 4514 value escaping.
std::string escape_dn_value(std::string_view value);
std::string format_dn(const std::vector<Rdn>& rdns);
std::vector<Rdn> parse_dn(std::string_view dn);

/// Display name of a node: its "name" attribute (text before any '@'), or id.
std::string node_common_name(const Node& node);

/// Chain of container (OU) names above a node, nearest first. Among several
/// container parents the lexicographically smallest chain wins. Also returns
/// the Domain node the chain ends at.
struct ContainerPath {
  std::vector<std::string> organizational_units;
  std::string domain_name;  // "corp.local"
  bool under_domain_directly = false;  // no OU on the path
};
ContainerPath container_path(const ADGraph& graph, std::string_view node_id);

/// DN of an existing node, using the node's own common name.
std::string build_dn(const ADGraph& graph, std::string_view node_id);
/// DN of a node with an explicit CN.
std::string build_dn(const ADGraph& graph, std::string_view node_id, std::string_view cn);

/// The DN with its first RDN removed.
std::string parent_dn(std::string_view dn);

bool is_valid_sam_account_name(std::string_view sam);

std::vector<HoneyuserRecord> generate_attributes(const ADGraph& graph,
                                                 const std::vector<std::string>& new_nodes,
                                                 Rng& rng, const NameCorpus& corpus);

/// Throws Error(InvalidGraph) if any record breaks a record invariant.
void validate_records(const ADGraph& graph, const std::vector<HoneyuserRecord>& records);

std::string records_to_json(const std::vector<HoneyuserRecord>& records);

}  // namespace honeygraph
