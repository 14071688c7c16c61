#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "honeygraph/attributes.hpp"
#include "honeygraph/graph.hpp"

namespace honeygraph {

/// RFC 2849 change file: a `changetype: add` entry per record, then a
/// `changetype: modify` / `add: member` entry per group membership.
/// Lines are folded at 76 characters.
std::string export_ldif(const std::vector<HoneyuserRecord>& records, const ADGraph& graph);

struct LdifModification {
  std::string op;         // add, delete, replace
  std::string attribute;
  std::vector<std::string> values;
};

struct LdifRecord {
  std::string dn;
  std::string changetype;  // "add", "modify", ... or empty for content records
  std::vector<std::pair<std::string, std::string>> attributes;  // for add/content
  std::vector<LdifModification> modifications;                  // for modify
};

/// Strict RFC 2849 reader: version line, folding, base64 values, `-`
/// separators and SAFE-STRING rules are enforced. Throws
/// Error(MalformedInput) with a line number on any violation.
std::vector<LdifRecord> parse_ldif(std::string_view text);

std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);

/// True if the value may be written after "attr: " without base64.
bool is_ldif_safe_string(std::string_view value) noexcept;

}  // namespace honeygraph
