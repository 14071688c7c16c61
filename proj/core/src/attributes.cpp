#include "honeygraph/attributes.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "honeygraph/error.hpp"

namespace honeygraph {

namespace {

constexpr std::size_t kSamMaxLength = 20;
constexpr std::size_t kMaxSuffix = 9999;

const std::vector<std::string>& descriptions() {
  static const std::vector<std::string> d = {
      "Accounts payable clerk",  "Application support",     "Business analyst",
      "Customer success",        "Database administrator",  "Facilities coordinator",
      "Finance controller",      "HR generalist",           "IT service desk",
      "Legal counsel",           "Marketing specialist",    "Network engineer",
      "Office manager",          "Procurement officer",     "Project manager",
      "Quality assurance",       "Sales representative",    "Security analyst",
      "Software developer",      "Systems engineer",        "Training coordinator",
      "Warehouse supervisor",
  };
  return d;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_container(NodeType t) { return t == NodeType::OrganizationalUnit || t == NodeType::Domain; }

struct Chain {
  std::vector<std::string> ous;  // nearest first
  std::string domain;

  bool operator<(const Chain& o) const {
    if (ous != o.ous) return ous < o.ous;
    return domain < o.domain;
  }
};

// Memoised container-chain lookup over one graph.
class Resolver {
 public:
  explicit Resolver(const ADGraph& g) : g_(g), memo_(g.node_count()), done_(g.node_count(), false) {
    for (const Node& n : g.nodes()) {
      if (n.type != NodeType::Domain) continue;
      const std::string name = node_common_name(n);
      if (!default_domain_ || name < *default_domain_) default_domain_ = name;
    }
  }

  // Chain that a node placed below `idx` would inherit.
  const std::optional<Chain>& chain(std::size_t idx) {
    if (done_[idx]) return memo_[idx];
    const Node& n = g_.node(idx);
    std::optional<Chain> out;
    if (n.type == NodeType::Domain) {
      out = Chain{{}, node_common_name(n)};
    } else if (n.type == NodeType::OrganizationalUnit) {
      if (auto parent = best_parent(idx)) {
        parent->ous.insert(parent->ous.begin(), node_common_name(n));
        out = std::move(parent);
      }
    }
    done_[idx] = true;
    memo_[idx] = std::move(out);
    return memo_[idx];
  }

  ContainerPath path(std::size_t idx) {
    const auto& preds = g_.predecessors(idx);
    const bool has_container =
        std::any_of(preds.begin(), preds.end(), [&](std::size_t p) { return is_container(g_.node(p).type); });
    std::optional<Chain> c;
    if (has_container) {
      c = best_parent(idx);
    } else if (default_domain_) {
      // Group membership is not containment: fall back to the default container.
      c = Chain{{}, *default_domain_};
    }
    if (!c) {
      throw Error(ErrorKind::Unreachable,
                  "node '" + g_.node(idx).id + "' is not reachable from a Domain through containers");
    }
    ContainerPath p;
    p.organizational_units = std::move(c->ous);
    p.domain_name = std::move(c->domain);
    p.under_domain_directly = p.organizational_units.empty();
    return p;
  }

  std::string dn(std::size_t idx, std::string_view cn) {
    const Node& n = g_.node(idx);
    std::vector<Rdn> rdns;
    if (n.type == NodeType::Domain) {
      append_dc(rdns, node_common_name(n));
      return format_dn(rdns);
    }
    const ContainerPath p = path(idx);
    rdns.push_back(Rdn{n.type == NodeType::OrganizationalUnit ? "OU" : "CN", std::string(cn)});
    if (p.under_domain_directly && n.type != NodeType::OrganizationalUnit) rdns.push_back(Rdn{"CN", "Users"});
    for (const auto& ou : p.organizational_units) rdns.push_back(Rdn{"OU", ou});
    append_dc(rdns, p.domain_name);
    return format_dn(rdns);
  }

 private:
  std::optional<Chain> best_parent(std::size_t idx) {
    std::optional<Chain> best;
    for (std::size_t p : g_.predecessors(idx)) {
      if (!is_container(g_.node(p).type)) continue;
      const auto& c = chain(p);
      if (c && (!best || *c < *best)) best = *c;
    }
    return best;
  }

  static void append_dc(std::vector<Rdn>& rdns, const std::string& domain) {
    std::size_t start = 0;
    bool any = false;
    while (start <= domain.size()) {
      const std::size_t dot = domain.find('.', start);
      const std::string part = domain.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (!part.empty()) {
        rdns.push_back(Rdn{"DC", part});
        any = true;
      }
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    if (!any) throw Error(ErrorKind::Unreachable, "domain has an empty name");
  }

  const ADGraph& g_;
  std::vector<std::optional<Chain>> memo_;
  std::vector<bool> done_;
  std::optional<std::string> default_domain_;
};

std::size_t require_index(const ADGraph& g, std::string_view id) {
  const auto idx = g.index_of(id);
  if (!idx) throw Error(ErrorKind::InvalidArgument, "unknown node '" + std::string(id) + "'");
  return *idx;
}

std::optional<std::string> sam_attribute(const Node& n) {
  for (const auto& [key, value] : n.attributes) {
    const std::string k = lower(key);
    if (k == "samaccountname" || k == "sam_account_name") return lower(value);
  }
  return std::nullopt;
}

std::string sam_base(const std::string& given, const std::string& surname) {
  std::string raw;
  if (!given.empty()) raw.push_back(given.front());
  raw += surname;
  std::string out;
  for (char ch : lower(raw)) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || ch == '.' || ch == '_' || ch == '-') out.push_back(ch);
  }
  if (out.empty()) out = "user";
  if (out.size() > kSamMaxLength) out.resize(kSamMaxLength);
  return out;
}

std::string with_suffix(const std::string& base, std::size_t suffix, std::size_t max_len) {
  if (suffix == 0) return base.substr(0, max_len);
  const std::string s = std::to_string(suffix);
  return base.substr(0, max_len - s.size()) + s;
}

std::vector<std::string> group_dns(const ADGraph& g, std::size_t idx, Resolver& r) {
  std::vector<std::string> out;
  for (std::size_t p : g.predecessors(idx)) {
    if (g.node(p).type == NodeType::Group) out.push_back(r.dn(p, node_common_name(g.node(p))));
  }
  return out;
}

}  // namespace

std::string escape_dn_value(std::string_view value) {
  std::string out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const char c = value[i];
    const bool edge_space = c == ' ' && (i == 0 || i + 1 == value.size());
    if (c == '\0') {
      out += "\\00";
    } else if (c == ',' || c == '+' || c == '"' || c == '\\' || c == '<' || c == '>' || c == ';' ||
               c == '=' || edge_space || (c == '#' && i == 0)) {
      out.push_back('\\');
      out.push_back(c);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string format_dn(const std::vector<Rdn>& rdns) {
  std::string out;
  for (std::size_t i = 0; i < rdns.size(); ++i) {
    if (i) out.push_back(',');
    out += rdns[i].attribute;
    out.push_back('=');
    out += escape_dn_value(rdns[i].value);
  }
  return out;
}

std::vector<Rdn> parse_dn(std::string_view dn) {
  std::vector<Rdn> out;
  if (dn.empty()) return out;
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::size_t i = 0;
  while (true) {
    const std::size_t eq = dn.find('=', i);
    if (eq == std::string_view::npos) throw Error(ErrorKind::MalformedInput, "DN component without '='");
    Rdn rdn;
    rdn.attribute = std::string(dn.substr(i, eq - i));
    if (rdn.attribute.empty()) throw Error(ErrorKind::MalformedInput, "DN component with empty attribute");
    for (char c : rdn.attribute) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') {
        throw Error(ErrorKind::MalformedInput, "bad DN attribute type '" + rdn.attribute + "'");
      }
    }
    i = eq + 1;
    bool ended = true;
    while (i < dn.size()) {
      const char c = dn[i];
      if (c == ',') {
        ended = false;
        ++i;
        break;
      }
      if (c == '\\') {
        if (i + 1 >= dn.size()) throw Error(ErrorKind::MalformedInput, "dangling escape in DN");
        const int h1 = hex(dn[i + 1]);
        const int h2 = i + 2 < dn.size() ? hex(dn[i + 2]) : -1;
        if (h1 >= 0 && h2 >= 0) {
          rdn.value.push_back(static_cast<char>(h1 * 16 + h2));
          i += 3;
        } else {
          rdn.value.push_back(dn[i + 1]);
          i += 2;
        }
        continue;
      }
      if (c == '+' || c == '"' || c == '<' || c == '>' || c == ';' || c == '=') {
        throw Error(ErrorKind::MalformedInput, std::string("unescaped '") + c + "' in DN value");
      }
      rdn.value.push_back(c);
      ++i;
    }
    out.push_back(std::move(rdn));
    if (ended) break;
  }
  return out;
}

std::string node_common_name(const Node& node) {
  const auto it = node.attributes.find("name");
  if (it == node.attributes.end() || it->second.empty()) return node.id;
  const auto at = it->second.find('@');
  if (at == 0) return node.id;
  return it->second.substr(0, at);
}

ContainerPath container_path(const ADGraph& graph, std::string_view node_id) {
  Resolver r(graph);
  return r.path(require_index(graph, node_id));
}

std::string build_dn(const ADGraph& graph, std::string_view node_id) {
  const std::size_t idx = require_index(graph, node_id);
  Resolver r(graph);
  return r.dn(idx, node_common_name(graph.node(idx)));
}

std::string build_dn(const ADGraph& graph, std::string_view node_id, std::string_view cn) {
  Resolver r(graph);
  return r.dn(require_index(graph, node_id), cn);
}

std::string parent_dn(std::string_view dn) {
  const auto rdns = parse_dn(dn);
  if (rdns.empty()) return {};
  return format_dn(std::vector<Rdn>(rdns.begin() + 1, rdns.end()));
}

bool is_valid_sam_account_name(std::string_view sam) {
  if (sam.empty() || sam.size() > kSamMaxLength) return false;
  return std::all_of(sam.begin(), sam.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
  });
}

std::vector<HoneyuserRecord> generate_attributes(const ADGraph& graph,
                                                 const std::vector<std::string>& new_nodes,
                                                 Rng& rng, const NameCorpus& corpus) {
  if (corpus.empty()) throw Error(ErrorKind::CorpusExhausted, "name corpus is empty");
  if (corpus.paired && corpus.first_names.size() != corpus.last_names.size()) {
    throw Error(ErrorKind::InvalidArgument, "paired corpus lists differ in length");
  }
  std::vector<std::size_t> indices;
  std::unordered_set<std::string> fresh;
  for (const auto& id : new_nodes) {
    indices.push_back(require_index(graph, id));
    if (!fresh.insert(id).second) throw Error(ErrorKind::InvalidArgument, "duplicate new node '" + id + "'");
  }

  Resolver resolver(graph);
  std::set<std::string> taken_sam;
  std::set<std::string> taken_dn;
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const Node& n = graph.node(i);
    if (fresh.count(n.id)) continue;
    if (auto s = sam_attribute(n)) taken_sam.insert(*s);
    if (n.type == NodeType::User) taken_sam.insert(lower(node_common_name(n)));
    try {
      taken_dn.insert(lower(resolver.dn(i, node_common_name(n))));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Unreachable) throw;
    }
  }

  std::uniform_int_distribution<std::size_t> pick_first(0, corpus.first_names.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_last(0, corpus.last_names.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_desc(0, descriptions().size() - 1);

  std::vector<HoneyuserRecord> records;
  for (std::size_t k = 0; k < new_nodes.size(); ++k) {
    const std::size_t idx = indices[k];
    HoneyuserRecord r;
    r.node_id = new_nodes[k];
    const std::size_t f = pick_first(rng);
    r.given_name = corpus.first_names[f];
    r.surname = corpus.paired ? corpus.last_names[f] : corpus.last_names[pick_last(rng)];
    r.description = descriptions()[pick_desc(rng)];

    const std::string base = sam_base(r.given_name, r.surname);
    for (std::size_t s = 0;; ++s) {
      if (s > kMaxSuffix) throw Error(ErrorKind::CorpusExhausted, "no free sAMAccountName for '" + base + "'");
      const std::string candidate = with_suffix(base, s, kSamMaxLength);
      if (taken_sam.insert(candidate).second) {
        r.sam_account_name = candidate;
        break;
      }
    }

    const std::string full = r.given_name + " " + r.surname;
    for (std::size_t s = 0;; ++s) {
      if (s > kMaxSuffix) throw Error(ErrorKind::CorpusExhausted, "no free common name for '" + full + "'");
      const std::string cn = s == 0 ? full : full + " " + std::to_string(s);
      const std::string dn = resolver.dn(idx, cn);
      if (taken_dn.insert(lower(dn)).second) {
        r.cn = cn;
        r.distinguished_name = dn;
        break;
      }
    }
    r.display_name = r.cn;
    r.user_principal_name = r.sam_account_name + "@" + resolver.path(idx).domain_name;
    r.member_of = group_dns(graph, idx, resolver);
    records.push_back(std::move(r));
  }
  validate_records(graph, records);
  return records;
}

void validate_records(const ADGraph& graph, const std::vector<HoneyuserRecord>& records) {
  Resolver resolver(graph);
  std::set<std::string> sams;
  std::set<std::string> dns;
  std::unordered_set<std::string> ids;
  for (const auto& r : records) ids.insert(r.node_id);
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const Node& n = graph.node(i);
    if (ids.count(n.id)) continue;
    if (auto s = sam_attribute(n)) sams.insert(*s);
  }

  auto fail = [](const HoneyuserRecord& r, const std::string& why) {
    throw Error(ErrorKind::InvalidGraph, "record '" + r.node_id + "': " + why);
  };
  for (const auto& r : records) {
    const auto idx = graph.index_of(r.node_id);
    if (!idx) fail(r, "node not in graph");
    if (!is_valid_sam_account_name(r.sam_account_name)) fail(r, "invalid sAMAccountName");
    if (!sams.insert(lower(r.sam_account_name)).second) fail(r, "duplicate sAMAccountName");
    if (!dns.insert(lower(r.distinguished_name)).second) fail(r, "duplicate DN");
    const auto rdns = parse_dn(r.distinguished_name);
    if (rdns.empty() || !(rdns.front() == Rdn{"CN", r.cn})) fail(r, "DN does not start with its CN");
    if (rdns != parse_dn(resolver.dn(*idx, r.cn))) fail(r, "DN does not match the container path");
    if (r.member_of != group_dns(graph, *idx, resolver)) fail(r, "memberOf does not match incoming groups");
  }
}

std::string records_to_json(const std::vector<HoneyuserRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["node_id"] = r.node_id;
    j["given_name"] = r.given_name;
    j["surname"] = r.surname;
    j["cn"] = r.cn;
    j["sam_account_name"] = r.sam_account_name;
    j["distinguished_name"] = r.distinguished_name;
    j["display_name"] = r.display_name;
    j["description"] = r.description;
    j["user_principal_name"] = r.user_principal_name;
    j["member_of"] = r.member_of;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace honeygraph
