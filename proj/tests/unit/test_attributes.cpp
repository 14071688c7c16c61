#include <doctest.h>

#include <regex>
#include <set>

#include "fixtures.hpp"

using namespace honeygraph;
using fixtures::node;

namespace {

ADGraph with_new_users(const ADGraph& g, const std::vector<std::pair<std::string, std::vector<std::string>>>& users) {
  std::vector<Node> nodes = g.nodes();
  std::vector<Edge> edges = g.edges();
  for (const auto& [id, parents] : users) {
    nodes.push_back(node(id, NodeType::User));
    for (const auto& p : parents) edges.push_back({p, id});
  }
  return ADGraph(nodes, edges);
}

// Path oracle: walk container parents (OU/Domain) picking the smallest name at
// each step. Fine for the single-parent fixtures used here.
std::vector<std::string> walk_ous(const ADGraph& g, const std::string& id) {
  std::vector<std::string> out;
  std::size_t cur = *g.index_of(id);
  for (;;) {
    std::optional<std::size_t> parent;
    for (std::size_t p : g.predecessors(cur)) {
      const NodeType t = g.node(p).type;
      if (t == NodeType::OrganizationalUnit || t == NodeType::Domain) parent = p;
    }
    if (!parent || g.node(*parent).type == NodeType::Domain) return out;
    out.push_back(node_common_name(g.node(*parent)));
    cur = *parent;
  }
}

}  // namespace

TEST_CASE("DN of a user in one OU") {
  const ADGraph g({node("d", NodeType::Domain, {{"name", "corp.local"}}),
                   node("o", NodeType::OrganizationalUnit, {{"name", "Staff"}}),
                   node("u", NodeType::User, {{"name", "Jane Doe"}})},
                  {{"d", "o"}, {"o", "u"}});
  CHECK(build_dn(g, "u") == "CN=Jane Doe,OU=Staff,DC=corp,DC=local");
  CHECK(build_dn(g, "o") == "OU=Staff,DC=corp,DC=local");
  CHECK(build_dn(g, "d") == "DC=corp,DC=local");
}

TEST_CASE("DN of a user directly under the domain uses the Users container") {
  const ADGraph g({node("d", NodeType::Domain, {{"name", "corp.local"}}), node("u", NodeType::User, {{"name", "X"}})},
                  {{"d", "u"}});
  CHECK(build_dn(g, "u") == "CN=X,CN=Users,DC=corp,DC=local");
  const ContainerPath p = container_path(g, "u");
  CHECK(p.under_domain_directly);
  CHECK(p.domain_name == "corp.local");
}

TEST_CASE("nested OUs are listed nearest first") {
  const ADGraph g({node("d", NodeType::Domain, {{"name", "corp.local"}}),
                   node("a", NodeType::OrganizationalUnit, {{"name", "A"}}),
                   node("b", NodeType::OrganizationalUnit, {{"name", "B"}}),
                   node("u", NodeType::User, {{"name", "Jo"}})},
                  {{"d", "a"}, {"a", "b"}, {"b", "u"}});
  CHECK(build_dn(g, "u") == "CN=Jo,OU=B,OU=A,DC=corp,DC=local");
  CHECK(container_path(g, "u").organizational_units == walk_ous(g, "u"));
}

TEST_CASE("several OU parents: the lexicographically smallest chain wins") {
  const ADGraph g({node("d", NodeType::Domain, {{"name", "corp.local"}}),
                   node("z", NodeType::OrganizationalUnit, {{"name", "Zulu"}}),
                   node("a", NodeType::OrganizationalUnit, {{"name", "Alpha"}}),
                   node("u", NodeType::User, {{"name", "Jo"}})},
                  {{"d", "z"}, {"d", "a"}, {"z", "u"}, {"a", "u"}});
  CHECK(build_dn(g, "u") == "CN=Jo,OU=Alpha,DC=corp,DC=local");
}

TEST_CASE("unreachable nodes") {
  const ADGraph no_domain({node("o", NodeType::OrganizationalUnit), node("u", NodeType::User)}, {{"o", "u"}});
  try {
    build_dn(no_domain, "u");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unreachable);
  }
  const ADGraph orphan_ou({node("d", NodeType::Domain, {{"name", "x.y"}}), node("o", NodeType::OrganizationalUnit),
                           node("u", NodeType::User)},
                          {{"o", "u"}});
  CHECK_THROWS_AS(build_dn(orphan_ou, "u"), Error);
}

TEST_CASE("DN escaping and parsing") {
  CHECK(escape_dn_value("Doe, Jane") == "Doe\\, Jane");
  CHECK(escape_dn_value(" lead") == "\\ lead");
  CHECK(escape_dn_value("#hash") == "\\#hash");
  CHECK(escape_dn_value("a+b=c") == "a\\+b\\=c");
  const std::string dn = format_dn({{"CN", "Doe, Jane"}, {"OU", "R&D \"Lab\""}, {"DC", "corp"}});
  const auto rdns = parse_dn(dn);
  REQUIRE(rdns.size() == 3);
  CHECK(rdns[0] == Rdn{"CN", "Doe, Jane"});
  CHECK(rdns[1] == Rdn{"OU", "R&D \"Lab\""});
  CHECK(parse_dn("CN=A\\2CB,DC=x")[0].value == "A,B");
  CHECK_THROWS_AS(parse_dn("CN=a,b"), Error);
  CHECK(parent_dn("CN=Doe\\, Jane,OU=Staff,DC=corp") == "OU=Staff,DC=corp");
}

TEST_CASE("sAMAccountName rule") {
  CHECK(is_valid_sam_account_name("jdoe"));
  CHECK(is_valid_sam_account_name("j.doe-2_x"));
  CHECK_FALSE(is_valid_sam_account_name(""));
  CHECK_FALSE(is_valid_sam_account_name("has space"));
  CHECK_FALSE(is_valid_sam_account_name("abcdefghijklmnopqrstu"));  // 21
}

TEST_CASE("single-name corpus de-duplicates with numeric suffixes") {
  const ADGraph base({node("d", NodeType::Domain, {{"name", "corp.local"}}),
                      node("o", NodeType::OrganizationalUnit, {{"name", "Staff"}})},
                     {{"d", "o"}});
  const ADGraph g = with_new_users(base, {{"h1", {"o"}}, {"h2", {"o"}}, {"h3", {"o"}}});
  Rng rng = make_rng(1);
  const auto recs = generate_attributes(g, {"h1", "h2", "h3"}, rng, NameCorpus::pairs({{"Jane", "Doe"}}));
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].sam_account_name == "jdoe");
  CHECK(recs[1].sam_account_name == "jdoe1");
  CHECK(recs[2].sam_account_name == "jdoe2");
  CHECK(recs[0].cn == "Jane Doe");
  CHECK(recs[1].cn == "Jane Doe 1");
  CHECK(recs[0].distinguished_name == "CN=Jane Doe,OU=Staff,DC=corp,DC=local");
  CHECK(recs[0].user_principal_name == "jdoe@corp.local");
  CHECK(recs[0].display_name == recs[0].cn);
  CHECK(recs[0].given_name == "Jane");
  CHECK(recs[0].surname == "Doe");
  CHECK_FALSE(recs[0].description.empty());
}

TEST_CASE("existing accounts are never reused") {
  const ADGraph g = with_new_users(fixtures::small_domain(), {{"h1", {"ou_staff"}}});
  Rng rng = make_rng(1);
  const auto recs = generate_attributes(g, {"h1"}, rng, NameCorpus::pairs({{"Jack", "Doe"}}));
  CHECK(recs[0].sam_account_name == "jdoe1");  // u_jane holds jdoe
}

TEST_CASE("group memberships come from incoming Group edges") {
  const ADGraph g = with_new_users(fixtures::small_domain(), {{"h", {"ou_it", "g_sales", "g_eng"}}});
  Rng rng = make_rng(2);
  const auto recs = generate_attributes(g, {"h"}, rng, NameCorpus::builtin());
  REQUIRE(recs.size() == 1);
  const std::set<std::string> groups(recs[0].member_of.begin(), recs[0].member_of.end());
  CHECK(groups == std::set<std::string>{build_dn(g, "g_sales"), build_dn(g, "g_eng")});
  CHECK(build_dn(g, "g_sales") == "CN=Sales,OU=Staff,DC=corp,DC=local");
  CHECK(build_dn(g, "g_eng") == "CN=Engineering,CN=Users,DC=corp,DC=local");
  CHECK(parent_dn(recs[0].distinguished_name) == "OU=IT,OU=Staff,DC=corp,DC=local");
}

TEST_CASE("users with only Group parents fall back to the default container") {
  const ADGraph g = with_new_users(fixtures::small_domain(), {{"h", {"g_sales"}}});
  Rng rng = make_rng(3);
  const auto recs = generate_attributes(g, {"h"}, rng, NameCorpus::builtin());
  CHECK(parent_dn(recs[0].distinguished_name) == "CN=Users,DC=corp,DC=local");
}

TEST_CASE("fixed seed reproduces records") {
  const ADGraph g = with_new_users(fixtures::small_domain(), {{"h1", {"ou_it"}}, {"h2", {"g_eng"}}});
  Rng a = make_rng(5), b = make_rng(5);
  CHECK(records_to_json(generate_attributes(g, {"h1", "h2"}, a, NameCorpus::builtin())) ==
        records_to_json(generate_attributes(g, {"h1", "h2"}, b, NameCorpus::builtin())));
}

TEST_CASE("empty corpus and exhaustion") {
  const ADGraph g = with_new_users(fixtures::small_domain(), {{"h", {"ou_it"}}});
  Rng rng = make_rng(1);
  try {
    generate_attributes(g, {"h"}, rng, NameCorpus{});
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CorpusExhausted);
  }
}

TEST_CASE("1000 honeyusers: unique accounts, valid names, DNs match container paths") {
  std::vector<Node> nodes{node("d", NodeType::Domain, {{"name", "corp.local"}})};
  std::vector<Edge> edges;
  for (int k = 0; k < 10; ++k) {
    const std::string ou = "ou" + std::to_string(k);
    nodes.push_back(node(ou, NodeType::OrganizationalUnit, {{"name", "Dept " + std::to_string(k)}}));
    edges.push_back({k < 5 ? "d" : "ou" + std::to_string(k - 5), ou});
  }
  nodes.push_back(node("grp", NodeType::Group, {{"name", "All Staff"}}));
  edges.push_back({"d", "grp"});
  std::vector<std::string> fresh;
  for (int k = 0; k < 1000; ++k) {
    const std::string id = "h" + std::to_string(k);
    nodes.push_back(node(id, NodeType::User));
    edges.push_back({"ou" + std::to_string(k % 10), id});
    if (k % 3 == 0) edges.push_back({"grp", id});
    fresh.push_back(id);
  }
  const ADGraph g(nodes, edges);
  Rng rng = make_rng(77);
  const auto recs = generate_attributes(g, fresh, rng, NameCorpus::builtin());
  std::set<std::string> sams, dns;
  const std::regex sam_re("[a-zA-Z0-9._-]{1,20}");
  for (const auto& r : recs) {
    CHECK(std::regex_match(r.sam_account_name, sam_re));
    sams.insert(r.sam_account_name);
    dns.insert(r.distinguished_name);
    const auto rdns = parse_dn(r.distinguished_name);
    std::vector<std::string> ous;
    for (const auto& x : rdns) {
      if (x.attribute == "OU") ous.push_back(x.value);
    }
    CHECK(ous == walk_ous(g, r.node_id));
  }
  CHECK(sams.size() == 1000);
  CHECK(dns.size() == 1000);
}

TEST_CASE("validate_records rejects broken records") {
  const ADGraph g = with_new_users(fixtures::small_domain(), {{"h", {"ou_it"}}});
  Rng rng = make_rng(1);
  auto recs = generate_attributes(g, {"h"}, rng, NameCorpus::builtin());
  auto bad = recs;
  bad[0].sam_account_name = "has space";
  CHECK_THROWS_AS(validate_records(g, bad), Error);
  bad = recs;
  bad[0].distinguished_name = "CN=Elsewhere,DC=corp,DC=local";
  CHECK_THROWS_AS(validate_records(g, bad), Error);
  bad = recs;
  bad[0].sam_account_name = "jdoe";
  CHECK_THROWS_AS(validate_records(g, bad), Error);
  CHECK_NOTHROW(validate_records(g, recs));
}
