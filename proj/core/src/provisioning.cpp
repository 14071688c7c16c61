#include "honeygraph/provisioning.hpp"

namespace honeygraph {

namespace {

// PowerShell treats the typographic single quotes as quote characters too.
std::string quote(std::string_view s) {
  std::string out = "'";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    out.push_back(c);
    if (c == '\'') {
      out.push_back('\'');
    } else if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < s.size() &&
               static_cast<unsigned char>(s[i + 1]) == 0x80) {
      const auto third = static_cast<unsigned char>(s[i + 2]);
      if (third >= 0x98 && third <= 0x9B) {
        out.append(s.substr(i + 1, 2));
        out.append(s.substr(i, 3));
        i += 2;
      }
    }
  }
  out.push_back('\'');
  return out;
}

}  // namespace

std::string export_provisioning_script(const std::vector<HoneyuserRecord>& records,
                                       const ADGraph& /*graph*/) {
  const std::string pw = kPasswordVariable;
  // Byte-order mark: Windows PowerShell 5.1 reads BOM-less scripts as ANSI.
  std::string out = "\xEF\xBB\xBF";
  out += "#Requires -Modules ActiveDirectory\n";
  out += "# Define " + pw + " as a SecureString before running, e.g.\n";
  out += "#   " + pw + " = Read-Host -AsSecureString 'Honeyuser password'\n";
  out += "if (-not " + pw + ") { throw '" + pw + " is not set' }\n";
  out += "\n";
  for (const auto& r : records) {
    out += "New-ADUser -Name " + quote(r.cn) + " -GivenName " + quote(r.given_name) + " -Surname " +
           quote(r.surname) + " -DisplayName " + quote(r.display_name) + " -SamAccountName " +
           quote(r.sam_account_name) + " -UserPrincipalName " + quote(r.user_principal_name) +
           " -Description " + quote(r.description) + " -Path " + quote(parent_dn(r.distinguished_name)) +
           " -AccountPassword " + pw + " -Enabled $true\n";
  }
  bool any = false;
  for (const auto& r : records) {
    for (const auto& group : r.member_of) {
      if (!any) out += "\n";
      any = true;
      out += "Add-ADGroupMember -Identity " + quote(group) + " -Members " + quote(r.sam_account_name) + "\n";
    }
  }
  return out;
}

}  // namespace honeygraph
