#pragma once

#include <string>
#include <vector>

#include "honeygraph/attributes.hpp"
#include "honeygraph/graph.hpp"

namespace honeygraph {

/// Name of the SecureString variable the operator must define before running
/// the script. No password is ever emitted.
inline constexpr const char* kPasswordVariable = "$HoneyuserPassword";

/// PowerShell ActiveDirectory-module script: one New-ADUser per record and one
/// Add-ADGroupMember per membership. UTF-8 with a byte-order mark.
std::string export_provisioning_script(const std::vector<HoneyuserRecord>& records,
                                       const ADGraph& graph);

}  // namespace honeygraph
