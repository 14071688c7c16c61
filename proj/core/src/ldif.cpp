#include "honeygraph/ldif.hpp"

#include <array>
#include <cctype>

#include "honeygraph/error.hpp"

namespace honeygraph {

namespace {

constexpr std::size_t kFoldWidth = 76;
constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

void emit_line(std::string& out, const std::string& line) {
  if (line.size() <= kFoldWidth) {
    out += line;
    out.push_back('\n');
    return;
  }
  out.append(line, 0, kFoldWidth);
  out.push_back('\n');
  for (std::size_t pos = kFoldWidth; pos < line.size(); pos += kFoldWidth - 1) {
    out.push_back(' ');
    out.append(line, pos, kFoldWidth - 1);
    out.push_back('\n');
  }
}

void emit_value(std::string& out, std::string_view attr, std::string_view value) {
  std::string line(attr);
  // Trailing spaces survive a round trip only when encoded.
  if (is_ldif_safe_string(value) && (value.empty() || value.back() != ' ')) {
    line += ": ";
    line += value;
  } else {
    line += ":: ";
    line += base64_encode(value);
  }
  emit_line(out, line);
}

[[noreturn]] void malformed(std::size_t line, const std::string& why) {
  throw Error(ErrorKind::MalformedInput, "LDIF line " + std::to_string(line) + ": " + why);
}

struct Line {
  std::size_t number;
  std::string text;
};

struct AttrValue {
  std::string attribute;
  std::string value;
};

bool valid_attribute_description(std::string_view a) {
  if (a.empty() || !std::isalnum(static_cast<unsigned char>(a.front()))) return false;
  for (char c : a) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != ';' && c != '.') return false;
  }
  return true;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

AttrValue parse_attr_line(const Line& l) {
  const auto colon = l.text.find(':');
  if (colon == std::string::npos) malformed(l.number, "missing ':'");
  AttrValue av;
  av.attribute = l.text.substr(0, colon);
  if (!valid_attribute_description(av.attribute)) malformed(l.number, "bad attribute description");
  std::size_t i = colon + 1;
  if (i < l.text.size() && l.text[i] == ':') {
    ++i;
    while (i < l.text.size() && l.text[i] == ' ') ++i;
    try {
      av.value = base64_decode(std::string_view(l.text).substr(i));
    } catch (const Error& e) {
      malformed(l.number, e.what());
    }
    return av;
  }
  if (i < l.text.size() && l.text[i] == '<') malformed(l.number, "URL values are not supported");
  while (i < l.text.size() && l.text[i] == ' ') ++i;
  av.value = l.text.substr(i);
  if (!is_ldif_safe_string(av.value)) malformed(l.number, "value is not a SAFE-STRING");
  return av;
}

// Splits into unfolded logical lines grouped by blank-line-separated blocks.
std::vector<std::vector<Line>> logical_blocks(std::string_view text) {
  std::vector<std::vector<Line>> blocks;
  std::vector<Line> current;
  bool in_comment = false;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string raw(text.substr(pos, end - pos));
    pos = end + 1;
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.find('\r') != std::string::npos) malformed(number, "stray carriage return");

    if (raw.empty()) {
      if (!current.empty()) blocks.push_back(std::move(current));
      current.clear();
      in_comment = false;
      continue;
    }
    if (raw.front() == ' ') {
      if (in_comment) continue;
      if (current.empty()) malformed(number, "continuation line without a preceding line");
      current.back().text += raw.substr(1);
      continue;
    }
    if (raw.front() == '#') {
      in_comment = true;
      continue;
    }
    in_comment = false;
    current.push_back(Line{number, std::move(raw)});
  }
  if (!current.empty()) blocks.push_back(std::move(current));
  return blocks;
}

}  // namespace

bool is_ldif_safe_string(std::string_view value) noexcept {
  for (std::size_t i = 0; i < value.size(); ++i) {
    const auto c = static_cast<unsigned char>(value[i]);
    if (c == 0 || c == '\n' || c == '\r' || c > 127) return false;
    if (i == 0 && (c == ' ' || c == ':' || c == '<')) return false;
  }
  return true;
}

std::string base64_encode(std::string_view bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const auto v = (static_cast<unsigned char>(bytes[i]) << 16) |
                   (static_cast<unsigned char>(bytes[i + 1]) << 8) | static_cast<unsigned char>(bytes[i + 2]);
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.push_back(kAlphabet[(v >> 6) & 63]);
    out.push_back(kAlphabet[v & 63]);
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const auto v = static_cast<unsigned char>(bytes[i]) << 16;
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out += "==";
  } else if (rest == 2) {
    const auto v = (static_cast<unsigned char>(bytes[i]) << 16) | (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.push_back(kAlphabet[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::string base64_decode(std::string_view text) {
  static const std::array<int, 256> table = [] {
    std::array<int, 256> t{};
    t.fill(-1);
    for (int k = 0; k < 64; ++k) t[static_cast<unsigned char>(kAlphabet[k])] = k;
    return t;
  }();
  if (text.size() % 4 != 0) throw Error(ErrorKind::MalformedInput, "base64 length is not a multiple of 4");
  std::string out;
  for (std::size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    int v[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + static_cast<std::size_t>(k)];
      if (c == '=' && last && k >= 2) {
        v[k] = 0;
        ++pad;
        continue;
      }
      if (pad > 0) throw Error(ErrorKind::MalformedInput, "base64 data after padding");
      v[k] = table[static_cast<unsigned char>(c)];
      if (v[k] < 0) throw Error(ErrorKind::MalformedInput, "invalid base64 character");
    }
    const int triple = (v[0] << 18) | (v[1] << 12) | (v[2] << 6) | v[3];
    out.push_back(static_cast<char>((triple >> 16) & 0xff));
    if (pad < 2) out.push_back(static_cast<char>((triple >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<char>(triple & 0xff));
  }
  return out;
}

std::string export_ldif(const std::vector<HoneyuserRecord>& records, const ADGraph& /*graph*/) {
  std::string out = "version: 1\n";
  for (const auto& r : records) {
    out.push_back('\n');
    emit_value(out, "dn", r.distinguished_name);
    emit_line(out, "changetype: add");
    for (const char* oc : {"top", "person", "organizationalPerson", "user"}) emit_value(out, "objectClass", oc);
    emit_value(out, "cn", r.cn);
    emit_value(out, "sAMAccountName", r.sam_account_name);
    emit_value(out, "displayName", r.display_name);
    emit_value(out, "givenName", r.given_name);
    emit_value(out, "sn", r.surname);
    emit_value(out, "description", r.description);
    emit_value(out, "userPrincipalName", r.user_principal_name);
  }
  // Memberships come after every add so each member already exists.
  for (const auto& r : records) {
    for (const auto& group : r.member_of) {
      out.push_back('\n');
      emit_value(out, "dn", group);
      emit_line(out, "changetype: modify");
      emit_line(out, "add: member");
      emit_value(out, "member", r.distinguished_name);
      emit_line(out, "-");
    }
  }
  return out;
}

std::vector<LdifRecord> parse_ldif(std::string_view text) {
  auto blocks = logical_blocks(text);
  if (blocks.empty()) malformed(1, "missing version line");

  // The version line may share a block with the first record.
  std::vector<Line>& head = blocks.front();
  if (head.front().text != "version: 1") malformed(head.front().number, "expected 'version: 1'");
  head.erase(head.begin());
  if (head.empty()) blocks.erase(blocks.begin());

  std::vector<LdifRecord> records;
  bool any_change = false;
  bool any_content = false;
  for (const auto& block : blocks) {
    LdifRecord rec;
    const AttrValue dn = parse_attr_line(block.front());
    if (!iequals(dn.attribute, "dn")) malformed(block.front().number, "record must start with 'dn:'");
    rec.dn = dn.value;

    std::size_t i = 1;
    if (i < block.size() && iequals(block[i].text.substr(0, block[i].text.find(':')), "control")) {
      malformed(block[i].number, "controls are not supported");
    }
    if (i < block.size()) {
      const AttrValue first = parse_attr_line(block[i]);
      if (iequals(first.attribute, "changetype")) {
        rec.changetype = first.value;
        ++i;
      }
    }
    (rec.changetype.empty() ? any_content : any_change) = true;
    if (any_content && any_change) malformed(block.front().number, "content and change records are mixed");

    if (rec.changetype.empty() || rec.changetype == "add") {
      if (i == block.size()) malformed(block.front().number, "record without attributes");
      for (; i < block.size(); ++i) {
        if (block[i].text == "-") malformed(block[i].number, "unexpected '-'");
        AttrValue av = parse_attr_line(block[i]);
        rec.attributes.emplace_back(std::move(av.attribute), std::move(av.value));
      }
    } else if (rec.changetype == "delete") {
      if (i != block.size()) malformed(block[i].number, "delete record carries attributes");
    } else if (rec.changetype == "modify") {
      while (i < block.size()) {
        const AttrValue spec = parse_attr_line(block[i]);
        if (spec.attribute != "add" && spec.attribute != "delete" && spec.attribute != "replace") {
          malformed(block[i].number, "expected add/delete/replace");
        }
        if (!valid_attribute_description(spec.value)) malformed(block[i].number, "bad attribute in mod-spec");
        LdifModification mod{spec.attribute, spec.value, {}};
        ++i;
        bool closed = false;
        for (; i < block.size(); ++i) {
          if (block[i].text == "-") {
            closed = true;
            ++i;
            break;
          }
          AttrValue av = parse_attr_line(block[i]);
          if (!iequals(av.attribute, mod.attribute)) {
            malformed(block[i].number, "attribute does not match mod-spec '" + mod.attribute + "'");
          }
          mod.values.push_back(std::move(av.value));
        }
        if (!closed) malformed(block.back().number, "mod-spec not terminated by '-'");
        rec.modifications.push_back(std::move(mod));
      }
    } else {
      malformed(block.front().number, "unsupported changetype '" + rec.changetype + "'");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace honeygraph
