#include "patentmap/ipc_code.hpp"

#include <cctype>
#include <string>

#include "patentmap/error.hpp"

namespace patentmap {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Drops a trailing "(YYYY.MM)" edition tag, as printed by Patentscope.
std::string_view strip_edition(std::string_view s) {
  if (s.empty() || s.back() != ')') return s;
  const auto open = s.rfind('(');
  if (open == std::string_view::npos) return s;
  const auto inner = s.substr(open + 1, s.size() - open - 2);
  if (inner.size() != 7 || inner[4] != '.') return s;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (i != 4 && !is_digit(inner[i])) return s;
  }
  return trim(s.substr(0, open));
}

[[noreturn]] void malformed(std::string_view text, std::string_view why) {
  throw MalformedCode("malformed IPC code '" + std::string(text) + "': " + std::string(why));
}

void require_level(const IpcCode& code, IpcLevel level) {
  if (level > code.level()) {
    throw LevelUnavailable("IPC code " + code.to_string() + " has no " +
                           std::string(to_string(level)) + " level");
  }
}

}  // namespace

std::string_view to_string(IpcLevel level) {
  switch (level) {
    case IpcLevel::Section:
      return "section";
    case IpcLevel::Class:
      return "class";
    case IpcLevel::Subclass:
      return "subclass";
    case IpcLevel::Group:
      return "group";
  }
  return "unknown";
}

IpcLevel parse_ipc_level(std::string_view text) {
  std::string lower;
  for (char c : trim(text)) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "section") return IpcLevel::Section;
  if (lower == "class") return IpcLevel::Class;
  if (lower == "subclass") return IpcLevel::Subclass;
  if (lower == "group") return IpcLevel::Group;
  throw Error("unknown IPC level '" + std::string(text) + "'");
}

IpcCode::IpcCode(char section, std::optional<int> class_number, std::optional<char> subclass,
                 std::optional<int> group_major, std::optional<int> group_minor)
    : section_(section) {
  if (section < 'A' || section > 'H') {
    throw MalformedCode(std::string("section must be A-H, got '") + section + "'");
  }
  if (!class_number) {
    if (subclass || group_major || group_minor) throw MalformedCode("subclass or group without class");
    return;
  }
  if (*class_number < 0 || *class_number > 99) throw MalformedCode("class number out of range");
  class_number_ = static_cast<std::int16_t>(*class_number);
  level_ = IpcLevel::Class;
  if (!subclass) {
    if (group_major || group_minor) throw MalformedCode("group without subclass");
    return;
  }
  if (!is_upper(*subclass)) throw MalformedCode("subclass must be a letter A-Z");
  subclass_ = *subclass;
  level_ = IpcLevel::Subclass;
  if (group_major.has_value() != group_minor.has_value()) {
    throw MalformedCode("group major and minor numbers must come together");
  }
  if (!group_major) return;
  if (*group_major < 1 || *group_major > 9999) throw MalformedCode("main group number out of range");
  if (*group_minor < 0 || *group_minor > 999999) throw MalformedCode("subgroup number out of range");
  group_major_ = *group_major;
  group_minor_ = *group_minor;
  level_ = IpcLevel::Group;
}

std::optional<int> IpcCode::class_number() const noexcept {
  if (level_ < IpcLevel::Class) return std::nullopt;
  return class_number_;
}

std::optional<char> IpcCode::subclass() const noexcept {
  if (level_ < IpcLevel::Subclass) return std::nullopt;
  return subclass_;
}

std::optional<int> IpcCode::group_major() const noexcept {
  if (level_ < IpcLevel::Group) return std::nullopt;
  return group_major_;
}

std::optional<int> IpcCode::group_minor() const noexcept {
  if (level_ < IpcLevel::Group) return std::nullopt;
  return group_minor_;
}

std::string IpcCode::to_string() const { return format_ipc_code(*this, level_); }

IpcCode parse_ipc_code(std::string_view text) {
  const std::string_view trimmed = strip_edition(trim(text));
  if (trimmed.empty()) malformed(text, "empty");
  std::string s;
  s.reserve(trimmed.size());
  for (char c : trimmed) s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));

  std::size_t pos = 0;
  const char section = s[pos++];
  if (section < 'A' || section > 'H') malformed(text, "section must be a letter A-H");
  if (pos == s.size()) return IpcCode(section);

  if (pos + 2 > s.size() || !is_digit(s[pos]) || !is_digit(s[pos + 1])) {
    malformed(text, "class must be exactly two digits");
  }
  const int class_number = (s[pos] - '0') * 10 + (s[pos + 1] - '0');
  pos += 2;
  if (pos == s.size()) return IpcCode(section, class_number);

  const char subclass = s[pos++];
  if (!is_upper(subclass)) malformed(text, "subclass must be a letter A-Z");
  if (pos == s.size()) return IpcCode(section, class_number, subclass);

  const auto skip_spaces = [&] {
    while (pos < s.size() && is_space(s[pos])) ++pos;
  };
  const auto read_number = [&](std::size_t max_digits, std::string_view what) {
    const std::size_t start = pos;
    long value = 0;
    while (pos < s.size() && is_digit(s[pos])) {
      value = value * 10 + (s[pos] - '0');
      ++pos;
      if (pos - start > max_digits) malformed(text, std::string(what) + " has too many digits");
    }
    if (pos == start) malformed(text, std::string(what) + " is missing");
    return static_cast<int>(value);
  };

  skip_spaces();
  const int major = read_number(4, "main group number");
  skip_spaces();
  if (pos == s.size() || s[pos] != '/') malformed(text, "missing '/' between group numbers");
  ++pos;
  skip_spaces();
  const int minor = read_number(6, "subgroup number");
  if (pos != s.size()) malformed(text, "trailing characters");
  if (major < 1) malformed(text, "main group number out of range");
  return IpcCode(section, class_number, subclass, major, minor);
}

std::string format_ipc_code(const IpcCode& code, IpcLevel level) {
  require_level(code, level);
  std::string out(1, code.section());
  if (level == IpcLevel::Section) return out;
  const int cls = *code.class_number();
  out += static_cast<char>('0' + cls / 10);
  out += static_cast<char>('0' + cls % 10);
  if (level == IpcLevel::Class) return out;
  out += *code.subclass();
  if (level == IpcLevel::Subclass) return out;
  out += ' ';
  out += std::to_string(*code.group_major());
  out += '/';
  const int minor = *code.group_minor();
  if (minor < 10) out += '0';
  out += std::to_string(minor);
  return out;
}

IpcCode truncate_to_level(const IpcCode& code, IpcLevel level) {
  require_level(code, level);
  switch (level) {
    case IpcLevel::Section:
      return IpcCode(code.section());
    case IpcLevel::Class:
      return IpcCode(code.section(), code.class_number());
    case IpcLevel::Subclass:
      return IpcCode(code.section(), code.class_number(), code.subclass());
    case IpcLevel::Group:
      return code;
  }
  return code;
}

}  // namespace patentmap
