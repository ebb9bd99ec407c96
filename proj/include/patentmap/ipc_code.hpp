#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace patentmap {

/// Granularity of an IPC symbol. Main groups and subgroups share the Group
/// level; a main group is a Group code whose minor number is zero.
enum class IpcLevel : std::uint8_t { Section = 0, Class = 1, Subclass = 2, Group = 3 };

std::string_view to_string(IpcLevel level);

/// Accepts "section", "class", "subclass", "group" (case-insensitive).
IpcLevel parse_ipc_level(std::string_view text);

/// A structurally valid IPC symbol such as "A63F 13/55".
///
/// Fields are populated top-down: a subclass requires a class, a group
/// requires a subclass, and the group minor number is present exactly when
/// the major number is.
class IpcCode {
 public:
  /// Throws MalformedCode when the fields are out of range or inconsistent.
  explicit IpcCode(char section, std::optional<int> class_number = std::nullopt,
                   std::optional<char> subclass = std::nullopt,
                   std::optional<int> group_major = std::nullopt,
                   std::optional<int> group_minor = std::nullopt);

  char section() const noexcept { return section_; }
  std::optional<int> class_number() const noexcept;
  std::optional<char> subclass() const noexcept;
  std::optional<int> group_major() const noexcept;
  std::optional<int> group_minor() const noexcept;

  /// Deepest populated level.
  IpcLevel level() const noexcept { return level_; }
  bool is_main_group() const noexcept { return level_ == IpcLevel::Group && group_minor_ == 0; }

  /// Canonical rendering at the code's own level.
  std::string to_string() const;

  friend bool operator==(const IpcCode&, const IpcCode&) = default;
  friend std::strong_ordering operator<=>(const IpcCode&, const IpcCode&) = default;

 private:
  IpcLevel level_ = IpcLevel::Section;
  char section_ = 'A';
  std::int16_t class_number_ = -1;
  char subclass_ = '\0';
  std::int32_t group_major_ = -1;
  std::int32_t group_minor_ = -1;
};

/// Parses spaced ("A63F 13/55") and compact ("A63F13/55") renderings.
/// Surrounding whitespace is stripped, letters are upper-cased, and a
/// trailing edition tag such as "(2014.01)" is ignored.
/// Throws MalformedCode.
IpcCode parse_ipc_code(std::string_view text);

/// Canonical text at `level`: "A", "A63", "A63F" or "A63F 13/55".
/// Throws LevelUnavailable when `level` is deeper than the code.
std::string format_ipc_code(const IpcCode& code, IpcLevel level);

/// Ancestor of `code` at `level`. Group truncation is the identity, so main
/// groups and subgroups stay distinct. Throws LevelUnavailable.
IpcCode truncate_to_level(const IpcCode& code, IpcLevel level);

inline IpcLevel level_of(const IpcCode& code) noexcept { return code.level(); }

}  // namespace patentmap
