#include "patentmap/format.hpp"

#include <cstdio>
#include <string>

#include "patentmap/error.hpp"

namespace patentmap {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::string format_ratio_half_up(std::uint64_t numerator, std::uint64_t denominator, int digits) {
  if (denominator == 0) throw Error("zero denominator");
  if (digits < 0 || digits > 12) throw Error("unsupported digit count");
  std::uint64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const u128 scaled = static_cast<u128>(numerator) * scale * 2 + denominator;
  const auto rounded = static_cast<std::uint64_t>(scaled / (static_cast<u128>(denominator) * 2));
  std::string out = std::to_string(rounded / scale);
  if (digits > 0) {
    std::string frac = std::to_string(rounded % scale);
    out += '.';
    out.append(static_cast<std::size_t>(digits) - frac.size(), '0');
    out += frac;
  }
  return out;
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  std::string out(buf);
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

}  // namespace patentmap
