#include "patentmap/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "csv.hpp"
#include "patentmap/error.hpp"

namespace patentmap {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<int> to_int(std::string_view s) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

bool is_leap(int year) { return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0; }

int days_in_month(int year, int month) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return month == 2 && is_leap(year) ? 29 : kDays[month - 1];
}

// Splits a multi-valued cell on ';' and newlines, dropping empty items.
std::vector<std::string> split_list(std::string_view cell) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= cell.size(); ++i) {
    if (i == cell.size() || cell[i] == ';' || cell[i] == '\n' || cell[i] == '\r') {
      const auto item = trim(cell.substr(start, i - start));
      if (!item.empty()) out.emplace_back(item);
      start = i + 1;
    }
  }
  return out;
}

// Raw string fields of one input row, before validation.
struct RawRecord {
  std::size_t line = 0;
  std::string patent_id;
  std::string office;
  std::string publication_date;
  std::vector<std::string> applicants;
  std::vector<std::string> ipc_codes;
};

class Ingestor {
 public:
  Ingestor(std::string_view source, CorpusFormat format) {
    result_.report.source = std::string(source);
    result_.report.format = std::string(to_string(format));
    result_.corpus.provenance =
        "loaded from " + std::string(source) + " (" + std::string(to_string(format)) + ")";
    flexible_dates_ = format == CorpusFormat::PatentscopeCsv;
  }

  void bad_row(std::size_t line, std::string reason) {
    ++result_.report.rows_read;
    result_.report.bad_rows.push_back({line, std::move(reason)});
  }

  void add(RawRecord raw) {
    ++result_.report.rows_read;
    IngestReport& report = result_.report;
    const std::string id(trim(raw.patent_id));
    if (id.empty()) {
      report.bad_rows.push_back({raw.line, "missing patent_id"});
      return;
    }
    PatentRecord record;
    record.patent_id = id;
    record.office = std::string(trim(raw.office));
    try {
      record.publication_date = flexible_dates_ ? Date::parse_flexible(raw.publication_date)
                                                : Date::parse_iso(raw.publication_date);
    } catch (const Error& e) {
      report.bad_rows.push_back({raw.line, e.what()});
      return;
    }
    if (record.office.empty()) {
      report.bad_rows.push_back({raw.line, "missing office"});
      return;
    }
    if (!seen_.insert(id).second) {
      report.duplicate_ids.push_back(id);
      return;
    }
    record.applicants = std::move(raw.applicants);
    for (const auto& text : raw.ipc_codes) {
      try {
        record.ipc_codes.push_back(parse_ipc_code(text));
      } catch (const MalformedCode& e) {
        report.skipped_codes.push_back({raw.line, id, text, e.what()});
      }
    }
    result_.corpus.records.push_back(std::move(record));
  }

  LoadResult finish() {
    result_.report.records_loaded = result_.corpus.records.size();
    if (result_.corpus.empty()) {
      throw EmptyCorpus("no valid patent records in " + result_.report.source);
    }
    return std::move(result_);
  }

 private:
  LoadResult result_;
  std::unordered_set<std::string> seen_;
  bool flexible_dates_ = false;
};

constexpr std::string_view kCanonicalHeader[] = {"patent_id", "office", "publication_date",
                                                 "applicants", "ipc_codes"};

void load_canonical_csv(std::string_view content, Ingestor& ingest, std::string_view source) {
  const auto rows = csv::parse(content);
  if (rows.empty()) return;
  const auto& header = rows.front().fields;
  bool header_ok = header.size() == std::size(kCanonicalHeader);
  for (std::size_t i = 0; header_ok && i < header.size(); ++i) {
    header_ok = trim(header[i]) == kCanonicalHeader[i];
  }
  if (!header_ok) {
    throw UnknownFormat(std::string(source) +
                        ": expected header patent_id,office,publication_date,applicants,ipc_codes");
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != header.size()) {
      ingest.bad_row(row.line, "expected 5 fields, found " + std::to_string(row.fields.size()));
      continue;
    }
    ingest.add({row.line, row.fields[0], row.fields[1], row.fields[2], split_list(row.fields[3]),
                split_list(row.fields[4])});
  }
}

std::vector<std::string> json_list(const json& value) {
  if (value.is_null()) return {};
  if (value.is_string()) return split_list(value.get<std::string>());
  if (!value.is_array()) throw Error("list field must be an array or a ';'-separated string");
  std::vector<std::string> out;
  for (const auto& item : value) {
    if (!item.is_string()) throw Error("list items must be strings");
    const auto text = trim(item.get_ref<const std::string&>());
    if (!text.empty()) out.emplace_back(text);
  }
  return out;
}

std::string json_string(const json& object, const char* key) {
  const auto it = object.find(key);
  if (it == object.end() || it->is_null()) return {};
  if (!it->is_string()) throw Error(std::string(key) + " must be a string");
  return it->get<std::string>();
}

void load_canonical_jsonl(std::string_view content, Ingestor& ingest) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    const auto line = trim(content.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    try {
      const json object = json::parse(line);
      if (!object.is_object()) throw Error("line is not a JSON object");
      RawRecord raw;
      raw.line = line_no;
      raw.patent_id = json_string(object, "patent_id");
      raw.office = json_string(object, "office");
      raw.publication_date = json_string(object, "publication_date");
      raw.applicants = json_list(object.value("applicants", json()));
      raw.ipc_codes = json_list(object.value("ipc_codes", json()));
      ingest.add(std::move(raw));
    } catch (const json::exception& e) {
      ingest.bad_row(line_no, std::string("invalid JSON: ") + e.what());
    } catch (const Error& e) {
      ingest.bad_row(line_no, e.what());
    }
  }
}

void load_patentscope_csv(std::string_view content, Ingestor& ingest, std::string_view source,
                          const PatentscopeColumns& columns) {
  const auto rows = csv::parse(content);
  if (rows.empty()) return;
  const auto& header = rows.front().fields;
  const auto find = [&](const std::string& name) -> std::optional<std::size_t> {
    if (name.empty()) return std::nullopt;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (lower(trim(header[i])) == lower(name)) return i;
    }
    return std::nullopt;
  };
  const auto require = [&](const std::string& name) {
    const auto index = find(name);
    if (!index) throw UnknownFormat(std::string(source) + ": Patentscope column '" + name + "' not found");
    return *index;
  };
  const std::size_t id_col = require(columns.patent_id);
  const std::size_t date_col = require(columns.publication_date);
  const std::size_t applicant_col = require(columns.applicants);
  const std::size_t ipc_col = require(columns.ipc_codes);
  const auto office_col = find(columns.office);

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    const std::size_t needed =
        std::max({id_col, date_col, applicant_col, ipc_col, office_col.value_or(0)}) + 1;
    if (f.size() < needed) {
      ingest.bad_row(rows[r].line, "row has " + std::to_string(f.size()) + " fields, need " +
                                       std::to_string(needed));
      continue;
    }
    RawRecord raw;
    raw.line = rows[r].line;
    raw.patent_id = f[id_col];
    if (office_col) {
      raw.office = f[*office_col];
    } else {
      const auto id = trim(raw.patent_id);
      if (id.size() >= 2 && std::isalpha(static_cast<unsigned char>(id[0])) &&
          std::isalpha(static_cast<unsigned char>(id[1]))) {
        raw.office = std::string(id.substr(0, 2));
      }
    }
    raw.publication_date = f[date_col];
    raw.applicants = split_list(f[applicant_col]);
    raw.ipc_codes = split_list(f[ipc_col]);
    ingest.add(std::move(raw));
  }
}

}  // namespace

Date Date::from_ymd(int year, int month, int day) {
  if (year < 1 || year > 9999 || month < 1 || month > 12 || day < 1 ||
      day > days_in_month(year, month)) {
    throw Error("invalid date " + std::to_string(year) + "-" + std::to_string(month) + "-" +
                std::to_string(day));
  }
  return Date{year, month, day};
}

Date Date::parse_iso(std::string_view text) {
  const auto s = trim(text);
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
    throw Error("invalid ISO date '" + std::string(text) + "'");
  }
  const auto y = to_int(s.substr(0, 4));
  const auto m = to_int(s.substr(5, 2));
  const auto d = to_int(s.substr(8, 2));
  if (!y || !m || !d) throw Error("invalid ISO date '" + std::string(text) + "'");
  return from_ymd(*y, *m, *d);
}

Date Date::parse_flexible(std::string_view text) {
  const auto s = trim(text);
  if (s.size() == 10 && s[2] == '.' && s[5] == '.') {
    const auto d = to_int(s.substr(0, 2));
    const auto m = to_int(s.substr(3, 2));
    const auto y = to_int(s.substr(6, 4));
    if (!y || !m || !d) throw Error("invalid date '" + std::string(text) + "'");
    return from_ymd(*y, *m, *d);
  }
  return parse_iso(s);
}

std::string Date::to_iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "canonical-csv") return CorpusFormat::CanonicalCsv;
  if (name == "canonical-jsonl") return CorpusFormat::CanonicalJsonl;
  if (name == "patentscope-csv") return CorpusFormat::PatentscopeCsv;
  throw UnknownFormat("unknown corpus format '" + std::string(name) + "'");
}

std::string_view to_string(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::CanonicalCsv:
      return "canonical-csv";
    case CorpusFormat::CanonicalJsonl:
      return "canonical-jsonl";
    case CorpusFormat::PatentscopeCsv:
      return "patentscope-csv";
  }
  return "unknown";
}

std::string IngestReport::to_json() const {
  json doc;
  doc["source"] = source;
  doc["format"] = format;
  doc["rows_read"] = rows_read;
  doc["records_loaded"] = records_loaded;
  doc["duplicate_id_count"] = duplicate_ids.size();
  doc["duplicate_ids"] = duplicate_ids;
  doc["skipped_code_count"] = skipped_codes.size();
  json skipped = json::array();
  for (const auto& s : skipped_codes) {
    skipped.push_back({{"line", s.line}, {"patent_id", s.patent_id}, {"text", s.text}, {"reason", s.reason}});
  }
  doc["skipped_codes"] = std::move(skipped);
  doc["bad_row_count"] = bad_rows.size();
  json bad = json::array();
  for (const auto& b : bad_rows) bad.push_back({{"line", b.line}, {"reason", b.reason}});
  doc["bad_rows"] = std::move(bad);
  return doc.dump(2) + "\n";
}

LoadResult load_corpus_from_string(std::string_view content, CorpusFormat format,
                                   std::string_view source, const PatentscopeColumns& columns) {
  Ingestor ingest(source, format);
  switch (format) {
    case CorpusFormat::CanonicalCsv:
      load_canonical_csv(content, ingest, source);
      break;
    case CorpusFormat::CanonicalJsonl:
      load_canonical_jsonl(content, ingest);
      break;
    case CorpusFormat::PatentscopeCsv:
      load_patentscope_csv(content, ingest, source, columns);
      break;
  }
  return ingest.finish();
}

LoadResult load_corpus(const std::filesystem::path& path, CorpusFormat format,
                       const PatentscopeColumns& columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UnreadableFile("cannot read input file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw UnreadableFile("error while reading " + path.string());
  return load_corpus_from_string(buffer.str(), format, path.string(), columns);
}

void write_ingest_report(const std::filesystem::path& path, const IngestReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UnreadableFile("cannot write " + path.string());
  out << report.to_json();
}

bool contains_case_insensitive(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return true;
  const auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                              [](char a, char b) {
                                return std::tolower(static_cast<unsigned char>(a)) ==
                                       std::tolower(static_cast<unsigned char>(b));
                              });
  return it != haystack.end();
}

Corpus filter_by_applicant(const Corpus& corpus, std::span<const std::string> patterns) {
  if (patterns.empty()) throw Error("applicant filter needs at least one pattern");
  Corpus out;
  out.provenance = corpus.provenance + "; applicant filter (" + std::to_string(patterns.size()) + " patterns)";
  for (const auto& record : corpus.records) {
    const bool match = std::any_of(record.applicants.begin(), record.applicants.end(), [&](const auto& name) {
      return std::any_of(patterns.begin(), patterns.end(),
                         [&](const auto& p) { return contains_case_insensitive(name, p); });
    });
    if (match) out.records.push_back(record);
  }
  return out;
}

Corpus filter_by_publication_year(const Corpus& corpus, int from_year, int to_year) {
  if (from_year > to_year) {
    throw InvalidRange("year range " + std::to_string(from_year) + " > " + std::to_string(to_year));
  }
  Corpus out;
  out.provenance = corpus.provenance + "; published " + std::to_string(from_year) + "-" + std::to_string(to_year);
  for (const auto& record : corpus.records) {
    const int year = record.publication_date.year;
    if (year >= from_year && year <= to_year) out.records.push_back(record);
  }
  return out;
}

std::map<int, std::size_t> annual_counts(const Corpus& corpus) {
  std::map<int, std::size_t> counts;
  if (corpus.empty()) return counts;
  int lo = corpus.records.front().publication_date.year;
  int hi = lo;
  for (const auto& record : corpus.records) {
    const int year = record.publication_date.year;
    ++counts[year];
    lo = std::min(lo, year);
    hi = std::max(hi, year);
  }
  for (int year = lo; year <= hi; ++year) counts.try_emplace(year, 0);
  return counts;
}

LabelCounts count_by_applicant(const Corpus& corpus, std::span<const ApplicantRule> rules) {
  std::vector<std::size_t> counts(rules.size() + 1, 0);
  for (const auto& record : corpus.records) {
    std::size_t slot = rules.size();
    for (std::size_t r = 0; r < rules.size() && slot == rules.size(); ++r) {
      for (const auto& name : record.applicants) {
        const auto& patterns = rules[r].patterns;
        if (std::any_of(patterns.begin(), patterns.end(),
                        [&](const auto& p) { return contains_case_insensitive(name, p); })) {
          slot = r;
          break;
        }
      }
    }
    ++counts[slot];
  }
  LabelCounts out;
  for (std::size_t r = 0; r < rules.size(); ++r) out.emplace_back(rules[r].label, counts[r]);
  out.emplace_back(std::string(kUnmatchedLabel), counts.back());
  return out;
}

LabelCounts count_by_office(const Corpus& corpus) {
  std::map<std::string, std::size_t> counts;
  for (const auto& record : corpus.records) ++counts[record.office];
  LabelCounts out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

std::vector<IpcCode> codes_at_level(const PatentRecord& record, IpcLevel level) {
  std::vector<std::pair<std::string, IpcCode>> keyed;
  keyed.reserve(record.ipc_codes.size());
  for (const auto& code : record.ipc_codes) {
    if (code.level() < level) continue;
    const IpcCode truncated = truncate_to_level(code, level);
    keyed.emplace_back(format_ipc_code(truncated, level), truncated);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  std::vector<IpcCode> out;
  out.reserve(keyed.size());
  for (auto& entry : keyed) out.push_back(entry.second);
  return out;
}

}  // namespace patentmap
