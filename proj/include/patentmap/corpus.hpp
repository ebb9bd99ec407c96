#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "patentmap/ipc_code.hpp"

namespace patentmap {

/// Calendar date with validated fields.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  /// Throws Error when the fields do not name a real day.
  static Date from_ymd(int year, int month, int day);
  /// "YYYY-MM-DD".
  static Date parse_iso(std::string_view text);
  /// ISO form or the "DD.MM.YYYY" form used by Patentscope exports.
  static Date parse_flexible(std::string_view text);

  std::string to_iso() const;

  friend auto operator<=>(const Date&, const Date&) = default;
};

struct PatentRecord {
  std::string patent_id;
  std::string office;
  Date publication_date;
  std::vector<std::string> applicants;
  std::vector<IpcCode> ipc_codes;  // as filed, duplicates allowed

  friend bool operator==(const PatentRecord&, const PatentRecord&) = default;
};

/// Ordered, id-unique collection of records. Immutable once loaded; the
/// filters return new corpora.
struct Corpus {
  std::vector<PatentRecord> records;
  std::string provenance;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
};

enum class CorpusFormat { CanonicalCsv, CanonicalJsonl, PatentscopeCsv };

/// "canonical-csv", "canonical-jsonl" or "patentscope-csv". Throws UnknownFormat.
CorpusFormat parse_corpus_format(std::string_view name);
std::string_view to_string(CorpusFormat format);

/// Header names read from a Patentscope export. Unmapped columns are ignored.
/// When `office` is empty or absent the office is taken from the first two
/// letters of the publication number.
struct PatentscopeColumns {
  std::string patent_id = "Publication Number";
  std::string office = "Country";
  std::string publication_date = "Publication Date";
  std::string applicants = "Applicants";
  std::string ipc_codes = "I P C";
};

struct SkippedCode {
  std::size_t line = 0;
  std::string patent_id;
  std::string text;
  std::string reason;
};

struct RowError {
  std::size_t line = 0;
  std::string reason;
};

/// Everything ingestion dropped or repaired.
struct IngestReport {
  std::string source;
  std::string format;
  std::size_t rows_read = 0;
  std::size_t records_loaded = 0;
  std::vector<std::string> duplicate_ids;  // one entry per dropped duplicate row
  std::vector<SkippedCode> skipped_codes;
  std::vector<RowError> bad_rows;

  /// Pretty-printed JSON document for the sidecar report file.
  std::string to_json() const;
};

struct LoadResult {
  Corpus corpus;
  IngestReport report;
};

/// Reads a corpus file. Malformed IPC codes are skipped one by one, bad rows
/// are recorded, and duplicate patent ids keep their first occurrence.
/// Throws UnreadableFile, UnknownFormat (header mismatch) or EmptyCorpus.
LoadResult load_corpus(const std::filesystem::path& path, CorpusFormat format,
                       const PatentscopeColumns& columns = {});

/// Same as load_corpus on in-memory content; `source` is used for messages.
LoadResult load_corpus_from_string(std::string_view content, CorpusFormat format,
                                   std::string_view source = "<memory>",
                                   const PatentscopeColumns& columns = {});

void write_ingest_report(const std::filesystem::path& path, const IngestReport& report);

/// Keeps records where any applicant contains any pattern as a
/// case-insensitive substring. Throws Error when `patterns` is empty.
Corpus filter_by_applicant(const Corpus& corpus, std::span<const std::string> patterns);

/// Inclusive on both ends. Throws InvalidRange when from_year > to_year.
Corpus filter_by_publication_year(const Corpus& corpus, int from_year, int to_year);

/// Publications per year, zero-filled across the [min, max] year span.
std::map<int, std::size_t> annual_counts(const Corpus& corpus);

struct ApplicantRule {
  std::string label;
  std::vector<std::string> patterns;
};

inline constexpr std::string_view kUnmatchedLabel = "unmatched";

using LabelCounts = std::vector<std::pair<std::string, std::size_t>>;

/// Each record counts once, under the first rule it matches, or under
/// "unmatched". Output follows rule order with "unmatched" last.
LabelCounts count_by_applicant(const Corpus& corpus, std::span<const ApplicantRule> rules);

/// Records per office, ordered by descending count then office code.
LabelCounts count_by_office(const Corpus& corpus);

/// The record's codes truncated to `level`, deduplicated, ordered by
/// canonical text. Codes shallower than `level` are dropped.
std::vector<IpcCode> codes_at_level(const PatentRecord& record, IpcLevel level);

bool contains_case_insensitive(std::string_view haystack, std::string_view needle);

}  // namespace patentmap
