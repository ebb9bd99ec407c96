#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "patentmap/corpus.hpp"
#include "patentmap/error.hpp"
#include "patentmap/pipeline.hpp"

using namespace patentmap;

namespace {

const char* kHeader = "patent_id,office,publication_date,applicants,ipc_codes\n";

Corpus load_csv(const std::string& body) {
  return load_corpus_from_string(kHeader + body, CorpusFormat::CanonicalCsv).corpus;
}

std::set<std::string> ids(const Corpus& c) {
  std::set<std::string> out;
  for (const auto& r : c.records) out.insert(r.patent_id);
  return out;
}

PatentRecord record(std::string id, int year, std::vector<std::string> applicants, std::string office = "US") {
  PatentRecord r;
  r.patent_id = std::move(id);
  r.office = std::move(office);
  r.publication_date = Date::from_ymd(year, 6, 1);
  r.applicants = std::move(applicants);
  return r;
}

}  // namespace

TEST_CASE("canonical CSV with three well-formed rows") {
  const auto c = load_csv(
      "US1,US,2014-01-02,Activision Publishing Inc.,A63F 13/00;G06F 17/00\n"
      "US2,US,2015-03-04,King.com Ltd.,A63F 13/30\n"
      "WO3,WO,2016-05-06,\"Blizzard Entertainment; Inc\",H04L 29/06\n");
  REQUIRE(c.size() == 3);
  CHECK(c.records[0].ipc_codes.size() == 2);
  CHECK(c.records[2].applicants == std::vector<std::string>{"Blizzard Entertainment", "Inc"});
  CHECK(c.records[1].publication_date == Date::from_ymd(2015, 3, 4));
}

TEST_CASE("duplicate ids keep the first row") {
  const auto result = load_corpus_from_string(std::string(kHeader) +
                                                  "US1,US,2014-01-02,A,A63F 13/00\n"
                                                  "US1,US,2015-01-02,B,G06F 17/00\n",
                                              CorpusFormat::CanonicalCsv);
  REQUIRE(result.corpus.size() == 1);
  CHECK(result.corpus.records[0].applicants == std::vector<std::string>{"A"});
  CHECK(result.report.duplicate_ids == std::vector<std::string>{"US1"});
}

TEST_CASE("malformed codes are skipped per code") {
  const auto result = load_corpus_from_string(std::string(kHeader) + "US1,US,2014-01-02,A,A63F 13/00;1XZ;G06F\n",
                                              CorpusFormat::CanonicalCsv);
  REQUIRE(result.corpus.size() == 1);
  CHECK(result.corpus.records[0].ipc_codes.size() == 2);
  REQUIRE(result.report.skipped_codes.size() == 1);
  CHECK(result.report.skipped_codes[0].text == "1XZ");
  CHECK(result.report.skipped_codes[0].line == 2);
}

TEST_CASE("bad rows are reported and do not stop ingestion") {
  const auto result = load_corpus_from_string(std::string(kHeader) +
                                                  "US1,US,2014-13-02,A,A63F\n"
                                                  ",US,2014-01-02,A,A63F\n"
                                                  "US3,,2014-01-02,A,A63F\n"
                                                  "US4,US,2014-01-02\n"
                                                  "US5,US,2014-01-02,A,A63F\n",
                                              CorpusFormat::CanonicalCsv);
  CHECK(result.corpus.size() == 1);
  CHECK(result.report.bad_rows.size() == 4);
}

TEST_CASE("ingestion errors") {
  CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.csv", CorpusFormat::CanonicalCsv), UnreadableFile);
  CHECK_THROWS_AS(load_corpus_from_string("id,office\nUS1,US\n", CorpusFormat::CanonicalCsv), UnknownFormat);
  CHECK_THROWS_AS(load_corpus_from_string(kHeader, CorpusFormat::CanonicalCsv), EmptyCorpus);
  CHECK_THROWS_AS(load_corpus_from_string(std::string(kHeader) + "US1,US,bad,A,A63F\n", CorpusFormat::CanonicalCsv),
                  EmptyCorpus);
  CHECK_THROWS_AS(parse_corpus_format("xml"), UnknownFormat);
}

TEST_CASE("jsonl accepts arrays and delimited strings") {
  const auto c = load_corpus_from_string(
                     "{\"patent_id\":\"US1\",\"office\":\"US\",\"publication_date\":\"2014-01-02\","
                     "\"applicants\":[\"A\",\"B\"],\"ipc_codes\":[\"A63F 13/00\",\"G06F17/00\"]}\n"
                     "\n"
                     "{\"patent_id\":\"US2\",\"office\":\"US\",\"publication_date\":\"2014-01-03\","
                     "\"applicants\":\"A;B\",\"ipc_codes\":\"A63F 13/00; H04L\"}\n",
                     CorpusFormat::CanonicalJsonl)
                     .corpus;
  REQUIRE(c.size() == 2);
  CHECK(c.records[0].applicants == c.records[1].applicants);
  CHECK(c.records[1].ipc_codes.size() == 2);
}

TEST_CASE("patentscope export with day-first dates and multi-line cells") {
  const std::string text =
      "\xEF\xBB\xBF"
      "Application Id,Publication Number,Publication Date,Applicants,I P C\r\n"
      "1,US20140001,04.03.2014,\"Activision Publishing\nActivision Inc\",\"A63F 13/00\nG07F 17/32\"\r\n"
      "2,WO2015000003,15.01.2015,Blizzard Entertainment,A63F 13/30\r\n";
  const auto c = load_corpus_from_string(text, CorpusFormat::PatentscopeCsv).corpus;
  REQUIRE(c.size() == 2);
  CHECK(c.records[0].office == "US");
  CHECK(c.records[1].office == "WO");
  CHECK(c.records[0].publication_date == Date::from_ymd(2014, 3, 4));
  CHECK(c.records[0].applicants.size() == 2);
  CHECK(c.records[0].ipc_codes.size() == 2);

  PatentscopeColumns renamed;
  renamed.ipc_codes = "IPC";
  CHECK_THROWS_AS(load_corpus_from_string(text, CorpusFormat::PatentscopeCsv, "x", renamed), UnknownFormat);
}

TEST_CASE("fixture corpus matches a field-by-field reading") {
  const auto path = std::filesystem::path(PATENTMAP_SOURCE_DIR) / "tests/fixtures/mini_corpus.csv";
  const auto result = load_corpus(path, CorpusFormat::CanonicalCsv);
  const auto& c = result.corpus;
  REQUIRE(c.size() == 12);
  CHECK(result.report.skipped_codes.size() == 2);
  CHECK(c.records[0].patent_id == "US20140001");
  CHECK(c.records[0].ipc_codes ==
        std::vector<IpcCode>{IpcCode('A', 63, 'F', 13, 0), IpcCode('A', 63, 'F', 13, 30), IpcCode('G', 7, 'F', 17, 32)});
  CHECK(c.records[3].ipc_codes[0] == IpcCode('A', 63, 'F', 13, 52));
  CHECK(c.records[4].applicants == std::vector<std::string>{"King.com Ltd.", "King.com Limited"});
  CHECK(c.records[9].ipc_codes.empty());
  CHECK(c.records[11].publication_date == Date::from_ymd(2007, 12, 31));
}

TEST_CASE("applicant filter is a case-insensitive OR over patterns") {
  Corpus c;
  c.records = {record("1", 2014, {"Activision Publishing, Inc."}), record("2", 2014, {"KING.COM LIMITED"}),
               record("3", 2014, {"Microsoft Corporation"}), record("4", 2014, {"Someone", "Blizzard Entertainment"})};
  const std::vector<std::string> patterns{"activision publishing", "king.com", "blizzard"};
  CHECK(ids(filter_by_applicant(c, patterns)) == std::set<std::string>{"1", "2", "4"});
  const std::vector<std::string> blizzard{"blizzard"};
  CHECK(ids(filter_by_applicant(c, blizzard)) == std::set<std::string>{"4"});
  CHECK_THROWS_AS(filter_by_applicant(c, std::vector<std::string>{}), Error);
  const std::vector<std::string> nobody{"nobody"};
  CHECK(filter_by_applicant(c, nobody).empty());
}

TEST_CASE("year filter is inclusive") {
  Corpus c;
  c.records = {record("a", 2007, {}), record("b", 2008, {}), record("c", 2023, {}), record("d", 2024, {})};
  c.records[0].publication_date = Date::from_ymd(2007, 12, 31);
  c.records[1].publication_date = Date::from_ymd(2008, 1, 2);
  CHECK(ids(filter_by_publication_year(c, 2008, 2023)) == std::set<std::string>{"b", "c"});
  CHECK(ids(filter_by_publication_year(c, 2008, 2008)) == std::set<std::string>{"b"});
  CHECK_THROWS_AS(filter_by_publication_year(c, 2010, 2009), InvalidRange);
}

TEST_CASE("annual counts zero-fill the span") {
  Corpus c;
  c.records = {record("a", 2010, {}), record("b", 2012, {}), record("c", 2012, {})};
  const auto counts = annual_counts(c);
  CHECK(counts == std::map<int, std::size_t>{{2010, 1}, {2011, 0}, {2012, 2}});
  CHECK(annual_counts(Corpus{}).empty());
}

TEST_CASE("applicant rules count under the first match") {
  Corpus c;
  c.records = {record("1", 2014, {"Activision Publishing"}), record("2", 2014, {"King.com", "Activision Publishing"}),
               record("3", 2014, {"King.com"}), record("4", 2014, {"Treyarch"})};
  const auto counts = count_by_applicant(c, default_applicant_rules());
  CHECK(counts == LabelCounts{{"Activision Publishing", 2}, {"King.com", 1}, {"Blizzard Entertainment", 0},
                              {"unmatched", 1}});
}

TEST_CASE("office counts sort by count then name") {
  Corpus c;
  c.records = {record("1", 2014, {}, "WO"), record("2", 2014, {}, "US"), record("3", 2014, {}, "US"),
               record("4", 2014, {}, "EP")};
  CHECK(count_by_office(c) == LabelCounts{{"US", 2}, {"EP", 1}, {"WO", 1}});
}

TEST_CASE("codes_at_level truncates and deduplicates") {
  PatentRecord r;
  r.ipc_codes = {IpcCode('A', 63, 'F', 13, 55), IpcCode('A', 63, 'F', 13, 70)};
  CHECK(codes_at_level(r, IpcLevel::Subclass) == std::vector<IpcCode>{IpcCode('A', 63, 'F')});
  r.ipc_codes = {IpcCode('G', 6, 'F', 17, 0), IpcCode('G', 6, 'F', 17, 0)};
  CHECK(codes_at_level(r, IpcLevel::Group).size() == 1);
  r.ipc_codes = {IpcCode('A', 63, 'F', 13, 0), IpcCode('G', 6, 'F')};
  CHECK(codes_at_level(r, IpcLevel::Group) == std::vector<IpcCode>{IpcCode('A', 63, 'F', 13, 0)});
}

TEST_CASE("property: filters commute and annual counts sum to the corpus size") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> names{"Activision Publishing", "King.com Ltd", "Microsoft", "Blizzard Entertainment",
                                       "Sony"};
  std::uniform_int_distribution<int> year(2005, 2025);
  std::uniform_int_distribution<std::size_t> name(0, names.size() - 1);
  const std::vector<std::string> patterns{"activision", "king.com", "blizzard"};
  for (int trial = 0; trial < 100; ++trial) {
    Corpus c;
    for (int i = 0; i < 40; ++i) c.records.push_back(record(std::to_string(i), year(rng), {names[name(rng)]}));
    const int from = year(rng);
    const int to = std::max(from, year(rng));
    const auto a = filter_by_publication_year(filter_by_applicant(c, patterns), from, to);
    const auto b = filter_by_applicant(filter_by_publication_year(c, from, to), patterns);
    CHECK(ids(a) == ids(b));
    std::size_t total = 0;
    for (const auto& [y, n] : annual_counts(a)) total += n;
    CHECK(total == a.size());
  }
}

TEST_CASE("property: codes_at_level output is a subset of truncated inputs") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    PatentRecord r;
    std::uniform_int_distribution<int> pick(0, 3);
    for (int i = 0; i < 6; ++i) {
      switch (pick(rng)) {
        case 0:
          r.ipc_codes.emplace_back('A', 63);
          break;
        case 1:
          r.ipc_codes.emplace_back('A', 63, 'F');
          break;
        default:
          r.ipc_codes.emplace_back('A', 63, 'F', 13, pick(rng) * 10);
      }
    }
    for (auto level : {IpcLevel::Section, IpcLevel::Class, IpcLevel::Subclass, IpcLevel::Group}) {
      const auto out = codes_at_level(r, level);
      CHECK(out.size() <= r.ipc_codes.size());
      for (const auto& code : out) {
        CHECK(code.level() == level);
        CHECK(std::any_of(r.ipc_codes.begin(), r.ipc_codes.end(), [&](const IpcCode& in) {
          return in.level() >= level && truncate_to_level(in, level) == code;
        }));
      }
    }
  }
}
