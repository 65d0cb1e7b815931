// Copyright 2026 The InquiryLab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Drives the inquirylab binary as a subprocess.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out;  // stdout and stderr interleaved
};

RunResult Invoke(const std::string& args) {
  const std::string cmd = std::string(INQUIRYLAB_CLI) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  RunResult r;
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int CountLines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

fs::path Scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("inquirylab_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::string kEvents = std::string(INQUIRYLAB_DATA_DIR) + "/fixture/events.ndjson";

TEST(CliTest, ReportOnBundledCorpus) {
  const RunResult r = Invoke("report " + kEvents);
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("total inquiries                 1336"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("active users                     409"), std::string::npos);
  EXPECT_NE(r.out.find("published                        988"), std::string::npos);
  EXPECT_NE(r.out.find("drafts                           348"), std::string::npos);

  const RunResult j = Invoke("report --format json " + kEvents);
  ASSERT_EQ(j.exit_code, 0);
  EXPECT_NE(j.out.find("\"total_inquiries\": 1336"), std::string::npos) << j.out.substr(0, 400);
}

TEST(CliTest, EmptyLogGivesZeroReport) {
  const fs::path dir = Scratch("empty");
  std::ofstream(dir / "empty.ndjson").close();
  const RunResult r = Invoke("report " + (dir / "empty.ndjson").string());
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("total inquiries                    0"), std::string::npos) << r.out;
}

TEST(CliTest, MalformedLineIsNamed) {
  const fs::path dir = Scratch("malformed");
  std::ofstream out(dir / "log.ndjson");
  std::ifstream in(kEvents);
  std::string line;
  for (int i = 0; i < 4 && std::getline(in, line); ++i) out << line << '\n';
  out << "{\"type\": \n";
  out.close();
  const RunResult r = Invoke("report " + (dir / "log.ndjson").string());
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_NE(r.out.find("line 5"), std::string::npos) << r.out;
}

TEST(CliTest, MissingLogFileIsAnEnvironmentError) {
  EXPECT_EQ(Invoke("report /nonexistent/events.ndjson").exit_code, 2);
}

TEST(CliTest, UnopenableDatabaseExitsTwo) {
  const RunResult r = Invoke("serve --kit-size 0 --listen 127.0.0.1:0 --db /nonexistent/dir/x.db");
  EXPECT_EQ(r.exit_code, 2) << r.out;
  EXPECT_NE(r.out.find("cannot open database"), std::string::npos) << r.out;
}

TEST(CliTest, SimulateListsOneLinePerDevice) {
  const RunResult one = Invoke("simulate --kit-size 1 --duration 0.01");
  ASSERT_EQ(one.exit_code, 0) << one.out;
  EXPECT_EQ(CountLines(one.out), 6);
  const RunResult full = Invoke("simulate --duration 0.01");
  ASSERT_EQ(full.exit_code, 0);
  EXPECT_EQ(CountLines(full.out), 120);
}

TEST(CliTest, SameSeedSameFirstMeasurements) {
  auto firsts = [](const std::string& out) {
    std::string acc;
    std::istringstream in(out);
    std::string line;
    while (std::getline(in, line)) acc += line.substr(line.find(" first=")) + "\n";
    return acc;
  };
  const RunResult a = Invoke("simulate --kit-size 1 --seed 9 --probe --duration 0.01");
  const RunResult b = Invoke("simulate --kit-size 1 --seed 9 --probe --duration 0.01");
  ASSERT_EQ(a.exit_code, 0) << a.out;
  ASSERT_EQ(b.exit_code, 0) << b.out;
  EXPECT_EQ(firsts(a.out), firsts(b.out));
  EXPECT_EQ(a.out.find("timeout"), std::string::npos) << a.out;
}

TEST(CliTest, ImportThenExportRoundTrips) {
  const fs::path dir = Scratch("roundtrip");
  const std::string db = (dir / "x.db").string();
  ASSERT_EQ(Invoke("import " + kEvents + " --db " + db).exit_code, 0);
  ASSERT_EQ(Invoke("export --db " + db + " --out " + (dir / "out.ndjson").string()).exit_code, 0);
  EXPECT_EQ(Slurp(dir / "out.ndjson"), Slurp(kEvents));
  // A second import into a populated database is refused.
  EXPECT_NE(Invoke("import " + kEvents + " --db " + db).exit_code, 0);
}

TEST(CliTest, FixtureGenerateIsByteIdentical) {
  const fs::path dir = Scratch("fixture");
  const RunResult r = Invoke("fixture generate --out " + dir.string());
  ASSERT_EQ(r.exit_code, 0) << r.out;
  for (const char* f : {"events.ndjson", "labels.csv", "manifest.json"}) {
    EXPECT_EQ(Slurp(dir / f), Slurp(fs::path(INQUIRYLAB_DATA_DIR) / "fixture" / f)) << f;
  }
}

}  // namespace
