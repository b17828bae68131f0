#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(SGQ_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("sgq_cli_test_" + std::to_string(getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    fs::path p = path / name;
    std::ofstream(p) << content;
    return p.string();
  }
};

// the five-edge fixture: triangles (0,1,2) and (1,2,3), one diamond-X
const char* kVerts = "0,P\n1,P\n2,P\n3,P\n";
const char* kEdges = "0,1,E\n0,2,E\n1,2,E\n1,3,E\n2,3,E\n";
const char* kTriangle = "'(a:P)-[:E]->(b:P),(a:P)-[:E]->(c:P),(b:P)-[:E]->(c:P)'";
const char* kDiamond =
    "'(a:P)-[:E]->(b:P),(a:P)-[:E]->(c:P),(b:P)-[:E]->(c:P),(b:P)-[:E]->(d:P),(c:P)-[:E]->(d:P)'";

size_t count_lines(const std::string& s) {
  size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("run counts the diamond-X on the fixture") {
  TempDir d;
  std::string v = d.file("v.csv", kVerts), e = d.file("e.csv", kEdges);
  RunResult r = run_cli("run --vertices " + v + " --edges " + e + " --query " + kDiamond);
  CHECK(r.exit_code == 0);
  CHECK(r.out == "1\n");
}

TEST_CASE("run --stats reports the profiling block") {
  TempDir d;
  std::string v = d.file("v.csv", kVerts), e = d.file("e.csv", kEdges);
  RunResult r =
      run_cli("run --vertices " + v + " --edges " + e + " --query " + kTriangle + " --stats");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("output_count=2") != std::string::npos);
  CHECK(r.out.find("icost_actual=") != std::string::npos);
  CHECK(r.out.find("cache_hits=") != std::string::npos);
}

TEST_CASE("stream mode prints one match per line") {
  TempDir d;
  std::string v = d.file("v.csv", kVerts), e = d.file("e.csv", kEdges);
  RunResult r = run_cli("run --vertices " + v + " --edges " + e + " --query " + kTriangle +
                        " --mode stream");
  CHECK(r.exit_code == 0);
  CHECK(count_lines(r.out) == 2);
}

TEST_CASE("explain prints a plan without executing") {
  TempDir d;
  std::string v = d.file("v.csv", kVerts), e = d.file("e.csv", kEdges);
  RunResult r = run_cli("explain --vertices " + v + " --edges " + e + " --query " + kTriangle);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("scan") != std::string::npos);
  CHECK(r.out.find("cost=") != std::string::npos);
  RunResult r2 = run_cli("run --vertices " + v + " --edges " + e + " --query " + kTriangle +
                         " --explain");
  CHECK(r2.exit_code == 0);
  CHECK(r2.out == r.out);
}

TEST_CASE("catalogue builds are deterministic and grow with h") {
  TempDir d;
  std::string v = d.file("v.csv", kVerts), e = d.file("e.csv", kEdges);
  std::string base = "catalogue --vertices " + v + " --edges " + e;
  RunResult a = run_cli(base + " --h 2 --seed 5");
  RunResult b = run_cli(base + " --h 2 --seed 5");
  RunResult c = run_cli(base + " --h 3 --seed 5");
  CHECK(a.exit_code == 0);
  auto entries = [](const std::string& s) {
    return std::stoul(s.substr(s.find("entries=") + 8));
  };
  CHECK(entries(a.out) == entries(b.out));
  CHECK(entries(c.out) > entries(a.out));
}

TEST_CASE("a saved catalogue round-trips through run") {
  TempDir d;
  std::string v = d.file("v.csv", kVerts), e = d.file("e.csv", kEdges);
  std::string cat = (d.path / "cat.bin").string();
  RunResult b =
      run_cli("catalogue --vertices " + v + " --edges " + e + " --h 3 --out " + cat);
  REQUIRE(b.exit_code == 0);
  RunResult r = run_cli("run --vertices " + v + " --edges " + e + " --catalogue " + cat +
                        " --query " + kTriangle);
  CHECK(r.exit_code == 0);
  CHECK(r.out == "2\n");
}

TEST_CASE("spectrum lists every plan with identical counts and flags the choice") {
  TempDir d;
  std::string v = d.file("v.csv", kVerts), e = d.file("e.csv", kEdges);
  RunResult r = run_cli("spectrum --vertices " + v + " --edges " + e + " --query " + kTriangle);
  REQUIRE(r.exit_code == 0);
  // header plus the three triangle plans
  std::vector<std::string> lines;
  size_t pos = 0;
  while (pos < r.out.size()) {
    size_t nl = r.out.find('\n', pos);
    lines.push_back(r.out.substr(pos, nl - pos));
    pos = nl + 1;
  }
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "id,plan,est_cost,seconds,icost,outputs,chosen");
  size_t chosen = 0;
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    size_t last = l.rfind(','), prev = l.rfind(',', last - 1);
    CHECK(l.substr(prev + 1, last - prev - 1) == "2");  // outputs column
    if (l.substr(last + 1) == "1") ++chosen;
  }
  CHECK(chosen == 1);
}

TEST_CASE("spectrum refuses oversized queries unless forced") {
  TempDir d;
  std::string v, e;
  // a 9-vertex path needs --force past the default guard
  std::string verts, edges, q = "'";
  for (int i = 0; i < 9; ++i) {
    verts += std::to_string(i) + ",P\n";
    if (i) {
      edges += std::to_string(i - 1) + "," + std::to_string(i) + ",E\n";
      if (i > 1) q += ",";
      q += "(v" + std::to_string(i - 1) + ":P)-[:E]->(v" + std::to_string(i) + ":P)";
    }
  }
  q += "'";
  v = d.file("v.csv", verts);
  e = d.file("e.csv", edges);
  RunResult r = run_cli("spectrum --vertices " + v + " --edges " + e + " --query " + q);
  CHECK(r.exit_code == 4);
  CHECK(r.out.find("refused") != std::string::npos);
}

TEST_CASE("qerror is exact when the catalogue is exhaustive") {
  TempDir d;
  std::string v = d.file("v.csv", kVerts), e = d.file("e.csv", kEdges);
  std::string qs = d.file("qs.txt",
                          "(a:P)-[:E]->(b:P)\n"
                          "(a:P)-[:E]->(b:P),(b:P)-[:E]->(c:P)\n"
                          "# a comment line\n"
                          "(a:P)-[:E]->(b:P),(a:P)-[:E]->(c:P),(b:P)-[:E]->(c:P)\n");
  RunResult r = run_cli("qerror --vertices " + v + " --edges " + e +
                        " --h 3 --z 100000 --queries " + qs);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("query,true,estimate,qerror") != std::string::npos);
  CHECK(r.out.find("bucket,<=2,<=3,<=5,<=10,>20") != std::string::npos);
  // every query fits inside h+1 vertices, so all three land in every <= bucket
  CHECK(r.out.find("count,3,3,3,3,0") != std::string::npos);
}

TEST_CASE("exit codes distinguish usage, i/o, and validation failures") {
  TempDir d;
  std::string v = d.file("v.csv", kVerts), e = d.file("e.csv", kEdges);
  CHECK(run_cli("bogus").exit_code == 1);
  CHECK(run_cli("run --vertices " + v).exit_code == 1);  // missing required flags
  CHECK(run_cli("run --vertices /no/such/file --edges " + e + " --query " + kTriangle)
            .exit_code == 2);
  // self-loop pattern is rejected as invalid
  CHECK(run_cli("run --vertices " + v + " --edges " + e +
                " --query '(a:P)-[:E]->(a:P)'")
            .exit_code == 3);
}

TEST_CASE("parallel run agrees with serial") {
  TempDir d;
  std::string v = d.file("v.csv", kVerts), e = d.file("e.csv", kEdges);
  std::string base = "run --vertices " + v + " --edges " + e + " --query " + kDiamond;
  RunResult serial = run_cli(base);
  RunResult par = run_cli(base + " --workers 4");
  CHECK(par.exit_code == 0);
  CHECK(par.out == serial.out);
}
