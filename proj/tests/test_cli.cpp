#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "efcake/cli.hpp"

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "efcake");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = efcake::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string profile(const std::string& name) { return std::string(EFCAKE_PROFILE_DIR) + "/" + name; }

std::string temp_path(const std::string& name) { return "efcake_cli_test_" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool has_line(const std::string& text, const std::string& line) {
  return text.find(line + "\n") != std::string::npos;
}

}  // namespace

TEST_CASE("run selfridge-conway") {
  auto r = cli({"run", "--protocol", "selfridge_conway", "--agents", profile("three.profile")});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "RESULT PASS"));
  const auto pos = r.out.find("CUTS ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stoi(r.out.substr(pos + 5)) <= 5);
}

TEST_CASE("run efbt and verify the transcript") {
  const auto path = temp_path("efbt.txt");
  auto r = cli({"run", "--protocol", "efbt", "--agents", profile("four.profile"), "--out", path});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "BUDGET-INIT 5w+11"));
  const auto transcript = slurp(path);
  CHECK(has_line(transcript, "BUDGET-INIT 5w+11"));

  auto v = cli({"verify", "--transcript", path, "--agents", profile("four.profile")});
  CHECK(v.code == 0);
  CHECK(has_line(v.out, "RESULT PASS"));

  // Same configuration, byte-identical transcript.
  const auto again = temp_path("efbt2.txt");
  cli({"run", "--protocol", "efbt", "--agents", profile("four.profile"), "--out", again});
  CHECK(slurp(again) == transcript);

  // Hand one agent's share to another and the checks fail.
  std::istringstream in(transcript);
  std::ostringstream tampered;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("SHARE a2 ", 0) == 0) line = "SHARE a2 empty";
    tampered << line << '\n';
  }
  const auto bad = temp_path("efbt_bad.txt");
  std::ofstream(bad) << tampered.str();
  CHECK(cli({"verify", "--transcript", bad, "--agents", profile("four.profile")}).code == 3);
  std::remove(path.c_str());
  std::remove(again.c_str());
  std::remove(bad.c_str());
}

TEST_CASE("run efrw with a single A-side agent") {
  auto r = cli({"run", "--protocol", "efrw", "--agents", profile("one.profile")});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "CUTS 0"));
}

TEST_CASE("run pikhurto with a B-side agent") {
  auto r = cli({"run", "--protocol", "pikhurto", "--agents", profile("mixed.profile"), "--epsilon", "1/50"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "BUDGET-INIT 3w+0"));
}

TEST_CASE("exit codes") {
  CHECK(cli({"run", "--protocol", "nonsense", "--agents", profile("three.profile")}).code == 2);
  CHECK(cli({"run", "--protocol", "cut_and_choose", "--agents", profile("three.profile")}).code == 2);
  CHECK(cli({"run", "--protocol", "efbt", "--agents", profile("missing.profile")}).code == 2);
  CHECK(cli({"run", "--protocol", "efbt", "--agents", profile("four.profile"), "--budget", "w^2"}).code == 2);
  auto starved = cli({"run", "--protocol", "efbt", "--agents", profile("four.profile"), "--budget", "1w+0"});
  CHECK(starved.code == 4);
  CHECK(cli({"run", "--protocol", "selfridge_conway", "--agents", profile("three.profile"), "--budget", "1"}).code ==
        4);
  CHECK(cli({}).code == 2);
}

TEST_CASE("scripted efbt run") {
  auto r = cli({"run", "--protocol", "efbt", "--mode", "scripted", "--agents", profile("scripted.profile"), "--seed",
                "3"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "CUTS 0"));
  CHECK(r.out.find("STAGE 1 ") != std::string::npos);
}

TEST_CASE("simulate is deterministic") {
  auto a = cli({"simulate", "--n", "5", "--trials", "5000", "--seed", "7"});
  auto b = cli({"simulate", "--n", "5", "--trials", "5000", "--seed", "7"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("STAT mean_stages ") != std::string::npos);
  CHECK(a.out.find("STAT closed_form_plus2 ") != std::string::npos);
  CHECK(cli({"simulate", "--n", "5", "--trials", "0"}).code == 2);
}

TEST_CASE("recurrence") {
  auto r = cli({"recurrence", "--protocol", "efrw", "--n", "10"});
  CHECK(r.code == 0);
  CHECK(has_line(r.out, "T(10;*) = 17w+0 ≤ 17w+0"));
  auto p = cli({"recurrence", "--protocol", "pikhurto", "--n", "4"});
  CHECK(has_line(p.out, "T(4;*) = 5w+0 ≤ 5w+0"));
  auto e = cli({"recurrence", "--protocol", "efbt", "--n", "4"});
  CHECK(has_line(e.out, "EFBT(4) = 5w+11"));
}
