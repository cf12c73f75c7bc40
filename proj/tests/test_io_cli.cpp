#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "tempo/io.hpp"
#include "tempo/order.hpp"
#include "tempo/powfun.hpp"

using namespace tempo;

namespace {

Structure k2() {
  Structure a;
  a.size = 2;
  a.signature = {{"e", 2}};
  a.relations["e"] = {{0, 1}, {1, 0}};
  a.normalize();
  return a;
}

TemporalStructure t_i_neq() {
  return make_temporal({{"I", compile_relation("x0!=x1 | x2<=x0", 3)},
                        {"neq", compile_relation("x0!=x1", 2)}});
}

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(TEMPO_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  RunResult r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string fixture(const char* dir, const std::string& name) {
  return std::string(dir) + "/" + name;
}

}  // namespace

TEST_CASE("structure serialization is canonical") {
  std::string text = structure_to_json(k2());
  Structure back = parse_structure_json(text);
  CHECK(back.size == 2);
  CHECK(back.rel("e") == k2().rel("e"));
  CHECK(structure_to_json(back) == text);
}

TEST_CASE("temporal serialization is canonical") {
  std::string text = temporal_to_json(t_i_neq());
  TemporalStructure back = parse_temporal_json(text);
  CHECK(back.rel("I").patterns == t_i_neq().rel("I").patterns);
  CHECK(back.rel("neq").patterns == t_i_neq().rel("neq").patterns);
  CHECK(temporal_to_json(back) == text);
}

TEST_CASE("instance serialization is canonical and accepts names") {
  Instance x = parse_instance_json(R"({
    "variables": ["a", "b", "c"],
    "constraints": [
      {"rel": "neq", "args": ["a", "b"]},
      {"rel": "I", "args": ["b", 2, "a"]}
    ]
  })");
  CHECK(x.num_vars == 3);
  CHECK(x.var_names == std::vector<std::string>{"a", "b", "c"});
  CHECK(x.constraints[0].args == Tuple{0, 1});
  CHECK(x.constraints[1].args == Tuple{1, 2, 0});
  std::string text = instance_to_json(x);
  CHECK(instance_to_json(parse_instance_json(text)) == text);

  // Without a variables list, indices determine the count.
  Instance y = parse_instance_json(
      R"({"constraints": [{"rel": "neq", "args": [0, 4]}]})");
  CHECK(y.num_vars == 5);
}

TEST_CASE("pattern table serialization is canonical") {
  PatternTable h = pi_map({0, 1, 1}, 3);
  std::string text = pattern_table_to_json(h);
  PatternTable back = parse_pattern_table_json(text);
  CHECK(back.m == 3);
  CHECK(back.domain == 3);
  CHECK(back.entries == h.entries);
  CHECK(pattern_table_to_json(back) == text);
}

TEST_CASE("malformed input is reported as an input error") {
  CHECK_THROWS_AS(parse_structure_json("{"), input_error);
  CHECK_THROWS_AS(parse_structure_json(R"({"size": 2})"), input_error);
  CHECK_THROWS_AS(parse_structure_json(
                      R"({"size": 1, "signature": [{"name": "r", "arity": 1}],
                          "relations": {"r": [[7]]}})"),
                  input_error);
  CHECK_THROWS_AS(parse_temporal_json(R"({"relations": 3})"), input_error);
  CHECK_THROWS_AS(
      parse_temporal_json(
          R"({"relations": [{"name": "r", "arity": 2, "formula": "x0 ?? x1"}]})"),
      input_error);
  CHECK_THROWS_AS(parse_instance_json(
                      R"({"constraints": [{"rel": "r", "args": ["ghost"]}]})"),
                  input_error);
  CHECK_THROWS_AS(parse_instance_json(
                      R"({"variables": ["a", "a"], "constraints": []})"),
                  input_error);
  CHECK_THROWS_AS(parse_pattern_table_json(
                      R"({"m": 2, "size": 2, "entries": [[0, 1]]})"),
                  input_error);
}

TEST_CASE("shipped template files classify to their advertised paths") {
  TemporalStructure i_neq = parse_temporal_json(
      read_file(fixture(TEMPO_TEMPLATE_DIR, "I_neq.json")));
  CHECK(classify(i_neq).path == SolvePath::SacPp);
  TemporalStructure x =
      parse_temporal_json(read_file(fixture(TEMPO_TEMPLATE_DIR, "X.json")));
  CHECK(classify(x).path == SolvePath::SaipMinority);
  TemporalStructure betw =
      parse_temporal_json(read_file(fixture(TEMPO_TEMPLATE_DIR, "betw.json")));
  CHECK(classify(betw).path == SolvePath::CompleteOnly);
  Structure s = parse_structure_json(
      read_file(fixture(TEMPO_STRUCTURE_DIR, "k2.json")));
  CHECK(s.size == 2);
  CHECK(s.rel("e").size() == 2);
}

TEST_CASE("the command line classifies templates") {
  RunResult r = run_cli("classify " + fixture(TEMPO_TEMPLATE_DIR, "X.json"));
  CHECK(r.code == 0);
  CHECK(r.out.find("path: SAIP_MINORITY") != std::string::npos);
  RunResult b = run_cli("classify " + fixture(TEMPO_TEMPLATE_DIR, "betw.json"));
  CHECK(b.code == 0);
  CHECK(b.out.find("path: COMPLETE_ONLY") != std::string::npos);
}

TEST_CASE("the command line solves instances with both verdict codes") {
  std::string sat_path = tmp_path("tempo_cli_sat.json");
  write_file(sat_path, R"({
    "variables": ["a", "b"],
    "constraints": [{"rel": "neq", "args": ["a", "b"]}]
  })");
  RunResult ok = run_cli("solve " + fixture(TEMPO_TEMPLATE_DIR, "I_neq.json") +
                         " " + sat_path);
  CHECK(ok.code == 0);
  CHECK(ok.out.find("sat") == 0);
  CHECK(ok.out.find("a = ") != std::string::npos);
  CHECK(ok.out.find("b = ") != std::string::npos);

  RunResult rat = run_cli("solve " + fixture(TEMPO_TEMPLATE_DIR, "I_neq.json") +
                          " " + sat_path + " --rationals");
  CHECK(rat.code == 0);

  std::string bad_path = tmp_path("tempo_cli_unsat.json");
  write_file(bad_path, R"({
    "variables": ["a"],
    "constraints": [{"rel": "neq", "args": ["a", "a"]}]
  })");
  RunResult no = run_cli("solve " + fixture(TEMPO_TEMPLATE_DIR, "I_neq.json") +
                         " " + bad_path);
  CHECK(no.code == 1);
  CHECK(no.out.find("unsat") == 0);
}

TEST_CASE("the command line checks conditions with verdict exit codes") {
  RunResult no = run_cli("check-condition cyclic 2 " +
                         fixture(TEMPO_TEMPLATE_DIR, "I_neq.json") + " 2");
  CHECK(no.code == 1);
  CHECK(no.out.find("unsat") == 0);
  RunResult usage = run_cli("check-condition cyclic 2");
  CHECK(usage.code == 2);
}

TEST_CASE("the command line raises powers and decodes tables") {
  RunResult p =
      run_cli("power 3 " + fixture(TEMPO_STRUCTURE_DIR, "k2.json"));
  CHECK(p.code == 0);
  Structure g = parse_structure_json(p.out);
  CHECK(g.size == 8);
  CHECK(g.rel("e@12").size() == 4);

  std::string table_path = tmp_path("tempo_cli_table.json");
  write_file(table_path, pattern_table_to_json(pi_map({0, 1, 1}, 3)));
  RunResult d = run_cli("decode " + table_path);
  CHECK(d.code == 0);
  CHECK(d.out == "domain 3\nvalues 0 1 1\n");
}

TEST_CASE("the command line reports input problems with exit code two") {
  RunResult r = run_cli("classify /nonexistent/template.json");
  CHECK(r.code == 2);
  RunResult m = run_cli("decode /nonexistent/table.json");
  CHECK(m.code == 2);
}
