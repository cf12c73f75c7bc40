#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tempo/accept.hpp"
#include "tempo/io.hpp"
#include "tempo/minorcond.hpp"
#include "tempo/order.hpp"
#include "tempo/powfun.hpp"
#include "tempo/relstruct.hpp"
#include "tempo/tempsolve.hpp"
#include "tempo/util.hpp"

namespace {

using namespace tempo;

void emit_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    write_file(out_path, text);
  }
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

std::string var_label(const Instance& x, int v) {
  if (v < (int)x.var_names.size() && !x.var_names[v].empty())
    return x.var_names[v];
  return "v" + std::to_string(v);
}

int do_classify(const std::string& tpath) {
  TemporalStructure b = parse_temporal_json(read_file(tpath));
  Classification c = classify(b);
  std::cout << "path: " << path_name(c.path) << "\n";
  std::cout << "dualized: " << yes_no(c.dualized) << "\n";
  std::cout << "binary canonical: pp=" << yes_no(c.has_pp)
            << " ll=" << yes_no(c.has_ll) << "\n";
  std::cout << "quotient closure: or=" << yes_no(c.quotient_or)
            << " and=" << yes_no(c.quotient_and)
            << " majority=" << yes_no(c.quotient_majority)
            << " minority=" << yes_no(c.quotient_minority) << "\n";
  return 0;
}

int do_solve(const std::string& tpath, const std::string& ipath, bool rationals,
             int k_override) {
  TemporalStructure b = parse_temporal_json(read_file(tpath));
  Instance xin = parse_instance_json(read_file(ipath));
  std::vector<std::pair<std::string, std::vector<int>>> cons;
  cons.reserve(xin.constraints.size());
  for (const auto& c : xin.constraints) cons.push_back({c.rel, c.args});
  TemporalInstance x = instance_over(b, xin.num_vars, cons);
  Verdict v = solve(x, b, k_override);
  switch (v.tag) {
    case VerdictTag::Sat: {
      std::cout << "sat\n";
      for (int i = 0; i < x.num_vars; ++i) {
        std::cout << var_label(xin, i) << " = ";
        if (rationals)
          std::cout << mpq_class(v.assignment[i]).get_str();
        else
          std::cout << v.assignment[i];
        std::cout << "\n";
      }
      return 0;
    }
    case VerdictTag::Unsat:
      std::cout << "unsat (certified at stage '" << v.stage << "')\n";
      return 1;
    default:
      std::cout << "unknown (" << v.stage << ")\n";
      return 3;
  }
}

int do_check_condition(const std::string& kind,
                       const std::vector<std::string>& rest, bool verbose) {
  const bool parameterized = kind == "cyclic" || kind == "symmetric" ||
                             kind == "block_symmetric" || kind == "wnu";
  require(rest.size() == (parameterized ? 3u : 2u),
          parameterized
              ? "expected: check-condition <kind> <param> <template> <a_size>"
              : "expected: check-condition <kind> <template> <a_size>");
  size_t at = 0;
  const int param = parameterized ? std::stoi(rest[at++]) : 0;
  const std::string tpath = rest[at++];
  const int a_size = std::stoi(rest[at]);
  TemporalStructure b = parse_temporal_json(read_file(tpath));
  TemporalDecision d = decide_temporal(build_condition(kind, param), a_size, b);
  switch (d.verdict.tag) {
    case VerdictTag::Sat: {
      std::cout << "sat\n";
      for (const auto& [name, f] : d.tables) {
        std::cout << name << " : domain " << f.domain << ", arity " << f.arity
                  << "\n";
        if (verbose) {
          std::vector<int> args(f.arity, 0);
          for (size_t e = 0; e < f.values.size(); ++e) {
            std::cout << "  " << name << "(";
            for (int i = 0; i < f.arity; ++i)
              std::cout << (i ? "," : "") << args[i];
            std::cout << ") = " << f.values[e] << "\n";
            for (int i = f.arity - 1; i >= 0; --i) {
              if (++args[i] < f.domain) break;
              args[i] = 0;
            }
          }
        } else {
          std::cout << " ";
          for (long v : f.values) std::cout << " " << v;
          std::cout << "\n";
        }
      }
      return 0;
    }
    case VerdictTag::Unsat:
      std::cout << "unsat (certified at stage '" << d.verdict.stage << "')\n";
      return 1;
    default:
      std::cout << "unknown (" << d.verdict.stage << ")\n";
      return 3;
  }
}

int do_report(const std::string& tpath, int a_size, const std::vector<int>& cyc,
              const std::vector<int>& blk, const std::vector<int>& sym) {
  TemporalStructure b = parse_temporal_json(read_file(tpath));
  TemplateReport rep = report_template(a_size, b, cyc, blk, sym);
  for (const std::string& line : rep.lines) std::cout << line << "\n";
  return 0;
}

int do_power(int m, const std::string& spath, const std::string& out) {
  Structure a = parse_structure_json(read_file(spath));
  Structure g = mpow(a, m);
  emit_text(out, structure_to_json(g));
  return 0;
}

int do_unpower(int m, const std::string& spath, const std::string& out,
               bool verbose) {
  Structure g = parse_structure_json(read_file(spath));
  MlowResult l = mlow(g, m);
  emit_text(out, structure_to_json(l.structure));
  if (verbose) {
    for (int e = 0; e < g.size; ++e)
      for (int p = 0; p < m; ++p)
        std::cerr << "element " << e << " coordinate " << p << " -> class "
                  << l.class_of[(long)e * m + p] << "\n";
  }
  return 0;
}

int do_decode(const std::string& hpath, const std::string& out) {
  PatternTable h = parse_pattern_table_json(read_file(hpath));
  FuncTable f = decode_hom(h);
  std::ostringstream os;
  os << "domain " << f.domain << "\n";
  os << "values";
  for (long v : f.values) os << " " << v;
  os << "\n";
  emit_text(out, os.str());
  return 0;
}

int do_reproduce(bool slow, uint64_t seed) {
  if (slow)
    setenv("TEMPO_PCSP_CAPS", "max_vars=256,enum_per_relation=6000000", 1);
  bool all = true;
  run_acceptance(slow, seed, [&](const CriterionResult& r) {
    std::printf("%s %2d %-52s %8.1fs  %s\n", r.pass ? "PASS" : "FAIL", r.index,
                r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
    all = all && r.pass;
  });
  std::printf("%s\n", all ? "acceptance: all criteria passed"
                          : "acceptance: FAILURES PRESENT");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solver laboratory for temporal constraint problems"};
  app.require_subcommand(1);

  std::string caps;
  uint64_t seed = 0;
  bool verbose = false;
  app.add_option("--caps", caps,
                 "size-cap overrides, e.g. max_vars=128,enum_per_relation=2000000");
  app.add_option("--seed", seed, "seed for randomized commands (default 0)");
  app.add_flag("--verbose", verbose, "more detailed output");

  auto* c_classify =
      app.add_subcommand("classify", "print the solver path for a template");
  std::string cl_tpath;
  c_classify->add_option("template", cl_tpath, "temporal template JSON file")
      ->required();

  auto* c_solve =
      app.add_subcommand("solve", "decide an instance over a template");
  std::string s_tpath, s_ipath;
  bool s_rationals = false;
  int s_k = 0;
  c_solve->add_option("template", s_tpath, "temporal template JSON file")
      ->required();
  c_solve->add_option("instance", s_ipath, "instance JSON file")->required();
  c_solve->add_flag("--rationals", s_rationals,
                    "print the assignment as exact rationals");
  c_solve->add_option("--k", s_k, "override the consistency level");

  auto* c_check = app.add_subcommand(
      "check-condition", "decide operation identities over a template");
  std::string k_kind;
  std::vector<std::string> k_rest;
  c_check
      ->add_option("kind", k_kind,
                   "cyclic|symmetric|block_symmetric|wnu|olsak|siggers6|siggers4")
      ->required();
  c_check->add_option("args", k_rest, "[param] template-file a-size")
      ->expected(-1);

  auto* c_report = app.add_subcommand(
      "report", "probe battery with NO/INCONCLUSIVE conclusions");
  std::string r_tpath;
  int r_asize = 2;
  std::vector<int> r_cyc = {2, 3, 5};
  std::vector<int> r_blk = {2};
  std::vector<int> r_sym = {};
  c_report->add_option("template", r_tpath, "temporal template JSON file")
      ->required();
  c_report->add_option("a_size", r_asize, "domain size of the probed template")
      ->required();
  c_report->add_option("--cyclic", r_cyc, "cyclic arities to probe");
  c_report->add_option("--block", r_blk, "block parameters to probe");
  c_report->add_option("--symmetric", r_sym, "symmetric arities to probe");

  auto* c_power =
      app.add_subcommand("power", "m-th power of a finite structure");
  int p_m = 3;
  std::string p_path, p_out;
  c_power->add_option("m", p_m, "exponent")->required();
  c_power->add_option("structure", p_path, "structure JSON file")->required();
  c_power->add_option("-o,--out", p_out, "output file (default stdout)");

  auto* c_unpower = app.add_subcommand(
      "unpower", "glue a power-signature structure back to the base signature");
  int u_m = 3;
  std::string u_path, u_out;
  c_unpower->add_option("m", u_m, "exponent")->required();
  c_unpower->add_option("structure", u_path, "structure JSON file")->required();
  c_unpower->add_option("-o,--out", u_out, "output file (default stdout)");

  auto* c_decode = app.add_subcommand(
      "decode", "reconstruct a function from its pattern table");
  std::string d_path, d_out;
  c_decode->add_option("table", d_path, "pattern table JSON file")->required();
  c_decode->add_option("-o,--out", d_out, "output file (default stdout)");

  auto* c_repro =
      app.add_subcommand("reproduce", "run the acceptance battery");
  bool repro_slow = false;
  c_repro->add_flag("--slow", repro_slow, "include the multi-hour probe");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (!caps.empty()) setenv("TEMPO_PCSP_CAPS", caps.c_str(), 1);

  try {
    if (*c_classify) return do_classify(cl_tpath);
    if (*c_solve) return do_solve(s_tpath, s_ipath, s_rationals, s_k);
    if (*c_check) return do_check_condition(k_kind, k_rest, verbose);
    if (*c_report) return do_report(r_tpath, r_asize, r_cyc, r_blk, r_sym);
    if (*c_power) return do_power(p_m, p_path, p_out);
    if (*c_unpower) return do_unpower(u_m, u_path, u_out, verbose);
    if (*c_decode) return do_decode(d_path, d_out);
    if (*c_repro) return do_reproduce(repro_slow, seed);
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
