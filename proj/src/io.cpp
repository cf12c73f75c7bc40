#include "tempo/io.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tempo/util.hpp"

namespace tempo {

namespace {

using nlohmann::json;

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  require(!j.is_discarded(), "malformed JSON");
  return j;
}

const json& field(const json& j, const char* key) {
  require(j.is_object() && j.contains(key),
          std::string("missing field: ") + key);
  return j.at(key);
}

int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  require(v.is_number_integer(), std::string("field must be an integer: ") + key);
  return v.get<int>();
}

std::string str_field(const json& j, const char* key) {
  const json& v = field(j, key);
  require(v.is_string(), std::string("field must be a string: ") + key);
  return v.get<std::string>();
}

Tuple int_array(const json& v, const char* what) {
  require(v.is_array(), std::string(what) + " must be an array");
  Tuple t;
  for (const auto& e : v) {
    require(e.is_number_integer(), std::string(what) + " entries must be integers");
    t.push_back(e.get<int>());
  }
  return t;
}

}  // namespace

Structure parse_structure_json(const std::string& text) {
  json j = parse_text(text);
  Structure a;
  a.size = int_field(j, "size");
  const json& sig = field(j, "signature");
  require(sig.is_array(), "signature must be an array");
  for (const auto& s : sig) {
    std::string name = str_field(s, "name");
    int arity = int_field(s, "arity");
    a.signature.push_back({name, arity});
    a.relations.emplace(name, std::vector<Tuple>{});
  }
  const json& rels = field(j, "relations");
  require(rels.is_object(), "relations must be an object");
  for (const auto& [name, table] : rels.items()) {
    require(a.relations.count(name), "relation not in signature: " + name);
    require(table.is_array(), "relation table must be an array");
    for (const auto& row : table)
      a.relations[name].push_back(int_array(row, "tuple"));
  }
  a.normalize();
  validate(a);
  return a;
}

std::string structure_to_json(const Structure& a) {
  json j;
  j["size"] = a.size;
  j["signature"] = json::array();
  for (const auto& s : a.signature)
    j["signature"].push_back({{"name", s.name}, {"arity", s.arity}});
  j["relations"] = json::object();
  for (const auto& [name, table] : a.relations) {
    json rows = json::array();
    for (const auto& t : table) rows.push_back(t);
    j["relations"][name] = rows;
  }
  return j.dump(2) + "\n";
}

TemporalStructure parse_temporal_json(const std::string& text) {
  json j = parse_text(text);
  const json& rels = field(j, "relations");
  require(rels.is_array(), "relations must be an array");
  std::vector<std::pair<std::string, TemporalRelation>> list;
  for (const auto& r : rels) {
    std::string name = str_field(r, "name");
    int arity = int_field(r, "arity");
    if (r.contains("formula")) {
      list.emplace_back(name, compile_relation(str_field(r, "formula"), arity));
    } else {
      const json& pats = field(r, "patterns");
      require(pats.is_array(), "patterns must be an array");
      std::vector<OrderPattern> ps;
      for (const auto& p : pats) ps.push_back(int_array(p, "pattern"));
      list.emplace_back(name, relation_from_patterns(arity, std::move(ps)));
    }
  }
  return make_temporal(list);
}

std::string temporal_to_json(const TemporalStructure& b) {
  json rels = json::array();
  for (const auto& [name, r] : b.relations) {
    json pats = json::array();
    for (const auto& p : r.patterns) pats.push_back(p);
    rels.push_back({{"name", name}, {"arity", r.arity}, {"patterns", pats}});
  }
  json j;
  j["relations"] = rels;
  return j.dump(2) + "\n";
}

Instance parse_instance_json(const std::string& text) {
  json j = parse_text(text);
  Instance x;
  std::map<std::string, int> index_of;
  if (j.contains("variables")) {
    const json& vars = j.at("variables");
    require(vars.is_array(), "variables must be an array");
    for (const auto& v : vars) {
      require(v.is_string(), "variable names must be strings");
      std::string name = v.get<std::string>();
      require(index_of.emplace(name, int(x.var_names.size())).second,
              "duplicate variable name: " + name);
      x.var_names.push_back(name);
    }
    x.num_vars = int(x.var_names.size());
  }
  const json& cons = field(j, "constraints");
  require(cons.is_array(), "constraints must be an array");
  int max_arg = -1;
  for (const auto& c : cons) {
    Constraint con;
    con.rel = str_field(c, "rel");
    const json& args = field(c, "args");
    require(args.is_array(), "args must be an array");
    for (const auto& a : args) {
      int v;
      if (a.is_string()) {
        auto it = index_of.find(a.get<std::string>());
        require(it != index_of.end(),
                "unknown variable name: " + a.get<std::string>());
        v = it->second;
      } else {
        require(a.is_number_integer(), "args entries must be ints or names");
        v = a.get<int>();
        require(v >= 0, "variable index must be nonnegative");
      }
      con.args.push_back(v);
      max_arg = std::max(max_arg, v);
    }
    x.constraints.push_back(std::move(con));
  }
  if (x.var_names.empty())
    x.num_vars = max_arg + 1;
  else
    require(max_arg < x.num_vars, "variable index out of range");
  return x;
}

std::string instance_to_json(const Instance& x) {
  json j;
  json vars = json::array();
  for (int v = 0; v < x.num_vars; v++) {
    if (v < int(x.var_names.size()) && !x.var_names[v].empty())
      vars.push_back(x.var_names[v]);
    else
      vars.push_back("v" + std::to_string(v));
  }
  j["variables"] = vars;
  json cons = json::array();
  for (const auto& c : x.constraints)
    cons.push_back({{"rel", c.rel}, {"args", c.args}});
  j["constraints"] = cons;
  return j.dump(2) + "\n";
}

PatternTable parse_pattern_table_json(const std::string& text) {
  json j = parse_text(text);
  PatternTable h;
  h.m = int_field(j, "m");
  h.domain = int_field(j, "size");
  require(h.m >= 1 && h.m <= 9, "pattern arity out of range");
  require(h.domain >= 1, "domain must be nonempty");
  long expect = 1;
  for (int i = 0; i < h.m; i++) {
    require(expect <= 4000000 / h.domain, "pattern table too large");
    expect *= h.domain;
  }
  const json& entries = field(j, "entries");
  require(entries.is_array(), "entries must be an array");
  require(long(entries.size()) == expect,
          "entries must cover every tuple exactly once");
  for (const auto& e : entries) {
    OrderPattern p = int_array(e, "pattern");
    require(int(p.size()) == h.m && is_dense_pattern(p),
            "entries must be dense rank patterns");
    h.entries.push_back(std::move(p));
  }
  return h;
}

std::string pattern_table_to_json(const PatternTable& h) {
  json j;
  j["m"] = h.m;
  j["size"] = h.domain;
  json entries = json::array();
  for (const auto& p : h.entries) entries.push_back(p);
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot write file: " + path);
  out << text;
  require(out.good(), "cannot write file: " + path);
}

}  // namespace tempo
