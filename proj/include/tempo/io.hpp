#pragma once

#include <string>

#include "tempo/order.hpp"
#include "tempo/powfun.hpp"
#include "tempo/relstruct.hpp"

namespace tempo {

// JSON formats (all integers; malformed input raises input_error):
//   structure:  {"signature":[{"name","arity"}], "size", "relations":{name:[[..]]}}
//   temporal:   {"relations":[{"name","arity","formula"|"patterns":[[ranks]]}]}
//   instance:   {"variables":[names], "constraints":[{"rel","args"}]}
//                args entries may be indices or names from "variables"
//   pattern map: {"m", "size", "entries":[[ranks],..]} lexicographic by tuple
// Serialization is canonical: emitted text re-parses to an equal value and
// re-emits byte-identically.

Structure parse_structure_json(const std::string& text);
std::string structure_to_json(const Structure& a);

TemporalStructure parse_temporal_json(const std::string& text);
std::string temporal_to_json(const TemporalStructure& b);

Instance parse_instance_json(const std::string& text);
std::string instance_to_json(const Instance& x);

PatternTable parse_pattern_table_json(const std::string& text);
std::string pattern_table_to_json(const PatternTable& h);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace tempo
