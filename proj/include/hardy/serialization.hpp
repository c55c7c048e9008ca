#pragma once

#include <string>

#include <json.hpp>

#include "hardy/conditions.hpp"
#include "hardy/oracle.hpp"

namespace hardy::io {

using json = nlohmann::ordered_json;

// Extended reals travel as numbers, with "inf" for +inf and "nan" for NaN.
json number(double x);
double read_number(const json& j, const std::string& field);

// {"kind":"piecewise_power","pieces":[{"from":0,"to":null,"c":1,"alpha":0}]}
// {"kind":"tabulated","t":[...],"y":[...],"interp":"loglinear"}
WeightFunction weight_from_json(const json& j, const std::string& field = "weight");
json weight_to_json(const WeightFunction& w);

// {"inequality":"3.1","p":0.5,"q":1,"u":{...},"v":{...},"w":{...}}
// q may be "inf" or omitted for the sup kinds.  Unknown keys are rejected
// unless listed in extra_keys.
InequalitySpec spec_from_json(const json& j, const std::vector<std::string>& extra_keys = {});
json spec_to_json(const InequalitySpec& s);

json report_to_json(const ConditionReport& r);
json chain_to_json(const ChainReport& c);
json sequence_to_json(const DiscretizingSequence& s);
json sequence_report_to_json(const SequenceReport& r);
json test_function_to_json(const TestFunction& h);
TestFunction test_function_from_json(const json& j);
json estimate_to_json(const OracleEstimate& e);

json parse(const std::string& text, const std::string& what = "input");

}  // namespace hardy::io
