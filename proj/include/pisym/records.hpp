#pragma once

// Line-delimited JSON records for traces, rounds and verdicts.

#include <string>
#include <vector>

#include <json.hpp>

#include "pisym/execution.hpp"

namespace pisym {

using Json = nlohmann::json;

Json label_json(const Label& l);
Label label_from_json(const Json& j);

Json state_json(const NetState& s);
NetState state_from_json(const Json& j);

/// {index, label, participants, sender?, target, state}
Json step_record(std::size_t index, const NetTraceStep& s);
Json step_record(std::size_t index, const Step& s);

/// {round, sigma, x_tilde, labels, end}
Json round_record(std::size_t index, const Round& r);

/// Header, one step record per step, one round record per round, footer.
std::vector<Json> execution_records(const SymExecution& e);
/// Inverse of execution_records.
SymExecution execution_from_records(const std::vector<Json>& records);

/// {predicate, verdict, witness, depth, citations}
Json verdict_record(const std::string& predicate, const Verdict& v,
                    std::size_t depth, const std::vector<std::string>& citations);

std::vector<Json> trace_records(const NetTrace& t);

}  // namespace pisym
