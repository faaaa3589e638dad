#include "pisym/records.hpp"

#include <stdexcept>

#include "pisym/parser.hpp"
#include "pisym/syntax.hpp"

namespace pisym {

namespace {

LabelKind kind_from(const std::string& s) {
  for (auto k : {LabelKind::Tau, LabelKind::FreeOutput, LabelKind::BoundOutput,
                 LabelKind::FreeInput})
    if (s == kind_name(k)) return k;
  throw std::invalid_argument("unknown label kind " + s);
}

Json perm_json(const Permutation& p) {
  return {{"cycles", p.to_string()}, {"degree", p.degree()}, {"map", p.mapping()}};
}

Permutation perm_from(const Json& j) {
  return Permutation(j.at("map").get<std::map<Name, Name>>(),
                     j.at("degree").get<std::size_t>());
}

Json texts(const std::vector<Process>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(format(p));
  return a;
}

std::vector<Process> parse_all(const Json& j) {
  std::vector<Process> out;
  for (const auto& t : j) out.push_back(parse(t.get<std::string>()));
  return out;
}

Json symnet_json(const SymNet& n) {
  return {{"seed", format(n.seed)},
          {"degree", n.degree},
          {"restricted", n.restricted},
          {"sigma", perm_json(n.sigma)},
          {"components", texts(n.components)}};
}

SymNet symnet_from(const Json& j) {
  SymNet n;
  n.seed = parse(j.at("seed").get<std::string>());
  n.degree = j.at("degree");
  n.restricted = j.at("restricted").get<std::vector<Name>>();
  n.sigma = perm_from(j.at("sigma"));
  n.components = parse_all(j.at("components"));
  return n;
}

Json labels_json(const std::vector<Label>& ls) {
  Json a = Json::array();
  for (const auto& l : ls) a.push_back(label_json(l));
  return a;
}

NetTraceStep step_from(const Json& j) {
  NetTraceStep s;
  s.label = label_from_json(j.at("label"));
  s.participants = j.at("participants").get<std::vector<std::size_t>>();
  if (j.contains("sender")) s.sender = j.at("sender").get<std::size_t>();
  s.target = state_from_json(j.at("state"));
  return s;
}

}  // namespace

Json label_json(const Label& l) {
  return {{"kind", kind_name(l.kind)}, {"channel", l.channel}, {"object", l.object}};
}

Label label_from_json(const Json& j) {
  return {kind_from(j.at("kind")), j.at("channel"), j.at("object")};
}

Json state_json(const NetState& s) {
  return {{"restricted", s.restricted}, {"components", texts(s.components)}};
}

NetState state_from_json(const Json& j) {
  return {j.at("restricted").get<std::vector<Name>>(),
          parse_all(j.at("components"))};
}

Json step_record(std::size_t index, const NetTraceStep& s) {
  Json j = {{"record", "step"},
            {"index", index},
            {"label", label_json(s.label)},
            {"participants", s.participants},
            {"target", format(canonicalize(s.target.flatten()))},
            {"state", state_json(s.target)}};
  if (s.sender) j["sender"] = *s.sender;
  return j;
}

Json step_record(std::size_t index, const Step& s) {
  Json j = {{"record", "step"},
            {"index", index},
            {"label", label_json(s.label)},
            {"participants", s.participants},
            {"target", format(s.target)}};
  if (s.sender) j["sender"] = *s.sender;
  return j;
}

Json round_record(std::size_t index, const Round& r) {
  return {{"record", "round"},
          {"round", index},
          {"labels", labels_json(r.labels)},
          {"sigma", perm_json(r.sigma)},
          {"x_tilde", r.restricted},
          {"scope", r.scope},
          {"end", symnet_json(r.end)}};
}

std::vector<Json> execution_records(const SymExecution& e) {
  std::vector<Json> out;
  out.push_back({{"record", "start"}, {"net", symnet_json(e.start)}});
  std::size_t index = 0;
  for (std::size_t k = 0; k < e.rounds.size(); ++k) {
    for (const auto& s : e.rounds[k].steps) {
      Json j = step_record(index++, s);
      j["round"] = k + 1;
      out.push_back(std::move(j));
    }
    out.push_back(round_record(k + 1, e.rounds[k]));
  }
  Json footer = {{"record", "end"},
                 {"status", e.status == SymExecution::Status::Terminated
                                ? "terminated"
                                : "truncated"},
                 {"rounds", e.rounds.size()}};
  footer["lasso"] = e.lasso ? Json(*e.lasso) : Json(nullptr);
  out.push_back(std::move(footer));
  return out;
}

SymExecution execution_from_records(const std::vector<Json>& records) {
  SymExecution e;
  bool started = false;
  std::vector<NetTraceStep> pending;
  for (const auto& j : records) {
    const std::string kind = j.at("record");
    if (kind == "start") {
      e.start = symnet_from(j.at("net"));
      started = true;
    } else if (kind == "step") {
      pending.push_back(step_from(j));
    } else if (kind == "round") {
      Round r;
      for (const auto& l : j.at("labels")) r.labels.push_back(label_from_json(l));
      r.steps = std::move(pending);
      pending.clear();
      r.sigma = perm_from(j.at("sigma"));
      r.restricted = j.at("x_tilde").get<std::vector<Name>>();
      r.scope = j.at("scope").get<std::vector<Name>>();
      r.end = symnet_from(j.at("end"));
      e.rounds.push_back(std::move(r));
    } else if (kind == "end") {
      e.status = j.at("status") == "terminated" ? SymExecution::Status::Terminated
                                                : SymExecution::Status::Truncated;
      if (!j.at("lasso").is_null()) e.lasso = j.at("lasso").get<std::size_t>();
    }
  }
  if (!started) throw std::invalid_argument("no start record");
  if (!pending.empty()) throw std::invalid_argument("steps after the last round");
  return e;
}

std::vector<Json> trace_records(const NetTrace& t) {
  std::vector<Json> out;
  out.push_back({{"record", "start"}, {"state", state_json(t.start)}});
  for (std::size_t i = 0; i < t.steps.size(); ++i)
    out.push_back(step_record(i, t.steps[i]));
  return out;
}

Json verdict_record(const std::string& predicate, const Verdict& v,
                    std::size_t depth, const std::vector<std::string>& citations) {
  Json witness = Json::array();
  for (const auto& t : v.witnesses) {
    Json steps = Json::array();
    for (auto& r : trace_records(t)) steps.push_back(std::move(r));
    witness.push_back(std::move(steps));
  }
  return {{"record", "verdict"},
          {"predicate", predicate},
          {"verdict", outcome_name(v.outcome)},
          {"reason", v.reason},
          {"witness", witness},
          {"depth", depth},
          {"citations", citations}};
}

}  // namespace pisym
