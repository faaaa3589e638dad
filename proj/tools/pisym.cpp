// pisym: command line front end.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pisym/execution.hpp"
#include "pisym/parser.hpp"
#include "pisym/problems.hpp"
#include "pisym/records.hpp"
#include "pisym/syntax.hpp"

using namespace pisym;

namespace {

constexpr int kTrue = 0, kFalse = 1, kUnknown = 2;
constexpr int kUsage = 64, kParse = 65, kNoInput = 66, kInternal = 70;

constexpr std::size_t kDefaultSteps = 512;
constexpr std::size_t kDefaultRounds = 64;

struct MissingFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string file;
  bool json = false;
  std::size_t depth = 0;  // 0: command default
  bool modulo = false;
  bool tau = false;
  bool force = false;
  std::string mode = "indexed";
  std::string out = "out", leader = "leader", slave = "slave";
  std::string seed;
  std::size_t degree = 2;
  std::string perm = "id";
  std::vector<std::string> nu;
  std::size_t sub = 1;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Process load(const std::string& path) { return parse(slurp(path)); }

std::size_t steps_budget(const Options& o) { return o.depth ? o.depth : kDefaultSteps; }
std::size_t rounds_budget(const Options& o) { return o.depth ? o.depth : kDefaultRounds; }

void emit(const Json& j) { std::cout << j.dump() << '\n'; }

int code(Outcome o) {
  switch (o) {
    case Outcome::Holds: return kTrue;
    case Outcome::Fails: return kFalse;
    case Outcome::Unknown: break;
  }
  return kUnknown;
}

SymNet load_symnet(const Options& o) {
  if (!o.seed.empty()) {
    return build_symmetric(load(o.seed), o.degree,
                           Permutation::from_cycles(o.perm, o.degree), o.nu);
  }
  if (o.file.empty()) throw CLI::ValidationError("need --seed or a network file");
  const NetState net = as_network(load(o.file));
  const auto sigma = Permutation::from_cycles(o.perm, net.components.size());
  const Recognition r = recognize_symmetric(net, sigma);
  if (!r) throw PreconditionError("not a symmetric network: " + r.reason);
  return *as_symmetric(net, sigma);
}

void print_trace(const NetTrace& t) {
  std::cout << "  " << format(drop_vacuous_restrictions(canonicalize(t.start.flatten())))
            << '\n';
  for (const auto& s : t.steps)
    std::cout << "  --" << s.label.to_string() << "--> "
              << format(drop_vacuous_restrictions(canonicalize(s.target.flatten())))
              << '\n';
}

int report(const std::string& predicate, const Verdict& v, std::size_t depth,
           const Options& o, const std::vector<std::string>& citations = {}) {
  if (o.json) {
    emit(verdict_record(predicate, v, depth, citations));
  } else {
    std::cout << predicate << ": " << outcome_name(v.outcome) << " (" << v.reason
              << ")\n";
    for (const auto& w : v.witnesses) {
      std::cout << "witness:\n";
      print_trace(w);
    }
  }
  return code(v.outcome);
}

// ---------------------------------------------------------------------------

int cmd_parse(const Options& o) {
  const Process p = load(o.file);
  if (o.json) {
    emit({{"term", format(p)},
          {"canonical", format(canonicalize(p))},
          {"free_names", free_names(p)},
          {"separate", is_separate(p)}});
  } else {
    std::cout << format(p) << '\n'
              << "canonical: " << format(canonicalize(p)) << '\n'
              << "separate: " << (is_separate(p) ? "yes" : "no") << '\n';
  }
  return kTrue;
}

int cmd_steps(const Options& o) {
  const Process p = load(o.file);
  const auto steps = o.tau ? tau_transitions(p) : transitions(p, free_names(p));
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (o.json) {
      emit(step_record(i, steps[i]));
      continue;
    }
    std::cout << i << "  " << steps[i].label.to_string() << "  [";
    for (std::size_t k = 0; k < steps[i].participants.size(); ++k)
      std::cout << (k ? "," : "") << steps[i].participants[k];
    std::cout << "]  " << format(drop_vacuous_restrictions(steps[i].target)) << '\n';
  }
  return steps.empty() ? kFalse : kTrue;
}

int cmd_run(const Options& o) {
  const Process p = load(o.file);
  const auto set = max_executions(p, steps_budget(o), o.tau, o.modulo);
  for (std::size_t t = 0; t < set.traces.size(); ++t) {
    const auto& tr = set.traces[t];
    if (o.json) {
      emit({{"record", "execution"},
            {"execution", t},
            {"truncated", tr.truncated},
            {"start", format(tr.start)}});
      for (std::size_t i = 0; i < tr.steps.size(); ++i) {
        Json j = step_record(i, tr.steps[i]);
        j["execution"] = t;
        emit(j);
      }
      continue;
    }
    std::cout << "execution " << t << (tr.truncated ? " (truncated)" : "") << ":";
    for (const auto& s : tr.steps) std::cout << ' ' << s.label.to_string();
    std::cout << "\n  ends in " << format(drop_vacuous_restrictions(tr.end())) << '\n';
  }
  if (!o.json)
    std::cout << set.traces.size() << " maximal execution(s)"
              << (o.modulo ? " up to congruence" : "") << '\n';
  return set.truncated ? kUnknown : kTrue;
}

int cmd_sym_build(const Options& o) {
  const SymNet net = load_symnet(o);
  if (o.json) {
    emit({{"network", format(net.flatten())},
          {"components", [&] {
             Json a = Json::array();
             for (const auto& c : net.components) a.push_back(format(c));
             return a;
           }()},
          {"sigma", net.sigma.to_string()},
          {"x_tilde", net.restricted}});
  } else {
    std::cout << format(net.flatten()) << '\n';
  }
  return kTrue;
}

void print_rounds(const SymExecution& e) {
  std::cout << "start: " << format(e.start.flatten()) << '\n';
  for (std::size_t k = 0; k < e.rounds.size(); ++k) {
    const Round& r = e.rounds[k];
    std::cout << "round " << k + 1 << ":";
    for (const auto& l : r.labels) std::cout << ' ' << l.to_string();
    std::cout << "\n  sigma " << r.sigma.to_string() << ", x~ {";
    for (std::size_t i = 0; i < r.restricted.size(); ++i)
      std::cout << (i ? "," : "") << r.restricted[i];
    std::cout << "}\n  " << format(drop_vacuous_restrictions(r.end.flatten())) << '\n';
  }
}

int cmd_sym_exec(const Options& o) {
  const SymNet net = load_symnet(o);
  const SymExecution e = find_symmetric_execution(net, rounds_budget(o));
  const Validation v = validate_symmetric_execution(e);
  if (o.json) {
    for (const auto& r : execution_records(e)) emit(r);
  } else {
    print_rounds(e);
    std::cout << e.rounds.size() << " round(s), "
              << (e.status == SymExecution::Status::Terminated ? "terminated"
                                                               : "truncated");
    if (e.lasso) std::cout << ", lasso after round " << *e.lasso;
    std::cout << ", " << (v ? "valid" : "INVALID: " + v.reason) << '\n';
  }
  if (!v) return kFalse;
  return e.status == SymExecution::Status::Terminated || e.lasso ? kTrue : kUnknown;
}

int cmd_sym_refute(const Options& o) {
  const SymNet net = load_symnet(o);
  const std::size_t d = steps_budget(o);
  return report("no-symmetric-execution", no_symmetric_execution(net, d), d, o,
                {"every execution breaks the initial symmetry"});
}

int cmd_check_le(const Options& o) {
  LeaderElectionSpec spec;
  if (o.mode == "indexed") {
    spec = LeaderElectionSpec::indexed(o.out);
  } else if (o.mode == "leader-slave") {
    spec = LeaderElectionSpec::leader_slave(o.leader, o.slave);
  } else {
    throw CLI::ValidationError("--mode must be indexed or leader-slave");
  }
  const std::size_t d = steps_budget(o);
  const NetState net = o.seed.empty() ? as_network(load(o.file)) : load_symnet(o).state();
  return report("leader-election", solves_leader_election(net, spec, d), d, o);
}

int cmd_check_success(const Options& o) {
  const std::size_t d = steps_budget(o);
  return report("must-succeed", must_succeed(load(o.file), d), d, o);
}

int cmd_check_step(const Options& o) {
  const bool b = has_step(load(o.file), o.tau);
  Verdict v;
  v.outcome = b ? Outcome::Holds : Outcome::Fails;
  v.reason = b ? "a step exists" : "no step";
  return report(o.tau ? "tau-step" : "step", v, 1, o);
}

int cmd_confluence(const Options& o) {
  const Process p = load(o.file);
  const ConfluenceReport r = check_confluence(p, o.force);
  if (o.json) {
    Json viol = Json::array();
    for (const auto& [out, in] : r.violations)
      viol.push_back({{"output", step_record(0, out)}, {"input", step_record(0, in)}});
    emit({{"pairs", r.pairs}, {"violations", viol}});
  } else {
    std::cout << r.pairs << " output/input pair(s), " << r.violations.size()
              << " violation(s)\n";
    for (const auto& [out, in] : r.violations)
      std::cout << "  " << out.label.to_string() << " / " << in.label.to_string()
                << " do not commute\n";
  }
  return r.violations.empty() ? kTrue : kFalse;
}

int cmd_subdivide(const Options& o) {
  const SymNet net = load_symnet(o);
  const SymExecution e = find_symmetric_execution(net, rounds_budget(o));
  const SymExecution s = subdivide(e, o.sub);
  const Validation v = validate_symmetric_execution(s);
  if (o.json) {
    for (const auto& r : execution_records(s)) emit(r);
  } else {
    print_rounds(s);
    std::cout << (v ? "valid" : "INVALID: " + v.reason) << '\n';
  }
  return v ? kTrue : kFalse;
}

int cmd_fixtures(const Options& o) {
  const std::size_t d = steps_budget(o);
  bool all = true;
  for (const auto& f : fixtures()) {
    for (const auto& e : f.expected) {
      const auto t0 = std::chrono::steady_clock::now();
      const Verdict v = evaluate(f, e, d);
      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0).count();
      const bool match = v.outcome == e.expected;
      all &= match;
      const std::string pred = e.predicate + (e.on_component ? " (component)" : "");
      if (o.json) {
        Json j = verdict_record(pred, v, d, {e.claim});
        j["fixture"] = f.name;
        j["expected"] = outcome_name(e.expected);
        j["match"] = match;
        emit(j);
      } else {
        std::printf("%-12s %-32s %-8s expected %-8s %s %8.2f ms\n", f.name.c_str(),
                    pred.c_str(), outcome_name(v.outcome), outcome_name(e.expected),
                    match ? "ok  " : "FAIL", ms);
      }
    }
  }
  return all ? kTrue : kFalse;
}

int cmd_demo(const Options& o) {
  const auto fx = fixtures();
  const Fixture& mixed = fx[1];
  const Fixture& separate = fx[0];
  const std::size_t d = steps_budget(o);

  const auto runs = max_executions(mixed.net.flatten(), d, false, true);
  const Verdict refuted = no_symmetric_execution(mixed.net, d);
  const SymExecution e = find_symmetric_execution(separate.net, rounds_budget(o));
  const bool valid = static_cast<bool>(validate_symmetric_execution(e));

  if (o.json) {
    emit({{"mixed", mixed.source},
          {"executions", runs.traces.size()},
          {"refutation", verdict_record("no-symmetric-execution", refuted, d, {})},
          {"separate", separate.source},
          {"symmetric_rounds", e.rounds.size()},
          {"valid", valid}});
  } else {
    std::cout << "mixed choice: " << mixed.source << '\n';
    for (const auto& t : runs.traces) {
      std::cout << " ";
      for (const auto& s : t.steps) std::cout << ' ' << s.label.to_string();
      std::cout << "  ->  " << format(drop_vacuous_restrictions(t.end())) << '\n';
    }
    std::cout << "  symmetric execution: none (" << outcome_name(refuted.outcome)
              << ", " << refuted.witnesses.size() << " refuting prefixes)\n";
    std::cout << "separate choice: " << separate.source << '\n';
    for (std::size_t k = 0; k < e.rounds.size(); ++k) {
      std::cout << "  round " << k + 1 << ":";
      for (const auto& l : e.rounds[k].labels) std::cout << ' ' << l.to_string();
      std::cout << '\n';
    }
    std::cout << "  symmetric execution: " << (valid ? "valid" : "INVALID") << '\n';
  }
  return refuted.outcome == Outcome::Holds && valid ? kTrue : kFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pisym: symmetry and choice in the pi-calculus"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c, bool file) {
    c->add_flag("--json", o.json, "line-delimited JSON output");
    c->add_option("--depth", o.depth, "depth bound (steps, or rounds for symmetric runs)");
    if (file) c->add_option("file", o.file, "process file")->required();
  };
  auto symmetric = [&](CLI::App* c) {
    common(c, false);
    c->add_option("file", o.file, "symmetric network file");
    c->add_option("--seed", o.seed, "seed process file");
    c->add_option("--degree", o.degree, "number of copies");
    c->add_option("--perm", o.perm, "sigma in cycle notation, e.g. \"(x y)\"");
    c->add_option("--nu", o.nu, "restricted names")->delimiter(',');
  };

  std::map<CLI::App*, int (*)(const Options&)> run;
  auto sub = [&](const char* name, const char* help, int (*f)(const Options&)) {
    CLI::App* c = app.add_subcommand(name, help);
    run[c] = f;
    return c;
  };

  common(sub("parse", "parse and pretty-print a process", cmd_parse), true);
  auto* steps = sub("steps", "list the transitions of a process", cmd_steps);
  common(steps, true);
  steps->add_flag("--tau", o.tau, "internal steps only");
  auto* runc = sub("run", "enumerate maximal executions", cmd_run);
  common(runc, true);
  runc->add_flag("--tau", o.tau, "internal steps only");
  runc->add_flag("--modulo-congruence", o.modulo, "identify congruent traces");
  symmetric(sub("sym-build", "build a symmetric network", cmd_sym_build));
  symmetric(sub("sym-exec", "construct a symmetric execution", cmd_sym_exec));
  symmetric(sub("sym-refute", "show that no symmetric execution exists", cmd_sym_refute));
  auto* le = sub("check-le", "check leader election", cmd_check_le);
  symmetric(le);
  le->add_option("--mode", o.mode, "indexed or leader-slave");
  le->add_option("--out", o.out, "announcement channel (indexed)");
  le->add_option("--leader", o.leader, "leader channel");
  le->add_option("--slave", o.slave, "slave channel");
  common(sub("check-success", "every maximal execution reaches ok", cmd_check_success),
         true);
  auto* cs = sub("check-step", "does a step exist", cmd_check_step);
  common(cs, true);
  cs->add_flag("--tau", o.tau, "internal steps only");
  auto* conf = sub("confluence", "check output/input confluence", cmd_confluence);
  common(conf, true);
  conf->add_flag("--force", o.force, "allow mixed choice");
  auto* subd = sub("subdivide", "project a symmetric execution to a subnetwork",
                   cmd_subdivide);
  symmetric(subd);
  subd->add_option("--sub", o.sub, "degree of the subnetwork");
  common(sub("fixtures", "evaluate the bundled fixtures", cmd_fixtures), false);
  common(sub("demo-separation", "mixed versus separate choice", cmd_demo), false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    for (auto* c : app.get_subcommands()) return run.at(c)(o);
  } catch (const MissingFile& e) {
    std::cerr << "pisym: " << e.what() << '\n';
    return kNoInput;
  } catch (const ParseError& e) {
    std::cerr << "pisym: parse error at " << e.line() << ':' << e.column() << ": "
              << e.what() << '\n';
    return kParse;
  } catch (const WellformednessError& e) {
    std::cerr << "pisym: " << e.what() << '\n';
    return kParse;
  } catch (const CLI::Error& e) {
    std::cerr << "pisym: " << e.what() << '\n';
    return kUsage;
  } catch (const SymmetryError& e) {
    std::cerr << "pisym: " << e.what() << '\n';
    return kUsage;
  } catch (const PermutationError& e) {
    std::cerr << "pisym: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "pisym: " << e.what() << '\n';
    return kUsage;
  } catch (const SpecError& e) {
    std::cerr << "pisym: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "pisym: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
