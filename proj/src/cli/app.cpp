#include "lctrs/cli/app.hpp"

#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lctrs/analysis/analysis.hpp"
#include "lctrs/cli/parse.hpp"
#include "lctrs/cli/suites.hpp"
#include "lctrs/grounding/grounding.hpp"
#include "lctrs/pcpgen/pcpgen.hpp"

namespace lctrs {

namespace {

using json = nlohmann::json;

/// Raised for unusable user input; maps to exit status 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string file;
  std::string pairs;
  std::string criteria = "wo,adc,pc";
  int depth = 4;
  std::string values;
  std::string smt;
  int timeout = 2000;
  bool json = false;
  std::size_t samples = 200;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Lctrs load(const Options& o) {
  std::string text = read_file(o.file);
  try {
    return parse_lctrs(text);
  } catch (const ParseError& e) {
    throw InputError(o.file + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                     e.message());
  } catch (const std::invalid_argument& e) {
    throw InputError(o.file + ": " + e.what());
  } catch (const SortError& e) {
    throw InputError(o.file + ": " + e.what());
  }
}

ValueDomain domain(const Options& o, const Lctrs& r) {
  if (o.values.empty()) return default_domain(r);
  static const std::regex range(R"(\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(o.values, m, range)) throw InputError("--values expects LO..HI, got " + o.values);
  Integer lo(m[1].str()), hi(m[2].str());
  if (lo > hi) throw InputError("--values range is empty: " + o.values);
  return ValueDomain::interval(lo, hi);
}

Solver make_solver(const Options& o) { return Solver(SolverConfig{o.smt, o.timeout}); }

std::set<Criterion> criteria(const Options& o) {
  std::set<Criterion> out;
  std::stringstream ss(o.criteria);
  for (std::string item; std::getline(ss, item, ',');) {
    auto c = parse_criterion(item);
    if (!c) throw InputError("unknown criterion '" + item + "' (expected wo, adc or pc)");
    out.insert(*c);
  }
  if (out.empty()) throw InputError("--criteria lists no criterion");
  return out;
}

json valuation_json(const Valuation& v) {
  json j = json::object();
  for (const auto& [x, val] : v) j[x.name] = Term::value(val).to_string();
  return j;
}

json terms_json(const std::vector<Term>& ts) {
  json j = json::array();
  for (const auto& t : ts) j.push_back(t.to_string());
  return j;
}

json ccp_json(const CCPRecord& c) {
  return {{"left", c.left.to_string()},
          {"right", c.right.to_string()},
          {"constraint", c.constraint.to_string()},
          {"overlay", c.overlay},
          {"position", c.overlap.position.to_string()},
          {"source", c.source.to_string()},
          {"rules", {c.overlap.rho1.to_string(), c.overlap.rho2.to_string()}},
          {"undecided", c.undecided}};
}

json cpcp_json(const CPCPRecord& c) {
  json inner = json::array();
  for (const auto& [p, rule] : c.inner) inner.push_back({{"position", p.to_string()}, {"rule", rule.to_string()}});
  return {{"left", c.left.to_string()},
          {"right", c.right.to_string()},
          {"constraint", c.constraint.to_string()},
          {"positions", to_string(c.positions)},
          {"source", c.source.to_string()},
          {"rule", c.rho.to_string()},
          {"inner", inner},
          {"undecided", c.undecided}};
}

template <class T>
std::vector<const T*> visible(const std::vector<T>& pairs) {
  std::vector<const T*> out;
  for (const auto& c : pairs)
    if (!c.calculation) out.push_back(&c);
  return out;
}

template <class T>
std::size_t hidden(const std::vector<T>& pairs) {
  return pairs.size() - visible(pairs).size();
}

int cmd_analyze(const Options& o, std::ostream& out) {
  Lctrs r = load(o);
  Solver solver = make_solver(o);
  AnalysisConfig cfg;
  cfg.criteria = criteria(o);
  cfg.closing.depth = o.depth;
  cfg.domain = domain(o, r);
  AnalysisResult res = analyze(r, solver, cfg);

  if (o.json) {
    json j;
    j["verdict"] = res.verdict.to_string();
    j["criterion"] = res.verdict.criterion ? json(to_string(*res.verdict.criterion)) : json(nullptr);
    j["left_linear"] = res.left_linear;
    j["criteria"] = json::array();
    for (const auto& rep : res.criteria)
      j["criteria"].push_back({{"name", to_string(rep.criterion)}, {"holds", to_string(rep.holds)}, {"reasons", rep.reasons}});
    j["ccps"] = json::array();
    for (const auto* c : visible(res.ccps)) j["ccps"].push_back(ccp_json(*c));
    j["cpcps"] = json::array();
    for (const auto* c : visible(res.cpcps)) j["cpcps"].push_back(cpcp_json(*c));
    j["witnesses"] = json::array();
    if (const auto& w = res.verdict.witness)
      j["witnesses"].push_back({{"source", w->source.to_string()},
                                {"left", w->left.to_string()},
                                {"right", w->right.to_string()},
                                {"instance", valuation_json(w->instance)},
                                {"left_normal_forms", terms_json(w->left_normal_forms)},
                                {"right_normal_forms", terms_json(w->right_normal_forms)}});
    out << j.dump(2) << "\n";
    return kExitOk;
  }

  out << res.verdict.to_string() << "\n";
  if (res.verdict.criterion) out << "criterion: " << to_string(*res.verdict.criterion) << "\n";
  out << "left-linear: " << (res.left_linear ? "yes" : "no") << "\n";
  out << "critical pairs: " << visible(res.ccps).size() << " (" << hidden(res.ccps) << " calculation pairs omitted)\n";
  out << "parallel critical pairs: " << visible(res.cpcps).size() << " (" << hidden(res.cpcps)
      << " calculation pairs omitted)\n";
  for (const auto& rep : res.criteria) {
    out << to_string(rep.criterion) << ": " << to_string(rep.holds) << "\n";
    for (const auto& reason : rep.reasons) out << "  " << reason << "\n";
  }
  if (const auto& w = res.verdict.witness) {
    out << "witness: " << w->left.to_string() << " <- " << w->source.to_string() << " -> " << w->right.to_string()
        << "\n";
    out << "  instance: " << to_string(w->instance) << "\n";
    out << "  normal forms of the left side: " << terms_json(w->left_normal_forms).dump() << "\n";
    out << "  normal forms of the right side: " << terms_json(w->right_normal_forms).dump() << "\n";
  }
  return kExitOk;
}

int cmd_ccp(const Options& o, std::ostream& out) {
  Lctrs r = load(o);
  Solver solver = make_solver(o);
  auto pairs = ccps(r, solver);
  if (o.json) {
    json j = json::array();
    for (const auto* c : visible(pairs)) j.push_back(ccp_json(*c));
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  for (const auto* c : visible(pairs))
    out << c->to_string() << (c->overlay ? "  overlay" : "  at " + c->overlap.position.to_string()) << "\n";
  out << "; " << hidden(pairs) << " calculation pairs omitted\n";
  return kExitOk;
}

int cmd_cpcp(const Options& o, std::ostream& out) {
  Lctrs r = load(o);
  Solver solver = make_solver(o);
  auto pairs = cpcps(r, solver);
  if (o.json) {
    json j = json::array();
    for (const auto* c : visible(pairs)) j.push_back(cpcp_json(*c));
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  for (const auto* c : visible(pairs)) out << c->to_string() << "\n";
  out << "; " << hidden(pairs) << " calculation pairs omitted\n";
  return kExitOk;
}

int cmd_ground(const Options& o, std::ostream& out) {
  Lctrs r = load(o);
  ValueDomain d = domain(o, r);
  GroundFragment f = ground_fragment(r, d);
  auto cps = trs_cps(f);
  auto pcps = trs_pcps(f);
  auto rep = trs_closedness_check(f, o.depth);
  TrsStepper stepper(f.all());
  auto join = [&](const PlainCP& cp) { return to_string(joinable(stepper, cp.left, cp.right, o.depth).kind); };

  if (o.json) {
    json j;
    j["domain"] = d.to_string();
    j["rules"] = json::array();
    for (const auto& rule : f.rules) j["rules"].push_back(rule.lhs.to_string() + " -> " + rule.rhs.to_string());
    j["calculation_instances"] = f.calc.size();
    auto cp_list = [&](const std::vector<PlainCP>& xs) {
      json a = json::array();
      for (const auto& cp : xs)
        a.push_back({{"left", cp.left.to_string()},
                     {"right", cp.right.to_string()},
                     {"positions", to_string(cp.positions)},
                     {"overlay", cp.overlay},
                     {"joinability", join(cp)}});
      return a;
    };
    j["cps"] = cp_list(cps);
    j["pcps"] = cp_list(pcps);
    j["development_closed"] = rep.development_closed;
    j["almost_development_closed"] = rep.almost_development_closed;
    j["parallel_closed_1"] = rep.parallel_closed_1;
    j["parallel_closed_2"] = rep.parallel_closed_2;
    out << j.dump(2) << "\n";
    return kExitOk;
  }

  auto yn = [](bool b) { return b ? "yes" : "no"; };
  out << "domain: " << d.to_string() << "\n";
  out << "rules: " << f.rules.size() << " (" << f.calc.size() << " calculation instances omitted)\n";
  for (const auto& rule : f.rules) out << "  " << rule.lhs.to_string() << " -> " << rule.rhs.to_string() << "\n";
  out << "critical pairs: " << cps.size() << "\n";
  for (const auto& cp : cps) out << "  " << cp.to_string() << "  " << join(cp) << "\n";
  out << "parallel critical pairs: " << pcps.size() << "\n";
  for (const auto& cp : pcps) out << "  " << cp.to_string() << "  " << join(cp) << "\n";
  out << "development closed: " << yn(rep.development_closed) << "\n";
  out << "almost development closed: " << yn(rep.almost_development_closed) << "\n";
  out << "1-parallel closed: " << yn(rep.parallel_closed_1) << "\n";
  out << "2-parallel closed: " << yn(rep.parallel_closed_2) << "\n";
  return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  Lctrs r = load(o);
  Solver solver = make_solver(o);
  ValueDomain d = domain(o, r);
  std::vector<SuiteResult> results{correspondence_suite(r, d, solver, o.samples), unification_suite(),
                                    interpret_suite(), encoding_suite()};
  if (!o.smt.empty()) results.push_back(solver_agreement_suite(o.smt, 200, 1, std::max(o.timeout, 1000)));
  bool ok = std::all_of(results.begin(), results.end(), [](const SuiteResult& s) { return s.ok(); });
  if (o.json) {
    json j;
    j["result"] = ok ? "PASS" : "FAIL";
    j["suites"] = json::array();
    for (const auto& s : results)
      j["suites"].push_back({{"name", s.name}, {"cases", s.cases}, {"failures", s.failures}});
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << (ok ? "PASS" : "FAIL") << "\n";
  for (const auto& s : results) {
    out << (s.ok() ? "PASS " : "FAIL ") << s.summary() << "\n";
    for (const auto& f : s.failures) out << "  " << f << "\n";
  }
  if (o.smt.empty()) out << "solver agreement: skipped (no --smt)\n";
  return kExitOk;
}

int cmd_gen_pcp(const Options& o, std::ostream& out) {
  PCPInstance p = [&] {
    try {
      return PCPInstance::parse(o.pairs);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }();
  out << "; R_P for the PCP instance " << p.to_string() << "\n";
  if (auto w = find_solution(p))
    out << "; solution " << index_string(*w, p.size()) << " encoded as " << encode_string(*w, p.size()) << "\n";
  else
    out << "; no solution of length at most 6\n";
  out << print_lctrs(build_rp(p));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Confluence analysis of logically constrained rewrite systems", "lctrs"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub, bool analysis) {
    sub->add_option("FILE", o.file, "system in the s-expression format")->required();
    sub->add_option("--values", o.values, "instantiation domain LO..HI (default -4..4 and all literals)");
    sub->add_option("--smt", o.smt, "external SMT-LIB solver command, e.g. \"z3 -in\" (default internal)");
    sub->add_option("--timeout", o.timeout, "solver timeout in milliseconds")->capture_default_str();
    sub->add_flag("--json", o.json, "machine-readable output");
    if (analysis) {
      sub->add_option("--criteria", o.criteria, "comma-separated subset of wo,adc,pc")->capture_default_str();
      sub->add_option("--depth", o.depth, "bound on closing and joining sequences")
          ->capture_default_str()
          ->check(CLI::NonNegativeNumber);
    }
  };
  auto* analyze_cmd = app.add_subcommand("analyze", "decide confluence by the closedness criteria");
  common(analyze_cmd, true);
  auto* ccp_cmd = app.add_subcommand("ccp", "list the constrained critical pairs");
  common(ccp_cmd, false);
  auto* cpcp_cmd = app.add_subcommand("cpcp", "list the constrained parallel critical pairs");
  common(cpcp_cmd, false);
  auto* ground_cmd = app.add_subcommand("ground", "ground fragment over the value domain and its critical pairs");
  common(ground_cmd, true);
  auto* check_cmd = app.add_subcommand("check", "correspondence oracles and property suites");
  common(check_cmd, false);
  check_cmd->add_option("--samples", o.samples, "sampled models and terms")->capture_default_str();
  auto* gen_cmd = app.add_subcommand("gen-pcp", "print R_P for a PCP instance such as \"1,101;10,00;011,11\"");
  gen_cmd->add_option("PAIRS", o.pairs, "pairs separated by ';', components by ','")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(o, out);
    if (ccp_cmd->parsed()) return cmd_ccp(o, out);
    if (cpcp_cmd->parsed()) return cmd_cpcp(o, out);
    if (ground_cmd->parsed()) return cmd_ground(o, out);
    if (check_cmd->parsed()) return cmd_check(o, out);
    if (gen_cmd->parsed()) return cmd_gen_pcp(o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
  err << "error: no subcommand\n";
  return kExitInputError;
}

}  // namespace lctrs
