#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cstring>

#include "lctrs/core/sexpr.hpp"
#include "lctrs/core/theory.hpp"
#include "lctrs/logic/solver.hpp"

namespace lctrs {

namespace {

std::string smt_name(const Var& x) {
  std::string s = "v_";
  for (char c : x.name) s += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  if (x.index) s += "_" + std::to_string(x.index);
  return s;
}

std::string smt_sort(const Sort& s) {
  if (s == Sort::integer()) return "Int";
  if (s == Sort::boolean()) return "Bool";
  throw std::invalid_argument("sort " + s.name() + " has no SMT-LIB counterpart");
}

std::string int_literal(const Integer& i) {
  if (i < 0) return "(- " + Integer(-i).str() + ")";
  return i.str();
}

bool has_nonlinear(const Term& t) {
  if (t.is_var()) return false;
  if (is_op(t, Op::Mul) && !t.args()[0].is_value() && !t.args()[1].is_value()) return true;
  for (const auto& a : t.args())
    if (has_nonlinear(a)) return true;
  return false;
}

}  // namespace

std::string to_smtlib(const Term& t) {
  if (t.is_var()) {
    smt_sort(t.sort());
    return smt_name(t.var());
  }
  if (t.is_value()) {
    const Value& v = t.value_of();
    return v.is_bool() ? v.to_string() : int_literal(v.as_int());
  }
  auto op = theory_op(t.symbol());
  if (!op) throw std::invalid_argument("not a logical term: " + t.to_string());
  std::string head;
  switch (*op) {
    case Op::NeInt:
    case Op::NeBool: head = "distinct"; break;
    case Op::Neg: head = "-"; break;
    default: head = t.symbol().name;
  }
  std::string s = "(" + head;
  for (const auto& a : t.args()) s += " " + to_smtlib(a);
  return s + ")";
}

std::string smtlib_script(const std::vector<QuantBlock>& prefix, const Term& phi) {
  VarSet bound;
  for (const auto& b : prefix) bound.insert(b.vars.begin(), b.vars.end());
  VarSet free;
  for (const auto& x : vars(phi))
    if (!bound.count(x)) free.insert(x);
  const bool quantified = !prefix.empty();
  const bool nonlinear = has_nonlinear(phi);
  std::string logic = std::string(quantified ? "" : "QF_") + (nonlinear ? "NIA" : "LIA");

  std::string body = to_smtlib(phi);
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
    if (it->vars.empty()) continue;
    std::string binders;
    for (const auto& x : it->vars) binders += "(" + smt_name(x) + " " + smt_sort(x.sort) + ")";
    body = std::string("(") + (it->q == Quantifier::Forall ? "forall" : "exists") + " (" + binders + ") " + body + ")";
  }
  std::string script = "(set-logic " + logic + ")\n";
  if (quantified && !free.empty()) {
    // A closed sentence: free variables are universally quantified.
    std::string binders;
    for (const auto& x : free) binders += "(" + smt_name(x) + " " + smt_sort(x.sort) + ")";
    body = "(forall (" + binders + ") " + body + ")";
  } else {
    for (const auto& x : free) script += "(declare-const " + smt_name(x) + " " + smt_sort(x.sort) + ")\n";
  }
  script += "(assert " + body + ")\n(check-sat)\n";
  if (!quantified) script += "(get-model)\n";
  return script;
}

namespace {

struct ProcessResult {
  bool ok = false;
  std::string out;
  std::string diagnostic;
};

ProcessResult run_process(const std::string& command, const std::string& input, int timeout_ms) {
  static const bool sigpipe_ignored = [] {
    signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;
  ProcessResult r;
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0) {
    r.diagnostic = std::string("pipe: ") + std::strerror(errno);
    return r;
  }
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    r.diagnostic = std::string("pipe: ") + std::strerror(errno);
    return r;
  }
  pid_t pid = fork();
  if (pid < 0) {
    r.diagnostic = std::string("fork: ") + std::strerror(errno);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    return r;
  }
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) dup2(devnull, STDERR_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);

  std::size_t written = 0;
  while (written < input.size()) {
    ssize_t n = write(in_pipe[1], input.data() + written, input.size() - written);
    if (n <= 0) break;
    written += static_cast<std::size_t>(n);
  }
  close(in_pipe[1]);

  auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  bool timed_out = false;
  char buf[4096];
  for (;;) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now()).count();
    if (left <= 0) {
      timed_out = true;
      break;
    }
    pollfd pfd{out_pipe[0], POLLIN, 0};
    int pr = poll(&pfd, 1, static_cast<int>(left));
    if (pr < 0 && errno == EINTR) continue;
    if (pr <= 0) {
      timed_out = pr == 0;
      break;
    }
    ssize_t n = read(out_pipe[0], buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    r.out.append(buf, static_cast<std::size_t>(n));
  }
  close(out_pipe[0]);
  if (timed_out) kill(pid, SIGKILL);
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (timed_out) {
    r.diagnostic = "solver timed out after " + std::to_string(timeout_ms) + " ms";
    return r;
  }
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127) {
    r.diagnostic = "could not run solver command: " + command;
    return r;
  }
  r.ok = true;
  return r;
}

std::optional<Value> parse_value(const SExpr& e, const Sort& sort) {
  if (e.is_atom) {
    if (sort == Sort::boolean()) {
      if (e.atom == "true") return Value(true);
      if (e.atom == "false") return Value(false);
      return std::nullopt;
    }
    try {
      return Value(Integer(e.atom));
    } catch (...) {
      return std::nullopt;
    }
  }
  if (e.items.size() == 2 && e.items[0].is_atom && e.items[0].atom == "-") {
    auto inner = parse_value(e.items[1], sort);
    if (inner && inner->is_int()) return Value(Integer(-inner->as_int()));
  }
  return std::nullopt;
}

void collect_definitions(const SExpr& e, const std::map<std::string, Var>& names, Valuation& model) {
  if (e.is_atom) return;
  if (e.items.size() == 5 && e.items[0].is_atom && e.items[0].atom == "define-fun" && e.items[1].is_atom) {
    std::string name = e.items[1].atom;
    if (name.size() >= 2 && name.front() == '|' && name.back() == '|') name = name.substr(1, name.size() - 2);
    auto it = names.find(name);
    if (it == names.end()) return;
    if (auto v = parse_value(e.items[4], it->second.sort)) model[it->second] = *v;
    return;
  }
  for (const auto& item : e.items) collect_definitions(item, names, model);
}

}  // namespace

SolverVerdict smt_backend(const std::string& command, const std::vector<QuantBlock>& prefix,
                          const Term& phi, int timeout_ms) {
  SolverVerdict v;
  std::string script;
  try {
    script = smtlib_script(prefix, phi);
  } catch (const std::exception& e) {
    v.diagnostic = e.what();
    return v;
  }
  ProcessResult pr = run_process(command, script, timeout_ms);
  if (!pr.ok) {
    v.diagnostic = pr.diagnostic;
    return v;
  }
  std::size_t start = pr.out.find_first_not_of(" \t\r\n");
  std::size_t end = start == std::string::npos ? start : pr.out.find_first_of(" \t\r\n(", start);
  std::string status = start == std::string::npos ? "" : pr.out.substr(start, end - start);
  if (status == "unsat") {
    v.kind = VerdictKind::Unsat;
    return v;
  }
  if (status != "sat") {
    v.diagnostic = "solver answered: " + (status.empty() ? std::string("<nothing>") : status);
    return v;
  }
  v.kind = VerdictKind::Sat;
  if (!prefix.empty()) return v;

  std::map<std::string, Var> names;
  VarSet free = vars(phi);
  for (const auto& x : free) names.emplace(smt_name(x), x);
  try {
    for (const auto& e : read_sexprs(std::string_view(pr.out).substr(end)))
      collect_definitions(e, names, v.model);
  } catch (const ParseError& e) {
    v.kind = VerdictKind::Unknown;
    v.diagnostic = std::string("unparsable model: ") + e.what();
    return v;
  }
  for (const auto& x : free)
    if (!v.model.count(x)) v.model[x] = x.sort == Sort::boolean() ? Value(false) : Value(0);
  try {
    if (!evaluate(phi, v.model).as_bool()) {
      v.kind = VerdictKind::Unknown;
      v.diagnostic = "solver model does not satisfy the query";
    }
  } catch (const EvalError& e) {
    v.kind = VerdictKind::Unknown;
    v.diagnostic = e.what();
  }
  return v;
}

}  // namespace lctrs
