// SPDX-License-Identifier: Apache-2.0

#include "wsweep/smtlib.hpp"
#include "wsweep/solver_backend.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cctype>
#include <chrono>
#include <cstring>
#include <unordered_set>

namespace wsweep {

namespace {

using Clock = std::chrono::steady_clock;

struct ProtocolError : std::runtime_error {
  explicit ProtocolError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace

struct ExternalProcessOracle::Process {
  pid_t pid = -1;
  int to_child = -1;
  int from_child = -1;
  std::string rdbuf;
  std::unordered_set<TermId> declared;

  ~Process() { close_all(); }

  void close_all() {
    if (to_child >= 0)
      close(to_child);
    if (from_child >= 0)
      close(from_child);
    to_child = from_child = -1;
    if (pid > 0) {
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
      pid = -1;
    }
  }

  void send(const std::string &s) {
    size_t off = 0;
    while (off < s.size()) {
      ssize_t n = write(to_child, s.data() + off, s.size() - off);
      if (n < 0) {
        if (errno == EINTR)
          continue;
        throw ProtocolError("write to solver failed: " +
                            std::string(strerror(errno)));
      }
      off += size_t(n);
    }
  }

  // Pulls more bytes before `deadline` or throws.
  void fill(Clock::time_point deadline) {
    auto now = Clock::now();
    if (now >= deadline)
      throw ProtocolError("solver timed out");
    struct pollfd pfd = {from_child, POLLIN, 0};
    int ms = int(std::chrono::duration_cast<std::chrono::milliseconds>(
                     deadline - now)
                     .count()) +
             1;
    int pr = poll(&pfd, 1, ms);
    if (pr <= 0)
      throw ProtocolError("solver timed out");
    char buf[4096];
    ssize_t n = read(from_child, buf, sizeof buf);
    if (n <= 0)
      throw ProtocolError("solver closed its output");
    rdbuf.append(buf, size_t(n));
  }

  std::string read_line(Clock::time_point deadline) {
    for (;;) {
      auto nl = rdbuf.find('\n');
      if (nl != std::string::npos) {
        std::string line = rdbuf.substr(0, nl);
        rdbuf.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r')
          line.pop_back();
        // Skip blank lines a solver might emit between answers.
        if (line.find_first_not_of(" \t") == std::string::npos)
          continue;
        return line;
      }
      fill(deadline);
    }
  }

  // A whole s-expression, possibly spanning lines.
  std::string read_sexpr(Clock::time_point deadline) {
    size_t pos = 0;
    int depth = 0;
    bool started = false;
    for (;;) {
      for (; pos < rdbuf.size(); ++pos) {
        char c = rdbuf[pos];
        if (c == '(') {
          ++depth;
          started = true;
        } else if (c == ')') {
          --depth;
          if (started && depth == 0) {
            std::string s = rdbuf.substr(0, pos + 1);
            rdbuf.erase(0, pos + 1);
            return s;
          }
        } else if (!started && !isspace(static_cast<unsigned char>(c))) {
          // An atom (like an error symbol) instead of a list.
          auto end = rdbuf.find('\n', pos);
          if (end == std::string::npos)
            break;
          std::string s = rdbuf.substr(pos, end - pos);
          rdbuf.erase(0, end + 1);
          return s;
        }
      }
      fill(deadline);
    }
  }
};

ExternalProcessOracle::ExternalProcessOracle(const TermGraph &graph,
                                             std::string command,
                                             uint64_t timeout_ms)
    : graph_(graph), command_(std::move(command)), timeout_ms_(timeout_ms) {}

ExternalProcessOracle::~ExternalProcessOracle() { shutdown(); }

void ExternalProcessOracle::shutdown() {
  proc_.reset();
  asserted_assumptions_ = kNoTerm;
}

bool ExternalProcessOracle::ensure_process(TermId assumptions) {
  if (proc_ && asserted_assumptions_ == assumptions)
    return true;
  shutdown();

  static bool sigpipe_ignored = [] {
    signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;

  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0)
    return false;
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    return false;
  }
  pid_t pid = fork();
  if (pid < 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    return false;
  }
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), (char *)nullptr);
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  proc_ = std::make_unique<Process>();
  proc_->pid = pid;
  proc_->to_child = in_pipe[1];
  proc_->from_child = out_pipe[0];

  try {
    std::string preamble = "(set-option :print-success false)\n"
                           "(set-option :produce-models true)\n"
                           "(set-logic QF_ABV)\n";
    TermId a = assumptions;
    for (TermId leaf : graph_.leaves_of({&a, 1})) {
      preamble += smtlib_declare(graph_, leaf) + "\n";
      proc_->declared.insert(leaf);
    }
    preamble += smtlib_assert(graph_, assumptions) + "\n";
    proc_->send(preamble);
  } catch (const ProtocolError &) {
    shutdown();
    return false;
  }
  asserted_assumptions_ = assumptions;
  return true;
}

namespace {

// Minimal reader for get-value answers: ((|name| #b01).. ). Returns
// name/literal pairs; anything unrecognized is skipped.
std::vector<std::pair<std::string, std::string>>
parse_value_pairs(const std::string &s) {
  std::vector<std::string> tokens;
  for (size_t i = 0; i < s.size();) {
    char c = s[i];
    if (isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(' || c == ')') {
      tokens.emplace_back(1, c);
      ++i;
      continue;
    }
    if (c == '|') {
      auto end = s.find('|', i + 1);
      if (end == std::string::npos)
        break;
      tokens.push_back(s.substr(i, end - i + 1));
      i = end + 1;
      continue;
    }
    size_t j = i;
    while (j < s.size() && !isspace(static_cast<unsigned char>(s[j])) &&
           s[j] != '(' && s[j] != ')')
      ++j;
    tokens.push_back(s.substr(i, j - i));
    i = j;
  }

  // Pair structure: ( ( name value... ) ( name value... ) )
  std::vector<std::pair<std::string, std::string>> out;
  for (size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (tokens[i] != "(")
      continue;
    const std::string &name = tokens[i + 1];
    if (name == "(" || name == ")")
      continue;
    // Collect until the matching close; the value may itself be a list
    // like (_ bv5 8).
    std::vector<std::string> val;
    int depth = 0;
    size_t j = i + 2;
    for (; j < tokens.size(); ++j) {
      if (tokens[j] == "(") {
        ++depth;
        continue;
      }
      if (tokens[j] == ")") {
        if (depth == 0)
          break;
        --depth;
        continue;
      }
      val.push_back(tokens[j]);
    }
    if (val.size() == 1)
      out.emplace_back(name, val[0]);
    else if (val.size() >= 2 && val[0] == "_")
      out.emplace_back(name, val[1]); // (_ bvN w)
    i = j;
  }
  return out;
}

std::optional<BitVec> parse_bv_literal(const std::string &lit, uint32_t width) {
  try {
    if (lit.rfind("#b", 0) == 0) {
      bool ok = false;
      BitVec v = BitVec::from_binary(width, lit.substr(2), ok);
      if (ok)
        return v;
      return std::nullopt;
    }
    if (lit.rfind("#x", 0) == 0) {
      WideInt v("0x" + lit.substr(2));
      return BitVec(width, v);
    }
    if (lit.rfind("bv", 0) == 0) {
      WideInt v(lit.substr(2));
      return BitVec(width, v);
    }
  } catch (const std::runtime_error &) {
  }
  return std::nullopt;
}

} // namespace

OracleVerdict ExternalProcessOracle::check(TermId assumptions, TermId goal) {
  if (command_.empty())
    return OracleVerdict::unknown("no solver command configured");
  if (!ensure_process(assumptions))
    return OracleVerdict::unknown("failed to start solver process");

  auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms_);
  const std::array<TermId, 2> roots{assumptions, goal};
  std::vector<TermId> leaves = graph_.leaves_of(roots);

  try {
    std::string msg;
    for (TermId leaf : leaves)
      if (proc_->declared.insert(leaf).second)
        msg += smtlib_declare(graph_, leaf) + "\n";
    msg += "(push 1)\n" + smtlib_assert(graph_, goal) + "\n(check-sat)\n";
    proc_->send(msg);

    std::string answer = proc_->read_line(deadline);
    if (answer == "unsat") {
      proc_->send("(pop 1)\n");
      return OracleVerdict::unsat();
    }
    if (answer == "unknown") {
      // A legitimate answer, not a protocol break: keep the process alive.
      proc_->send("(pop 1)\n");
      return OracleVerdict::unknown("solver answered unknown");
    }
    if (answer != "sat")
      throw ProtocolError("unexpected solver answer '" + answer + "'");

    // Query values for the bit-vector leaves; arrays fall back to default
    // content and must survive the replay check below.
    std::vector<TermId> bv_leaves;
    for (TermId l : leaves)
      if (graph_.sort(l).is_bitvec())
        bv_leaves.push_back(l);
    std::unordered_map<std::string, TermId> by_name;
    Pattern model;
    model.origin = Pattern::Origin::Counterexample;
    if (!bv_leaves.empty()) {
      std::string q = "(get-value (";
      for (size_t i = 0; i < bv_leaves.size(); ++i) {
        if (i)
          q += " ";
        std::string quoted = smtlib_declare(graph_, bv_leaves[i]);
        // Reuse the declaration's quoting by extracting the symbol token.
        auto s = quoted.find('|');
        auto e = quoted.rfind('|');
        q += quoted.substr(s, e - s + 1);
        by_name.emplace(quoted.substr(s, e - s + 1), bv_leaves[i]);
        by_name.emplace(quoted.substr(s + 1, e - s - 1), bv_leaves[i]);
      }
      q += "))\n";
      proc_->send(q);
      std::string sexpr = proc_->read_sexpr(deadline);
      for (auto &[name, lit] : parse_value_pairs(sexpr)) {
        auto it = by_name.find(name);
        if (it == by_name.end())
          continue;
        auto v = parse_bv_literal(lit, graph_.sort(it->second).width);
        if (v)
          model.leaves.emplace(it->second, *v);
      }
    }
    proc_->send("(pop 1)\n");

    for (TermId l : leaves) {
      if (model.leaves.count(l))
        continue;
      Sort s = graph_.sort(l);
      if (s.is_bitvec())
        model.leaves.emplace(l, BitVec::zero(s.width));
      else
        model.leaves.emplace(l, ArrayValue::leaf(l, s, 0x5eedULL ^ l));
    }

    // Mandatory replay before trusting the answer.
    EvalPlan plan = EvalPlan::build(graph_, roots);
    std::vector<Value> out;
    eval_column(graph_, plan, model.leaves, out);
    if (std::get<BitVec>(out[plan.pos.at(assumptions)]).is_zero() ||
        std::get<BitVec>(out[plan.pos.at(goal)]).is_zero())
      return OracleVerdict::unknown("solver model failed replay validation");
    return OracleVerdict::sat(std::move(model));
  } catch (const ProtocolError &e) {
    shutdown();
    return OracleVerdict::unknown(e.what());
  }
}

} // namespace wsweep
