// Copyright 2026 The gract Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gract/cli.hpp"

#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gract/explorer.hpp"
#include "gract/parser.hpp"
#include "gract/printer.hpp"
#include "gract/serialize.hpp"

namespace gract {

namespace {

struct Common {
  std::string file;
  bool json = false;
  bool quiet = false;
};

struct RunOptions {
  std::uint64_t seed = 0;
  std::uint64_t steps = 10000;
  std::string strategy = "random";
  std::string script;
  bool unsafe = false;
};

struct ExploreOptions {
  std::uint64_t depth = 500;
  std::uint64_t states = 1000000;
  std::uint64_t unfold = 2;
  unsigned jobs = 1;
  bool unsafe = false;
};

struct SrOptions {
  std::uint64_t runs = 100;
  std::uint64_t seed = 0;
  std::uint64_t steps = 200;
  std::string replay;
};

/// Failure that maps straight to an exit code.
struct Exit {
  int code;
};

class Style {
 public:
  Style(const std::ostream& out) {
    const char* env = std::getenv("GRACT_COLOR");
    std::string mode = env ? env : "auto";
    if (mode == "always") {
      on_ = true;
    } else if (mode == "auto") {
      const char* term = std::getenv("TERM");
      on_ = &out == &std::cout && isatty(STDOUT_FILENO) && !(term && std::string(term) == "dumb");
    }
  }
  std::string good(const std::string& s) const { return wrap("32", s); }
  std::string bad(const std::string& s) const { return wrap("31", s); }
  std::string dim(const std::string& s) const { return wrap("2", s); }

 private:
  std::string wrap(const char* code, const std::string& s) const {
    return on_ ? "\x1b[" + std::string(code) + "m" + s + "\x1b[0m" : s;
  }
  bool on_ = false;
};

std::string read_file(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << path << ": cannot read file\n";
    throw Exit{kExitIoError};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Program load(const Common& c, std::ostream& out, std::ostream& err) {
  std::string text = read_file(c.file, err);
  try {
    return parse_program(text);
  } catch (const ParseError& e) {
    if (c.json) {
      Json j;
      j["schema"] = kSchema;
      j["ok"] = false;
      std::string loc = std::to_string(e.loc().line) + ":" + std::to_string(e.loc().col);
      j["errors"] = Json::array({Json{{"code", "ParseError"}, {"loc", loc}, {"detail", e.what()}}});
      out << j.dump(2) << "\n";
    } else {
      err << c.file << ":" << e.what() << "\n";
    }
    throw Exit{kExitParseError};
  }
}

void print_errors(const Common& c, const std::vector<TypeError>& errors, const Style& style,
                  std::ostream& err) {
  for (const auto& e : errors)
    err << c.file << ":" << style.bad(format_type_error(e)) << "\n";
}

std::optional<Measure> measure_of(const Program& p, const Configuration& c) {
  try {
    return config_measure(p, c);
  } catch (const TypeErrorException&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------

int cmd_check(const Common& c, std::ostream& out, std::ostream& err) {
  Style style(out);
  Program p = load(c, out, err);
  ProgramReport report = check_program(p);
  if (c.json) {
    Json j = program_report_to_json(p, report);
    j["file"] = c.file;
    out << j.dump(2) << "\n";
  } else if (!c.quiet) {
    const GradeMonoid& m = p.monoid();
    out << c.file << ": " << (report.ok() ? style.good("ok") : style.bad("type errors")) << "\n";
    for (const auto& r : report.methods) {
      out << "  " << std::left << std::setw(24) << (r.actor + "." + r.method);
      if (!r.computed) {
        out << style.bad("untyped") << "\n";
        continue;
      }
      out << (r.ok ? "ok " : style.bad("bad")) << "  measure "
          << format_measure(r.computed->measure) << "  "
          << style.dim("requires " + print_ctx(m, r.computed->requires_ctx) + " produces " +
                       print_ctx(m, r.computed->produces_ctx))
          << "\n";
    }
    if (report.config)
      out << "  initial configuration   measure " << format_measure(report.config->measure)
          << "\n";
  }
  if (!c.json) print_errors(c, report.errors, style, err);
  return report.ok() ? kExitOk : kExitTypeError;
}

// Lists successors on `err` and reads an index from `in`.
Chooser stepper(const Program& p, std::istream& in, std::ostream& err) {
  return [&p, &in, &err](const Configuration& current,
                         const std::vector<StepResult>& options) -> std::optional<std::size_t> {
    const GradeMonoid& m = p.monoid();
    err << print_config(m, current) << "\n";
    for (std::size_t i = 0; i < options.size(); ++i) {
      const auto& s = options[i];
      err << "  [" << i << "] " << s.rule << " " << s.actor;
      if (!s.expr_rule.empty()) err << " (" << s.expr_rule << ")";
      err << "  " << print_label(m, s.label) << "\n";
    }
    while (true) {
      err << "step> " << std::flush;
      std::string line;
      if (!std::getline(in, line) || line == "q") return std::nullopt;
      try {
        std::size_t k = std::stoul(line);
        if (k < options.size()) return k;
      } catch (const std::exception&) {
      }
      err << "enter 0-" << options.size() - 1 << " or q\n";
    }
  };
}

int cmd_run(const Common& c, const RunOptions& o, std::istream& in, std::ostream& out,
            std::ostream& err) {
  Style style(out);
  Program p = load(c, out, err);
  ProgramReport report = check_program(p);
  if (!report.ok() && !o.unsafe) {
    print_errors(c, report.errors, style, err);
    return kExitTypeError;
  }
  Configuration start = initial_configuration(p);
  Trace trace;
  std::string failure;
  if (o.strategy == "helpful") {
    if (!report.ok()) {
      err << "helpful strategy needs a well-typed program\n";
      return kExitTypeError;
    }
    HelpfulRun h = helpful_run(p, start, o.steps);
    trace = std::move(h.trace);
    if (trace.status != RunStatus::kStuck) failure = h.failure;
  } else {
    Chooser choose;
    std::string script_error;
    if (o.strategy == "random") {
      choose = random_chooser(o.seed);
    } else if (o.strategy == "fifo") {
      choose = fifo_chooser();
    } else if (o.strategy == "step") {
      choose = stepper(p, in, err);
    } else if (o.strategy == "script") {
      if (o.script.empty()) {
        err << "--strategy script needs --script FILE\n";
        return kExitParseError;
      }
      choose = script_chooser(parse_script(read_file(o.script, err)), &script_error);
    }
    trace = run(p, start, choose, o.steps);
    if (report.ok()) {
      trace.initial_measure = measure_of(p, trace.initial);
      for (auto& s : trace.steps) s.measure = measure_of(p, s.config);
    }
    failure = script_error;
  }

  out << trace_to_jsonl(p.monoid(), trace);
  if (!c.quiet) {
    if (c.json) {
      Json s;
      s["schema"] = kSchema;
      s["status"] = std::string(run_status_name(trace.status));
      s["steps"] = trace.steps.size();
      Json d = Json::array();
      for (const auto& x : trace.stuck) d.push_back(diagnosis_to_json(p.monoid(), x));
      s["diagnosis"] = std::move(d);
      if (!failure.empty()) s["failure"] = failure;
      err << s.dump() << "\n";
    } else {
      err << run_status_name(trace.status) << " after " << trace.steps.size() << " steps\n";
      for (const auto& x : trace.stuck)
        err << "  " << style.bad(format_diagnosis(p.monoid(), x)) << "\n";
      if (!failure.empty()) err << "  " << style.bad(failure) << "\n";
    }
  }
  if (trace.status == RunStatus::kStuck) return kExitStuck;
  if (!failure.empty()) return kExitTypeError;
  return kExitOk;
}

int cmd_explore(const Common& c, const ExploreOptions& o, std::ostream& out, std::ostream& err) {
  Style style(out);
  Program p = load(c, out, err);
  ProgramReport report = check_program(p);
  if (!report.ok() && !o.unsafe) {
    print_errors(c, report.errors, style, err);
    return kExitTypeError;
  }
  ExploreBounds b;
  b.max_depth = o.depth;
  b.max_states = o.states;
  b.unfold = o.unfold;
  b.jobs = o.jobs;
  b.check_measures = report.ok();
  ExploreResult r = explore(p, initial_configuration(p), b);
  if (c.json) {
    Json j = explore_to_json(p.monoid(), r, b);
    j["file"] = c.file;
    out << j.dump(2) << "\n";
  } else if (!c.quiet) {
    std::string v(verdict_name(r.verdict));
    out << c.file << ": "
        << (r.verdict == VerdictKind::kFairTerminating ? style.good(v) : style.bad(v)) << "\n";
    out << "  states " << r.states << ", transitions " << r.transitions << ", max depth "
        << r.max_depth << ", terminated " << r.terminated_states << "\n";
    out << "  pruned " << r.pruned_transitions << ", truncated " << r.truncated_states
        << ", frontier " << r.frontier_states << "\n";
    if (b.check_measures)
      out << "  helpful-direction violations " << r.helpful_violations
          << ", measure-zero violations " << r.zero_violations << ", untyped states "
          << r.untyped_states << "\n";
    if (r.stuck_state) {
      out << "  stuck: " << print_config(p.monoid(), *r.stuck_state) << "\n";
      for (const auto& d : r.diagnosis)
        out << "    " << style.bad(format_diagnosis(p.monoid(), d)) << "\n";
    }
  }
  if (r.verdict == VerdictKind::kFairTerminating) return kExitOk;
  if (r.verdict == VerdictKind::kStuckFound) return kExitStuck;
  return kExitNotFairTerminating;
}

int cmd_sr(const Common& c, const SrOptions& o, std::ostream& out, std::ostream& err) {
  Style style(out);
  Program p = load(c, out, err);
  ProgramReport report = check_program(p);
  if (!report.ok()) {
    print_errors(c, report.errors, style, err);
    return kExitTypeError;
  }
  Json j;
  j["schema"] = kSchema;
  j["file"] = c.file;
  std::uint64_t total = 0;
  std::optional<SrViolation> violation;
  std::optional<std::uint64_t> bad_seed;

  if (!o.replay.empty()) {
    Trace t;
    try {
      t = trace_from_jsonl(p, read_file(o.replay, err));
    } catch (const SerializeError& e) {
      err << o.replay << ": " << e.what() << "\n";
      return kExitParseError;
    }
    SrReport r = check_subject_reduction(p, t);
    total = r.steps_checked;
    violation = r.violation;
    j["replay"] = o.replay;
  } else {
    for (std::uint64_t i = 0; i < o.runs && !violation; ++i) {
      std::uint64_t seed = o.seed + i;
      Trace t = run(p, initial_configuration(p), random_chooser(seed), o.steps);
      SrReport r = check_subject_reduction(p, t);
      total += r.steps_checked;
      if (r.violation) {
        violation = r.violation;
        bad_seed = seed;
      }
    }
    j["runs"] = o.runs;
    j["seed"] = o.seed;
    j["maxSteps"] = o.steps;
  }
  j["ok"] = !violation.has_value();
  j["stepsChecked"] = total;
  if (violation) {
    Json v{{"step", violation->step}, {"code", violation->code}, {"detail", violation->detail}};
    if (bad_seed) v["seed"] = *bad_seed;
    j["violation"] = std::move(v);
  }

  if (c.json) {
    out << j.dump(2) << "\n";
  } else if (!c.quiet) {
    if (violation) {
      out << c.file << ": " << style.bad("subject reduction violated") << " at step "
          << violation->step;
      if (bad_seed) out << " of the run with seed " << *bad_seed;
      out << "\n  " << violation->code << ": " << violation->detail << "\n";
    } else {
      out << c.file << ": " << style.good("ok") << ", " << total << " steps re-typed\n";
    }
  }
  return violation ? kExitSrViolation : kExitOk;
}

int cmd_print(const Common& c, std::ostream& out, std::ostream& err) {
  Program p = load(c, out, err);
  if (c.json) {
    Json j;
    j["schema"] = kSchema;
    j["program"] = print_program(p);
    j["initial"] = config_to_json(p.monoid(), initial_configuration(p));
    out << j.dump(2) << "\n";
  } else if (!c.quiet) {
    out << print_program(p);
  }
  return kExitOk;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("file", c.file, "Program file (.gract)")->required();
  sub->add_flag("--json", c.json, "Machine-readable output");
  sub->add_flag("--quiet", c.quiet, "Suppress human-readable output");
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"gract: graded actors with futures"};
  app.require_subcommand(1);
  Common common;
  RunOptions run_opts;
  ExploreOptions explore_opts;
  SrOptions sr_opts;

  auto* check = app.add_subcommand("check", "Type-check a program");
  add_common(check, common);

  auto* runc = app.add_subcommand("run", "Run a program and print its trace as JSON lines");
  add_common(runc, common);
  runc->add_option("--seed", run_opts.seed, "Random seed");
  runc->add_option("--steps", run_opts.steps, "Step bound");
  runc->add_option("--strategy", run_opts.strategy, "Successor choice")
      ->check(CLI::IsMember({"random", "helpful", "fifo", "step", "script"}));
  runc->add_option("--script", run_opts.script, "Script file for --strategy script");
  runc->add_flag("--unsafe", run_opts.unsafe, "Run even if type checking fails");

  auto* exp = app.add_subcommand("explore", "Explore the bounded state space");
  add_common(exp, common);
  exp->add_option("--depth", explore_opts.depth, "Maximum depth");
  exp->add_option("--states", explore_opts.states, "Maximum number of states")
      ->check(CLI::PositiveNumber);
  exp->add_option("--unfold", explore_opts.unfold, "Recursive branch choices per actor");
  exp->add_option("--jobs", explore_opts.jobs, "Worker threads")->check(CLI::PositiveNumber);
  exp->add_flag("--unsafe", explore_opts.unsafe, "Explore even if type checking fails");

  auto* sr = app.add_subcommand("sr", "Check subject reduction along runs");
  add_common(sr, common);
  sr->add_option("--runs", sr_opts.runs, "Number of random runs");
  sr->add_option("--seed", sr_opts.seed, "Seed of the first run");
  sr->add_option("--steps", sr_opts.steps, "Step bound per run");
  sr->add_option("--replay", sr_opts.replay, "Check this JSON-lines trace instead");

  auto* print = app.add_subcommand("print", "Pretty-print a program");
  add_common(print, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParseError;
  }

  try {
    if (check->parsed()) return cmd_check(common, out, err);
    if (runc->parsed()) return cmd_run(common, run_opts, in, out, err);
    if (exp->parsed()) return cmd_explore(common, explore_opts, out, err);
    if (sr->parsed()) return cmd_sr(common, sr_opts, out, err);
    return cmd_print(common, out, err);
  } catch (const Exit& e) {
    return e.code;
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kExitParseError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitTypeError;
  }
}

}  // namespace gract
