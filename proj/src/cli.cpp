/*
 * Copyright 2026 The depprof Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "depprof/cli.hpp"

#include <pthread.h>

#include <algorithm>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "depprof/dedup.hpp"
#include "depprof/hash.hpp"
#include "depprof/jobs.hpp"
#include "depprof/report.hpp"
#include "depprof/service.hpp"

namespace depprof {

namespace {

using json::Json;
using jobs::JobKind;

struct Options {
  std::vector<std::string> files;
  unsigned threads = 1;
  std::string format = "human";
  bool json_flag = false;
  std::string output;
  char separator = ',';
  bool no_header = false;
  std::string null_token;

  std::size_t max_lhs = 3;
  std::string nulls;
  std::string threshold;
  std::vector<std::string> lhs, rhs;
  std::string metric;
  double p = 0.0;
  double radius = 0.0, ratio = 0.0;
  bool invert_display = false, show_filtered = false;
  std::size_t window = 5, k = 1;
  std::string key;
  std::vector<std::string> exclude_keys;
  std::string auto_mode;
  std::string answers;
  std::string journal;
  std::string cleaned;
  std::vector<std::string> thresholds;
  std::string d;
  double step = 1.0;
  bool cumulative = false;
  std::vector<std::string> accept;
  std::string state;

  ServiceOptions serve;
};

// A leaf subcommand plus the options that map onto job parameters.
struct Leaf {
  CLI::App* app = nullptr;
  JobKind kind{};
  std::vector<std::pair<CLI::Option*, std::function<void(Json&)>>> params;

  template <typename F>
  void param(CLI::Option* opt, F fill) {
    params.emplace_back(opt, fill);
  }
};

void add_common(CLI::App* sub, Options& o, bool many_files) {
  if (many_files) {
    sub->add_option("files", o.files, "Partition CSV files, in arrival order")->required()->check(CLI::ExistingFile);
  } else {
    sub->add_option("file", o.files, "Input CSV file")->required()->expected(1)->check(CLI::ExistingFile);
  }
  sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"human", "json"}));
  sub->add_flag("--json", o.json_flag, "Same as --format json");
  sub->add_option("--output,-o", o.output, "Write the report to a file");
  sub->add_option("--separator", o.separator, "CSV field separator");
  sub->add_flag("--no-header", o.no_header, "First CSV line is data");
  sub->add_option("--null-token", o.null_token, "Cell text read as null");
}

void add_max_lhs(Leaf& leaf, Options& o) {
  leaf.param(leaf.app->add_option("--max-lhs", o.max_lhs, "Largest left-hand side"),
             [&o](Json& p) { p["max_lhs"] = o.max_lhs; });
}

void add_threshold(Leaf& leaf, Options& o) {
  leaf.param(leaf.app->add_option("--threshold", o.threshold, "g1 error threshold, e.g. 0.05 or 1/20"),
             [&o](Json& p) { p["threshold"] = o.threshold; });
}

void add_nulls(Leaf& leaf, Options& o) {
  leaf.param(leaf.app->add_option("--nulls", o.nulls, "Null comparison: equal or distinct")
                 ->check(CLI::IsMember({"equal", "distinct"})),
             [&o](Json& p) { p["nulls"] = o.nulls; });
}

std::string partition_id(const std::string& path, const std::vector<std::string>& all) {
  const std::string stem = std::filesystem::path(path).stem().string();
  const auto same = std::count_if(all.begin(), all.end(), [&](const std::string& other) {
    return std::filesystem::path(other).stem().string() == stem;
  });
  return same > 1 ? path : stem;
}

void write_file(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write '" + path + "'");
    f << text;
    if (!f.flush()) throw Error("cannot write '" + path + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream s(line);
  std::vector<std::string> out;
  for (std::string w; s >> w;) out.push_back(w);
  return out;
}

std::string describe_pair(const dedup::DuplicatePair& pair, const Relation& relation) {
  std::ostringstream out;
  out << "candidate rows " << pair.row_a << " and " << pair.row_b << " (" << pair.match_count << " matching)\n";
  const auto a = relation.find_row(pair.row_a);
  const auto b = relation.find_row(pair.row_b);
  for (AttrIndex x = 0; x < relation.attribute_count(); ++x) {
    auto show = [&](std::size_t r) { return relation.is_null(r, x) ? std::string("<null>") : relation.text(r, x); };
    out << "  " << relation.attribute(x).name << ": " << show(*a) << " | " << show(*b) << "\n";
  }
  out << "keep a|b [copy attr,...], skip, undo, or quit> ";
  return out.str();
}

// Drives a dedup session from an answer stream. Lines: "keep a", "keep b",
// "a", "b" (each optionally followed by "copy name,city"), "skip", "undo",
// "quit". Blank lines and lines starting with '#' are ignored; end of input
// finishes the session.
void drive_session(dedup::Session& session, std::istream& answers, bool prompt, std::ostream& err) {
  while (auto pair = session.propose()) {
    if (prompt) err << describe_pair(*pair, session.current()) << std::flush;
    std::string line;
    std::vector<std::string> words;
    while (words.empty()) {
      if (!std::getline(answers, line)) return;
      if (!line.empty() && line[0] == '#') continue;
      words = split_words(line);
    }
    std::size_t i = 0;
    if (words[i] == "keep") ++i;
    if (i >= words.size()) throw InvalidArgument("answer '" + line + "': keep needs a or b");
    const std::string& verb = words[i];
    if (verb == "quit") return;
    if (verb == "skip") {
      session.skip();
      continue;
    }
    if (verb == "undo") {
      if (!session.undo()) err << "nothing to undo\n";
      continue;
    }
    if (verb != "a" && verb != "b") throw InvalidArgument("answer '" + line + "' not understood");
    dedup::Resolution res{pair->row_a, pair->row_b, verb == "a" ? pair->row_a : pair->row_b, {}};
    if (i + 1 < words.size()) {
      if (words[i + 1] != "copy" || i + 2 >= words.size()) throw InvalidArgument("answer '" + line + "' not understood");
      std::istringstream names(words[i + 2]);
      for (std::string name; std::getline(names, name, ',');) {
        auto a = session.current().find_attribute(name);
        if (!a) throw InvalidArgument("answer '" + line + "': unknown attribute '" + name + "'");
        res.copy_attrs.insert(*a);
      }
    }
    session.decide(res);
  }
}

Json run_dedup_session(Json result, const Relation& relation, const Options& o, std::istream& in,
                       std::ostream& err) {
  std::vector<dedup::DuplicatePair> candidates;
  for (const auto& p : jobs::instances(result)) candidates.push_back(json::duplicate_pair_from_json(p));
  dedup::Session session(relation, candidates);
  if (o.auto_mode == "keep-first") {
    while (auto pair = session.propose()) session.decide({pair->row_a, pair->row_b, pair->row_a, {}});
  } else if (!o.answers.empty()) {
    std::ifstream answers(o.answers);
    if (!answers) throw Error("cannot open '" + o.answers + "'");
    drive_session(session, answers, false, err);
  } else {
    drive_session(session, in, true, err);
  }
  result["journal"] = json::journal_to_json(session.journal());
  result["rows_after"] = session.current().row_count();
  result["state_hash"] = relation_hash(session.current());
  CsvConfig csv{o.separator, !o.no_header, o.null_token};
  if (!o.journal.empty()) write_file(o.journal, json::dump(result["journal"]));
  if (!o.cleaned.empty()) write_file(o.cleaned, to_csv(session.current(), csv));
  return result;
}

// SIGINT and SIGTERM stop the service from a dedicated thread; SIGUSR1
// releases that thread once the service has returned.
int serve(const ServiceOptions& options, std::ostream& out, std::ostream& err) {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  sigaddset(&set, SIGUSR1);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  Service service(options);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    if (sig != SIGUSR1) service.stop();
  });
  const bool ok = service.run([&](int port) { out << "listening on " << options.host << ":" << port << std::endl; });
  pthread_kill(waiter.native_handle(), SIGUSR1);
  waiter.join();
  if (!ok) {
    err << "error: cannot listen on " << options.host << ":" << options.port << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Dependency profiler: discovery, validation and data-quality scenarios", "depprof"};
  app.set_config("--config", "", "Read options from a TOML file (command-line flags win)");
  app.require_subcommand(1);

  std::vector<Leaf> leaves;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, JobKind kind, bool many) {
    Leaf l{parent->add_subcommand(name, help), kind, {}};
    add_common(l.app, o, many);
    leaves.push_back(std::move(l));
    return &leaves.back();
  };
  leaves.reserve(6);

  auto* discover = app.add_subcommand("discover", "Mine dependencies")->require_subcommand(1);
  auto* validate = app.add_subcommand("validate", "Check a dependency")->require_subcommand(1);
  auto* scenario = app.add_subcommand("scenario", "Run a data-quality scenario")->require_subcommand(1);

  Leaf* fd = leaf(discover, "fd", "Minimal exact functional dependencies", JobKind::kFdDiscovery, false);
  add_max_lhs(*fd, o);
  add_nulls(*fd, o);

  Leaf* afd = leaf(discover, "afd", "Minimal approximate dependencies under g1", JobKind::kAfdDiscovery, false);
  add_max_lhs(*afd, o);
  add_threshold(*afd, o);
  add_nulls(*afd, o);

  Leaf* mfd = leaf(validate, "mfd", "Validate a metric dependency", JobKind::kMfdValidation, false);
  mfd->param(mfd->app->add_option("--lhs", o.lhs, "Left-hand side attributes")->delimiter(','),
             [&o](Json& p) { p["lhs"] = o.lhs; });
  mfd->param(mfd->app->add_option("--rhs", o.rhs, "Right-hand side attributes")->delimiter(',')->required(),
             [&o](Json& p) { p["rhs"] = o.rhs; });
  mfd->param(mfd->app->add_option("--metric", o.metric, "levenshtein or euclidean")->required(),
             [&o](Json& p) { p["metric"] = o.metric; });
  mfd->param(mfd->app->add_option("-p", o.p, "Distance threshold")->required(), [&o](Json& p) { p["p"] = o.p; });
  // An empty --lhs is meaningful (one cluster), so always pass it.
  mfd->params.front().first = nullptr;

  Leaf* typo = leaf(scenario, "typo", "Find likely typos through almost-holding dependencies",
                    JobKind::kScenarioTypo, false);
  add_threshold(*typo, o);
  add_max_lhs(*typo, o);
  typo->param(typo->app->add_option("--radius", o.radius, "Distance counted as close to the central value"),
              [&o](Json& p) { p["radius"] = o.radius; });
  typo->param(typo->app->add_option("--ratio", o.ratio, "Show clusters whose close share is below this"),
              [&o](Json& p) { p["ratio"] = o.ratio; });
  typo->param(typo->app->add_flag("--invert-display", o.invert_display, "Show clusters at or above the ratio"),
              [&o](Json& p) { p["invert_display"] = o.invert_display; });
  typo->app->add_flag("--show-filtered", o.show_filtered, "Also list clusters the filter hides");

  Leaf* dd = leaf(scenario, "dedup", "Find and resolve near-duplicate rows", JobKind::kScenarioDedup, false);
  add_threshold(*dd, o);
  dd->param(dd->app->add_option("--window", o.window, "Sorted-neighbourhood window"),
            [&o](Json& p) { p["window"] = o.window; });
  dd->param(dd->app->add_option("-k", o.k, "Attributes that must match"), [&o](Json& p) { p["k"] = o.k; });
  dd->param(dd->app->add_option("--key", o.key, "Sort key attribute"), [&o](Json& p) { p["key"] = o.key; });
  dd->param(dd->app->add_option("--exclude-key", o.exclude_keys, "Attribute never used as sort key"),
            [&o](Json& p) { p["exclude_keys"] = o.exclude_keys; });
  auto* auto_opt = dd->app->add_option("--auto", o.auto_mode, "Resolve without prompting")
                       ->check(CLI::IsMember({"keep-first"}));
  dd->app->add_option("--answers", o.answers, "Read decisions from a file")->excludes(auto_opt);
  dd->app->add_option("--journal", o.journal, "Write the decision journal to a file");
  dd->app->add_option("--cleaned", o.cleaned, "Write the resolved relation to a CSV file");

  Leaf* an = leaf(scenario, "anomaly", "Compare partitions against a canonical dependency set",
                  JobKind::kScenarioAnomaly, true);
  add_max_lhs(*an, o);
  an->param(an->app->add_option("--thresholds", o.thresholds, "Ascending g1 thresholds to probe")->delimiter(','),
            [&o](Json& p) { p["thresholds"] = o.thresholds; });
  an->param(an->app->add_option("--d", o.d, "Largest p to sweep, or auto"), [&o](Json& p) {
    if (o.d == "auto") {
      p["d"] = "auto";
      return;
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(o.d, &used);
    } catch (const std::exception&) {
    }
    if (used != o.d.size() || used == 0) throw InvalidArgument("--d must be a number or auto");
    p["d"] = value;
  });
  an->param(an->app->add_option("--step", o.step, "Sweep step"), [&o](Json& p) { p["step"] = o.step; });
  an->param(an->app->add_flag("--cumulative", o.cumulative, "Mine each partition together with earlier ones"),
            [&o](Json& p) { p["cumulative"] = o.cumulative; });
  an->app->add_option("--accept", o.accept, "Partition id to accept as the new canonical set");
  an->app->add_option("--answers", o.answers, "One accept/reject line per partition");
  an->app->add_option("--state", o.state, "Canonical state file, read and updated");

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP task service");
  serve_cmd->add_option("--storage", o.serve.storage_root, "Storage root directory")
      ->envname("DEPPROF_STORAGE")
      ->capture_default_str();
  serve_cmd->add_option("--host", o.serve.host, "Listen address")->capture_default_str();
  serve_cmd->add_option("--port", o.serve.port, "Listen port, 0 for any")->capture_default_str();
  serve_cmd->add_option("--workers", o.serve.workers, "Concurrent tasks")->check(CLI::Range(1u, 256u));
  serve_cmd->add_option("--threads", o.serve.task_threads, "Threads per task")->check(CLI::Range(1u, 1024u));
  serve_cmd->add_option("--result-cap", o.serve.result_cap, "Largest results page")->check(CLI::Range(1, 1000000));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (serve_cmd->parsed()) return serve(o.serve, out, err);

    const Leaf* chosen = nullptr;
    for (const auto& l : leaves) {
      if (l.app->parsed()) chosen = &l;
    }
    if (!chosen) throw InvalidArgument("no command given");

    Json params = Json::object();
    for (const auto& [opt, fill] : chosen->params) {
      if (!opt || opt->count() > 0) fill(params);
    }
    if (o.threads > 1) params["threads"] = o.threads;

    const CsvConfig csv{o.separator, !o.no_header, o.null_token};
    jobs::JobInput input;
    for (const auto& f : o.files) input.partitions.push_back({partition_id(f, o.files), load_csv_file(f, csv)});

    if (chosen->kind == JobKind::kScenarioAnomaly) {
      std::vector<std::string> accept = o.accept;
      if (!o.answers.empty()) {
        std::ifstream answers(o.answers);
        if (!answers) throw Error("cannot open '" + o.answers + "'");
        for (const auto& part : input.partitions) {
          std::string line;
          while (std::getline(answers, line) && (split_words(line).empty() || line[0] == '#')) {
          }
          const auto words = split_words(line);
          if (!words.empty() && words[0] == "accept") accept.push_back(part.id);
        }
      }
      params["accept"] = accept;
      if (!o.state.empty() && std::filesystem::exists(o.state)) {
        input.state = json::anomaly_state_from_json(Json::parse(read_file(o.state)));
      }
    }

    // Options are checked against the data before any mining starts.
    jobs::normalize_params(chosen->kind, params, input.partitions.front().relation);
    Json result = jobs::run(chosen->kind, params, input);

    if (chosen->kind == JobKind::kScenarioDedup) {
      result = run_dedup_session(std::move(result), input.partitions.front().relation, o, in, err);
    }
    if (chosen->kind == JobKind::kScenarioAnomaly && !o.state.empty()) {
      write_file(o.state, json::dump(result["state"]));
    }

    const OutputMode mode = (o.json_flag || o.format == "json") ? OutputMode::kJson : OutputMode::kHuman;
    const std::string text = render_report(result, mode, o.show_filtered);
    if (o.output.empty()) {
      out << text;
    } else {
      write_file(o.output, text);
    }

    if (chosen->kind == JobKind::kMfdValidation && !result["verdict"]["holds"].get<bool>()) {
      return kExitValidationFailed;
    }
    return kExitOk;
  } catch (const jobs::InvalidParams& e) {
    for (const auto& p : e.problems()) err << "error: " << p.field << ": " << p.message << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace depprof
