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

#include "depprof/jobs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "depprof/dedup.hpp"
#include "depprof/parallel.hpp"
#include "depprof/typo.hpp"

namespace depprof::jobs {

namespace {

constexpr std::array<std::pair<JobKind, std::string_view>, 6> kKinds{{
    {JobKind::kFdDiscovery, "fd_discovery"},
    {JobKind::kAfdDiscovery, "afd_discovery"},
    {JobKind::kMfdValidation, "mfd_validation"},
    {JobKind::kScenarioTypo, "scenario_typo"},
    {JobKind::kScenarioDedup, "scenario_dedup"},
    {JobKind::kScenarioAnomaly, "scenario_anomaly"},
}};

std::string describe_problems(const std::vector<Problem>& problems) {
  std::string out = "invalid parameters:";
  for (const auto& p : problems) out += " " + p.field + ": " + p.message + ";";
  out.pop_back();
  return out;
}

// Reads typed fields out of a parameter document, collecting problems instead
// of stopping at the first one.
class Reader {
 public:
  Reader(const Json& doc, std::vector<Problem>& problems) : doc_(doc), problems_(problems) {
    if (!doc_.is_null() && !doc_.is_object()) problems_.push_back({"params", "must be an object"});
  }

  std::uint64_t uint(const char* name, std::uint64_t fallback, std::uint64_t lo, std::uint64_t hi) {
    const Json* v = find(name);
    if (!v) return fallback;
    if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
      fail(name, "must be a non-negative integer");
      return fallback;
    }
    const auto value = v->get<std::uint64_t>();
    if (value < lo || value > hi) {
      fail(name, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      return fallback;
    }
    return value;
  }

  double number(const char* name, double fallback) {
    const Json* v = find(name);
    if (!v) return fallback;
    if (!v->is_number()) {
      fail(name, "must be a number");
      return fallback;
    }
    return v->get<double>();
  }

  bool boolean(const char* name, bool fallback) {
    const Json* v = find(name);
    if (!v) return fallback;
    if (!v->is_boolean()) {
      fail(name, "must be true or false");
      return fallback;
    }
    return v->get<bool>();
  }

  std::optional<std::string> text(const char* name) {
    const Json* v = find(name);
    if (!v || v->is_null()) return std::nullopt;
    if (!v->is_string()) {
      fail(name, "must be a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::vector<std::string> texts(const char* name) {
    const Json* v = find(name);
    if (!v) return {};
    if (v->is_string()) return {v->get<std::string>()};
    if (!v->is_array() || !std::all_of(v->begin(), v->end(), [](const Json& e) { return e.is_string(); })) {
      fail(name, "must be a list of strings");
      return {};
    }
    return v->get<std::vector<std::string>>();
  }

  Rational rational(const char* name, Rational fallback) {
    const Json* v = find(name);
    if (!v) return fallback;
    return to_rational(name, *v).value_or(fallback);
  }

  std::vector<Rational> rationals(const char* name, std::vector<Rational> fallback) {
    const Json* v = find(name);
    if (!v) return fallback;
    if (!v->is_array()) {
      fail(name, "must be a list of fractions");
      return fallback;
    }
    std::vector<Rational> out;
    for (const auto& e : *v) {
      auto r = to_rational(name, e);
      if (!r) return fallback;
      out.push_back(*r);
    }
    return out;
  }

  bool has(const char* name) const { return doc_.is_object() && doc_.contains(name); }

  const Json* find(const char* name) const {
    if (!doc_.is_object()) return nullptr;
    auto it = doc_.find(name);
    return it == doc_.end() ? nullptr : &*it;
  }

  void fail(const std::string& name, const std::string& message) { problems_.push_back({name, message}); }

  void reject_unknown(std::initializer_list<std::string_view> known) {
    if (!doc_.is_object()) return;
    for (const auto& [key, _] : doc_.items()) {
      if (key == "threads") continue;
      if (std::find(known.begin(), known.end(), key) == known.end()) fail(key, "unknown parameter");
    }
  }

 private:
  std::optional<Rational> to_rational(const char* name, const Json& v) {
    try {
      if (v.is_number() && v.get<double>() < 0) throw InvalidArgument("negative");
      Rational r = json::rational_from_json(v);
      if (r > Rational(1, 1)) {
        fail(name, "must lie in [0, 1]");
        return std::nullopt;
      }
      return r;
    } catch (const Error&) {
      fail(name, "must be a fraction in [0, 1] such as 0.05 or 1/20");
      return std::nullopt;
    }
  }

  const Json& doc_;
  std::vector<Problem>& problems_;
};

std::optional<AttrIndex> attribute(Reader& in, const Relation& relation, const std::string& field,
                                   const std::string& name) {
  auto a = relation.find_attribute(name);
  if (!a) in.fail(field, "unknown attribute '" + name + "'");
  return a;
}

std::vector<AttrIndex> attributes(Reader& in, const Relation& relation, const std::string& field,
                                  const std::vector<std::string>& names) {
  std::vector<AttrIndex> out;
  for (const auto& n : names) {
    if (auto a = attribute(in, relation, field, n)) out.push_back(*a);
  }
  return out;
}

const std::uint64_t kMaxLhs = 63;

Json rational_text(const Rational& r) { return r.to_string(); }

void check_relation(const Relation& relation, std::vector<Problem>& problems) {
  if (relation.attribute_count() > 64) problems.push_back({"dataset", "at most 64 columns are supported"});
}

NullSemantics nulls_of(Reader& in) {
  auto text = in.text("nulls").value_or("equal");
  if (text == "equal") return NullSemantics::kEqual;
  if (text == "distinct") return NullSemantics::kDistinct;
  in.fail("nulls", "must be 'equal' or 'distinct'");
  return NullSemantics::kEqual;
}

std::string_view to_string(NullSemantics nulls) { return nulls == NullSemantics::kEqual ? "equal" : "distinct"; }

// Parsed forms of each parameter document. `normalize_params` and `run` both
// go through these so the two can never disagree.

struct FdParams {
  std::size_t max_lhs;
  NullSemantics nulls;
  Rational threshold;  // afd only
};

FdParams parse_fd(const Json& params, const Relation& relation, bool approximate) {
  std::vector<Problem> problems;
  Reader in(params, problems);
  check_relation(relation, problems);
  if (approximate) {
    in.reject_unknown({"max_lhs", "nulls", "threshold"});
  } else {
    in.reject_unknown({"max_lhs", "nulls"});
  }
  FdParams out{in.uint("max_lhs", 3, 1, kMaxLhs), nulls_of(in), Rational{}};
  if (approximate) out.threshold = in.rational("threshold", Rational(1, 100));
  if (!problems.empty()) throw InvalidParams(problems);
  return out;
}

MFDStatement parse_mfd(const Json& params, const Relation& relation) {
  std::vector<Problem> problems;
  Reader in(params, problems);
  in.reject_unknown({"lhs", "rhs", "metric", "p"});
  MFDStatement stmt;
  stmt.lhs = attributes(in, relation, "lhs", in.texts("lhs"));
  std::sort(stmt.lhs.begin(), stmt.lhs.end());
  stmt.lhs.erase(std::unique(stmt.lhs.begin(), stmt.lhs.end()), stmt.lhs.end());
  if (!in.has("rhs")) in.fail("rhs", "required");
  stmt.rhs = attributes(in, relation, "rhs", in.texts("rhs"));
  if (in.has("rhs") && stmt.rhs.empty() && problems.empty()) in.fail("rhs", "needs at least one attribute");
  const auto metric = in.text("metric");
  if (!metric) {
    in.fail("metric", "required");
  } else {
    try {
      stmt.metric = parse_metric(*metric);
    } catch (const Error& e) {
      in.fail("metric", e.what());
    }
  }
  if (!in.has("p")) in.fail("p", "required");
  stmt.p = in.number("p", 0.0);
  if (!(stmt.p >= 0.0) || !std::isfinite(stmt.p)) in.fail("p", "must be a finite non-negative number");
  if (problems.empty()) {
    try {
      check_statement(relation, stmt);
    } catch (const TypeMismatch& e) {
      in.fail("metric", e.what());
    } catch (const Error& e) {
      in.fail("rhs", e.what());
    }
  }
  if (!problems.empty()) throw InvalidParams(problems);
  return stmt;
}

typo::TypoConfig parse_typo(const Json& params, const Relation& relation) {
  std::vector<Problem> problems;
  Reader in(params, problems);
  check_relation(relation, problems);
  in.reject_unknown({"threshold", "radius", "ratio", "max_lhs", "invert_display"});
  typo::TypoConfig cfg;
  cfg.threshold = in.rational("threshold", cfg.threshold);
  cfg.radius = in.number("radius", cfg.radius);
  if (!(cfg.radius >= 0.0)) in.fail("radius", "must be non-negative");
  cfg.ratio = in.number("ratio", cfg.ratio);
  if (!(cfg.ratio >= 0.0 && cfg.ratio <= 1.0)) in.fail("ratio", "must lie in [0, 1]");
  cfg.max_lhs = in.uint("max_lhs", cfg.max_lhs, 1, kMaxLhs);
  cfg.invert_display = in.boolean("invert_display", cfg.invert_display);
  if (!problems.empty()) throw InvalidParams(problems);
  return cfg;
}

struct DedupParams {
  dedup::DedupConfig cfg;
  std::optional<AttrIndex> key;
};

DedupParams parse_dedup(const Json& params, const Relation& relation) {
  std::vector<Problem> problems;
  Reader in(params, problems);
  check_relation(relation, problems);
  in.reject_unknown({"threshold", "window", "k", "key", "exclude_keys"});
  DedupParams out;
  out.cfg.threshold = in.rational("threshold", out.cfg.threshold);
  out.cfg.window = in.uint("window", out.cfg.window, 2, std::uint64_t{1} << 32);
  const std::size_t m = relation.attribute_count();
  out.cfg.k = in.uint("k", std::min<std::size_t>(out.cfg.k, m), 1, std::max<std::size_t>(m, 1));
  for (AttrIndex a : attributes(in, relation, "exclude_keys", in.texts("exclude_keys"))) {
    out.cfg.excluded_keys.insert(a);
  }
  if (auto key = in.text("key")) {
    out.key = attribute(in, relation, "key", *key);
    if (out.key && out.cfg.excluded_keys.contains(*out.key)) in.fail("key", "is also excluded");
  }
  if (!problems.empty()) throw InvalidParams(problems);
  return out;
}

struct AnomalyParams {
  std::size_t max_lhs;
  std::vector<Rational> thresholds;
  std::optional<double> d;  // nullopt: suggested from the data
  double step;
  bool cumulative;
  std::vector<std::string> accept;
  std::vector<std::string> partitions;
  std::optional<std::string> state;
};

AnomalyParams parse_anomaly(const Json& params, const Relation& relation) {
  std::vector<Problem> problems;
  Reader in(params, problems);
  check_relation(relation, problems);
  in.reject_unknown({"max_lhs", "thresholds", "d", "step", "cumulative", "accept", "partitions", "state"});
  AnomalyParams out;
  out.max_lhs = in.uint("max_lhs", 3, 1, kMaxLhs);
  out.thresholds = in.rationals("thresholds", {Rational(1, 100), Rational(1, 20), Rational(1, 10)});
  if (!std::is_sorted(out.thresholds.begin(), out.thresholds.end())) in.fail("thresholds", "must ascend");
  if (const Json* d = in.find("d"); d && *d == "auto") {
    out.d = std::nullopt;
  } else if (d && !d->is_number()) {
    in.fail("d", "must be a positive number or \"auto\"");
  } else {
    out.d = in.number("d", 10.0);
  }
  out.step = in.number("step", 1.0);
  if (!(out.step > 0.0) || !std::isfinite(out.step)) in.fail("step", "must be positive");
  if (out.d && (!(*out.d > 0.0) || !std::isfinite(*out.d))) in.fail("d", "must be positive");
  if (out.d && problems.empty() && out.step > *out.d) in.fail("step", "exceeds d");
  out.cumulative = in.boolean("cumulative", false);
  out.accept = in.texts("accept");
  out.partitions = in.texts("partitions");
  out.state = in.text("state");
  if (!problems.empty()) throw InvalidParams(problems);
  return out;
}

Json dataset_of(const JobInput& input) {
  if (input.partitions.empty()) throw InvalidArgument("job needs a dataset");
  return describe(input.partitions.front().relation);
}

std::vector<std::string> schema_of(const Relation& relation) { return relation.attribute_names(); }

Json run_fd(const Json& params, const JobInput& input, std::stop_token stop) {
  const Relation& r = input.partitions.front().relation;
  const FdParams p = parse_fd(params, r, false);
  DiscoveryOptions opts{p.max_lhs, threads_of(params), p.nulls, stop};
  FDSet set = discover_fds(r, opts);
  Json instances = Json::array();
  for (const auto& fd : set.fds) instances.push_back(json::to_json(fd, set.schema));
  return {{"schema", set.schema}, {"instances", std::move(instances)}};
}

Json run_afd(const Json& params, const JobInput& input, std::stop_token stop) {
  const Relation& r = input.partitions.front().relation;
  const FdParams p = parse_fd(params, r, true);
  DiscoveryOptions opts{p.max_lhs, threads_of(params), p.nulls, stop};
  const auto schema = schema_of(r);
  Json instances = Json::array();
  for (const auto& afd : discover_afds(r, p.threshold, opts)) instances.push_back(json::to_json(afd, schema));
  return {{"schema", schema}, {"instances", std::move(instances)}};
}

Json run_mfd(const Json& params, const JobInput& input, std::stop_token stop) {
  const Relation& r = input.partitions.front().relation;
  const MFDStatement stmt = parse_mfd(params, r);
  throw_if_cancelled(stop);
  MFDVerdict verdict = validate_mfd(r, stmt, threads_of(params));
  Json v = json::to_json(verdict);
  Json instances = std::move(v["violating_clusters"]);
  v.erase("violating_clusters");
  return {{"statement", json::to_json(stmt, schema_of(r))}, {"verdict", std::move(v)},
          {"instances", std::move(instances)}};
}

Json run_typo(const Json& params, const JobInput& input, std::stop_token stop) {
  const Relation& r = input.partitions.front().relation;
  typo::TypoConfig cfg = parse_typo(params, r);
  cfg.threads = threads_of(params);
  const auto schema = schema_of(r);
  Json afds = Json::array();
  Json instances = Json::array();
  for (const auto& afd : typo::mine_almost_fds(r, cfg)) {
    throw_if_cancelled(stop);
    afds.push_back(json::to_json(afd, schema));
    for (const auto& cluster : typo::violation_clusters(r, afd.fd)) {
      instances.push_back(json::to_json(cluster, cfg, schema));
    }
  }
  return {{"afds", std::move(afds)}, {"instances", std::move(instances)}};
}

Json run_dedup(const Json& params, const JobInput& input, std::stop_token stop) {
  const Relation& r = input.partitions.front().relation;
  const DedupParams p = parse_dedup(params, r);
  const auto schema = schema_of(r);
  auto keys = dedup::rank_dedup_keys(r, p.cfg);
  throw_if_cancelled(stop);
  Json key_list = Json::array();
  for (const auto& k : keys) key_list.push_back(json::to_json(k, schema));

  dedup::KeyCandidate chosen;
  if (p.key) {
    auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& k) { return k.lhs == *p.key; });
    chosen = it != keys.end() ? *it : dedup::KeyCandidate{*p.key, {}, 0, false};
  } else if (!keys.empty()) {
    chosen = keys.front();
  } else {
    // Nothing to rank by: fall back to the first column that is not excluded.
    AttrIndex a = 0;
    while (a + 1 < r.attribute_count() && p.cfg.excluded_keys.contains(a)) ++a;
    chosen = {a, {}, 0, false};
  }
  const auto order = dedup::sort_for_neighborhood(r, chosen);
  Json instances = Json::array();
  for (const auto& pair : dedup::find_duplicates(r, order, p.cfg.window, p.cfg.k)) {
    instances.push_back(json::to_json(pair, schema));
  }
  return {{"keys", std::move(key_list)}, {"key", json::to_json(chosen, schema)}, {"instances", std::move(instances)}};
}

Json run_anomaly(const Json& params, const JobInput& input, std::stop_token stop) {
  const AnomalyParams p = parse_anomaly(params, input.partitions.front().relation);
  const unsigned threads = threads_of(params);
  anomaly::AnomalyState state = input.state;
  Json reports = Json::array();
  std::vector<Relation> seen;
  for (const auto& part : input.partitions) {
    throw_if_cancelled(stop);
    seen.push_back(part.relation);
    const Relation mined_on = p.cumulative ? anomaly::concat_relations(seen) : part.relation;
    FDSet fds = discover_fds(mined_on, {p.max_lhs, threads, NullSemantics::kEqual, stop});
    fds.provenance = part.id;
    const auto diff = anomaly::fd_diff(state.canonical_fds, fds);
    const auto& schema = fds.schema;

    Json probes = Json::array();
    std::vector<MFDStatement> mfds;
    for (const auto& fd : diff.lost) {
      const auto probe = anomaly::afd_probe(mined_on, fd, p.thresholds);
      Json entry{{"fd", json::to_json(fd, schema)},
                 {"g1", json::to_json(probe.g1)},
                 {"first_holding", probe.first_holding ? Json(rational_text(*probe.first_holding)) : Json(nullptr)}};
      const bool numeric = mined_on.attribute(fd.rhs).numeric();
      anomaly::SweepConfig sweep{10.0, p.step, numeric ? Metric::kEuclidean : Metric::kLevenshtein};
      if (p.d) {
        sweep.d = *p.d;
      } else {
        sweep.d = numeric ? std::max(anomaly::suggest_sweep_bound(mined_on, fd.rhs), p.step) : 10.0;
      }
      const auto result = anomaly::mfd_sweep(mined_on, fd, sweep);
      entry["metric"] = to_string(sweep.metric);
      entry["d"] = sweep.d;
      entry["p"] = result.p ? Json(*result.p) : Json(nullptr);
      entry["diameter"] = json::number_or_null(result.verdict.global_diameter);
      entry["diagnostic"] = result.diagnostic;
      if (result.p) mfds.push_back({fd.lhs, {fd.rhs}, sweep.metric, *result.p});
      probes.push_back(std::move(entry));
    }
    const bool accepted = std::find(p.accept.begin(), p.accept.end(), part.id) != p.accept.end();
    if (accepted) state = anomaly::advance_canonical(state, part.id, fds, mfds);
    reports.push_back({{"text", part.id},
                       {"partition_id", part.id},
                       {"rows", mined_on.row_count()},
                       {"fd_count", fds.fds.size()},
                       {"diff", json::to_json(diff, schema)},
                       {"probes", std::move(probes)},
                       {"accepted", accepted}});
  }
  return {{"instances", std::move(reports)}, {"state", json::to_json(state)}};
}

}  // namespace

std::string_view to_string(JobKind kind) {
  for (const auto& [k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "unknown";
}

JobKind parse_kind(std::string_view name) {
  std::string valid;
  for (const auto& [k, n] : kKinds) {
    if (n == name) return k;
    valid += (valid.empty() ? "" : ", ") + std::string(n);
  }
  throw InvalidArgument("unknown task kind '" + std::string(name) + "' (expected one of " + valid + ")");
}

InvalidParams::InvalidParams(std::vector<Problem> problems)
    : InvalidArgument(describe_problems(problems)), problems_(std::move(problems)) {}

unsigned threads_of(const Json& params) {
  if (!params.is_object() || !params.contains("threads")) return 1;
  const Json& t = params["threads"];
  if (!t.is_number_unsigned() || t.get<std::uint64_t>() < 1 || t.get<std::uint64_t>() > 1024) {
    throw InvalidParams(std::vector<Problem>{{"threads", "must be an integer in [1, 1024]"}});
  }
  return t.get<unsigned>();
}

Json normalize_params(JobKind kind, const Json& params, const Relation& relation) {
  threads_of(params);
  switch (kind) {
    case JobKind::kFdDiscovery: {
      auto p = parse_fd(params, relation, false);
      return {{"max_lhs", p.max_lhs}, {"nulls", to_string(p.nulls)}};
    }
    case JobKind::kAfdDiscovery: {
      auto p = parse_fd(params, relation, true);
      return {{"max_lhs", p.max_lhs}, {"nulls", to_string(p.nulls)}, {"threshold", rational_text(p.threshold)}};
    }
    case JobKind::kMfdValidation: {
      auto stmt = parse_mfd(params, relation);
      const auto schema = schema_of(relation);
      Json lhs = Json::array(), rhs = Json::array();
      for (AttrIndex a : stmt.lhs) lhs.push_back(schema[a]);
      for (AttrIndex a : stmt.rhs) rhs.push_back(schema[a]);
      return {{"lhs", lhs}, {"rhs", rhs}, {"metric", to_string(stmt.metric)}, {"p", stmt.p}};
    }
    case JobKind::kScenarioTypo: {
      auto cfg = parse_typo(params, relation);
      return {{"threshold", rational_text(cfg.threshold)},
              {"radius", cfg.radius},
              {"ratio", cfg.ratio},
              {"max_lhs", cfg.max_lhs},
              {"invert_display", cfg.invert_display}};
    }
    case JobKind::kScenarioDedup: {
      auto p = parse_dedup(params, relation);
      const auto schema = schema_of(relation);
      Json excluded = Json::array();
      for (AttrIndex a : p.cfg.excluded_keys) excluded.push_back(schema[a]);
      return {{"threshold", rational_text(p.cfg.threshold)},
              {"window", p.cfg.window},
              {"k", p.cfg.k},
              {"key", p.key ? Json(schema[*p.key]) : Json(nullptr)},
              {"exclude_keys", excluded}};
    }
    case JobKind::kScenarioAnomaly: {
      auto p = parse_anomaly(params, relation);
      Json thresholds = Json::array();
      for (const auto& t : p.thresholds) thresholds.push_back(rational_text(t));
      Json out{{"max_lhs", p.max_lhs},
               {"thresholds", thresholds},
               {"d", p.d ? Json(*p.d) : Json("auto")},
               {"step", p.step},
               {"cumulative", p.cumulative},
               {"accept", p.accept},
               {"partitions", p.partitions}};
      if (p.state) out["state"] = *p.state;
      return out;
    }
  }
  throw InvalidArgument("unknown task kind");
}

Json run(JobKind kind, const Json& params, const JobInput& input, std::stop_token stop) {
  Json out;
  Json dataset = dataset_of(input);
  const Json normalized = normalize_params(kind, params, input.partitions.front().relation);
  switch (kind) {
    case JobKind::kFdDiscovery: out = run_fd(params, input, stop); break;
    case JobKind::kAfdDiscovery: out = run_afd(params, input, stop); break;
    case JobKind::kMfdValidation: out = run_mfd(params, input, stop); break;
    case JobKind::kScenarioTypo: out = run_typo(params, input, stop); break;
    case JobKind::kScenarioDedup: out = run_dedup(params, input, stop); break;
    case JobKind::kScenarioAnomaly: out = run_anomaly(params, input, stop); break;
  }
  out["kind"] = to_string(kind);
  out["params"] = normalized;
  out["dataset"] = std::move(dataset);
  out["total"] = out["instances"].size();
  return out;
}

const Json& instances(const Json& result) {
  if (!result.is_object() || !result.contains("instances") || !result["instances"].is_array()) {
    throw InvalidArgument("result has no instances");
  }
  return result["instances"];
}

Json describe(const Relation& relation) {
  Json attrs = Json::array();
  for (const auto& a : relation.attributes()) attrs.push_back({{"name", a.name}, {"type", to_string(a.inferred_type)}});
  return {{"rows", relation.row_count()}, {"attributes", std::move(attrs)}};
}

}  // namespace depprof::jobs
