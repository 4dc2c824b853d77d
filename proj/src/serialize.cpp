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

#include "depprof/serialize.hpp"

#include <cmath>
#include <limits>

#include "depprof/errors.hpp"

namespace depprof::json {

namespace {

Json names_of(const std::vector<AttrIndex>& attrs, const std::vector<std::string>& schema) {
  Json out = Json::array();
  for (AttrIndex a : attrs) out.push_back(a < schema.size() ? schema[a] : std::to_string(a));
  return out;
}

template <typename T>
T field(const Json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) throw InvalidArgument(std::string("missing field '") + name + "'");
  try {
    return doc.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidArgument(std::string("field '") + name + "' has the wrong type");
  }
}

Json optional_text(const std::optional<std::string>& value) { return value ? Json(*value) : Json(nullptr); }

}  // namespace

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json number_or_null(double value) { return std::isfinite(value) ? Json(value) : Json(nullptr); }

Json to_json(const Rational& value) {
  return {{"num", value.num()}, {"den", value.den()}, {"decimal", value.to_double()}};
}

Rational rational_from_json(const Json& doc) {
  if (doc.is_string()) return Rational::parse(doc.get<std::string>());
  if (doc.is_number_unsigned() || doc.is_number_integer()) {
    if (doc.get<std::int64_t>() < 0) throw InvalidArgument("negative fraction");
    return Rational(doc.get<std::uint64_t>(), 1);
  }
  if (doc.is_number_float()) return Rational::parse(doc.dump());
  return Rational(field<std::uint64_t>(doc, "num"), field<std::uint64_t>(doc, "den"));
}

Json to_json(const FD& fd, const std::vector<std::string>& schema) {
  return {{"text", render_fd(fd, schema)},
          {"lhs", fd.lhs},
          {"lhs_names", names_of(fd.lhs, schema)},
          {"rhs", fd.rhs},
          {"rhs_name", fd.rhs < schema.size() ? schema[fd.rhs] : std::to_string(fd.rhs)}};
}

FD fd_from_json(const Json& doc) {
  FD fd{field<AttrSet>(doc, "lhs"), field<AttrIndex>(doc, "rhs")};
  std::sort(fd.lhs.begin(), fd.lhs.end());
  return fd;
}

Json to_json(const FDSet& set) {
  Json fds = Json::array();
  for (const auto& fd : set.fds) fds.push_back(to_json(fd, set.schema));
  return {{"schema", set.schema}, {"provenance", set.provenance}, {"fds", std::move(fds)}};
}

FDSet fd_set_from_json(const Json& doc) {
  FDSet set;
  set.schema = field<std::vector<std::string>>(doc, "schema");
  if (doc.contains("provenance")) set.provenance = field<std::string>(doc, "provenance");
  for (const auto& fd : field<Json>(doc, "fds")) set.fds.push_back(fd_from_json(fd));
  std::sort(set.fds.begin(), set.fds.end());
  return set;
}

Json to_json(const AFD& afd, const std::vector<std::string>& schema) {
  Json out = to_json(afd.fd, schema);
  out["error"] = to_json(afd.error);
  return out;
}

Json to_json(const MFDStatement& stmt, const std::vector<std::string>& schema) {
  std::string text = "[";
  for (std::size_t i = 0; i < stmt.lhs.size(); ++i) text += (i ? ", " : "") + schema.at(stmt.lhs[i]);
  text += "] -> [";
  for (std::size_t i = 0; i < stmt.rhs.size(); ++i) text += (i ? ", " : "") + schema.at(stmt.rhs[i]);
  text += "] (" + std::string(to_string(stmt.metric)) + ", p=" + Json(stmt.p).dump() + ")";
  return {{"text", text},
          {"lhs", stmt.lhs},
          {"lhs_names", names_of(stmt.lhs, schema)},
          {"rhs", stmt.rhs},
          {"rhs_names", names_of(stmt.rhs, schema)},
          {"metric", to_string(stmt.metric)},
          {"p", stmt.p}};
}

MFDStatement mfd_statement_from_json(const Json& doc) {
  MFDStatement stmt;
  stmt.lhs = field<AttrSet>(doc, "lhs");
  std::sort(stmt.lhs.begin(), stmt.lhs.end());
  stmt.rhs = field<std::vector<AttrIndex>>(doc, "rhs");
  stmt.metric = parse_metric(field<std::string>(doc, "metric"));
  stmt.p = field<double>(doc, "p");
  return stmt;
}

Json to_json(const MFDVerdict& verdict) {
  Json clusters = Json::array();
  for (const auto& c : verdict.violating_clusters) {
    std::string text = "rows";
    for (RowId r : c.rows) text += " " + std::to_string(r);
    clusters.push_back({{"text", text},
                        {"rows", c.rows},
                        {"diameter", c.diameter ? number_or_null(*c.diameter) : Json(nullptr)},
                        {"witness", c.diameter ? Json{c.witness.first, c.witness.second} : Json(nullptr)}});
  }
  return {{"holds", verdict.holds},
          {"global_diameter", number_or_null(verdict.global_diameter)},
          {"clusters_checked", verdict.clusters_checked},
          {"violating_clusters", std::move(clusters)}};
}

Json to_json(const typo::ViolationCluster& cluster, const typo::TypoConfig& cfg,
             const std::vector<std::string>& schema) {
  Json lhs_value = Json::array();
  std::string text = render_fd(cluster.fd, schema) + " @ (";
  for (std::size_t i = 0; i < cluster.lhs_value.size(); ++i) {
    lhs_value.push_back(optional_text(cluster.lhs_value[i]));
    text += (i ? ", " : "") + cluster.lhs_value[i].value_or("null");
  }
  text += ")";
  Json members = Json::array();
  for (const auto& m : cluster.members) {
    members.push_back({{"row", m.row},
                       {"value", optional_text(m.value)},
                       {"distance", number_or_null(m.distance)},
                       {"central", m.value == cluster.central_value}});
  }
  Json fixes = Json::array();
  for (const auto& f : typo::propose_fixes(cluster, cfg.radius)) {
    fixes.push_back({{"row", f.row}, {"current", f.current}, {"suggested", f.suggested}});
  }
  return {{"text", text},
          {"fd", to_json(cluster.fd, schema)},
          {"lhs_value", std::move(lhs_value)},
          {"rows", cluster.rows},
          {"central_value", optional_text(cluster.central_value)},
          {"central_frequency", cluster.central_frequency},
          {"inside_share", typo::inside_share(cluster, cfg.radius)},
          {"displayed", typo::is_displayed(cluster, cfg)},
          {"members", std::move(members)},
          {"fixes", std::move(fixes)}};
}

Json to_json(const dedup::KeyCandidate& key, const std::vector<std::string>& schema) {
  return {{"text", schema.at(key.lhs) + " -> " + names_of(key.rhs_list, schema).dump()},
          {"lhs", key.lhs},
          {"lhs_name", schema.at(key.lhs)},
          {"rhs_list", key.rhs_list},
          {"rhs_names", names_of(key.rhs_list, schema)},
          {"rhs_count", key.rhs_count},
          {"is_unique", key.is_unique}};
}

Json to_json(const dedup::DuplicatePair& pair, const std::vector<std::string>& schema) {
  return {{"text", std::to_string(pair.row_a) + " ~ " + std::to_string(pair.row_b)},
          {"row_a", pair.row_a},
          {"row_b", pair.row_b},
          {"matched_attrs", pair.matched_attrs},
          {"matched_names", names_of(pair.matched_attrs, schema)},
          {"match_count", pair.match_count}};
}

dedup::DuplicatePair duplicate_pair_from_json(const Json& doc) {
  return {field<RowId>(doc, "row_a"), field<RowId>(doc, "row_b"),
          field<std::vector<AttrIndex>>(doc, "matched_attrs"), field<std::size_t>(doc, "match_count")};
}

Json to_json(const dedup::Resolution& resolution) {
  return {{"row_a", resolution.row_a},
          {"row_b", resolution.row_b},
          {"keep", resolution.keep},
          {"copy_attrs", resolution.copy_attrs}};
}

dedup::Resolution resolution_from_json(const Json& doc) {
  return {field<RowId>(doc, "row_a"), field<RowId>(doc, "row_b"), field<RowId>(doc, "keep"),
          field<std::set<AttrIndex>>(doc, "copy_attrs")};
}

Json journal_to_json(const std::vector<dedup::Resolution>& journal) {
  Json out = Json::array();
  for (const auto& r : journal) out.push_back(to_json(r));
  return out;
}

std::vector<dedup::Resolution> journal_from_json(const Json& doc) {
  if (!doc.is_array()) throw InvalidArgument("journal must be an array");
  std::vector<dedup::Resolution> out;
  for (const auto& entry : doc) out.push_back(resolution_from_json(entry));
  return out;
}

Json to_json(const anomaly::FDDiff& diff, const std::vector<std::string>& schema) {
  Json lost = Json::array();
  Json gained = Json::array();
  for (const auto& fd : diff.lost) lost.push_back(to_json(fd, schema));
  for (const auto& fd : diff.gained) gained.push_back(to_json(fd, schema));
  return {{"lost", std::move(lost)}, {"gained", std::move(gained)}};
}

Json to_json(const anomaly::AnomalyState& state) {
  Json mfds = Json::array();
  for (const auto& m : state.canonical_mfds) mfds.push_back(to_json(m, state.canonical_fds.schema));
  Json history = Json::array();
  for (const auto& h : state.history) {
    history.push_back(
        {{"partition_id", h.partition_id}, {"fds", to_json(h.fds)}, {"diff", to_json(h.diff, h.fds.schema)}});
  }
  return {{"canonical_fds", to_json(state.canonical_fds)},
          {"canonical_mfds", std::move(mfds)},
          {"history", std::move(history)}};
}

anomaly::AnomalyState anomaly_state_from_json(const Json& doc) {
  anomaly::AnomalyState state;
  state.canonical_fds = fd_set_from_json(field<Json>(doc, "canonical_fds"));
  for (const auto& m : field<Json>(doc, "canonical_mfds")) state.canonical_mfds.push_back(mfd_statement_from_json(m));
  for (const auto& h : field<Json>(doc, "history")) {
    anomaly::HistoryEntry entry;
    entry.partition_id = field<std::string>(h, "partition_id");
    entry.fds = fd_set_from_json(field<Json>(h, "fds"));
    const Json diff = field<Json>(h, "diff");
    for (const auto& fd : field<Json>(diff, "lost")) entry.diff.lost.push_back(fd_from_json(fd));
    for (const auto& fd : field<Json>(diff, "gained")) entry.diff.gained.push_back(fd_from_json(fd));
    state.history.push_back(std::move(entry));
  }
  return state;
}

}  // namespace depprof::json
