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

#include "depprof/report.hpp"

#include <sstream>

namespace depprof {

namespace {

using json::Json;

std::string num(const Json& value) {
  if (value.is_null()) return "inf";
  if (value.is_number_float()) {
    std::ostringstream out;
    out << value.get<double>();
    return out.str();
  }
  return value.dump();
}

std::string cell(const Json& value) { return value.is_null() ? "<null>" : "'" + value.get<std::string>() + "'"; }

std::string fraction(const Json& r) {
  return std::to_string(r["num"].get<std::uint64_t>()) + "/" + std::to_string(r["den"].get<std::uint64_t>()) + " (" +
         num(r["decimal"]) + ")";
}

std::string join(const Json& list) {
  std::string out;
  for (const auto& e : list) out += (out.empty() ? "" : ", ") + (e.is_string() ? e.get<std::string>() : e.dump());
  return out;
}

void header(std::ostream& out, const Json& result) {
  const Json& ds = result["dataset"];
  out << result["kind"].get<std::string>() << " over " << ds["rows"] << " rows, " << ds["attributes"].size()
      << " attributes\n";
}

void render_fds(std::ostream& out, const Json& result) {
  const Json& items = result["instances"];
  if (items.empty()) {
    out << "no dependencies found\n";
    return;
  }
  out << items.size() << " dependencies\n";
  for (const auto& fd : items) {
    out << "  " << fd["text"].get<std::string>();
    if (fd.contains("error")) out << "    g1 = " << fraction(fd["error"]);
    out << "\n";
  }
}

void render_mfd(std::ostream& out, const Json& result) {
  const Json& v = result["verdict"];
  out << result["statement"]["text"].get<std::string>() << ": " << (v["holds"].get<bool>() ? "holds" : "violated")
      << "\n  global diameter " << num(v["global_diameter"]) << ", clusters checked " << v["clusters_checked"] << "\n";
  for (const auto& c : result["instances"]) {
    out << "  rows " << join(c["rows"]) << ": ";
    if (c["diameter"].is_null()) {
      out << "incomparable (null values)\n";
    } else {
      out << "diameter " << num(c["diameter"]) << ", witness rows " << c["witness"][0] << " and " << c["witness"][1]
          << "\n";
    }
  }
}

void render_typo(std::ostream& out, const Json& result, bool show_filtered) {
  const Json& afds = result["afds"];
  if (afds.empty()) {
    out << "no dependencies found\n";
    return;
  }
  out << afds.size() << " almost-holding dependencies\n";
  for (const auto& a : afds) out << "  " << a["text"].get<std::string>() << "    g1 = " << fraction(a["error"]) << "\n";
  std::size_t hidden = 0;
  for (const auto& c : result["instances"]) {
    const bool shown = c["displayed"].get<bool>();
    if (!shown && !show_filtered) {
      ++hidden;
      continue;
    }
    out << "\ncluster " << c["text"].get<std::string>() << (shown ? "" : " [filtered]") << "\n"
        << "  central value " << cell(c["central_value"]) << " x" << c["central_frequency"] << ", inside share "
        << num(c["inside_share"]) << "\n";
    for (const auto& m : c["members"]) {
      out << "  " << (m["central"].get<bool>() ? "* " : "  ") << "row " << m["row"] << "  " << cell(m["value"])
          << "  distance " << num(m["distance"]) << "\n";
    }
    for (const auto& f : c["fixes"]) {
      out << "  fix row " << f["row"] << ": " << cell(f["current"]) << " -> " << cell(f["suggested"]) << "\n";
    }
  }
  if (hidden) out << "\n" << hidden << " clusters hidden by the radius/ratio filter\n";
}

void render_dedup(std::ostream& out, const Json& result) {
  const Json& key = result["key"];
  out << "sort key " << key["lhs_name"].get<std::string>();
  if (!key["rhs_names"].empty()) out << " (then " << join(key["rhs_names"]) << ")";
  out << ", window " << result["params"]["window"] << ", k " << result["params"]["k"] << "\n";
  const Json& items = result["instances"];
  if (items.empty()) out << "no duplicate candidates found\n";
  for (const auto& p : items) {
    out << "  rows " << p["row_a"] << " ~ " << p["row_b"] << ": " << p["match_count"] << " matching ("
        << join(p["matched_names"]) << ")\n";
  }
  if (result.contains("journal")) {
    out << result["journal"].size() << " decisions, " << result["rows_after"] << " rows remain\n";
    for (const auto& r : result["journal"]) {
      out << "  keep row " << r["keep"] << " of (" << r["row_a"] << ", " << r["row_b"] << ")";
      if (!r["copy_attrs"].empty()) out << ", copy attributes " << join(r["copy_attrs"]);
      out << "\n";
    }
  }
}

void render_anomaly(std::ostream& out, const Json& result) {
  for (const auto& part : result["instances"]) {
    const Json& diff = part["diff"];
    out << "partition " << part["partition_id"].get<std::string>() << ": " << part["rows"] << " rows, "
        << part["fd_count"] << " dependencies, lost " << diff["lost"].size() << ", gained " << diff["gained"].size()
        << (part["accepted"].get<bool>() ? ", accepted" : "") << "\n";
    for (const auto& probe : part["probes"]) {
      out << "  lost " << probe["fd"]["text"].get<std::string>() << "\n"
          << "    g1 = " << fraction(probe["g1"]) << ", first holding threshold "
          << (probe["first_holding"].is_null() ? "none" : probe["first_holding"].get<std::string>()) << "\n"
          << "    " << probe["metric"].get<std::string>() << " sweep up to " << num(probe["d"]) << ": ";
      if (probe["p"].is_null()) {
        out << probe["diagnostic"].get<std::string>() << "\n";
      } else {
        out << "holds at p = " << num(probe["p"]) << "\n";
      }
    }
    for (const auto& fd : diff["gained"]) out << "  gained " << fd["text"].get<std::string>() << "\n";
  }
  const Json& state = result["state"];
  out << "canonical set: " << state["canonical_fds"]["fds"].size() << " dependencies, "
      << state["canonical_mfds"].size() << " metric dependencies, " << state["history"].size() << " revisions\n";
}

}  // namespace

std::string render_report(const Json& result, OutputMode mode, bool show_filtered) {
  if (mode == OutputMode::kJson) return json::dump(result);
  std::ostringstream out;
  header(out, result);
  const std::string kind = result["kind"].get<std::string>();
  if (kind == "fd_discovery" || kind == "afd_discovery") {
    render_fds(out, result);
  } else if (kind == "mfd_validation") {
    render_mfd(out, result);
  } else if (kind == "scenario_typo") {
    render_typo(out, result, show_filtered);
  } else if (kind == "scenario_dedup") {
    render_dedup(out, result);
  } else if (kind == "scenario_anomaly") {
    render_anomaly(out, result);
  }
  return out.str();
}

}  // namespace depprof
