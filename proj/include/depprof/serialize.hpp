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

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "depprof/afd.hpp"
#include "depprof/anomaly.hpp"
#include "depprof/dedup.hpp"
#include "depprof/fd.hpp"
#include "depprof/mfd.hpp"
#include "depprof/typo.hpp"

namespace depprof::json {

using Json = nlohmann::json;

/// Stable textual form used for result files: two-space indent, sorted keys,
/// trailing newline.
std::string dump(const Json& doc);

/// Finite numbers as numbers, infinities and NaN as null.
Json number_or_null(double value);

Json to_json(const Rational& value);
Rational rational_from_json(const Json& doc);

/// {"text", "lhs", "lhs_names", "rhs", "rhs_name"}
Json to_json(const FD& fd, const std::vector<std::string>& schema);
FD fd_from_json(const Json& doc);

Json to_json(const FDSet& set);
FDSet fd_set_from_json(const Json& doc);

Json to_json(const AFD& afd, const std::vector<std::string>& schema);

Json to_json(const MFDStatement& stmt, const std::vector<std::string>& schema);
MFDStatement mfd_statement_from_json(const Json& doc);

Json to_json(const MFDVerdict& verdict);

Json to_json(const typo::ViolationCluster& cluster, const typo::TypoConfig& cfg,
             const std::vector<std::string>& schema);

Json to_json(const dedup::KeyCandidate& key, const std::vector<std::string>& schema);
Json to_json(const dedup::DuplicatePair& pair, const std::vector<std::string>& schema);
dedup::DuplicatePair duplicate_pair_from_json(const Json& doc);
Json to_json(const dedup::Resolution& resolution);
dedup::Resolution resolution_from_json(const Json& doc);
Json journal_to_json(const std::vector<dedup::Resolution>& journal);
std::vector<dedup::Resolution> journal_from_json(const Json& doc);

Json to_json(const anomaly::FDDiff& diff, const std::vector<std::string>& schema);
Json to_json(const anomaly::AnomalyState& state);
anomaly::AnomalyState anomaly_state_from_json(const Json& doc);

}  // namespace depprof::json
