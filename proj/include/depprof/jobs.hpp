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

#include <optional>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "depprof/anomaly.hpp"
#include "depprof/errors.hpp"
#include "depprof/relation.hpp"
#include "depprof/serialize.hpp"

// Parameter parsing and result assembly shared by the CLI and the task
// service. Every job takes a JSON parameter document and yields a JSON result
// whose "instances" array holds the browsable records, each with a "text"
// field.
namespace depprof::jobs {

using json::Json;

enum class JobKind {
  kFdDiscovery,
  kAfdDiscovery,
  kMfdValidation,
  kScenarioTypo,
  kScenarioDedup,
  kScenarioAnomaly,
};

std::string_view to_string(JobKind kind);
/// Throws InvalidArgument listing the valid kinds.
JobKind parse_kind(std::string_view name);

struct Problem {
  std::string field;
  std::string message;
};

/// Parameter document rejected; carries every offending field.
class InvalidParams : public InvalidArgument {
 public:
  explicit InvalidParams(std::vector<Problem> problems);
  const std::vector<Problem>& problems() const noexcept { return problems_; }

 private:
  std::vector<Problem> problems_;
};

/// Checks params for the kind against the relation (attribute names, metric
/// compatibility, k <= attribute count). Returns the normalized document with
/// defaults filled in; throws InvalidParams.
Json normalize_params(JobKind kind, const Json& params, const Relation& relation);

/// Threads to use, read from params; not part of the normalized document.
unsigned threads_of(const Json& params);

struct Partition {
  std::string id;
  Relation relation;
};

struct JobInput {
  /// One partition for every kind but the anomaly scenario, which takes them in
  /// arrival order.
  std::vector<Partition> partitions;
  /// Canonical state the anomaly scenario starts from.
  anomaly::AnomalyState state;
};

/// Runs the job. Results depend only on input and normalized params, never
/// on the thread count. Throws Cancelled once stop is requested.
Json run(JobKind kind, const Json& params, const JobInput& input, std::stop_token stop = {});

/// The array of browsable records inside a result.
const Json& instances(const Json& result);

/// Row count and typed attribute list.
Json describe(const Relation& relation);

}  // namespace depprof::jobs
