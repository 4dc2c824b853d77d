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
#include <string_view>

#include "depprof/relation.hpp"

namespace depprof {

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

/// Digest of a relation's CSV form together with its row labels, so that two
/// relation versions hash equal exactly when they hold the same rows.
std::string relation_hash(const Relation& relation);

}  // namespace depprof
