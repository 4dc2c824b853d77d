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

#include "depprof/serialize.hpp"

namespace depprof {

enum class OutputMode { kHuman, kJson };

/// Renders a job result. JSON mode is the stored result text itself; human
/// mode is a plain-text table view.
std::string render_report(const json::Json& result, OutputMode mode, bool show_filtered = false);

}  // namespace depprof
