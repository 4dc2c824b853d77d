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

#include <cstddef>
#include <functional>
#include <memory>
#include <string>

namespace depprof {

struct ServiceOptions {
  std::string storage_root = "depprof-data";
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  unsigned workers = 2;
  unsigned task_threads = 1;
  std::size_t result_cap = 1000;
};

/// HTTP task service under /api/v1. State lives in plain files below the
/// storage root; on start, tasks that were queued or running are queued again.
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds, calls on_ready with the bound port, then serves until stop().
  /// Returns false if binding failed.
  bool run(const std::function<void(int)>& on_ready = {});
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace depprof
