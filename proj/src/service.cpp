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

#include "depprof/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <ctime>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <regex>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "depprof/dedup.hpp"
#include "depprof/hash.hpp"
#include "depprof/jobs.hpp"

namespace depprof {

namespace fs = std::filesystem;
using json::Json;

namespace {

constexpr const char* kApi = "/api/v1";

// Failure carried to an HTTP response.
struct HttpError {
  int status;
  std::string code;
  std::string message;
  Json extra = Json::object();
};

void write_atomic(const fs::path& path, const std::string& text) {
  static std::atomic<std::uint64_t> counter{0};
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw Error("cannot write " + tmp.string());
  std::size_t done = 0;
  while (done < text.size()) {
    const ssize_t n = ::write(fd, text.data() + done, text.size() - done);
    if (n < 0) {
      ::close(fd);
      throw Error("cannot write " + tmp.string());
    }
    done += static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
  fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string now_iso() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

std::string new_token() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mu);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

bool valid_id(const std::string& id) {
  return !id.empty() && id.size() <= 128 &&
         std::all_of(id.begin(), id.end(), [](unsigned char c) { return std::isalnum(c) || c == '-' || c == '_'; });
}

Json error_body(const HttpError& e) {
  Json err{{"code", e.code}, {"message", e.message}};
  err.update(e.extra);
  return {{"error", std::move(err)}};
}

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    return Json::parse(req.body);
  } catch (const nlohmann::json::exception& e) {
    throw HttpError{400, "invalid_json", e.what()};
  }
}

// Orders JSON scalars: numbers, then strings, then booleans, null last.
int rank(const Json& v) {
  if (v.is_number()) return 0;
  if (v.is_string()) return 1;
  if (v.is_boolean()) return 2;
  return 3;
}

Json sort_key(const Json& item, const std::string& field) {
  if (!item.is_object() || !item.contains(field)) return nullptr;
  const Json& v = item[field];
  if (v.is_object() && v.contains("decimal")) return v["decimal"];
  if (v.is_array()) return v.size();
  return v;
}

bool key_less(const Json& a, const Json& b) {
  const int ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb;
  if (ra == 0) return a.get<double>() < b.get<double>();
  if (ra == 1) return a.get<std::string>() < b.get<std::string>();
  if (ra == 2) return !a.get<bool>() && b.get<bool>();
  return false;
}

struct SessionSlot {
  std::mutex mu;
  std::string task;
  std::unique_ptr<dedup::Session> session;
  std::vector<std::string> schema;
  std::string source_dataset;
  bool finished = false;
  std::string finished_dataset;
};

}  // namespace

struct Service::Impl {
  ServiceOptions opt;
  fs::path root;
  httplib::Server server;

  std::mutex mu;
  std::condition_variable cv;
  std::map<std::string, Json> tasks;
  std::map<std::string, std::stop_source> running;
  std::deque<std::string> queue;
  bool stopping = false;
  std::vector<std::jthread> workers;

  std::mutex results_mu;
  std::map<std::string, std::shared_ptr<const Json>> results;

  std::mutex sessions_mu;
  std::map<std::string, std::shared_ptr<SessionSlot>> sessions;

  explicit Impl(ServiceOptions o) : opt(std::move(o)), root(opt.storage_root) {
    for (const char* dir : {"datasets", "tasks", "results", "sessions", "anomaly"}) fs::create_directories(root / dir);
    recover();
    routes();
    for (unsigned i = 0; i < std::max(1u, opt.workers); ++i) workers.emplace_back([this] { work(); });
  }

  ~Impl() {
    {
      std::lock_guard lock(mu);
      stopping = true;
      for (auto& [_, src] : running) src.request_stop();
    }
    cv.notify_all();
    workers.clear();
  }

  // ---- storage --------------------------------------------------------------

  fs::path task_path(const std::string& id) const { return root / "tasks" / (id + ".json"); }
  fs::path result_path(const std::string& id) const { return root / "results" / (id + ".json"); }
  fs::path dataset_csv(const std::string& id) const { return root / "datasets" / (id + ".csv"); }
  fs::path dataset_meta(const std::string& id) const { return root / "datasets" / (id + ".json"); }
  fs::path session_path(const std::string& id) const { return root / "sessions" / (id + ".json"); }

  void persist_task(const Json& record) { write_atomic(task_path(record["id"]), json::dump(record)); }

  // Tasks that were queued or running when the process died go back on the
  // queue, oldest first.
  void recover() {
    std::vector<Json> pending;
    for (const auto& entry : fs::directory_iterator(root / "tasks")) {
      if (entry.path().extension() != ".json") continue;
      Json record;
      try {
        record = Json::parse(read_text(entry.path()));
      } catch (const std::exception&) {
        continue;
      }
      const std::string status = record.value("status", "");
      if (status == "queued" || status == "running") {
        record["status"] = "queued";
        record["started_at"] = nullptr;
        record["requeued"] = record.value("requeued", 0) + 1;
        persist_task(record);
        pending.push_back(record);
      }
      tasks[record["id"]] = record;
    }
    std::sort(pending.begin(), pending.end(), [](const Json& a, const Json& b) {
      return std::tie(a["created_at"].get_ref<const std::string&>(), a["id"].get_ref<const std::string&>()) <
             std::tie(b["created_at"].get_ref<const std::string&>(), b["id"].get_ref<const std::string&>());
    });
    for (const auto& r : pending) queue.push_back(r["id"]);
  }

  Json dataset_info(const std::string& id) {
    if (!valid_id(id) || !fs::exists(dataset_meta(id))) throw HttpError{404, "unknown_dataset", "no dataset " + id};
    return Json::parse(read_text(dataset_meta(id)));
  }

  Relation load_dataset(const std::string& id) {
    const Json meta = dataset_info(id);
    const Json& c = meta["csv"];
    CsvConfig cfg{c["separator"].get<std::string>().at(0), c["header"].get<bool>(), c["null_token"].get<std::string>()};
    return load_csv_file(dataset_csv(id).string(), cfg);
  }

  Json store_dataset(const std::string& bytes, const CsvConfig& cfg, const Relation& relation) {
    std::string salt = "\n#csv ";
    salt += cfg.separator;
    salt += cfg.has_header ? " header " : " noheader ";
    salt += cfg.null_token;
    const std::string id = sha256_hex(bytes + salt);
    Json meta = jobs::describe(relation);
    meta["id"] = id;
    meta["bytes"] = bytes.size();
    meta["csv"] = {{"separator", std::string(1, cfg.separator)}, {"header", cfg.has_header}, {"null_token", cfg.null_token}};
    if (!fs::exists(dataset_meta(id))) {
      write_atomic(dataset_csv(id), bytes);
      write_atomic(dataset_meta(id), json::dump(meta));
    }
    return meta;
  }

  std::shared_ptr<const Json> load_result(const std::string& id) {
    std::lock_guard lock(results_mu);
    auto it = results.find(id);
    if (it != results.end()) return it->second;
    auto doc = std::make_shared<const Json>(Json::parse(read_text(result_path(id))));
    results[id] = doc;
    return doc;
  }

  Json task_record(const std::string& id) {
    std::lock_guard lock(mu);
    auto it = tasks.find(id);
    if (it == tasks.end()) throw HttpError{404, "unknown_task", "no task " + id};
    return it->second;
  }

  // ---- execution --------------------------------------------------------------

  void work() {
    for (;;) {
      std::string id;
      std::stop_token stop;
      Json record;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [this] { return stopping || !queue.empty(); });
        if (stopping) return;
        id = queue.front();
        queue.pop_front();
        auto& rec = tasks[id];
        if (rec["status"] != "queued") continue;
        rec["status"] = "running";
        rec["started_at"] = now_iso();
        persist_task(rec);
        record = rec;
        stop = running[id].get_token();
      }

      Json outcome;
      std::string failure;
      try {
        outcome = execute(record, stop);
      } catch (const Cancelled&) {
        failure = "cancelled";
      } catch (const HttpError& e) {
        failure = e.message;
      } catch (const std::exception& e) {
        failure = e.what();
      }

      std::lock_guard lock(mu);
      running.erase(id);
      if (stopping && failure == "cancelled") return;  // shutdown: stays running on disk, re-queued on restart
      auto& rec = tasks[id];
      rec["finished_at"] = now_iso();
      if (failure.empty()) {
        rec["status"] = "completed";
        rec["result"] = "results/" + id + ".json";
        rec["total"] = outcome["total"];
      } else {
        rec["status"] = "failed";
        rec["error"] = failure;
      }
      persist_task(rec);
    }
  }

  Json execute(const Json& record, std::stop_token stop) {
    const auto kind = jobs::parse_kind(record["kind"].get<std::string>());
    Json params = record["params"];
    params["threads"] = record.value("threads", opt.task_threads);
    jobs::JobInput input;
    input.partitions.push_back({record["dataset"], load_dataset(record["dataset"])});
    fs::path state_file;
    if (kind == jobs::JobKind::kScenarioAnomaly) {
      for (const auto& p : params["partitions"]) input.partitions.push_back({p, load_dataset(p)});
      state_file = root / "anomaly" / (params.value("state", std::string("default")) + ".json");
      if (fs::exists(state_file)) input.state = json::anomaly_state_from_json(Json::parse(read_text(state_file)));
    }
    Json result = jobs::run(kind, params, input, stop);
    result["task"] = record["id"];
    write_atomic(result_path(record["id"]), json::dump(result));
    if (!state_file.empty() && !params["accept"].empty()) write_atomic(state_file, json::dump(result["state"]));
    return result;
  }

  // ---- handlers --------------------------------------------------------------

  Json upload(const httplib::Request& req) {
    if (req.body.empty()) throw HttpError{400, "empty_body", "dataset body is empty"};
    CsvConfig cfg;
    if (req.has_param("separator")) {
      const auto sep = req.get_param_value("separator");
      if (sep.size() != 1) throw HttpError{400, "invalid_csv_config", "separator must be one character"};
      cfg.separator = sep[0];
    }
    if (req.has_param("header")) cfg.has_header = req.get_param_value("header") != "false";
    if (req.has_param("null_token")) cfg.null_token = req.get_param_value("null_token");
    try {
      const Relation relation = load_csv(std::string_view(req.body), cfg);
      return store_dataset(req.body, cfg, relation);
    } catch (const ParseError& e) {
      throw HttpError{400, "parse_error", e.what(), {{"line", e.line()}}};
    } catch (const InvalidArgument& e) {
      throw HttpError{400, "parse_error", e.what()};
    }
  }

  Json submit(const httplib::Request& req) {
    const Json body = parse_body(req);
    if (!body.is_object()) throw HttpError{400, "invalid_json", "body must be an object"};
    jobs::JobKind kind;
    try {
      kind = jobs::parse_kind(body.value("kind", ""));
    } catch (const InvalidArgument& e) {
      throw HttpError{422, "invalid_params", e.what(), {{"problems", {{{"field", "kind"}, {"message", e.what()}}}}}};
    }
    if (!body.contains("dataset") || !body["dataset"].is_string()) {
      throw HttpError{422, "invalid_params", "dataset is required",
                      {{"problems", {{{"field", "dataset"}, {"message", "required"}}}}}};
    }
    const std::string dataset = body["dataset"];
    Json params = body.value("params", Json::object());
    const Relation relation = load_dataset(dataset);
    Json normalized;
    unsigned threads = opt.task_threads;
    try {
      normalized = jobs::normalize_params(kind, params, relation);
      if (params.is_object() && params.contains("threads")) threads = jobs::threads_of(params);
    } catch (const jobs::InvalidParams& e) {
      Json problems = Json::array();
      for (const auto& p : e.problems()) problems.push_back({{"field", p.field}, {"message", p.message}});
      throw HttpError{422, "invalid_params", e.what(), {{"problems", problems}}};
    }
    if (kind == jobs::JobKind::kScenarioAnomaly) {
      for (const auto& p : normalized["partitions"]) dataset_info(p);
      if (normalized.contains("state") && !valid_id(normalized["state"])) {
        throw HttpError{422, "invalid_params", "bad state name",
                        {{"problems", {{{"field", "state"}, {"message", "letters, digits, - and _ only"}}}}}};
      }
    }
    Json record{{"id", "t" + new_token()},
                {"kind", jobs::to_string(kind)},
                {"dataset", dataset},
                {"params", normalized},
                {"threads", threads},
                {"status", "queued"},
                {"created_at", now_iso()},
                {"started_at", nullptr},
                {"finished_at", nullptr},
                {"result", nullptr},
                {"error", nullptr}};
    {
      std::lock_guard lock(mu);
      persist_task(record);
      tasks[record["id"]] = record;
      queue.push_back(record["id"]);
    }
    cv.notify_one();
    return record;
  }

  Json cancel(const std::string& id) {
    std::lock_guard lock(mu);
    auto it = tasks.find(id);
    if (it == tasks.end()) throw HttpError{404, "unknown_task", "no task " + id};
    Json& rec = it->second;
    if (rec["status"] == "queued") {
      rec["status"] = "failed";
      rec["error"] = "cancelled";
      rec["finished_at"] = now_iso();
      persist_task(rec);
    } else if (rec["status"] == "running") {
      running[id].request_stop();
    } else {
      throw HttpError{409, "not_cancellable", "task is " + rec["status"].get<std::string>(),
                      {{"status", rec["status"]}}};
    }
    return rec;
  }

  Json results_page(const std::string& id, const httplib::Request& req) {
    const Json record = task_record(id);
    if (record["status"] != "completed") {
      throw HttpError{409, "not_completed", "task is " + record["status"].get<std::string>(),
                      {{"status", record["status"]}}};
    }
    const auto doc = load_result(id);
    const Json& items = jobs::instances(*doc);

    auto number = [&](const char* name, std::size_t fallback) -> std::size_t {
      if (!req.has_param(name)) return fallback;
      const std::string text = req.get_param_value(name);
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != text.size() || text[0] == '-') {
        throw HttpError{400, "invalid_query", std::string(name) + " must be a non-negative integer"};
      }
      return static_cast<std::size_t>(v);
    };
    const std::size_t offset = number("offset", 0);
    const std::size_t limit = std::min(number("limit", std::min<std::size_t>(100, opt.result_cap)), opt.result_cap);

    std::vector<const Json*> matched;
    if (req.has_param("filter") && !req.get_param_value("filter").empty()) {
      std::regex re;
      try {
        re = std::regex(req.get_param_value("filter"), std::regex::ECMAScript);
      } catch (const std::regex_error& e) {
        throw HttpError{400, "invalid_filter", e.what()};
      }
      for (const auto& item : items) {
        if (std::regex_search(item.value("text", std::string()), re)) matched.push_back(&item);
      }
    } else {
      for (const auto& item : items) matched.push_back(&item);
    }

    if (req.has_param("sort_by")) {
      const std::string field = req.get_param_value("sort_by");
      const std::string dir = req.has_param("sort_dir") ? req.get_param_value("sort_dir") : "asc";
      if (dir != "asc" && dir != "desc") throw HttpError{400, "invalid_query", "sort_dir must be asc or desc"};
      const bool desc = dir == "desc";
      std::stable_sort(matched.begin(), matched.end(), [&](const Json* a, const Json* b) {
        const Json ka = sort_key(*a, field), kb = sort_key(*b, field);
        // Missing values stay last in either direction.
        if (ka.is_null() != kb.is_null()) return kb.is_null();
        return desc ? key_less(kb, ka) : key_less(ka, kb);
      });
    }

    Json page = Json::array();
    for (std::size_t i = offset; i < matched.size() && i < offset + limit; ++i) page.push_back(*matched[i]);
    return {{"task", id},
            {"kind", (*doc)["kind"]},
            {"total", matched.size()},
            {"offset", offset},
            {"limit", limit},
            {"items", std::move(page)}};
  }

  // ---- dedup sessions ---------------------------------------------------------

  std::shared_ptr<SessionSlot> session(const std::string& id) {
    std::lock_guard lock(sessions_mu);
    if (auto it = sessions.find(id); it != sessions.end()) return it->second;
    const Json record = task_record(id);
    if (record["kind"] != "scenario_dedup") throw HttpError{404, "unknown_session", id + " is not a dedup task"};
    if (record["status"] != "completed") {
      throw HttpError{409, "not_completed", "candidate scan is " + record["status"].get<std::string>(),
                      {{"status", record["status"]}}};
    }
    auto slot = std::make_shared<SessionSlot>();
    slot->task = id;
    slot->source_dataset = record["dataset"];
    Relation base = load_dataset(slot->source_dataset);
    slot->schema = base.attribute_names();
    std::vector<dedup::DuplicatePair> candidates;
    for (const auto& p : jobs::instances(*load_result(id))) candidates.push_back(json::duplicate_pair_from_json(p));
    slot->session = std::make_unique<dedup::Session>(std::move(base), std::move(candidates));
    if (fs::exists(session_path(id))) {
      const Json saved = Json::parse(read_text(session_path(id)));
      slot->session->restore(json::journal_from_json(saved["journal"]));
      slot->finished = saved.value("finished", false);
      slot->finished_dataset = saved.value("finished_dataset", "");
    }
    sessions[id] = slot;
    return slot;
  }

  void persist_session(const SessionSlot& s) {
    Json doc{{"task", s.task},
             {"journal", json::journal_to_json(s.session->journal())},
             {"finished", s.finished},
             {"finished_dataset", s.finished_dataset}};
    write_atomic(session_path(s.task), json::dump(doc));
  }

  Json session_state(const SessionSlot& s) {
    auto pair = s.finished ? std::nullopt : s.session->propose();
    Json out{{"session", s.task},
             {"journal", json::journal_to_json(s.session->journal())},
             {"journal_length", s.session->journal().size()},
             {"rows", s.session->current().row_count()},
             {"state_hash", relation_hash(s.session->current())},
             {"finished", s.finished},
             {"pair", pair ? json::to_json(*pair, s.schema) : Json(nullptr)}};
    if (s.finished) out["dataset"] = s.finished_dataset;
    return out;
  }

  dedup::Resolution resolution_of(const Json& body, const SessionSlot& s) {
    if (!body.is_object()) throw HttpError{422, "invalid_params", "decision must be an object"};
    dedup::Resolution r;
    try {
      r.row_a = body.at("row_a").get<RowId>();
      r.row_b = body.at("row_b").get<RowId>();
      const Json& keep = body.at("keep");
      if (keep == "a") {
        r.keep = r.row_a;
      } else if (keep == "b") {
        r.keep = r.row_b;
      } else {
        r.keep = keep.get<RowId>();
      }
      for (const auto& a : body.value("copy_attrs", Json::array())) {
        if (a.is_string()) {
          auto idx = std::find(s.schema.begin(), s.schema.end(), a.get<std::string>());
          if (idx == s.schema.end()) throw HttpError{422, "invalid_params", "unknown attribute " + a.dump()};
          r.copy_attrs.insert(static_cast<AttrIndex>(idx - s.schema.begin()));
        } else {
          r.copy_attrs.insert(a.get<AttrIndex>());
        }
      }
    } catch (const nlohmann::json::exception& e) {
      throw HttpError{422, "invalid_params", std::string("decision needs row_a, row_b and keep: ") + e.what()};
    }
    return r;
  }

  Json session_step(const std::string& id, const std::string& step, const httplib::Request& req) {
    auto slot = session(id);
    std::lock_guard lock(slot->mu);
    SessionSlot& s = *slot;
    if (step == "state" || step == "propose") return session_state(s);
    if (s.finished) throw HttpError{409, "finished", "session is finished"};
    if (step == "decide") {
      const auto r = resolution_of(parse_body(req), s);
      try {
        s.session->decide(r);
      } catch (const dedup::NotProposed& e) {
        throw HttpError{409, "not_proposed", e.what()};
      } catch (const StaleResolution& e) {
        throw HttpError{410, "stale_pair", e.what()};
      } catch (const InvalidArgument& e) {
        throw HttpError{422, "invalid_params", e.what()};
      }
      // Acknowledge only once the journal is on disk.
      persist_session(s);
    } else if (step == "skip") {
      s.session->skip();
    } else if (step == "undo") {
      if (!s.session->undo()) throw HttpError{409, "empty_journal", "nothing to undo"};
      persist_session(s);
    } else if (step == "finish") {
      const std::string csv = to_csv(s.session->current());
      const Json meta = store_dataset(csv, CsvConfig{}, s.session->current());
      s.finished = true;
      s.finished_dataset = meta["id"];
      persist_session(s);
    } else {
      throw HttpError{404, "unknown_step", "no session step " + step};
    }
    return session_state(s);
  }

  // ---- routing ----------------------------------------------------------------

  template <typename F>
  httplib::Server::Handler guard(int ok_status, F handler) {
    return [ok_status, handler](const httplib::Request& req, httplib::Response& res) {
      try {
        reply(res, ok_status, handler(req));
      } catch (const HttpError& e) {
        reply(res, e.status, error_body(e));
      } catch (const std::exception& e) {
        reply(res, 500, error_body({500, "internal", e.what()}));
      }
    };
  }

  void routes() {
    server.set_payload_max_length(std::size_t{1} << 30);
    const std::string api = kApi;
    server.Post(api + "/datasets", guard(201, [this](const httplib::Request& req) { return upload(req); }));
    server.Get(api + R"(/datasets/([^/]+))",
               guard(200, [this](const httplib::Request& req) { return dataset_info(req.matches[1]); }));
    server.Get(api + R"(/datasets/([^/]+)/csv)", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        dataset_info(req.matches[1]);
        res.set_content(read_text(dataset_csv(req.matches[1])), "text/csv");
      } catch (const HttpError& e) {
        reply(res, e.status, error_body(e));
      }
    });
    server.Post(api + "/tasks", guard(202, [this](const httplib::Request& req) { return submit(req); }));
    server.Get(api + "/tasks", guard(200, [this](const httplib::Request&) {
                 std::lock_guard lock(mu);
                 Json list = Json::array();
                 for (const auto& [_, rec] : tasks) list.push_back(rec);
                 return Json{{"tasks", list}};
               }));
    server.Get(api + R"(/tasks/([^/]+))",
               guard(200, [this](const httplib::Request& req) { return task_record(req.matches[1]); }));
    server.Get(api + R"(/tasks/([^/]+)/results)",
               guard(200, [this](const httplib::Request& req) { return results_page(req.matches[1], req); }));
    server.Get(api + R"(/tasks/([^/]+)/result)", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        const Json record = task_record(req.matches[1]);
        if (record["status"] != "completed") {
          throw HttpError{409, "not_completed", "task is " + record["status"].get<std::string>(),
                          {{"status", record["status"]}}};
        }
        res.set_content(read_text(result_path(req.matches[1])), "application/json");
      } catch (const HttpError& e) {
        reply(res, e.status, error_body(e));
      }
    });
    server.Post(api + R"(/tasks/([^/]+)/cancel)",
                guard(202, [this](const httplib::Request& req) { return cancel(req.matches[1]); }));
    server.Post(api + R"(/dedup/([^/]+)/([a-z]+))", guard(200, [this](const httplib::Request& req) {
                  return session_step(req.matches[1], req.matches[2], req);
                }));
    server.Get(api + R"(/dedup/([^/]+)/state)",
               guard(200, [this](const httplib::Request& req) { return session_step(req.matches[1], "state", req); }));
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Service::~Service() = default;

bool Service::run(const std::function<void(int)>& on_ready) {
  int port = impl_->opt.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(impl_->opt.host);
    if (port < 0) return false;
  } else if (!impl_->server.bind_to_port(impl_->opt.host, port)) {
    return false;
  }
  if (on_ready) on_ready(port);
  return impl_->server.listen_after_bind();
}

void Service::stop() { impl_->server.stop(); }

}  // namespace depprof
