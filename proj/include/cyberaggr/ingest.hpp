/*
 * Copyright 2026 The cyberaggr Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "cyberaggr/data_model.hpp"
#include "cyberaggr/errors.hpp"

namespace cyberaggr {

struct DroppedLine {
  std::string stream;  // "posts" or "profiles"
  std::size_t line = 0;
  std::string reason;
};

struct IngestReport {
  std::size_t users = 0;
  std::size_t posts = 0;
  std::size_t naive_timestamps = 0;  // read as UTC+8 and converted
  std::vector<DroppedLine> dropped;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["users"] = users;
    j["posts"] = posts;
    j["naive_timestamps_converted_from_utc_plus_8"] = naive_timestamps;
    j["dropped"] = nlohmann::json::array();
    for (const auto& d : dropped) {
      j["dropped"].push_back(
          {{"stream", d.stream}, {"line", d.line}, {"reason", d.reason}});
    }
    j["warnings"] = warnings;
    return j;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "users: " << users << "\n"
       << "posts: " << posts << "\n"
       << "timestamps without zone (read as UTC+8): " << naive_timestamps
       << "\n"
       << "dropped lines: " << dropped.size() << "\n";
    for (const auto& d : dropped) {
      os << "  " << d.stream << ":" << d.line << ": " << d.reason << "\n";
    }
    os << "warnings: " << warnings.size() << "\n";
    for (const auto& w : warnings) os << "  " << w << "\n";
    return os.str();
  }
};

struct IngestResult {
  std::vector<UserRecord> users;
  IngestReport report;
};

namespace detail {

using nlohmann::json;

inline const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(std::string("missing key \"") + key + "\"");
  }
  return *it;
}

inline std::string require_string(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_string()) {
    throw ValidationError(std::string("key \"") + key + "\" must be a string");
  }
  return v.get<std::string>();
}

// Identifiers may arrive as JSON numbers from some exporters.
inline std::string require_id(const json& obj, const char* key) {
  const json& v = require(obj, key);
  std::string id;
  if (v.is_string()) {
    id = v.get<std::string>();
  } else if (v.is_number_integer()) {
    id = v.dump();
  } else {
    throw ValidationError(std::string("key \"") + key + "\" must be a string");
  }
  if (id.empty()) throw ValidationError(std::string("empty ") + key);
  return id;
}

inline bool require_bool(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer() && (v == 0 || v == 1)) return v == 1;
  throw ValidationError(std::string("key \"") + key + "\" must be a boolean");
}

inline std::int64_t nonneg_int(const json& v, const char* key) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ValidationError(std::string("key \"") + key +
                          "\" must be a nonnegative integer");
  }
  return v.get<std::int64_t>();
}

inline std::int64_t optional_count(const json& obj, const char* key,
                                   std::int64_t derived) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return derived;
  return nonneg_int(*it, key);
}

}  // namespace detail

inline Profile parse_profile_line(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("record is not a JSON object");
  Profile p;
  p.user_id = detail::require_id(j, "user_id");
  const std::string g = detail::require_string(j, "gender");
  if (g == "m") {
    p.gender = Gender::kMale;
  } else if (g == "f") {
    p.gender = Gender::kFemale;
  } else if (g.empty()) {
    p.gender = Gender::kUnknown;
  } else {
    throw ValidationError("gender must be \"m\", \"f\" or \"\"");
  }
  p.verified = detail::require_bool(j, "verified");
  p.follower_count =
      detail::nonneg_int(detail::require(j, "follower_count"), "follower_count");
  p.followee_count =
      detail::nonneg_int(detail::require(j, "followee_count"), "followee_count");
  if (auto it = j.find("description"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ValidationError("description must be a string");
    p.description = it->get<std::string>();
  }
  return p;
}

struct ParsedPost {
  std::string user_id;
  Post post;
  bool naive_timestamp = false;
};

inline ParsedPost parse_post_line(const nlohmann::json& j,
                                  std::chrono::minutes naive_offset) {
  using namespace std::chrono;
  if (!j.is_object()) throw ValidationError("record is not a JSON object");
  ParsedPost out;
  out.user_id = detail::require_id(j, "user_id");
  Post& p = out.post;
  p.post_id = detail::require_id(j, "post_id");
  const std::string ts = detail::require_string(j, "timestamp");
  auto parsed = parse_timestamp(ts, naive_offset);
  if (!parsed) throw ValidationError("unparseable timestamp \"" + ts + "\"");
  if (parsed->utc < sys_days{2009y / January / 1}) {
    throw ValidationError("timestamp before 2009-01-01: \"" + ts + "\"");
  }
  p.timestamp = parsed->utc;
  out.naive_timestamp = !parsed->had_zone;
  p.text = detail::require_string(j, "text");
  p.has_picture = detail::require_bool(j, "has_picture");
  p.is_retweet = detail::require_bool(j, "is_retweet");
  p.mention_count = detail::optional_count(j, "mention_count",
                                           count_mentions(p.text));
  p.hashtag_count = detail::optional_count(j, "hashtag_count",
                                           count_hashtags(p.text));
  p.url_count = detail::optional_count(j, "url_count", count_urls(p.text));
  if (auto it = j.find("emoticon_tokens"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw ValidationError("emoticon_tokens must be an array of strings");
    }
    for (const auto& e : *it) {
      if (!e.is_string()) {
        throw ValidationError("emoticon_tokens must be an array of strings");
      }
      p.emoticon_tokens.push_back(e.get<std::string>());
    }
  } else {
    p.emoticon_tokens = extract_emoticons(p.text);
  }
  return out;
}

struct IngestOptions {
  std::chrono::minutes naive_offset = kDefaultSourceOffset;
};

/// Joins line-delimited profile and post records into UserRecords (one per
/// profile, in profile-file order). Malformed lines, posts for unknown users
/// and duplicate ids are skipped and recorded rather than aborting.
inline IngestResult ingest_dataset(std::istream& posts_stream,
                                   std::istream& profiles_stream,
                                   const IngestOptions& opts = {}) {
  if (!posts_stream.good() && !posts_stream.eof()) {
    throw DataError("posts stream is not readable");
  }
  if (!profiles_stream.good() && !profiles_stream.eof()) {
    throw DataError("profiles stream is not readable");
  }
  IngestResult result;
  IngestReport& report = result.report;
  std::unordered_map<std::string, std::size_t> index;

  auto read_lines = [&](std::istream& in, const char* stream_name,
                        auto&& handle) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      if (!utf8::is_valid(line)) {
        report.dropped.push_back({stream_name, lineno, "invalid UTF-8"});
        continue;
      }
      try {
        handle(nlohmann::json::parse(line), lineno);
      } catch (const nlohmann::json::exception& e) {
        report.dropped.push_back(
            {stream_name, lineno, std::string("malformed JSON: ") + e.what()});
      } catch (const ValidationError& e) {
        report.dropped.push_back({stream_name, lineno, e.what()});
      }
    }
    if (in.bad()) {
      throw DataError(std::string(stream_name) + " stream read failure");
    }
  };

  read_lines(profiles_stream, "profiles",
             [&](const nlohmann::json& j, std::size_t lineno) {
               Profile p = parse_profile_line(j);
               if (index.contains(p.user_id)) {
                 report.dropped.push_back(
                     {"profiles", lineno, "duplicate user_id " + p.user_id});
                 return;
               }
               index.emplace(p.user_id, result.users.size());
               result.users.push_back(UserRecord{std::move(p), {}});
             });

  std::vector<std::unordered_set<std::string>> seen_posts(result.users.size());
  std::size_t post_lines = 0;
  read_lines(posts_stream, "posts",
             [&](const nlohmann::json& j, std::size_t lineno) {
               ++post_lines;
               ParsedPost pp = parse_post_line(j, opts.naive_offset);
               auto it = index.find(pp.user_id);
               if (it == index.end()) {
                 report.dropped.push_back(
                     {"posts", lineno, "unknown user_id " + pp.user_id});
                 return;
               }
               if (!seen_posts[it->second].insert(pp.post.post_id).second) {
                 report.warnings.push_back(
                     "posts:" + std::to_string(lineno) + ": duplicate post_id " +
                     pp.post.post_id + " for user " + pp.user_id +
                     " (kept first)");
                 return;
               }
               if (pp.naive_timestamp) ++report.naive_timestamps;
               result.users[it->second].posts.push_back(std::move(pp.post));
             });

  if (post_lines == 0) report.warnings.push_back("posts stream is empty");
  for (auto& u : result.users) {
    sort_posts(u.posts);
    report.posts += u.posts.size();
  }
  report.users = result.users.size();
  return result;
}

// Serialization back into the ingest schema, with all derived fields
// explicit and timestamps in UTC.

inline nlohmann::json post_to_json(const std::string& user_id, const Post& p) {
  return {{"user_id", user_id},
          {"post_id", p.post_id},
          {"timestamp", format_timestamp(p.timestamp)},
          {"text", p.text},
          {"has_picture", p.has_picture},
          {"is_retweet", p.is_retweet},
          {"mention_count", p.mention_count},
          {"hashtag_count", p.hashtag_count},
          {"url_count", p.url_count},
          {"emoticon_tokens", p.emoticon_tokens}};
}

inline nlohmann::json profile_to_json(const Profile& p) {
  return {{"user_id", p.user_id},
          {"gender", std::string(gender_code(p.gender))},
          {"verified", p.verified},
          {"follower_count", p.follower_count},
          {"followee_count", p.followee_count},
          {"description", p.description}};
}

inline void write_dataset(const std::vector<UserRecord>& users,
                          std::ostream& posts_out, std::ostream& profiles_out) {
  for (const auto& u : users) {
    profiles_out << profile_to_json(u.profile).dump() << "\n";
    for (const auto& p : u.posts) {
      posts_out << post_to_json(u.id(), p).dump() << "\n";
    }
  }
}

}  // namespace cyberaggr
