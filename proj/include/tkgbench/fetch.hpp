/** Copyright 2026 The tkgbench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * 	http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TKGBENCH_FETCH_HPP
#define TKGBENCH_FETCH_HPP

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>

#include "tkgbench/checksum.hpp"
#include "tkgbench/dataset_io.hpp"
#include "tkgbench/error.hpp"

namespace tkgbench {

struct FetchOptions {
  int attempts = 3;
  int timeout_seconds = 60;
};

struct FetchResult {
  std::filesystem::path path;
  std::uint64_t bytes_downloaded = 0;
  bool from_cache = false;
};

namespace detail {

struct ParsedUrl {
  std::string scheme;
  std::string origin;  // scheme://host[:port]
  std::string path;
};

inline ParsedUrl parse_url(const std::string& url) {
  const auto sep = url.find("://");
  if (sep == std::string::npos) throw ConfigError("bad url '" + url + "'");
  ParsedUrl out;
  out.scheme = url.substr(0, sep);
  const auto path_start = url.find('/', sep + 3);
  if (out.scheme == "file") {
    out.path = url.substr(sep + 3);
    return out;
  }
  if (path_start == std::string::npos) throw ConfigError("url has no path: " + url);
  out.origin = url.substr(0, path_start);
  out.path = url.substr(path_start);
  return out;
}

inline std::string url_basename(const std::string& path) {
  auto end = path.find_first_of("?#");
  auto p = path.substr(0, end);
  auto slash = p.rfind('/');
  auto name = slash == std::string::npos ? p : p.substr(slash + 1);
  return name.empty() ? "download" : name;
}

/// Streams `url` into `dest`; returns the byte count.
inline std::uint64_t download(const std::string& url, const std::filesystem::path& dest,
                              const FetchOptions& options) {
  const auto parsed = parse_url(url);
  if (parsed.scheme == "file") {
    std::error_code ec;
    std::filesystem::copy_file(parsed.path, dest,
                               std::filesystem::copy_options::overwrite_existing, ec);
    if (ec) throw NetworkError("copy " + parsed.path + ": " + ec.message());
    return std::filesystem::file_size(dest);
  }
  if (parsed.scheme != "http" && parsed.scheme != "https") {
    throw ConfigError("unsupported url scheme '" + parsed.scheme + "'");
  }
  httplib::Client client(parsed.origin);
  client.set_follow_location(true);
  client.set_connection_timeout(options.timeout_seconds, 0);
  client.set_read_timeout(options.timeout_seconds, 0);
  std::ofstream out(dest, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + dest.string());
  std::uint64_t bytes = 0;
  auto res = client.Get(parsed.path, [&](const char* data, std::size_t len) {
    out.write(data, static_cast<std::streamsize>(len));
    bytes += len;
    return static_cast<bool>(out);
  });
  out.close();
  if (!res) {
    throw NetworkError("GET " + url + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw NetworkError("GET " + url + ": HTTP " + std::to_string(res->status));
  }
  return bytes;
}

}  // namespace detail

/// Returns a local, checksum-verified copy of the manifest's file under
/// `cache_dir/<name>/`. A cached copy with the right checksum is reused; a
/// cached copy with the wrong checksum is deleted and reported.
inline FetchResult fetch_dataset(const DatasetManifest& manifest,
                                 const std::filesystem::path& cache_dir,
                                 const FetchOptions& options = {}) {
  manifest.validate();
  if (manifest.url.empty()) throw ConfigError("manifest '" + manifest.name + "' has no url");
  const auto dir = cache_dir / manifest.name;
  std::filesystem::create_directories(dir);
  const auto target = dir / detail::url_basename(detail::parse_url(manifest.url).path);

  if (std::filesystem::exists(target)) {
    if (sha256_file(target) == manifest.checksum) return {target, 0, true};
    std::filesystem::remove(target);
    throw IntegrityError("cached " + target.string() +
                         " does not match its checksum; entry purged");
  }

  auto partial = target;
  partial += ".part";
  std::uint64_t bytes = 0;
  for (int attempt = 1;; ++attempt) {
    try {
      bytes = detail::download(manifest.url, partial, options);
      break;
    } catch (const NetworkError&) {
      std::filesystem::remove(partial);
      if (attempt >= options.attempts) throw;
    }
  }
  if (sha256_file(partial) != manifest.checksum) {
    std::filesystem::remove(partial);
    throw IntegrityError("download of " + manifest.url + " does not match checksum " +
                         manifest.checksum);
  }
  std::filesystem::rename(partial, target);
  return {target, bytes, false};
}

}  // namespace tkgbench

#endif  // TKGBENCH_FETCH_HPP
