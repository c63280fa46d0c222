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

#ifndef TKGBENCH_CONFIG_HPP
#define TKGBENCH_CONFIG_HPP

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tkgbench/error.hpp"

namespace tkgbench {

/// Flat `key = value` configuration (INI syntax, `#`/`;` comments).
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::istream& in) {
    KeyValueConfig cfg;
    try {
      boost::property_tree::ini_parser::read_ini(in, cfg.tree_);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError(e.what());
    }
    return cfg;
  }

  static KeyValueConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  static KeyValueConfig load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    try {
      return parse(in);
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
  }

  bool has(const std::string& key) const {
    return tree_.get_optional<std::string>(key).has_value();
  }

  template <typename T>
  T get(const std::string& key, const T& fallback) const {
    try {
      return tree_.get<T>(key, fallback);
    } catch (const boost::property_tree::ptree_error&) {
      throw ConfigError("config key '" + key + "' has the wrong type");
    }
  }

  template <typename T = std::string>
  T require(const std::string& key) const {
    auto v = tree_.get_optional<std::string>(key);
    if (!v) throw ConfigError("missing config key '" + key + "'");
    try {
      return tree_.get<T>(key);
    } catch (const boost::property_tree::ptree_error&) {
      throw ConfigError("config key '" + key + "' has the wrong type");
    }
  }

  template <typename T>
  std::optional<T> find(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return require<T>(key);
  }

  /// Comma-separated list value.
  template <typename T>
  std::vector<T> list(const std::string& key) const {
    std::vector<T> out;
    auto raw = find<std::string>(key);
    if (!raw) return out;
    std::istringstream in(*raw);
    std::string item;
    while (std::getline(in, item, ',')) {
      std::istringstream cell(item);
      T v{};
      if (!(cell >> v)) throw ConfigError("bad list item in '" + key + "'");
      out.push_back(v);
    }
    return out;
  }

  template <typename T>
  void set(const std::string& key, const T& value) {
    tree_.put(key, value);
  }

  void write(std::ostream& out) const {
    boost::property_tree::ini_parser::write_ini(out, tree_);
  }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    write(out);
  }

 private:
  boost::property_tree::ptree tree_;
};

}  // namespace tkgbench

#endif  // TKGBENCH_CONFIG_HPP
