#pragma once

#include <map>
#include <string>
#include <vector>

namespace tfdg {

/// Flat "key = value" file, one assignment per line, '#' starts a comment.
class KeyValueFile {
 public:
  static KeyValueFile read(const std::string& path);
  static KeyValueFile parse(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  /// Throws ArgumentError naming the first key not in `known`.
  void require_known(const std::vector<std::string>& known) const;

  const std::string& origin() const { return origin_; }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::string origin_;
  std::map<std::string, std::string> values_;
};

std::string trim(const std::string& s);
std::vector<std::string> split_list(const std::string& s, char sep = ',');
double parse_real(const std::string& s, const std::string& what);
int parse_int(const std::string& s, const std::string& what);
std::vector<double> parse_reals(const std::string& s, const std::string& what);
std::vector<int> parse_ints(const std::string& s, const std::string& what);

}  // namespace tfdg
