#include "ncerec/dataio/ratings.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "ncerec/errors.h"

namespace ncerec::dataio {

FormatDescriptor FormatDescriptor::movielens_100k() {
  FormatDescriptor f;
  f.delimiter = "\t";
  return f;
}

FormatDescriptor FormatDescriptor::movielens_csv() {
  FormatDescriptor f;
  f.header = true;
  return f;
}

void FormatDescriptor::validate() const {
  if (delimiter.empty()) throw std::invalid_argument("format: empty delimiter");
  const auto check = [this](int column, const char* name, bool optional) {
    if (column < 0) {
      if (!optional) throw std::invalid_argument(std::string("format: ") + name + " column required");
      return;
    }
    if (static_cast<std::size_t>(column) >= columns)
      throw std::invalid_argument(std::string("format: ") + name + " column " +
                                  std::to_string(column) + " out of range for " +
                                  std::to_string(columns) + " columns");
  };
  check(user_column, "user", false);
  check(item_column, "item", false);
  check(rating_column, "rating", false);
  check(timestamp_column, "timestamp", true);
  std::vector<int> used{user_column, item_column, rating_column};
  if (timestamp_column >= 0) used.push_back(timestamp_column);
  std::sort(used.begin(), used.end());
  if (std::adjacent_find(used.begin(), used.end()) != used.end())
    throw std::invalid_argument("format: two fields share a column");
}

std::string unescape_delimiter(std::string_view text) {
  if (text == "\\t" || text == "tab" || text == "\t") return "\t";
  if (text == "comma") return ",";
  if (text == "space") return " ";
  if (text == "semicolon") return ";";
  return std::string(text);
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line, std::string_view delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + delimiter.size();
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_rating(std::string_view text, const std::string& source, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
    throw FormatError(source, line, "bad rating '" + std::string(text) + "'");
  return value;
}

std::int64_t parse_timestamp(std::string_view text, const std::string& source, std::size_t line) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw FormatError(source, line, "bad timestamp '" + std::string(text) + "'");
  return value;
}

}  // namespace

RatingsTable parse_ratings(std::istream& in, const FormatDescriptor& format,
                           const std::string& source) {
  format.validate();
  RatingsTable table;
  table.has_timestamps = format.timestamp_column >= 0;
  std::string line;
  std::size_t number = 0;
  bool skipped_header = !format.header;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    if (trim(view).empty()) continue;
    const auto fields = split_fields(view, format.delimiter);
    if (fields.size() != format.columns)
      throw FormatError(source, number,
                        "expected " + std::to_string(format.columns) + " fields, found " +
                            std::to_string(fields.size()));
    RatingRow row;
    row.user = std::string(trim(fields[static_cast<std::size_t>(format.user_column)]));
    row.item = std::string(trim(fields[static_cast<std::size_t>(format.item_column)]));
    if (row.user.empty() || row.item.empty()) throw FormatError(source, number, "empty id");
    row.rating = parse_rating(trim(fields[static_cast<std::size_t>(format.rating_column)]), source,
                              number);
    if (format.timestamp_column >= 0)
      row.timestamp = parse_timestamp(
          trim(fields[static_cast<std::size_t>(format.timestamp_column)]), source, number);
    table.rows.push_back(std::move(row));
  }
  if (in.bad()) throw IoError("read error in " + source);
  return table;
}

RatingsTable load_ratings(const std::string& path, const FormatDescriptor& format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ratings file " + path);
  return parse_ratings(in, format, path);
}

std::optional<std::size_t> IndexMaps::find_user(const std::string& id) const {
  const auto it = user_index_.find(id);
  if (it == user_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> IndexMaps::find_item(const std::string& id) const {
  const auto it = item_index_.find(id);
  if (it == item_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t IndexMaps::add_user(const std::string& id) {
  const auto [it, inserted] = user_index_.emplace(id, user_ids_.size());
  if (inserted) user_ids_.push_back(id);
  return it->second;
}

std::size_t IndexMaps::add_item(const std::string& id) {
  const auto [it, inserted] = item_index_.emplace(id, item_ids_.size());
  if (inserted) item_ids_.push_back(id);
  return it->second;
}

IndexMaps IndexMaps::from_ids(std::vector<std::string> user_ids,
                              std::vector<std::string> item_ids) {
  IndexMaps maps;
  for (const auto& id : user_ids) {
    if (maps.find_user(id)) throw std::invalid_argument("index maps: repeated user id " + id);
    maps.add_user(id);
  }
  for (const auto& id : item_ids) {
    if (maps.find_item(id)) throw std::invalid_argument("index maps: repeated item id " + id);
    maps.add_item(id);
  }
  return maps;
}

BuiltMatrix build_matrix(const RatingsTable& table, double threshold, const IndexMaps* maps) {
  BuiltMatrix out;
  if (maps != nullptr) out.maps = *maps;
  for (const RatingRow& row : table.rows) {
    if (!(row.rating > threshold)) {
      ++out.dropped_below_threshold;
      continue;
    }
    std::size_t user = 0;
    std::size_t item = 0;
    if (maps == nullptr) {
      user = out.maps.add_user(row.user);
      item = out.maps.add_item(row.item);
    } else {
      const auto u = out.maps.find_user(row.user);
      const auto i = out.maps.find_item(row.item);
      if (!u) ++out.dropped_unseen_users;
      if (!i) ++out.dropped_unseen_items;
      if (!u || !i) continue;
      user = *u;
      item = *i;
    }
    out.interactions.push_back({user, item, 1.0, row.timestamp});
  }
  if (out.interactions.empty())
    throw std::invalid_argument("build_matrix: no interactions survive the threshold");

  std::vector<numkit::Triplet> triplets;
  triplets.reserve(out.interactions.size());
  for (const auto& e : out.interactions) triplets.push_back({e.user, e.item, 1.0});
  out.matrix = numkit::SparseMatrix::from_triplets(out.maps.users(), out.maps.items(), triplets,
                                                   numkit::Duplicates::kKeepFirst);
  return out;
}

}  // namespace ncerec::dataio
