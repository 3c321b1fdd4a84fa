#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ncerec/eval/split.h"
#include "ncerec/numkit/sparse_matrix.h"

namespace ncerec::dataio {

// Layout of a delimited ratings file. Column indices are 0-based; -1 means
// the column is absent (only the timestamp may be absent).
struct FormatDescriptor {
  std::string delimiter = ",";
  int user_column = 0;
  int item_column = 1;
  int rating_column = 2;
  int timestamp_column = 3;
  std::size_t columns = 4;  // exact field count of every data row
  bool header = false;      // first line is skipped

  // MovieLens-100K u.data: tab separated, no header.
  static FormatDescriptor movielens_100k();
  // MovieLens ratings.csv (20M and later): comma separated, with header.
  static FormatDescriptor movielens_csv();

  void validate() const;
};

// "\t", "tab", "\\t" -> tab; "comma" -> ","; "space" -> " ". Anything else
// is returned unchanged.
std::string unescape_delimiter(std::string_view text);

struct RatingRow {
  std::string user;
  std::string item;
  double rating = 0.0;
  std::optional<std::int64_t> timestamp;
};

struct RatingsTable {
  std::vector<RatingRow> rows;
  bool has_timestamps = false;
};

// Throws FormatError with the 1-based line number of the first bad row.
RatingsTable parse_ratings(std::istream& in, const FormatDescriptor& format,
                           const std::string& source = "<stream>");
RatingsTable load_ratings(const std::string& path, const FormatDescriptor& format);

// External id <-> dense index, in first-appearance order.
class IndexMaps {
 public:
  std::size_t users() const { return user_ids_.size(); }
  std::size_t items() const { return item_ids_.size(); }
  const std::vector<std::string>& user_ids() const { return user_ids_; }
  const std::vector<std::string>& item_ids() const { return item_ids_; }

  std::optional<std::size_t> find_user(const std::string& id) const;
  std::optional<std::size_t> find_item(const std::string& id) const;
  // Index of `id`, appending it if unseen.
  std::size_t add_user(const std::string& id);
  std::size_t add_item(const std::string& id);

  // Throws std::invalid_argument on a repeated id.
  static IndexMaps from_ids(std::vector<std::string> user_ids, std::vector<std::string> item_ids);

  bool operator==(const IndexMaps& other) const {
    return user_ids_ == other.user_ids_ && item_ids_ == other.item_ids_;
  }

 private:
  std::vector<std::string> user_ids_;
  std::vector<std::string> item_ids_;
  std::unordered_map<std::string, std::size_t> user_index_;
  std::unordered_map<std::string, std::size_t> item_index_;
};

struct BuiltMatrix {
  numkit::SparseMatrix matrix;
  IndexMaps maps;
  // Surviving events in index space and file order, timestamps kept, one
  // per row of the file (duplicates included; the splitters dedupe).
  std::vector<eval::Interaction> interactions;
  std::size_t dropped_below_threshold = 0;
  std::size_t dropped_unseen_users = 0;  // only with reused maps
  std::size_t dropped_unseen_items = 0;
};

// Keeps ratings strictly above `threshold` and builds the binary matrix.
// With `maps`, ids are looked up instead of added and rows with unseen
// users or items are dropped and counted. Throws std::invalid_argument if
// nothing survives.
BuiltMatrix build_matrix(const RatingsTable& table, double threshold,
                         const IndexMaps* maps = nullptr);

}  // namespace ncerec::dataio
