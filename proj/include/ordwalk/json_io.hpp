#pragma once

#include "json.hpp"
#include "ordwalk/colourings.hpp"
#include "ordwalk/partition_lab.hpp"
#include "ordwalk/projections.hpp"
#include "ordwalk/walks.hpp"

namespace ordwalk {

using nlohmann::json;

inline const char* kToolName = "ordwalk";
inline const char* kToolVersion = "0.1.0";

json tool_stamp();

// construction recipe for a provider, usable from files and flags
struct ProviderSpec {
  std::string kind = "canonical";  // canonical | file | transformed
  Ordinal bound;
  std::vector<std::uint64_t> padding;               // canonical
  std::map<Ordinal, std::vector<Ordinal>> entries;  // file
  std::uint64_t parts = 12, modulus = 16;           // transformed-ladder demo pieces

  ProviderPtr build() const;
  json to_json() const;
  static ProviderSpec from_json(const json& j);
};

json walk_report_to_json(const WalkReport& r);
json characteristic_report_to_json(const CharacteristicReport& r);

json window_to_json(const TreeWindow& w, const ProviderSpec& spec);
std::pair<TreeWindow, ProviderSpec> window_from_json(const json& j);

json colouring_to_json(const GoodColouring& c);
GoodColouring colouring_from_json(const json& j);

std::string window_to_dot(const TreeWindow& w);

json verify_report_to_json(const VerifyReport& r);

}  // namespace ordwalk
