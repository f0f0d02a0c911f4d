// Copyright 2026 The chen-explicit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Report serialization: JSON with 17 significant digits for every double.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "chen/ball.hpp"

namespace chen {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "chen-report/1";

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline Json ball_json(const Ball<>& b) { return Json{{"mid", b.mid()}, {"rad", b.rad()}}; }

/// Pretty JSON printer. Doubles are printed with %.17g (non-finite as null).
inline void dump_json(const Json& j, std::ostream& os, int indent = 2, int level = 0) {
  auto pad = [&](int l) { os << std::string(static_cast<std::size_t>(indent * l), ' '); };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        pad(level + 1);
        os << Json(it.key()).dump() << ": ";
        dump_json(it.value(), os, indent, level + 1);
      }
      os << "\n";
      pad(level);
      os << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        pad(level + 1);
        dump_json(j[i], os, indent, level + 1);
      }
      os << "\n";
      pad(level);
      os << "]";
      return;
    }
    case Json::value_t::number_float: {
      double v = j.get<double>();
      os << (std::isfinite(v) ? fmt17(v) : "null");
      return;
    }
    default: os << j.dump(); return;
  }
}

inline std::string dump_json(const Json& j) {
  std::ostringstream os;
  dump_json(j, os);
  os << "\n";
  return os.str();
}

}  // namespace chen
