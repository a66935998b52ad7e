// Copyright 2026 The incluster Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "incluster/core.hpp"
#include "json.hpp"

namespace incluster::cli {

enum class Answer { Yes, No, YesApprox };

inline const char* to_string(Answer a) {
  switch (a) {
    case Answer::Yes:
      return "YES";
    case Answer::No:
      return "NO";
    case Answer::YesApprox:
      return "YES_APPROX";
  }
  return "?";
}

struct RunReport {
  Answer answer = Answer::No;
  std::optional<ClusterCertificate> certificate;
  std::string problem;
  std::string algorithm;
  std::size_t k = 0;
  std::size_t r = 0;
  std::size_t lambda = 0;
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::optional<std::string> epsilon;
  std::optional<std::size_t> max_size;
  std::uint64_t branches = 0;
  std::optional<std::size_t> center_depth;
  std::optional<std::size_t> center_arity;
  std::optional<double> wall_ms;

  int exit_code() const { return answer == Answer::No ? 1 : 0; }
};

inline nlohmann::ordered_json to_json(const RunReport& rep) {
  nlohmann::ordered_json j;
  j["answer"] = to_string(rep.answer);
  j["problem"] = rep.problem;
  j["algorithm"] = rep.algorithm;
  j["k"] = rep.k;
  j["r"] = rep.r;
  j["lambda"] = rep.lambda;
  j["rows"] = rep.rows;
  j["dim"] = rep.dim;
  if (rep.epsilon) j["epsilon"] = *rep.epsilon;
  if (rep.max_size) j["max_size"] = *rep.max_size;
  j["branches"] = rep.branches;
  if (rep.center_depth) j["center_depth"] = *rep.center_depth;
  if (rep.center_arity) j["center_arity"] = *rep.center_arity;
  if (rep.wall_ms) j["wall_ms"] = *rep.wall_ms;
  if (rep.certificate) {
    const auto& c = *rep.certificate;
    nlohmann::ordered_json cj;
    cj["kind"] = to_string(c.kind);
    cj["size"] = c.size();
    cj["bound"] = c.bound;
    if (c.center) cj["center"] = complete_to_string(*c.center);
    auto members = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < c.size(); ++i) {
      members.push_back({{"row", c.rows[i]},
                         {"completion", complete_to_string(c.completions[i])}});
    }
    cj["members"] = std::move(members);
    j["certificate"] = std::move(cj);
  } else {
    j["certificate"] = nullptr;
  }
  return j;
}

/// "key: value" lines; certificate members as "member: <row> <completion>".
inline void write_text(const RunReport& rep, std::ostream& out) {
  out << "answer: " << to_string(rep.answer) << '\n';
  out << "problem: " << rep.problem << '\n';
  out << "algorithm: " << rep.algorithm << '\n';
  out << "k: " << rep.k << '\n';
  out << "r: " << rep.r << '\n';
  out << "lambda: " << rep.lambda << '\n';
  out << "rows: " << rep.rows << '\n';
  out << "dim: " << rep.dim << '\n';
  if (rep.epsilon) out << "epsilon: " << *rep.epsilon << '\n';
  if (rep.max_size) out << "max_size: " << *rep.max_size << '\n';
  out << "branches: " << rep.branches << '\n';
  if (rep.center_depth) out << "center_depth: " << *rep.center_depth << '\n';
  if (rep.center_arity) out << "center_arity: " << *rep.center_arity << '\n';
  if (rep.wall_ms) out << "wall_ms: " << *rep.wall_ms << '\n';
  if (!rep.certificate) {
    out << "certificate: none\n";
    return;
  }
  const auto& c = *rep.certificate;
  out << "certificate.kind: " << to_string(c.kind) << '\n';
  out << "certificate.size: " << c.size() << '\n';
  out << "certificate.bound: " << c.bound << '\n';
  if (c.center) {
    out << "certificate.center: " << complete_to_string(*c.center) << '\n';
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    out << "member: " << c.rows[i] << ' '
        << complete_to_string(c.completions[i]) << '\n';
  }
}

inline void write_report(const RunReport& rep, bool json, std::ostream& out) {
  if (json) {
    out << to_json(rep).dump(2) << '\n';
  } else {
    write_text(rep, out);
  }
}

}  // namespace incluster::cli
