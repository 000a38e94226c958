#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "percoflow/dist.hpp"

// Serialization of radius laws. The JSON shape is
//
//   {"head": [mu_0, ...], "tail": {"model": "finite"}}
//   {"head": [...], "tail": {"model": "geometric", "p": 0.5, "K": 1}}
//   {"head": [...], "tail": {"model": "power", "c": 2.0, "K": 10}}
//
// with K always equal to the head length. There is also a one-line spec
// language for command lines, e.g. "geometric:p=0.5" or "power:c=2,K=10".

namespace percoflow::spec_io {

inline nlohmann::json to_json(const dist::DistributionSpec& spec) {
  nlohmann::json j;
  j["head"] = spec.head();
  nlohmann::json tail;
  tail["model"] = dist::to_string(spec.tail_model());
  switch (spec.tail_model()) {
    case dist::TailModel::FiniteSupport:
      break;
    case dist::TailModel::GeometricTail:
      tail["p"] = spec.ratio();
      tail["K"] = spec.onset();
      break;
    case dist::TailModel::PowerTail:
      tail["c"] = spec.power_constant();
      tail["K"] = spec.onset();
      break;
  }
  j["tail"] = tail;
  return j;
}

inline dist::DistributionSpec from_json(const nlohmann::json& j) {
  if (!j.contains("head") || !j.contains("tail"))
    throw std::invalid_argument("spec json: need 'head' and 'tail'");
  std::vector<double> head = j.at("head").get<std::vector<double>>();
  const nlohmann::json& tail = j.at("tail");
  const std::string model = tail.at("model").get<std::string>();
  if (tail.contains("K")) {
    const auto k = tail.at("K").get<std::int64_t>();
    if (k != static_cast<std::int64_t>(head.size()))
      throw std::invalid_argument("spec json: K must equal the head length");
  }
  if (model == "finite") return dist::DistributionSpec::finite(std::move(head));
  if (model == "geometric")
    return dist::DistributionSpec::geometric_tail(std::move(head),
                                                  tail.at("p").get<double>());
  if (model == "power") {
    // The stored head already carries its mass; the factory rescale is then
    // the identity up to rounding.
    return dist::DistributionSpec::power_tail(std::move(head),
                                              tail.at("c").get<double>());
  }
  throw std::invalid_argument("spec json: unknown tail model '" + model + "'");
}

namespace detail {

inline std::map<std::string, std::string> parse_kv(const std::string& body) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("spec: expected key=value, got '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

inline double want_num(const std::map<std::string, std::string>& kv,
                       const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end())
    throw std::invalid_argument("spec: missing parameter '" + key + "'");
  return std::stod(it->second);
}

}  // namespace detail

// One-line spec grammar:
//   finite:0.4,0.6            explicit head, finite support
//   uniform:m=5               uniform on {0..4}
//   twopoint:n=3,p=0.5        mass p at n, rest at 0
//   geometric:p=0.5           mu_n = (1-p) p^n
//   power:c=2,K=10[,head0=x]  power tail; head uniform, or head0 at 0 and
//                             the remainder spread over {1..K-1}
inline dist::DistributionSpec parse_inline(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("spec: expected '<family>:<params>'");
  const std::string family = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  if (family == "finite") {
    std::vector<double> head;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) head.push_back(std::stod(item));
    return dist::DistributionSpec::finite(std::move(head));
  }
  const auto kv = detail::parse_kv(body);
  if (family == "uniform")
    return dist::DistributionSpec::uniform(
        static_cast<int>(detail::want_num(kv, "m")));
  if (family == "twopoint")
    return dist::DistributionSpec::two_point(
        static_cast<std::int64_t>(detail::want_num(kv, "n")),
        detail::want_num(kv, "p"));
  if (family == "geometric")
    return dist::DistributionSpec::geometric(detail::want_num(kv, "p"));
  if (family == "support01")
    return dist::DistributionSpec::two_point(1, detail::want_num(kv, "p"));
  if (family == "power") {
    const double c = detail::want_num(kv, "c");
    const auto k = static_cast<std::size_t>(detail::want_num(kv, "K"));
    if (k < 2) throw std::invalid_argument("spec: power needs K >= 2");
    std::vector<double> shape(k, 1.0);
    if (kv.count("head0")) {
      // head0 is the actual mass at 0; the rest of the head is uniform.
      const double h0 = detail::want_num(kv, "head0");
      const double rest = 1.0 - c / (static_cast<double>(k) - 1.0) - h0;
      if (!(h0 > 0.0) || !(rest >= 0.0))
        throw std::invalid_argument("spec: head0 out of range for this c, K");
      shape.assign(k, k > 1 ? rest / (static_cast<double>(k) - 1.0) : 0.0);
      shape[0] = h0;
    }
    return dist::DistributionSpec::power_tail(std::move(shape), c);
  }
  throw std::invalid_argument("spec: unknown family '" + family + "'");
}

}  // namespace percoflow::spec_io
