// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "g2scan/search.hpp"

namespace g2scan {

namespace {

struct Fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ull;
  void add(std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    h ^= 0xff;
    h *= 0x100000001b3ull;
  }
  void add(std::int64_t v) { add(std::to_string(v)); }
};

[[noreturn]] void corrupt(const std::filesystem::path& p, const std::string& why) {
  throw std::runtime_error("checkpoint " + p.string() + ": " + why);
}

}  // namespace

std::string search_fingerprint(const ShapeSpec& s, const std::vector<WorkUnit>& units) {
  Fnv1a f;
  f.add(s.to_string());
  f.add(std::to_string(s.disc_bound));
  f.add(std::int64_t(units.size()));
  for (const auto& u : units) {
    f.add(std::int64_t(u.h_index));
    for (const auto& r : u.box.ranges) {
      f.add(r.lo);
      f.add(r.hi);
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(f.h));
  return buf;
}

void checkpoint_save(const std::filesystem::path& path, const Checkpoint& cp) {
  nlohmann::json j;
  j["g2scan_checkpoint"] = Checkpoint::kFormatVersion;
  j["fingerprint"] = cp.fingerprint;
  std::string bits(cp.done.size(), '0');
  for (std::size_t i = 0; i < cp.done.size(); ++i)
    if (cp.done[i]) bits[i] = '1';
  j["done"] = bits;
  nlohmann::json res = nlohmann::json::object();
  for (std::size_t i = 0; i < cp.results.size(); ++i) {
    if (i >= cp.done.size() || !cp.done[i] || cp.results[i].empty()) continue;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cp.results[i]) arr.push_back({format_model(c.model), c.disc.get_str()});
    res[std::to_string(i)] = std::move(arr);
  }
  j["results"] = std::move(res);

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write checkpoint " + tmp.string());
    os << j.dump() << '\n';
    os.flush();
    if (!os) throw std::runtime_error("cannot write checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint checkpoint_load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) corrupt(path, "cannot open");
  std::stringstream ss;
  ss << is.rdbuf();
  nlohmann::json j = nlohmann::json::parse(ss.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) corrupt(path, "not a JSON object");
  if (!j.contains("g2scan_checkpoint") || !j["g2scan_checkpoint"].is_number_integer())
    corrupt(path, "missing format header");
  if (j["g2scan_checkpoint"].get<int>() != Checkpoint::kFormatVersion)
    corrupt(path, "unsupported format version " + j["g2scan_checkpoint"].dump());
  if (!j.contains("fingerprint") || !j["fingerprint"].is_string() || !j.contains("done") ||
      !j["done"].is_string() || !j.contains("results") || !j["results"].is_object())
    corrupt(path, "missing fields");
  Checkpoint cp;
  cp.fingerprint = j["fingerprint"].get<std::string>();
  const auto bits = j["done"].get<std::string>();
  cp.done.resize(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') corrupt(path, "bad completion bitmap");
    cp.done[i] = bits[i] == '1';
  }
  cp.results.assign(bits.size(), {});
  try {
    for (const auto& [key, arr] : j["results"].items()) {
      std::size_t idx = std::stoul(key);
      if (idx >= bits.size() || !cp.done[idx]) corrupt(path, "results for an unfinished unit");
      for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 2) corrupt(path, "bad candidate entry");
        cp.results[idx].push_back({parse_model(e[0].get<std::string>()), mpz_class(e[1].get<std::string>())});
      }
    }
  } catch (const std::runtime_error&) {
    throw;
  } catch (const std::exception& e) {
    corrupt(path, std::string("bad candidate entry: ") + e.what());
  }
  return cp;
}

}  // namespace g2scan
