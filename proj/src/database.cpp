// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include "g2scan/database.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace g2scan {

namespace {

using json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

const char* const kCsvColumns[] = {"id",        "model",       "disc",   "I2",     "I4",
                                   "I6",        "I10",         "J2",     "J4",     "J6",
                                   "J8",        "J10",         "g1",     "g2",     "g3",
                                   "g2_branch", "good_lfactors", "hash", "partial_hash", "N",
                                   "w",         "L2",          "radius", "minimality_checked_above_p",
                                   "g2_class_id", "unverified_merge_candidate", "class_size"};
constexpr std::size_t kCsvWidth = sizeof(kCsvColumns) / sizeof(kCsvColumns[0]);

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

mpz_class parse_z(const std::string& s) {
  mpz_class v;
  if (s.empty() || v.set_str(s, 10) != 0) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

mpq_class parse_q(const std::string& s) {
  mpq_class v;
  if (s.empty() || v.set_str(s, 10) != 0 || v.get_den() == 0) throw std::invalid_argument("bad rational '" + s + "'");
  v.canonicalize();
  if (v.get_str() != s) throw std::invalid_argument("rational not in lowest terms '" + s + "'");
  return v;
}

std::string branch_name(G2Branch b) {
  switch (b) {
    case G2Branch::J2Nonzero: return "J2";
    case G2Branch::J4Nonzero: return "J4";
    case G2Branch::Other: return "other";
  }
  return "?";
}

G2Branch parse_branch(const std::string& s) {
  if (s == "J2") return G2Branch::J2Nonzero;
  if (s == "J4") return G2Branch::J4Nonzero;
  if (s == "other") return G2Branch::Other;
  throw std::invalid_argument("bad g2 branch '" + s + "'");
}

EulerFactor parse_good_factor(const std::string& s) {
  EulerFactor f = parse_factor(s);
  f.good = true;
  f.linear_only = f.degree() < 4;
  return f;
}

std::string format_double(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
  double v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

std::string join_factors(const std::vector<EulerFactor>& fs) {
  std::string out;
  for (std::size_t i = 0; i < fs.size(); ++i) out += (i ? ";" : "") + format_factor(fs[i]);
  return out;
}

std::string join_ints(const std::vector<std::int64_t>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + "]";
}

std::vector<std::int64_t> parse_ints(const std::string& s) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw std::invalid_argument("bad list '" + s + "'");
  std::vector<std::int64_t> out;
  std::stringstream ss(s.substr(1, s.size() - 2));
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
  return out;
}

// RFC 4180 quoting.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quote");
  return out;
}

std::vector<std::string> csv_row(const CurveRecord& r) {
  std::vector<std::string> v(kCsvWidth);
  v[0] = r.id;
  v[1] = format_model(r.model);
  v[2] = r.disc.get_str();
  if (r.igusa_clebsch) {
    v[3] = r.igusa_clebsch->I2.get_str();
    v[4] = r.igusa_clebsch->I4.get_str();
    v[5] = r.igusa_clebsch->I6.get_str();
    v[6] = r.igusa_clebsch->I10.get_str();
  }
  if (r.igusa) {
    v[7] = r.igusa->J2.get_str();
    v[8] = r.igusa->J4.get_str();
    v[9] = r.igusa->J6.get_str();
    v[10] = r.igusa->J8.get_str();
    v[11] = r.igusa->J10.get_str();
  }
  if (r.g2) {
    v[12] = r.g2->g1.get_str();
    v[13] = r.g2->g2.get_str();
    v[14] = r.g2->g3.get_str();
    v[15] = branch_name(r.g2->branch);
  }
  v[16] = join_factors(r.good_lfactors);
  if (r.hash) v[17] = std::to_string(*r.hash);
  v[18] = r.partial_hash ? "1" : "0";
  if (r.conductor) {
    v[19] = r.conductor->N.get_str();
    v[20] = std::to_string(r.conductor->w);
    v[21] = join_ints(r.conductor->l2);
    v[22] = format_double(r.conductor->radius);
  }
  v[23] = std::to_string(r.minimality_checked_above_p);
  v[24] = r.g2_class_id;
  v[25] = r.unverified_merge_candidate ? "1" : "0";
  v[26] = std::to_string(r.class_size);
  return v;
}

bool parse_flag(const std::string& s) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw std::invalid_argument("bad flag '" + s + "'");
}

CurveRecord record_from_csv(const std::vector<std::string>& v) {
  if (v.size() != kCsvWidth) throw std::invalid_argument("expected " + std::to_string(kCsvWidth) + " columns");
  CurveRecord r;
  r.id = v[0];
  r.model = parse_model(v[1]);
  r.disc = parse_z(v[2]);
  if (!v[3].empty()) r.igusa_clebsch = IgusaClebsch{parse_z(v[3]), parse_z(v[4]), parse_z(v[5]), parse_z(v[6])};
  if (!v[7].empty())
    r.igusa = IgusaInvariants{parse_q(v[7]), parse_q(v[8]), parse_q(v[9]), parse_q(v[10]), parse_q(v[11])};
  if (!v[12].empty()) r.g2 = G2Invariants{parse_q(v[12]), parse_q(v[13]), parse_q(v[14]), parse_branch(v[15])};
  if (!v[16].empty()) {
    std::stringstream ss(v[16]);
    std::string tok;
    while (std::getline(ss, tok, ';')) r.good_lfactors.push_back(parse_good_factor(tok));
  }
  if (!v[17].empty()) r.hash = std::stoull(v[17]);
  r.partial_hash = parse_flag(v[18]);
  if (!v[19].empty()) r.conductor = ConductorRecord{parse_z(v[19]), std::stoi(v[20]), parse_ints(v[21]), parse_double(v[22])};
  r.minimality_checked_above_p = std::stoi(v[23]);
  r.g2_class_id = v[24];
  r.unverified_merge_candidate = parse_flag(v[25]);
  r.class_size = std::stoull(v[26]);
  return r;
}

std::string line_error(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

}  // namespace

std::string record_id(const WeierstrassModel& m, const mpz_class& disc) {
  return hex64(fnv1a(format_model(m) + "|" + disc.get_str()));
}

std::string g2_class_id(const G2Invariants& g) { return hex64(fnv1a(to_string(g) + "|" + branch_name(g.branch))); }

int minimality_bound(const mpz_class& disc) {
  const mpz_class a = abs(disc);
  int p = 5;
  for (;;) {
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), p, 10);
    if (p10 > a) return p;
    do ++p;
    while (!mpz_probab_prime_p(mpz_class(p).get_mpz_t(), 25));
  }
}

std::string record_to_json(const CurveRecord& r) {
  json j;
  j["id"] = r.id;
  j["model"] = format_model(r.model);
  j["disc"] = r.disc.get_str();
  if (r.igusa_clebsch)
    j["igusa_clebsch"] = {r.igusa_clebsch->I2.get_str(), r.igusa_clebsch->I4.get_str(), r.igusa_clebsch->I6.get_str(),
                          r.igusa_clebsch->I10.get_str()};
  else
    j["igusa_clebsch"] = nullptr;
  if (r.igusa)
    j["igusa"] = {r.igusa->J2.get_str(), r.igusa->J4.get_str(), r.igusa->J6.get_str(), r.igusa->J8.get_str(),
                  r.igusa->J10.get_str()};
  else
    j["igusa"] = nullptr;
  if (r.g2)
    j["g2"] = {{"branch", branch_name(r.g2->branch)},
               {"value", {r.g2->g1.get_str(), r.g2->g2.get_str(), r.g2->g3.get_str()}}};
  else
    j["g2"] = nullptr;
  json lf = json::array();
  for (const auto& f : r.good_lfactors) lf.push_back(format_factor(f));
  j["good_lfactors"] = lf;
  j["hash"] = r.hash ? json(*r.hash) : json(nullptr);
  if (r.conductor)
    j["conductor"] = {{"N", r.conductor->N.get_str()},
                      {"w", r.conductor->w},
                      {"L2", r.conductor->l2},
                      {"radius", r.conductor->radius}};
  else
    j["conductor"] = nullptr;
  j["flags"] = {{"minimality_checked_above_p", r.minimality_checked_above_p},
                {"partial_hash", r.partial_hash},
                {"g2_class_id", r.g2_class_id},
                {"unverified_merge_candidate", r.unverified_merge_candidate},
                {"class_size", r.class_size}};
  return j.dump();
}

CurveRecord record_from_json(std::string_view line) {
  try {
    const json j = json::parse(line);
    CurveRecord r;
    r.id = j.at("id").get<std::string>();
    r.model = parse_model(j.at("model").get<std::string>());
    r.disc = parse_z(j.at("disc").get<std::string>());
    if (const auto& v = j.at("igusa_clebsch"); !v.is_null()) {
      const auto s = v.get<std::vector<std::string>>();
      if (s.size() != 4) throw std::invalid_argument("igusa_clebsch needs 4 entries");
      r.igusa_clebsch = IgusaClebsch{parse_z(s[0]), parse_z(s[1]), parse_z(s[2]), parse_z(s[3])};
    }
    if (const auto& v = j.at("igusa"); !v.is_null()) {
      const auto s = v.get<std::vector<std::string>>();
      if (s.size() != 5) throw std::invalid_argument("igusa needs 5 entries");
      r.igusa = IgusaInvariants{parse_q(s[0]), parse_q(s[1]), parse_q(s[2]), parse_q(s[3]), parse_q(s[4])};
    }
    if (const auto& v = j.at("g2"); !v.is_null()) {
      const auto s = v.at("value").get<std::vector<std::string>>();
      if (s.size() != 3) throw std::invalid_argument("g2 needs 3 entries");
      r.g2 = G2Invariants{parse_q(s[0]), parse_q(s[1]), parse_q(s[2]), parse_branch(v.at("branch").get<std::string>())};
    }
    for (const auto& f : j.at("good_lfactors")) r.good_lfactors.push_back(parse_good_factor(f.get<std::string>()));
    if (const auto& v = j.at("hash"); !v.is_null()) r.hash = v.get<std::uint64_t>();
    if (const auto& v = j.at("conductor"); !v.is_null())
      r.conductor = ConductorRecord{parse_z(v.at("N").get<std::string>()), v.at("w").get<int>(),
                                    v.at("L2").get<std::vector<std::int64_t>>(), v.at("radius").get<double>()};
    const auto& fl = j.at("flags");
    r.minimality_checked_above_p = fl.at("minimality_checked_above_p").get<int>();
    r.partial_hash = fl.at("partial_hash").get<bool>();
    r.g2_class_id = fl.at("g2_class_id").get<std::string>();
    r.unverified_merge_candidate = fl.at("unverified_merge_candidate").get<bool>();
    r.class_size = fl.at("class_size").get<std::uint64_t>();
    if (r.disc == 0) throw std::invalid_argument("record with zero discriminant");
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed record: ") + e.what());
  }
}

DbFormat parse_db_format(std::string_view name) {
  if (name == "jsonl") return DbFormat::Jsonl;
  if (name == "csv") return DbFormat::Csv;
  throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected jsonl or csv)");
}

void write_records(std::ostream& os, const std::vector<CurveRecord>& rs, DbFormat fmt) {
  if (fmt == DbFormat::Jsonl) {
    os << "{\"g2scan_format\":" << kFormatVersion << "}\n";
    for (const auto& r : rs) os << record_to_json(r) << '\n';
    return;
  }
  for (std::size_t i = 0; i < kCsvWidth; ++i) os << (i ? "," : "") << kCsvColumns[i];
  os << '\n';
  for (const auto& r : rs) {
    const auto v = csv_row(r);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << csv_field(v[i]);
    os << '\n';
  }
}

void export_records(const std::filesystem::path& path, const std::vector<CurveRecord>& rs, DbFormat fmt) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    write_records(os, rs, fmt);
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<CurveRecord> read_records(std::istream& is, DbFormat fmt) {
  std::vector<CurveRecord> out;
  std::string line;
  std::size_t n = 0;
  if (!std::getline(is, line)) throw std::invalid_argument(line_error(1, "missing header"));
  ++n;
  if (fmt == DbFormat::Jsonl) {
    int version = -1;
    try {
      const auto h = json::parse(line);
      version = h.at("g2scan_format").get<int>();
    } catch (const json::exception&) {
      throw std::invalid_argument(line_error(1, "expected header {\"g2scan_format\":1}"));
    }
    if (version != kFormatVersion)
      throw std::invalid_argument(line_error(1, "unsupported format version " + std::to_string(version)));
  } else {
    std::string expect;
    for (std::size_t i = 0; i < kCsvWidth; ++i) expect += (i ? "," : "") + std::string(kCsvColumns[i]);
    if (line != expect) throw std::invalid_argument(line_error(1, "unexpected CSV header"));
  }
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(fmt == DbFormat::Jsonl ? record_from_json(line) : record_from_csv(csv_split(line)));
    } catch (const std::exception& e) {
      throw std::invalid_argument(line_error(n, e.what()));
    }
  }
  return out;
}

std::vector<CurveRecord> import_records(const std::filesystem::path& path, DbFormat fmt) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  try {
    return read_records(is, fmt);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

}  // namespace g2scan
