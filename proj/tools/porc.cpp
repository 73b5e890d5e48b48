#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "porc/pipeline.hpp"

using namespace porc;

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 2;
constexpr int kUsage = 64;

struct FamilyArgs {
  std::string kind;
  std::string file;
  int m = 0;
};

void add_family_options(CLI::App* cmd, FamilyArgs& fa) {
  auto* kind = cmd->add_option("--family", fa.kind, "natural, tensor2, ext2 or algebras");
  auto* file = cmd->add_option("--family-file", fa.file, "custom family description file");
  kind->excludes(file);
  cmd->add_option("--m", fa.m, "source dimension m (taken from the file with --family-file)")->check(CLI::Range(1, 16));
}

AlgebraicFamily load_family(const FamilyArgs& fa) {
  if (!fa.file.empty()) {
    auto fam = load_family_file(fa.file);
    if (fa.m != 0 && fa.m != fam.m) throw DomainError("--m does not match the family file (m = " + std::to_string(fam.m) + ")");
    return fam;
  }
  if (fa.kind.empty()) throw DomainError("one of --family or --family-file is required");
  if (fa.m == 0) throw DomainError("--m is required with --family");
  return builtin_family(parse_family_kind(fa.kind), fa.m);
}

std::vector<std::int64_t> parse_q_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) continue;
    auto dash = tok.find('-');
    std::int64_t lo, hi;
    try {
      lo = std::stoll(tok.substr(0, dash));
      hi = dash == std::string::npos ? lo : std::stoll(tok.substr(dash + 1));
    } catch (const std::exception&) {
      throw DomainError("bad q value '" + tok + "'");
    }
    for (std::int64_t q = lo; q <= hi; ++q) {
      if (is_prime_power(q)) {
        out.push_back(q);
      } else if (dash == std::string::npos) {
        throw DomainError(std::to_string(q) + " is not a prime power");
      }
    }
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 4) throw DomainError("bad list entry '" + tok + "'");
    out.push_back(std::stoi(tok));
  }
  if (out.empty()) throw DomainError("empty list");
  return out;
}

void emit(bool json, const nlohmann::json& j, const std::string& text) {
  if (json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

int cmd_orbits(const FamilyArgs& fa, const std::string& verify, std::int64_t budget, bool json) {
  auto fam = load_family(fa);
  auto rep = orbit_count_porc(fam);
  if (!verify.empty()) verify_orbit_report(rep, fam, parse_q_list(verify), budget);
  emit(json, rep.to_json(), rep.str());
  return rep.verified() ? kOk : kMismatch;
}

int cmd_jordan(const FamilyArgs& fa, const std::string& partition, const std::string& chr, bool json) {
  auto parts = parse_int_list(partition);
  FamilyArgs args = fa;
  int total = 0;
  for (int k : parts) total += k;
  if (args.m == 0 && args.file.empty()) args.m = total;
  auto fam = load_family(args);
  if (fam.m != total) throw DomainError("partition sums to " + std::to_string(total) + ", not m = " + std::to_string(fam.m));
  auto ex = exceptional_primes(fam, parts);
  std::vector<std::int64_t> classes;
  if (chr == "all") {
    classes.push_back(kGeneric);
    classes.insert(classes.end(), ex.begin(), ex.end());
  } else if (chr == "generic" || chr == "0") {
    classes.push_back(kGeneric);
  } else {
    std::int64_t p = 0;
    try {
      p = std::stoll(chr);
    } catch (const std::exception&) {
      throw DomainError("bad --char value '" + chr + "'");
    }
    if (!is_prime(p)) throw DomainError("--char must be a prime, 'generic' or 'all'");
    classes.push_back(p);
  }
  nlohmann::json j;
  j["family"] = fam.name;
  j["partition"] = parts;
  j["exceptional_primes"] = ex;
  auto specs = nlohmann::json::array();
  std::ostringstream os;
  os << "exceptional primes: {";
  for (std::size_t i = 0; i < ex.size(); ++i) os << (i ? "," : "") << ex[i];
  os << "}\n";
  for (auto c : classes) {
    auto spec = symbolic_jordan_partition(fam, parts, c);
    os << char_class_name(c) << ": " << spec.str() << "\n";
    auto blocks = nlohmann::json::array();
    for (const auto& b : spec.blocks) blocks.push_back({{"monomial", b.monomial.str()}, {"size", b.size}, {"multiplicity", b.multiplicity}});
    specs.push_back({{"characteristic", char_class_name(c)}, {"text", spec.str()}, {"blocks", blocks}});
  }
  j["specs"] = specs;
  emit(json, j, os.str());
  return kOk;
}

int cmd_types(int m, bool json) {
  auto types = enumerate_types(m);
  PorcFunction classes, elements;
  std::ostringstream os;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& t : types) {
    auto count = class_count_porc(t);
    auto size = class_size_poly(t);
    classes += count;
    elements += count * PorcFunction(size);
    os << t.str() << "\n  class size: " << size.str() << "\n  classes: " << count.str() << "\n";
    rows.push_back({{"type", t.str()}, {"class_size", size.str()}, {"class_count", count.to_json()}, {"class_count_text", count.str()}});
  }
  bool ok = elements == PorcFunction(gl_order_poly(m));
  os << "types: " << types.size() << "\nclass number: " << classes.str() << "\nsum of class sizes equals |GL(" << m
     << ",q)|: " << (ok ? "yes" : "NO") << "\n";
  nlohmann::json j{{"m", m}, {"types", rows}, {"class_number", classes.to_json()}, {"class_number_text", classes.str()}, {"order_identity", ok}};
  emit(json, j, os.str());
  return ok ? kOk : kMismatch;
}

int cmd_count(const std::string& path, const std::string& qs, bool json) {
  auto sys = load_system_file(path);
  bool ok = true;
  std::ostringstream os;
  nlohmann::json rows = nlohmann::json::array();
  for (auto q : parse_q_list(qs)) {
    auto c = count_solutions_at(sys, q);
    nlohmann::json row{{"q", q}, {"count", c.str()}};
    os << "q=" << q << ": " << c;
    try {
      auto e = enumerate_solutions(sys, q);
      row["enumeration"] = e.str();
      os << (e == c ? " (enumeration agrees)" : " (enumeration gives " + e.str() + ")");
      ok = ok && e == c;
    } catch (const BudgetError&) {
      row["enumeration"] = nullptr;
    }
    os << "\n";
    rows.push_back(row);
  }
  auto inf = infer_porc(sys);
  auto g = gcd_form(inf.function);
  os << "PORC: " << inf.function.str() << "\n";
  os << "gcd form: " << (g ? g->str() : "none") << "\n";
  nlohmann::json j{{"counts", rows}, {"porc", inf.function.to_json()}, {"porc_text", inf.function.str()}};
  j["gcd_form"] = g ? nlohmann::json(g->str()) : nlohmann::json(nullptr);
  j["validation_points"] = inf.validation_points;
  emit(json, j, os.str());
  return ok ? kOk : kMismatch;
}

int cmd_subspaces(const FamilyArgs& fa, int k, const std::string& qs, int samples, std::uint64_t seed, bool json) {
  auto fam = load_family(fa);
  auto qlist = parse_q_list(qs);
  auto rep = subspace_orbit_report(fam, k, qlist);
  bool ok = rep.verified();
  auto j = rep.to_json();
  std::string text = rep.str();
  if (samples > 0) {
    bool consistent = true;
    for (auto q : qlist)
      for (const auto& [label, vals] : fix_counts_by_image_type(fam, k, q, samples, seed))
        if (vals.size() != 1) consistent = false;
    j["random_representatives_consistent"] = consistent;
    text += std::string("  fixed counts constant on random representatives of each image type: ") + (consistent ? "yes" : "NO") + "\n";
    ok = ok && consistent;
  }
  emit(json, j, text);
  return ok ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PORC formulas for orbit counts of GL(m,q)"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "machine-readable output");

  FamilyArgs orbits_fam;
  std::string verify;
  std::int64_t budget = std::int64_t{1} << 24;
  auto* orbits = app.add_subcommand("orbits", "derive the orbit-count PORC function of a family");
  add_family_options(orbits, orbits_fam);
  orbits->add_option("--verify", verify, "prime powers to check against brute force, e.g. 2,3,4 or 2-9");
  orbits->add_option("--budget", budget, "enumeration cap on target vectors")->check(CLI::PositiveNumber);
  orbits->add_flag("--json", json, "machine-readable output");

  FamilyArgs jordan_fam;
  std::string partition, chr = "generic";
  auto* jordan = app.add_subcommand("jordan", "symbolic Jordan form of phi(A) for A a sum of Jordan blocks");
  add_family_options(jordan, jordan_fam);
  jordan->add_option("--partition", partition, "block sizes, e.g. 2,3")->required();
  jordan->add_option("--char", chr, "generic, a prime, or all");
  jordan->add_flag("--json", json, "machine-readable output");

  int types_m = 0;
  auto* types = app.add_subcommand("types", "matrix types of GL(m) with class sizes and class counts");
  types->add_option("--m", types_m, "dimension")->required()->check(CLI::Range(1, 6));
  types->add_flag("--json", json, "machine-readable output");

  std::string system_path, count_qs = "2,3,4,5,7,8,9";
  auto* count = app.add_subcommand("count", "solution counts and PORC formula of a monomial system file");
  count->add_option("--system", system_path, "system file")->required();
  count->add_option("--q", count_qs, "prime powers, e.g. 2,3 or 2-16");
  count->add_flag("--json", json, "machine-readable output");

  FamilyArgs sub_fam;
  int k = 0, samples = 0;
  std::uint64_t seed = 1;
  std::string sub_qs = "2,3";
  auto* subspaces = app.add_subcommand("subspaces", "orbit counts on k-dimensional subspaces");
  add_family_options(subspaces, sub_fam);
  subspaces->add_option("--k", k, "subspace dimension")->required()->check(CLI::NonNegativeNumber);
  subspaces->add_option("--q", sub_qs, "prime powers");
  subspaces->add_option("--samples", samples, "random representatives per class for the image-type check")->check(CLI::NonNegativeNumber);
  subspaces->add_option("--seed", seed, "random seed");
  subspaces->add_flag("--json", json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*orbits) return cmd_orbits(orbits_fam, verify, budget, json);
    if (*jordan) return cmd_jordan(jordan_fam, partition, chr, json);
    if (*types) return cmd_types(types_m, json);
    if (*count) return cmd_count(system_path, count_qs, json);
    if (*subspaces) return cmd_subspaces(sub_fam, k, sub_qs, samples, seed, json);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConsistencyError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kMismatch;
  }
  return kUsage;
}
