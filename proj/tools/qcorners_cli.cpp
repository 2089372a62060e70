// qcorners: command-line runner for the group, corner, box-norm and
// regularity experiments. See README.md for usage.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcorners/box_norm.hpp"
#include "qcorners/corners.hpp"
#include "qcorners/errors.hpp"
#include "qcorners/experiments.hpp"
#include "qcorners/regularity.hpp"
#include "qcorners/rng.hpp"
#include "qcorners/spectral.hpp"
#include "qcorners/verify.hpp"

using namespace qcorners;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitVerification = 1;
constexpr int kExitInput = 2;
constexpr int kExitCap = 3;

struct Options {
  std::string group;
  std::size_t k = 2;
  std::string subset = "random";
  double delta = 0.25;
  std::uint64_t seed = 1;
  std::string theta = "mean/2";
  double eps = 0.25;
  std::size_t max_iter = 0;
  std::string out;
  std::string format = "csv";
  unsigned threads = 1;
  bool timing = false;
  std::string source = "random";
  std::string file;
  std::size_t side = 0;
  std::optional<std::size_t> lift_index;
  std::string family;
  std::string level = "fast";
  std::string descriptor;
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot open output file '" + path + "'");
  os << text;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

GridFunction read_values(const std::string& path, std::size_t side, std::size_t dims) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read values file '" + path + "'");
  std::vector<double> values;
  double v = 0;
  while (in >> v) values.push_back(v);
  if (!in.eof()) throw InputError("values file '" + path + "' contains a non-number");
  GridFunction f(side, dims, std::move(values), 1.0);
  f.bound = std::max(1.0, f.max_abs());
  return f;
}

// Function source shared by boxnorm and regularity.
GridFunction function_from_source(const Options& o, const Group* g) {
  const std::size_t side = g ? g->order() : o.side;
  if (side == 0) throw InputError("give --group or --side");
  if (o.source == "random") {
    Rng rng(o.seed);
    GridFunction f(side, o.k);
    for (auto& v : f.values) v = rng.sign();
    return f;
  }
  if (o.source == "subset") {
    if (!g) throw InputError("--source subset needs --group");
    const auto spec = parse_subset_spec(o.subset, o.delta);
    return generate_subset(*g, o.k, spec, derive_seed(o.seed, g->label())).indicator();
  }
  if (o.source == "file") {
    if (o.file.empty()) throw InputError("--source file needs --file");
    return read_values(o.file, side, o.k);
  }
  throw InputError("unknown function source '" + o.source + "'");
}

json partition_counts(const Decomposition& d) {
  json counts = json::array();
  for (const auto& p : d.partitions) counts.push_back(p.atom_count);
  return counts;
}

int cmd_groups_info(const Options& o) {
  const auto g = parse_group(o.descriptor);
  const auto axioms = check_axioms(g);
  const auto cc = conjugacy_classes(g);
  json j;
  j["group"] = g.label();
  j["order"] = g.order();
  j["identity"] = g.identity();
  j["identity_name"] = g.element_name(g.identity());
  j["abelian"] = g.is_abelian();
  j["conjugacy_classes"] = cc.count();
  j["class_sizes"] = cc.sizes;
  j["axioms_ok"] = axioms.ok();
  j["associativity_exhaustive"] = axioms.exhaustive;
  std::cout << j.dump(2) << '\n';
  return axioms.ok() ? 0 : kExitVerification;
}

int cmd_qdegree(const Options& o) {
  const auto g = parse_group(o.descriptor);
  const auto rep = character_degrees(g);
  json j;
  j["group"] = g.label();
  j["order"] = g.order();
  j["degrees"] = rep.degrees;
  j["D"] = rep.D;
  j["method"] = rep.method;
  if (rep.catalog_D) j["catalog_D"] = *rep.catalog_D;
  std::cout << j.dump(2) << '\n';
  if (rep.catalog_D && *rep.catalog_D != rep.D) return kExitVerification;
  return 0;
}

int cmd_corners_run(const Options& o) {
  const auto g = parse_group(o.group);
  const auto spec = parse_subset_spec(o.subset, o.delta);
  const auto theta = parse_theta_rule(o.theta);
  const auto run = run_corners(g, o.k, spec, theta, o.seed, o.threads);
  if (o.format == "json") {
    auto j = json::parse(report_json(run.report, o.timing));
    j["series"] = run.stats.series.values;
    write_output(o.out, j.dump(2) + "\n");
    return 0;
  }
  const std::string csv = series_csv(run.stats.series);
  if (o.out.empty()) {
    std::cout << csv;
    std::cerr << report_json(run.report, o.timing) << '\n';
  } else {
    write_output(o.out, csv);
    std::cout << report_json(run.report, o.timing) << '\n';
  }
  return 0;
}

int cmd_boxnorm(const Options& o) {
  std::optional<Group> g;
  if (!o.group.empty()) g = parse_group(o.group);
  GridFunction f = function_from_source(o, g ? &*g : nullptr);
  json j;
  if (o.lift_index) {
    if (!g) throw InputError("--lift needs --group");
    const auto lifted = lift(*g, o.k, *o.lift_index, f);
    j["lift"] = *o.lift_index;
    f = lifted.values;
  }
  const auto rep = box_norm(f);
  j["source"] = o.source;
  j["k"] = rep.k;
  j["side"] = f.side;
  j["norm"] = rep.norm;
  j["raw_power"] = rep.raw_power;
  j["clipped"] = rep.clipped;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_regularity(const Options& o) {
  std::optional<Group> g;
  if (!o.group.empty()) g = parse_group(o.group);
  const GridFunction f = function_from_source(o, g ? &*g : nullptr);
  json j;
  int code = 0;
  auto fill = [&](const Decomposition& d, bool converged) {
    j["converged"] = converged;
    j["eps"] = o.eps;
    j["achieved_eps"] = d.achieved_eps;
    j["iterations"] = d.iterations;
    j["rejected_rounds"] = d.rejected_rounds;
    j["atom_counts"] = partition_counts(d);
    j["L"] = rank_expansion(d).size();
    j["energy_history"] = d.energy_history;
  };
  try {
    fill(weak_regularity(f, o.eps, o.max_iter, o.seed), true);
  } catch (const RegularityNotConverged& e) {
    fill(e.best(), false);
    j["error"] = e.what();
    code = kExitVerification;
  }
  std::cout << j.dump(2) << '\n';
  return code;
}

int cmd_tv_scan(const Options& o) {
  const auto family = split_list(o.family);
  if (family.empty()) throw InputError("--family needs at least one group descriptor");
  const auto spec = parse_subset_spec(o.subset, o.delta);
  const auto theta = parse_theta_rule(o.theta);
  const auto rows = tv_scan(family, o.k, spec, theta, o.seed, o.threads);
  if (o.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(json::parse(report_json(r, o.timing)));
    write_output(o.out, arr.dump(2) + "\n");
  } else {
    write_output(o.out, reports_csv(rows, o.timing));
  }
  for (const auto& r : rows)
    if (!r.error.empty()) return kExitVerification;
  return 0;
}

int cmd_verify(const Options& o) {
  if (o.level != "fast" && o.level != "full") throw InputError("--level must be fast or full");
  const auto summary = verify_suite(o.level == "full" ? VerifyLevel::full : VerifyLevel::fast);
  for (const auto& s : summary.suites) {
    std::cout << (s.passed ? "PASS " : "FAIL ") << s.name << " (" << format_double(s.seconds) << " s)";
    if (!s.detail.empty()) std::cout << ": " << s.detail;
    std::cout << '\n';
  }
  return summary.passed() ? 0 : kExitVerification;
}

// `key = value` lines from --config become `--key value` unless the flag was
// given on the command line.
std::vector<std::string> apply_config(std::vector<std::string> args, const CLI::App& app) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;

  // Deepest subcommand named on the command line.
  const CLI::App* target = &app;
  for (const auto& a : args) {
    for (const auto* sub : target->get_subcommands([](const CLI::App*) { return true; }))
      if (sub->get_name() == a) {
        target = sub;
        break;
      }
  }

  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file '" + path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos)
      throw InputError("config line " + std::to_string(line_no) + " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    if (target->get_option_no_throw(flag) == nullptr)
      throw InputError("config key '" + key + "' is not a flag of this command");
    bool given = false;
    for (const auto& a : args) given = given || a == flag || a.starts_with(flag + "=");
    if (given) continue;
    if (value == "true") {
      args.push_back(flag);
    } else if (value != "false") {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Quasirandom group corner experiments"};
  app.require_subcommand(1);
  app.add_option("--config", "Plain 'key = value' file mirroring command flags");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto add_function_source = [&](CLI::App* sub) {
    sub->add_option("--group", o.group, "Group descriptor");
    sub->add_option("--k", o.k, "Dimension")->check(CLI::PositiveNumber);
    sub->add_option("--source", o.source, "random (+-1), subset, or file");
    sub->add_option("--subset", o.subset, "Subset spec for --source subset");
    sub->add_option("--delta", o.delta, "Density for subset specs");
    sub->add_option("--file", o.file, "Whitespace-separated values, row-major");
    sub->add_option("--side", o.side, "Grid side when no group is given");
  };

  auto* groups = app.add_subcommand("groups", "Group utilities");
  groups->require_subcommand(1);
  auto* info = groups->add_subcommand("info", "Order, classes and axiom check");
  info->add_option("descriptor", o.descriptor, "Group descriptor")->required();

  auto* qdeg = app.add_subcommand("qdegree", "Character degrees and quasirandomness degree D");
  qdeg->add_option("descriptor", o.descriptor, "Group descriptor")->required();

  auto* corners = app.add_subcommand("corners", "Corner statistics");
  corners->require_subcommand(1);
  auto* crun = corners->add_subcommand("run", "Count corners of every side length");
  crun->add_option("--group", o.group, "Group descriptor")->required();
  crun->add_option("--k", o.k, "Dimension")->check(CLI::PositiveNumber);
  crun->add_option("--subset", o.subset, "random | interval[:lo:hi] | product:S1/S2 | planted:m");
  crun->add_option("--delta", o.delta, "Density");
  crun->add_option("--theta", o.theta, "Threshold: number or mean/2, mean*x");
  crun->add_option("--out", o.out, "Output path");
  crun->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  crun->add_flag("--timing", o.timing, "Include wall time in the summary");
  add_common(crun);

  auto* box = app.add_subcommand("boxnorm", "Gowers box norm of a function");
  add_function_source(box);
  box->add_option("--lift", o.lift_index, "Apply N_i before taking the norm");
  add_common(box);

  auto* reg = app.add_subcommand("regularity", "Weak regularity decomposition");
  add_function_source(reg);
  reg->add_option("--eps", o.eps, "Target box norm of the uniform part");
  reg->add_option("--max-iter", o.max_iter, "Round budget (0: ceil(16/eps^2))");
  add_common(reg);

  auto* scan = app.add_subcommand("tv-scan", "Total variation across a group family");
  scan->add_option("--family", o.family, "Comma-separated group descriptors")->required();
  scan->add_option("--k", o.k, "Dimension")->check(CLI::PositiveNumber);
  scan->add_option("--subset", o.subset, "Subset spec template");
  scan->add_option("--delta", o.delta, "Density");
  scan->add_option("--theta", o.theta, "Threshold rule");
  scan->add_option("--out", o.out, "Output path");
  scan->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  scan->add_flag("--timing", o.timing, "Add a wall_seconds column");
  add_common(scan);

  auto* verify = app.add_subcommand("verify", "Run the built-in invariant suites");
  verify->add_option("--level", o.level, "fast or full");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = apply_config(std::move(args), app);
    std::reverse(args.begin(), args.end());  // CLI11 consumes vectors back to front
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (info->parsed()) return cmd_groups_info(o);
    if (qdeg->parsed()) return cmd_qdegree(o);
    if (crun->parsed()) return cmd_corners_run(o);
    if (box->parsed()) return cmd_boxnorm(o);
    if (reg->parsed()) return cmd_regularity(o);
    if (scan->parsed()) return cmd_tv_scan(o);
    if (verify->parsed()) return cmd_verify(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const CapError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerification;
  }
  return kExitInput;
}
